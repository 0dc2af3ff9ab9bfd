#include <benchmark/benchmark.h>

#include "bkgr/bk.hpp"
#include "bkgr/cli.hpp"
#include "bkgr/elim.hpp"

using namespace bkgr;

namespace {

ArithContext ctx_of(int p, int e, int k) {
  ContextParams prm;
  prm.p = p;
  prm.e = e;
  prm.k = k;
  return ArithContext(prm);
}

void BM_FiberCount(benchmark::State& st) {
  const auto ctx = ctx_of(5, 3, 1);
  const auto sys = build_equations({Coweight{6, 3, 0}}, ctx);
  for (auto _ : st) benchmark::DoNotOptimize(st.range(0) ? count_points(sys) : count_points_serial(sys));
}
BENCHMARK(BM_FiberCount)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Abcd(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(st.range(0) ? abcd_count(3, 1, 5, 0, 5) : abcd_count_serial(3, 1, 5, 0, 5));
}
BENCHMARK(BM_Abcd)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ConvFiber(benchmark::State& st) {
  const auto ctx = ctx_of(3, 2, 1);
  const BKPair pr{{ctx.diag_u({2, 2, 2})}, {ctx.zero_matrix()}};
  for (auto _ : st)
    benchmark::DoNotOptimize(st.range(0) ? conv_fiber_enumerate(pr, ctx) : conv_fiber_enumerate_serial(pr, ctx));
}
BENCHMARK(BM_ConvFiber)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// S-locus sweep through the driver; the argument is the shard count.
void BM_SLocusSweep(benchmark::State& st) {
  ExperimentConfig c;
  c.experiment = "splocus-sweep";
  c.q = {7};
  c.shards = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(run(c));
}
BENCHMARK(BM_SLocusSweep)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
