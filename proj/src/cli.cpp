#include "bkgr/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "bkgr/bk.hpp"
#include "bkgr/chars.hpp"
#include "bkgr/elim.hpp"
#include "bkgr/errors.hpp"
#include "bkgr/grassmann.hpp"

namespace bkgr {

using json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : v) {
    if (ch == ',' || ch == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos, 0);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + key + ": '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    const unsigned long long x = std::stoull(v, &pos, 0);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad unsigned integer for " + key + ": '" + v + "'");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": '" + v + "'");
  }
}

int to_small(const std::string& key, const std::string& v) {
  const std::int64_t x = to_int(key, v);
  if (x < -(1 << 30) || x > (1 << 30)) throw ConfigError(key + " out of range");
  return static_cast<int>(x);
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Runs fn(s) for every shard s on the OpenMP pool; exceptions are rethrown
// in shard order after the loop.
template <class T, class Fn>
std::vector<T> run_shards(int shards, Fn fn) {
  std::vector<T> out(static_cast<std::size_t>(shards));
  if (shards == 1) {
    out[0] = fn(0);
    return out;
  }
  std::vector<std::exception_ptr> err(static_cast<std::size_t>(shards));
#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < shards; ++s) {
    try {
      out[static_cast<std::size_t>(s)] = fn(s);
    } catch (...) {
      err[static_cast<std::size_t>(s)] = std::current_exception();
    }
  }
  for (auto& x : err)
    if (x) std::rethrow_exception(x);
  return out;
}

// ------------------------------------------------------------ config helpers

ArithContext context_for(const ExperimentConfig& cfg, std::uint32_t q) {
  ContextParams prm;
  prm.p = cfg.p;
  prm.k = cfg.k;
  if (q != 0) {
    int pp = 0, kk = 0;
    if (!GF::is_prime_power(q, &pp, &kk) || pp != cfg.p)
      throw ConfigError("q = " + std::to_string(q) + " is not a power of p = " + std::to_string(cfg.p));
    prm.k = kk;
  }
  prm.e = cfg.e;
  prm.f = cfg.f;
  prm.h = cfg.h;
  prm.d = cfg.d;
  if (!cfg.c.empty()) prm.c.assign(static_cast<std::size_t>(cfg.f), cfg.c);
  return ArithContext(prm);
}

std::vector<std::uint32_t> q_list(const ExperimentConfig& cfg, std::vector<std::uint32_t> dflt) {
  return cfg.q.empty() ? dflt : cfg.q;
}

std::uint32_t base_q(const ExperimentConfig& cfg) { return static_cast<std::uint32_t>(ipow(cfg.p, cfg.k)); }

std::vector<Coweight> mu_list(const ExperimentConfig& cfg) {
  std::vector<Coweight> out;
  if (cfg.mu.empty()) {
    out.assign(static_cast<std::size_t>(cfg.f), Coweight{2 * cfg.e, cfg.e, 0});
    return out;
  }
  if (cfg.mu.size() != static_cast<std::size_t>(3 * cfg.f))
    throw ConfigError("mu needs 3 entries per embedding (f = " + std::to_string(cfg.f) + ")");
  for (int t = 0; t < cfg.f; ++t) out.push_back(Coweight{cfg.mu[3 * t], cfg.mu[3 * t + 1], cfg.mu[3 * t + 2]});
  return out;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void require_rank3(const ExperimentConfig& cfg) { require(cfg.d == 3 && cfg.h == 2, "experiment needs d = 3 and h = 2"); }

std::vector<Coweight> cone(int e) {
  std::vector<Coweight> out;
  for (const auto& nu : dominant_below(Coweight{2 * e, e, 0}, 0, 2 * e))
    if (nu.sum() == 3 * e) out.push_back(nu);
  return out;
}

json coweights_json(const std::vector<Coweight>& v) {
  json a = json::array();
  for (const auto& c : v) a.push_back(c.v);
  return a;
}

// ------------------------------------------------------------ random data

Series rand_poly(const ArithContext& ctx, std::mt19937_64& rng, int lo, int hi) {
  std::vector<Fe> c;
  for (int k = lo; k <= hi; ++k) c.push_back(fe_from_word(ctx.field(), rng()));
  return Series::from_coeffs(lo, c);
}

SeriesMatrix rand_gl(const ArithContext& ctx, std::mt19937_64& rng, int deg) {
  while (true) {
    SeriesMatrix m(ctx.d);
    for (int a = 0; a < ctx.d; ++a)
      for (int b = 0; b < ctx.d; ++b) m(a, b) = rand_poly(ctx, rng, 0, deg);
    Series dt = m.det();
    if (!dt.is_zero() && dt.val() == 0) return m;
  }
}

SeriesMatrix rand_N(const ArithContext& ctx, std::mt19937_64& rng) {
  SeriesMatrix m(ctx.d);
  for (int a = 0; a < ctx.d; ++a)
    for (int b = 0; b < ctx.d; ++b) m(a, b) = rand_poly(ctx, rng, 1, ctx.e);
  return m;
}

SeriesMatrix u_diag(const ArithContext& ctx, const std::vector<std::int64_t>& n, int s) {
  SeriesMatrix m = ctx.zero_matrix();
  for (int a = 0; a < ctx.d; ++a) m(a, a) = ctx.monomial(n[static_cast<std::size_t>(a)], s);
  return m;
}

std::vector<std::int64_t> to64(const Coweight& c) { return {c.v.begin(), c.v.end()}; }

// Pair whose top lattice has matrix u^nu.
BKPair pair_over(const ArithContext& ctx, const Coweight& nu, const SeriesMatrix& N) {
  std::vector<std::int64_t> x;
  for (int v : nu.v) x.push_back(2 * ctx.e - v);
  return BKPair{{ctx.diag_u(x)}, {N}};
}

// ------------------------------------------------------------ experiments

using Runner = void (*)(const ExperimentConfig&, Report&);

void exp_fiber_count(const ExperimentConfig& cfg, Report& r) {
  require(cfg.d == 3, "fiber-count needs d = 3");
  const auto mus = mu_list(cfg);
  const auto qs = q_list(cfg, {base_q(cfg)});
  bool balanced = true;
  for (const auto& m : mus) balanced = balanced && is_balanced(m, cfg.e);
  const BoundResult bd = bound_formula(mus, cfg.e);
  r.bound = bd.bound;
  r.details["mu"] = coweights_json(mus);
  r.details["balanced"] = balanced;
  r.details["strict"] = bd.strict;
  json per_q = json::array();
  for (std::uint32_t q : qs) {
    const ArithContext ctx = context_for(cfg, q);
    const GradedPolySystem sys = build_equations(mus, ctx);
    CountOptions o;
    o.budget = cfg.budget;
    o.seed = cfg.seed;
    if (cfg.samples > 0) o.samples = static_cast<std::uint64_t>(cfg.samples);
    QCount qc;
    qc.q = q;
    CountResult last;
    try {
      const int S = cfg.shards;
      auto parts = run_shards<CountResult>(S, [&](int s) {
        CountOptions os = o;
        os.shard = Shard{s, S};
        os.parallel = S == 1;
        return count_points(sys, os);
      });
      for (const auto& x : parts) qc.count += x.count;
      last = parts[0];
      qc.estimate = static_cast<double>(qc.count);
    } catch (const BudgetExceeded&) {
      r.warnings.push_back("q=" + std::to_string(q) + ": enumeration over budget, sampled " +
                           std::to_string(o.samples) + " assignments");
      o.allow_sampling = true;
      last = count_points(sys, o);
      qc.exact = false;
      qc.estimate = last.estimate;
      qc.radius = last.radius;
    }
    r.q_counts.push_back(qc);
    per_q.push_back({{"q", q}, {"enumerated_vars", last.enumerated_vars}, {"linear_vars", last.linear_vars}});
  }
  r.details["systems"] = per_q;
  const bool all_exact = std::all_of(r.q_counts.begin(), r.q_counts.end(), [](const QCount& c) { return c.exact; });
  if (balanced) {
    for (const auto& c : r.q_counts)
      if (c.exact) r.check("count_equals_q^bound@q=" + std::to_string(c.q), c.count == ipow(c.q, static_cast<int>(bd.bound)));
  }
  if (r.q_counts.size() >= 2) {
    const auto& a = r.q_counts.front();
    const auto& b = r.q_counts.back();
    const double na = a.exact ? static_cast<double>(a.count) : a.estimate;
    const double nb = b.exact ? static_cast<double>(b.count) : b.estimate;
    if (na > 0 && nb > 0 && a.q != b.q) {
      const double dim = std::log(nb / na) / std::log(static_cast<double>(b.q) / a.q);
      r.dim_estimate = dim;
      const int k = estimated_dimension(na, a.q, nb, b.q);
      if (!all_exact) r.warnings.push_back("exponent from sampled counts");
      if (balanced)
        r.check("exponent_equals_bound", k == bd.bound);
      else if (bd.strict)
        r.check("exponent_below_bound", k < bd.bound);
      else
        r.check("exponent_at_most_bound", k <= bd.bound);
    }
  } else if (!balanced) {
    r.warnings.push_back("single q: exponent comparison skipped");
  }
}

void exp_relation_check(const ExperimentConfig& cfg, Report& r) {
  const int samples = cfg.samples > 0 ? cfg.samples : 50;
  const auto qs = q_list(cfg, {base_q(cfg)});
  const bool fixed_mu = !cfg.mu.empty();
  const auto mus = mu_list(cfg);
  int mismatch = 0, c_mismatch = 0, diag_fail = 0;
  for (std::uint32_t q : qs) {
    const ArithContext ctx = context_for(cfg, q);
    require(ctx.d == 3, "relation-check needs d = 3");
    const auto all = cone(cfg.e);
    std::uint64_t hits = 0;
    for (int i = 0; i < samples; ++i) {
      std::mt19937_64 rng(split_seed(cfg.seed, static_cast<std::uint64_t>(i) * 1000003u + q));
      BKPair pr, diag;
      for (int t = 0; t < cfg.f; ++t) {
        const Coweight mu = fixed_mu ? mus[static_cast<std::size_t>(t)] : all[rng() % all.size()];
        pr.X.push_back(rand_gl(ctx, rng, 1) * ctx.diag_u(to64(mu)) * rand_gl(ctx, rng, 1));
        pr.N.push_back(rand_N(ctx, rng));
        std::vector<std::int64_t> neg;
        for (int x : mu.v) neg.push_back(-x);
        diag.X.push_back(ctx.diag_u(to64(mu)));
        diag.N.push_back(u_diag(ctx, neg, ctx.e));
      }
      const auto res = monodromy_residual(pr, ctx);
      const auto dif = check_C_difference(pr, ctx);
      for (std::size_t t = 0; t < res.size(); ++t) mismatch += !(res[t] - dif[t]).is_zero_mod(ctx.e + 1);
      const bool bk = is_bk_point(pr, ctx);
      c_mismatch += bk != check_C(pr, ctx);
      hits += bk;
      diag_fail += !is_bk_point(diag, ctx);
    }
    r.q_counts.push_back(QCount{q, hits, true, static_cast<double>(hits), 0});
  }
  r.details["samples_per_q"] = samples;
  r.details["note"] = "q_counts hold the random pairs satisfying the congruence";
  r.check("residual_equals_C_difference", mismatch == 0);
  r.check("bk_point_iff_C", c_mismatch == 0);
  r.check("diagonal_pairs_satisfy", diag_fail == 0);
}

void exp_strata_scan(const ExperimentConfig& cfg, Report& r) {
  require_rank3(cfg);
  const int samples = cfg.samples > 0 ? cfg.samples : 200;
  const auto qs = q_list(cfg, {base_q(cfg)});
  std::map<std::string, int> hist;
  int wrong = 0, rebuild = 0;
  for (std::uint32_t q : qs) {
    const ArithContext ctx = context_for(cfg, q);
    const auto all = cone(cfg.e);
    for (int i = 0; i < samples; ++i) {
      std::mt19937_64 rng(split_seed(cfg.seed, static_cast<std::uint64_t>(i) * 1000003u + q));
      BKPair pr;
      std::vector<Coweight> want;
      for (int t = 0; t < cfg.f; ++t) {
        const Coweight mu = all[rng() % all.size()];
        want.push_back(mu);
        pr.X.push_back(rand_gl(ctx, rng, 2) * ctx.diag_u(to64(mu)) * rand_gl(ctx, rng, 1));
        pr.N.push_back(ctx.zero_matrix());
      }
      const StratumDescriptor sd = stratum(pr, ctx);
      for (int t = 0; t < cfg.f; ++t) {
        const auto& s = sd.per_tau[static_cast<std::size_t>(t)];
        wrong += s.mu != want[static_cast<std::size_t>(t)];
        rebuild += Coweight{2 * cfg.e - s.n, cfg.e + s.n - s.m, s.m} != s.mu;
        ++hist["n=" + std::to_string(s.n) + ",m=" + std::to_string(s.m) + (s.balanced ? ",balanced" : "")];
      }
    }
    r.q_counts.push_back(QCount{q, static_cast<std::uint64_t>(samples), true, static_cast<double>(samples), 0});
  }
  json h = json::object();
  for (const auto& [k, v] : hist) h[k] = v;
  r.details["histogram"] = h;
  r.check("stratum_recovers_type", wrong == 0);
  r.check("decomposition_rebuilds_mu", rebuild == 0);
}

void exp_conv_enumerate(const ExperimentConfig& cfg, Report& r) {
  require_rank3(cfg);
  require(cfg.f == 1, "conv-enumerate needs f = 1");
  const Coweight nu = mu_list(cfg)[0];
  const auto qs = q_list(cfg, {base_q(cfg)});
  const std::vector<Coweight> lambdas(static_cast<std::size_t>(cfg.e), Coweight{2, 1, 0});
  const int formula = conv_fiber_dim_formula(lambdas, nu);
  r.bound = formula;
  r.details["nu"] = nu.v;
  int b_true = 0, counterexamples = 0;
  for (std::uint32_t q : qs) {
    const ArithContext ctx = context_for(cfg, q);
    const BKPair pr = pair_over(ctx, nu, ctx.zero_matrix());
    try {
      const int S = cfg.shards;
      auto parts = run_shards<std::uint64_t>(S, [&](int s) {
        EnumOptions o;
        o.budget = cfg.budget;
        o.shard = Shard{s, S};
        o.parallel = S == 1;
        return conv_fiber_count(pr, 0, ctx, o);
      });
      std::uint64_t total = 0;
      for (auto x : parts) total += x;
      r.q_counts.push_back(QCount{q, total, true, static_cast<double>(total), 0});
      // conditions on the chains of a pair with random monodromy
      std::mt19937_64 rng(split_seed(cfg.seed, q));
      const BKPair prn = pair_over(ctx, nu, rand_N(ctx, rng));
      EnumOptions o;
      o.budget = cfg.budget;
      for (const auto& ch : conv_fiber_enumerate(prn, ctx, o))
        for (int i = 1; i <= cfg.e; ++i) {
          bool b = false;
          try {
            b = check_B(ch, prn, i, ctx);
          } catch (const PreconditionFailed&) {
            continue;
          }
          if (b) {
            ++b_true;
            counterexamples += !check_A(ch, prn, i, ctx);
          }
        }
    } catch (const BudgetExceeded&) {
      r.warnings.push_back("q=" + std::to_string(q) + ": chain enumeration over budget, skipped");
    }
  }
  r.details["b_instances"] = b_true;
  r.check("B_implies_A", counterexamples == 0);
  if (r.q_counts.size() >= 2) {
    const auto& a = r.q_counts.front();
    const auto& b = r.q_counts.back();
    if (a.count > 0 && b.count > 0 && a.q != b.q) {
      r.dim_estimate = std::log(static_cast<double>(b.count) / a.count) / std::log(static_cast<double>(b.q) / a.q);
      r.check("dimension_matches_formula", std::lround(*r.dim_estimate) == formula);
    }
  }
}

void exp_mv_verify(const ExperimentConfig& cfg, Report& r) {
  const auto qs = q_list(cfg, {2, 3, 5, 7});
  int bad = 0;
  json members = json::array();
  for (std::uint32_t q : qs) {
    const GF& F = GF::of_order(q);
    const std::uint64_t total = ipow(q, 3);
    const int S = cfg.shards;
    struct Tally {
      std::uint64_t checked = 0, members = 0, mismatches = 0;
    };
    auto parts = run_shards<Tally>(S, [&](int s) {
      Tally t;
      for (std::uint64_t a = static_cast<std::uint64_t>(s); a < total; a += static_cast<std::uint64_t>(S)) {
        const std::uint32_t x = static_cast<std::uint32_t>(a % q), y = static_cast<std::uint32_t>(a / q % q),
                            z = static_cast<std::uint32_t>(a / q / q);
        SeriesMatrix M = SeriesMatrix::identity(3, Fe(F, 1));
        M(0, 1) = Series::monomial(Fe(F, x), -1);
        M(0, 2) = Series::monomial(Fe(F, y), -1);
        M(1, 2) = Series::monomial(Fe(F, z), -1);
        const bool in = mv_membership(M, Coweight{1, 1, 1});
        t.members += in;
        t.mismatches += in != (Fe(F, x) * Fe(F, z)).is_zero();
        ++t.checked;
      }
      return t;
    });
    Tally sum;
    for (const auto& t : parts) {
      sum.checked += t.checked;
      sum.members += t.members;
      sum.mismatches += t.mismatches;
    }
    bad += static_cast<int>(sum.mismatches);
    r.q_counts.push_back(QCount{q, sum.checked, true, static_cast<double>(sum.checked), 0});
    members.push_back({{"q", q}, {"members", sum.members}});
  }
  r.details["note"] = "q_counts hold the triples checked";
  r.details["members"] = members;
  r.check("membership_iff_xz_zero", bad == 0);
}

void exp_dimpoly_oracle(const ExperimentConfig& cfg, Report& r) {
  const auto qs = q_list(cfg, {2, 3, 4, 5});
  double worst = 0;
  int bad = 0;
  json worst_case;
  for (std::uint32_t q : qs) {
    std::uint64_t cases = 0;
    for (int rr = 0; rr <= cfg.rsmax; ++rr)
      for (int s = 0; rr + s <= cfg.rsmax; ++s)
        for (int t = 0; t <= rr + s + 1; ++t) {
          CountOptions o;
          o.budget = cfg.budget;
          AbcdResult res;
          try {
            const int S = cfg.shards;
            auto parts = run_shards<AbcdResult>(S, [&](int sh) {
              CountOptions os = o;
              os.shard = Shard{sh, S};
              os.parallel = S == 1;
              return abcd_count(rr, s, t, 0, static_cast<int>(q), os);
            });
            res = parts[0];
            res.count = 0;
            for (const auto& x : parts) res.count += x.count;
          } catch (const BudgetExceeded&) {
            r.warnings.push_back("abcd (" + std::to_string(rr) + "," + std::to_string(s) + "," + std::to_string(t) +
                                 ") q=" + std::to_string(q) + " over budget, skipped");
            continue;
          }
          const int codim = std::min({2 * rr + 2, 2 * s + 2, t});
          const double ratio = static_cast<double>(res.count) / std::pow(static_cast<double>(q), res.ambient - codim);
          if (ratio > worst) {
            worst = ratio;
            worst_case = {{"q", q}, {"r", rr}, {"s", s}, {"t", t}, {"count", res.count}, {"ambient", res.ambient}};
          }
          bad += ratio > 4.0;
          ++cases;
        }
    r.q_counts.push_back(QCount{q, cases, true, static_cast<double>(cases), 0});
  }
  r.details["note"] = "q_counts hold the (r,s,t) cases checked";
  r.details["worst_ratio"] = worst;
  r.details["worst_case"] = worst_case;
  r.details["slack"] = 4;
  r.check("count_within_slack", bad == 0);
}

void exp_claim_verify(const ExperimentConfig& cfg, Report& r) {
  std::vector<ClaimFailure> fails;
  const bool ok = verify_claim_inequalities(cfg.p, cfg.emax, &fails);
  json f = json::array();
  for (std::size_t i = 0; i < fails.size() && i < 20; ++i) {
    const auto& x = fails[i];
    f.push_back({{"e", x.e}, {"x", x.x}, {"y", x.y}, {"which", std::string(1, x.which)}, {"value", x.value}});
  }
  r.details["emax"] = cfg.emax;
  r.details["failures"] = f;
  r.details["failure_count"] = fails.size();
  r.check("claim_inequalities", ok);
}

void exp_splocus_sweep(const ExperimentConfig& cfg, Report& r) {
  const auto qs = q_list(cfg, {5});
  int mismatch = 0, wrong_size = 0;
  json totals = json::array();
  for (std::uint32_t q : qs) {
    const GF& F = GF::of_order(q);
    const std::int64_t c0 = cfg.c.empty() ? 1 : cfg.c[0];
    const Fe a0 = Fe::from_int(F, c0);
    require(!a0.is_zero(), "c(0) must be nonzero in the field");
    const DerivationData D{SeriesMatrix(3), Series::constant(a0)};
    const auto lat = enumerate_lattices(F, 3, 2, 3);
    const int S = cfg.shards;
    struct Tally {
      std::uint64_t in = 0, mism = 0;
    };
    auto parts = run_shards<Tally>(S, [&](int s) {
      Tally t;
      for (std::size_t i = static_cast<std::size_t>(s); i < lat.size(); i += static_cast<std::size_t>(S)) {
        const bool sl = s_locus_check(lat[i], D, 1, Coweight{2, 1, 0}, F.p());
        t.in += sl;
        t.mism += sl != flag_member(lat[i], Coweight{2, 1, 0}, 2);
      }
      return t;
    });
    std::uint64_t in = 0;
    for (const auto& t : parts) {
      in += t.in;
      mismatch += static_cast<int>(t.mism);
    }
    wrong_size += in != (ipow(q, 2) + q + 1) * (q + 1);
    r.q_counts.push_back(QCount{q, in, true, static_cast<double>(in), 0});
    totals.push_back({{"q", q}, {"lattices", lat.size()}});
  }
  r.details["note"] = "q_counts hold the S-locus points with zero N-part at i = 1";
  r.details["subspaces"] = totals;
  r.check("locus_equals_flag_points", mismatch == 0);
  r.check("locus_size_is_flag_count", wrong_size == 0);
}

void exp_degen_move(const ExperimentConfig& cfg, Report& r) {
  require_rank3(cfg);
  require(cfg.f == 1, "degen-move needs f = 1");
  require(cfg.e >= 2, "degen-move needs e >= 2");
  const int samples = cfg.samples > 0 ? cfg.samples : 12;
  const std::vector<std::vector<std::int64_t>> perms{{2, 1, 0}, {2, 0, 1}, {1, 2, 0},
                                                     {1, 0, 2}, {0, 2, 1}, {0, 1, 2}};
  const auto qs = q_list(cfg, {base_q(cfg)});
  int bad_chain = 0, bad_b = 0, bad_ext = 0;
  for (std::uint32_t q : qs) {
    const ArithContext ctx = context_for(cfg, q);
    std::uint64_t checked = 0;
    for (int smp = 0; smp < samples; ++smp) {
      std::mt19937_64 rng(split_seed(cfg.seed, static_cast<std::uint64_t>(smp) * 1000003u + q));
      const int e = cfg.e;
      const int i = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(e - 1));
      std::vector<SeriesMatrix> steps;
      for (int j = 1; j <= e; ++j)
        steps.push_back(j == i ? ctx.diag_u({1, 1, 1}) : ctx.diag_u(perms[rng() % perms.size()]));
      const ConvChain ch = make_chain({steps}, ctx);
      const SeriesMatrix X = ctx.inverse(ch.cumulative[0][static_cast<std::size_t>(e)]).shift(2 * e);
      std::vector<std::int64_t> n;
      for (int a = 0; a < 3; ++a) n.push_back(static_cast<std::int64_t>(rng() % q));
      const BKPair pr{{X}, {u_diag(ctx, n, e)}};
      const DegenerationFamily fam = degeneration_family(ch, i, ctx);
      auto members = fam.members;
      members.push_back(fam.at_infinity);
      for (const auto& m : members) {
        bad_chain += !chain_consistent(m, pr, ctx);
        bad_b += !(check_B(m, pr, i - 1, ctx) && check_B(m, pr, i, ctx));
        ++checked;
      }
      bad_ext += !step_extremal(fam.at_infinity, i);
    }
    r.q_counts.push_back(QCount{q, checked, true, static_cast<double>(checked), 0});
  }
  r.details["note"] = "q_counts hold the chains checked (t in F_q and t = infinity)";
  r.check("members_are_chains", bad_chain == 0);
  r.check("conditions_B_hold", bad_b == 0);
  r.check("endpoint_extremal", bad_ext == 0);
}

void exp_chars_span(const ExperimentConfig& cfg, Report& r) {
  const auto qs = q_list(cfg, {2});
  json runs = json::array();
  for (std::uint32_t q : qs) {
    int pp = 0, kk = 0;
    require(GF::is_prime_power(q, &pp, &kk) && kk == 1, "chars-span needs prime q");
    require(static_cast<double>(std::pow(q, cfg.n * cfg.n)) <= 20000, "GL_n(F_q) too large to tabulate");
    const SpanCheck sc = spanning_check(cfg.n, q);
    const bool exploratory = q < static_cast<std::uint32_t>(cfg.n + 1);
    r.q_counts.push_back(QCount{q, static_cast<std::uint64_t>(sc.last.rank), true, static_cast<double>(sc.last.rank), 0});
    runs.push_back({{"q", q},
                    {"rank", sc.last.rank},
                    {"p_regular_classes", sc.last.p_regular},
                    {"rows", sc.last.rows},
                    {"moduli_tried", sc.tried},
                    {"full", sc.full},
                    {"exploratory", exploratory}});
    if (exploratory) {
      if (!sc.full)
        r.warnings.push_back("GL_" + std::to_string(cfg.n) + "(F_" + std::to_string(q) +
                             "): rank not full, inconclusive (exploratory)");
    } else {
      r.check("full_rank@q=" + std::to_string(q), sc.full);
    }
  }
  r.details["n"] = cfg.n;
  r.details["runs"] = runs;
  r.details["note"] = "q_counts hold the rank over F_l";
}

void exp_orbit_count(const ExperimentConfig& cfg, Report& r) {
  const auto qs = q_list(cfg, {2, 3, 4, 5});
  int bad_count = 0, bad_seq = 0;
  json seqs = json::array();
  for (std::uint32_t q : qs) {
    require(ipow(q, cfg.n) <= 4096, "q^n must be at most 4096");
    const std::int64_t mc = moebius_orbit_count(q, cfg.n);
    const auto orbs = galois_orbits(q, cfg.n);
    bad_count += mc != static_cast<std::int64_t>(orbs.size());
    r.q_counts.push_back(QCount{q, static_cast<std::uint64_t>(mc), true, static_cast<double>(mc), 0});
    for (const auto& P : partitions(cfg.n)) {
      const SequenceResult sr = select_sequence(q, P);
      const bool valid = sr.ok && sequence_valid(q, P, sr.elems);
      json e = {{"q", q}, {"partition", partition_str(P)}, {"ok", valid}};
      if (!sr.ok) e["reason"] = sr.reason;
      seqs.push_back(e);
      if (q >= static_cast<std::uint32_t>(cfg.n + 1)) bad_seq += !valid;
    }
  }
  r.details["n"] = cfg.n;
  r.details["sequences"] = seqs;
  r.check("moebius_matches_enumeration", bad_count == 0);
  r.check("sequences_exist_when_q_ge_n+1", bad_seq == 0);
}

const std::vector<std::pair<std::string, Runner>>& runners() {
  static const std::vector<std::pair<std::string, Runner>> r{
      {"relation-check", exp_relation_check}, {"fiber-count", exp_fiber_count},
      {"strata-scan", exp_strata_scan},       {"conv-enumerate", exp_conv_enumerate},
      {"mv-verify", exp_mv_verify},           {"dimpoly-oracle", exp_dimpoly_oracle},
      {"claim-verify", exp_claim_verify},     {"splocus-sweep", exp_splocus_sweep},
      {"degen-move", exp_degen_move},         {"chars-span", exp_chars_span},
      {"orbit-count", exp_orbit_count}};
  return r;
}

std::string iso_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, f] : runners()) v.push_back(n);
    return v;
  }();
  return names;
}

// ------------------------------------------------------------ config

void ExperimentConfig::set(const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string v = trim(value_in);
  if (key == "experiment") {
    experiment = v;
  } else if (key == "p") {
    p = to_small(key, v);
  } else if (key == "k") {
    k = to_small(key, v);
  } else if (key == "e") {
    e = to_small(key, v);
  } else if (key == "f") {
    f = to_small(key, v);
  } else if (key == "h") {
    h = to_small(key, v);
  } else if (key == "d") {
    d = to_small(key, v);
  } else if (key == "mu") {
    mu.clear();
    for (const auto& x : split_list(v)) mu.push_back(to_small(key, x));
  } else if (key == "c") {
    c.clear();
    for (const auto& x : split_list(v)) c.push_back(to_int(key, x));
  } else if (key == "q") {
    q.clear();
    for (const auto& x : split_list(v)) {
      const std::uint64_t y = to_u64(key, x);
      if (y > 4096) throw ConfigError("q = " + x + " exceeds 4096");
      q.push_back(static_cast<std::uint32_t>(y));
    }
  } else if (key == "budget") {
    budget = to_double(key, v);
  } else if (key == "seed") {
    seed = to_u64(key, v);
  } else if (key == "shards") {
    shards = to_small(key, v);
  } else if (key == "threads") {
    threads = to_small(key, v);
  } else if (key == "samples") {
    samples = to_small(key, v);
  } else if (key == "emax") {
    emax = to_small(key, v);
  } else if (key == "n") {
    n = to_small(key, v);
  } else if (key == "rsmax") {
    rsmax = to_small(key, v);
  } else if (key == "output") {
    output = v;
  } else if (key == "csv") {
    csv = v;
  } else {
    throw ConfigError("unknown key '" + key_in + "'");
  }
}

void ExperimentConfig::validate() const {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end())
    throw ConfigError("unknown experiment '" + experiment + "'");
  int pp = 0, kk = 0;
  if (!GF::is_prime_power(static_cast<std::uint32_t>(std::max(p, 0)), &pp, &kk) || kk != 1)
    throw ConfigError("p must be prime");
  if (k < 1 || e < 1 || f < 1 || h < 1 || d < 1) throw ConfigError("k, e, f, h, d must be positive");
  if (!(budget > 0)) throw ConfigError("budget must be positive");
  if (shards < 1 || shards > 4096) throw ConfigError("shards must be in 1..4096");
  if (threads < 0 || samples < 0) throw ConfigError("threads and samples must be non-negative");
  if (emax < 1 || n < 1 || rsmax < 0) throw ConfigError("emax and n must be positive");
  for (std::uint32_t x : q)
    if (!GF::is_prime_power(x)) throw ConfigError("q = " + std::to_string(x) + " is not a prime power");
  if (mu.size() % 3 != 0) throw ConfigError("mu needs 3 entries per embedding");
}

json ExperimentConfig::echo() const {
  json j;
  j["p"] = p;
  j["k"] = k;
  j["e"] = e;
  j["f"] = f;
  j["h"] = h;
  j["d"] = d;
  j["mu"] = mu;
  j["c"] = c;
  j["q"] = q;
  j["budget"] = budget;
  j["seed"] = seed;
  j["shards"] = shards;
  j["threads"] = threads;
  j["samples"] = samples;
  j["emax"] = emax;
  j["n"] = n;
  j["rsmax"] = rsmax;
  return j;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(no) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config_text(os.str());
}

// ------------------------------------------------------------ report

void Report::check(const std::string& name, bool ok) {
  checks.emplace_back(name, ok);
  pass = pass && ok;
}

json Report::to_json() const {
  json j;
  j["experiment"] = experiment;
  j["params"] = params;
  json qc = json::array();
  for (const auto& c : q_counts) {
    json x;
    x["q"] = c.q;
    if (c.exact) {
      x["count"] = c.count;
    } else {
      x["count"] = nullptr;
      x["estimate"] = c.estimate;
      x["radius"] = c.radius;
    }
    x["exact"] = c.exact;
    qc.push_back(x);
  }
  j["q_counts"] = qc;
  j["dim_estimate"] = dim_estimate ? json(*dim_estimate) : json(nullptr);
  j["bound"] = bound ? json(*bound) : json(nullptr);
  j["pass"] = pass;
  json ch = json::object();
  for (const auto& [k, v] : checks) ch[k] = v;
  j["checks"] = ch;
  j["warnings"] = warnings;
  j["seed"] = seed;
  j["version"] = kVersion;
  j["details"] = details;
  j["timing"] = {{"timestamp", timestamp}, {"wall_seconds", wall_seconds}};
  return j;
}

std::string Report::to_csv() const {
  std::ostringstream os;
  os << "experiment,q,count,exact,estimate,radius\n";
  os << std::setprecision(17);
  for (const auto& c : q_counts) {
    os << experiment << ',' << c.q << ',';
    if (c.exact) os << c.count;
    os << ',' << (c.exact ? "true" : "false") << ',' << c.estimate << ',' << c.radius << '\n';
  }
  return os.str();
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t i) {
  // splitmix64 on (seed, counter)
  std::uint64_t z = seed + (i + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Report run(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  Report r;
  r.experiment = cfg.experiment;
  r.params = cfg.echo();
  r.seed = cfg.seed;
  r.timestamp = iso_now();
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& [name, fn] : runners())
    if (name == cfg.experiment) {
      try {
        fn(cfg, r);
      } catch (const NotInCone& ex) {
        throw ConfigError(std::string("mu outside the cone: ") + ex.what());
      } catch (const BadModulus& ex) {
        throw ConfigError(ex.what());
      } catch (const UnsupportedDelta& ex) {
        throw ConfigError(ex.what());
      }
    }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

int write_report(const Report& r, const ExperimentConfig& cfg) {
  const std::string text = r.to_json().dump(2) + "\n";
  if (cfg.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.output);
    if (!out) throw ConfigError("cannot write " + cfg.output);
    out << text;
    std::string csv = cfg.csv;
    if (csv.empty()) {
      csv = cfg.output;
      const auto dot = csv.rfind('.');
      const auto slash = csv.rfind('/');
      if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) csv.resize(dot);
      csv += ".csv";
    }
    std::ofstream c(csv);
    if (!c) throw ConfigError("cannot write " + csv);
    c << r.to_csv();
  }
  return r.pass ? 0 : 1;
}

}  // namespace bkgr
