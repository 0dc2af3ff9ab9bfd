#include "bkgr/bk.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "bkgr/errors.hpp"

namespace bkgr {

namespace {

const Coweight kQM{2, 1, 0};

SeriesMatrix conj_monomial(const SeriesMatrix& M, const Coweight& mu) {
  // u^mu M u^{-mu}
  SeriesMatrix r(M.n());
  for (int a = 0; a < M.n(); ++a)
    for (int b = 0; b < M.n(); ++b) r(a, b) = M(a, b).shift(mu[a] - mu[b]);
  return r;
}

std::vector<std::int64_t> exps_of(const Coweight& c) { return {c.v.begin(), c.v.end()}; }

SeriesMatrix diag_of(const Coweight& c, const Fe& one) { return SeriesMatrix::diag_monomial(exps_of(c), one); }

// Entries with negative valuation make the matrix non-integral; a result
// that cannot decide throws.
bool integral(const SeriesMatrix& M) {
  for (int a = 0; a < M.n(); ++a)
    for (int b = 0; b < M.n(); ++b) {
      const Series& x = M(a, b);
      if (!x.is_zero() && x.val() < 0) return false;
    }
  for (int a = 0; a < M.n(); ++a)
    for (int b = 0; b < M.n(); ++b)
      if (M(a, b).prec() < 0) throw PrecisionExhausted("integrality not decided at working precision");
  return true;
}

bool zero_mod(const std::vector<SeriesMatrix>& ms, std::int64_t m) {
  for (const auto& x : ms)
    if (!x.is_zero_mod(m)) return false;
  return true;
}

bool step_bounded(const SeriesMatrix& S) {
  Coweight ed = elementary_divisors(S);
  for (int x : ed.v)
    if (x < 0) return false;
  return ed.sum() == kQM.sum() && dominance_leq(ed, kQM);
}

}  // namespace

// ------------------------------------------------------------------- pairs

void validate_pair(const BKPair& pr, const ArithContext& ctx) {
  if (static_cast<int>(pr.X.size()) != ctx.f || static_cast<int>(pr.N.size()) != ctx.f)
    throw PreconditionFailed("pair must have one matrix per embedding");
  for (int t = 0; t < ctx.f; ++t) {
    const SeriesMatrix& N = pr.N[t];
    for (int a = 0; a < ctx.d; ++a)
      for (int b = 0; b < ctx.d; ++b) {
        const Series& x = N(a, b);
        if (x.is_zero()) continue;
        if (x.val() < 1) throw PreconditionFailed("N must vanish modulo u");
        if (x.top() > ctx.e) throw PreconditionFailed("N must have degree at most e");
      }
    Series dt = pr.X[t].det();
    if (dt.is_zero()) throw PreconditionFailed("X is singular at working precision");
    if (dt.val() < 0 || dt.val() > static_cast<std::int64_t>(ctx.h) * ctx.e * ctx.d)
      throw PreconditionFailed("det X has valuation outside [0, h e d]");
  }
}

std::vector<SeriesMatrix> monodromy_residual(const BKPair& pr, const ArithContext& ctx) {
  std::vector<SeriesMatrix> out;
  for (int t = 0; t < ctx.f; ++t) {
    const SeriesMatrix& X = pr.X[t];
    SeriesMatrix Xi = ctx.inverse(X);
    SeriesMatrix phiN = pr.N[ctx.next(t)].frobenius(ctx.p);
    SeriesMatrix lhs = (X * phiN * Xi - (X.theta() * Xi).scaled(ctx.c[t])).shift(ctx.e);
    out.push_back((lhs - pr.N[t].scaled(ctx.c[t])).truncated(ctx.e + 1));
  }
  return out;
}

bool is_bk_point(const BKPair& pr, const ArithContext& ctx) { return zero_mod(monodromy_residual(pr, ctx), ctx.e + 1); }

// ------------------------------------------------------------------- chart

void validate_chart(const ChartPoint& cp, const std::vector<Coweight>& mu, const ArithContext& ctx) {
  if (ctx.d != 3) throw PreconditionFailed("chart coordinates are defined for d = 3");
  auto sz = static_cast<std::size_t>(ctx.f);
  if (cp.h.size() != sz || cp.B.size() != sz || cp.Y.size() != sz || cp.g.size() != sz || mu.size() != sz)
    throw PreconditionFailed("chart point must have one entry per embedding");
  for (int t = 0; t < ctx.f; ++t) {
    const SeriesMatrix& B = cp.B[t];
    const Coweight& m = mu[t];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const Series& x = B(a, b);
        if (a == b) {
          if (!(x - Series::constant(ctx.one())).is_zero()) throw PreconditionFailed("B must be unipotent");
        } else if (a < b) {
          if (!x.is_zero()) throw PreconditionFailed("B must be lower triangular");
        } else if (!x.is_zero()) {
          int bound = (a == 1) ? alpha_pairing(m) : (b == 1 ? beta_pairing(m) : gamma_pairing(m));
          if (x.val() < 0 || x.top() >= bound) throw PreconditionFailed("B entry exceeds its degree bound");
        }
        const Series& y = cp.Y[t](a, b);
        if (y.is_zero()) continue;
        if (a <= b) throw PreconditionFailed("Y must be strictly lower triangular");
        if (y.val() < 1 || y.top() > ctx.e) throw PreconditionFailed("Y entries need valuation >= 1 and degree <= e");
      }
  }
}

std::vector<SeriesMatrix> chart_residual(const ChartPoint& cp, const std::vector<Coweight>& mu,
                                         const ArithContext& ctx) {
  std::vector<SeriesMatrix> out;
  for (int t = 0; t < ctx.f; ++t) {
    int tn = ctx.next(t);
    const SeriesMatrix& hn = cp.h[tn];
    SeriesMatrix inner = (ctx.inverse(hn) * cp.Y[tn] * hn).scaled(ctx.dd[tn]);
    const SeriesMatrix& B = cp.B[t];
    SeriesMatrix Bi = ctx.inverse(B);
    SeriesMatrix bracket = (B.theta() * Bi + B * inner.frobenius(ctx.p) * Bi).shift(ctx.e);
    out.push_back((conj_monomial(bracket, mu[t]) - cp.Y[t]).truncated(ctx.e + 1));
  }
  return out;
}

bool is_chart_point(const ChartPoint& cp, const std::vector<Coweight>& mu, const ArithContext& ctx) {
  return zero_mod(chart_residual(cp, mu, ctx), ctx.e + 1);
}

BKPair chart_to_pair(const ChartPoint& cp, const std::vector<Coweight>& mu, const ArithContext& ctx) {
  BKPair pr;
  for (int t = 0; t < ctx.f; ++t) {
    const SeriesMatrix& h = cp.h[t];
    pr.X.push_back(h * diag_of(mu[t], ctx.one()) * cp.B[t] * cp.g[t]);
    SeriesMatrix N = -(ctx.inverse(h) * cp.Y[t] * h);
    pr.N.push_back(N.map_entries([&](const Series& x) { return x.truncated(ctx.e + 1).as_exact(); }));
  }
  return pr;
}

std::string ChartPairReport::summary() const {
  std::ostringstream os;
  os << "chart residual " << (chart_zero ? "zero" : "nonzero") << ", pair residual " << (pair_zero ? "zero" : "nonzero")
     << ", after diagonal correction " << (corrected_zero ? "zero" : "nonzero");
  if (diag_term_nonzero) os << "; discrepancy c*diag(mu)*u^e present";
  return os.str();
}

ChartPairReport compare_chart_vs_pair(const ChartPoint& cp, const std::vector<Coweight>& mu,
                                      const ArithContext& ctx) {
  ChartPairReport r;
  r.chart = chart_residual(cp, mu, ctx);
  BKPair pr = chart_to_pair(cp, mu, ctx);
  r.pair = monodromy_residual(pr, ctx);
  for (int t = 0; t < ctx.f; ++t) {
    const SeriesMatrix& h = cp.h[t];
    SeriesMatrix hi = ctx.inverse(h);
    SeriesMatrix dterm = ctx.zero_matrix();
    for (int a = 0; a < ctx.d; ++a) dterm(a, a) = Series::monomial(ctx.fe(mu[t][a]), ctx.e) * ctx.c[t];
    dterm = dterm.truncated(ctx.e + 1);
    r.diag_term.push_back(dterm);
    r.gauge_term.push_back((hi * h.theta()).scaled(ctx.c[t]).shift(ctx.e).truncated(ctx.e + 1));
    r.corrected.push_back((r.pair[t] + h * dterm * hi).truncated(ctx.e + 1));
    if (!dterm.is_zero_mod(ctx.e + 1)) r.diag_term_nonzero = true;
  }
  r.chart_zero = zero_mod(r.chart, ctx.e + 1);
  r.pair_zero = zero_mod(r.pair, ctx.e + 1);
  r.corrected_zero = zero_mod(r.corrected, ctx.e + 1);
  return r;
}

// ------------------------------------------------------------------ strata

bool is_balanced(const Coweight& mu, int e) {
  return alpha_pairing(mu) <= e && beta_pairing(mu) <= e && gamma_pairing(mu) >= e;
}

StratumEntry stratum_of(const Coweight& mu, int e) {
  if (mu.size() != 3 || mu.sum() != 3 * e) throw NotInCone(mu.str() + " does not have total 3e");
  StratumEntry s;
  s.mu = mu;
  s.n = 2 * e - mu[0];
  s.m = mu[2];
  if (s.n < 0 || s.m < 0 || mu[1] != e + s.n - s.m) throw NotInCone(mu.str() + " is not below (2e,e,0)");
  s.balanced = is_balanced(mu, e);
  return s;
}

StratumDescriptor stratum(const BKPair& pr, const ArithContext& ctx) {
  StratumDescriptor d;
  for (int t = 0; t < ctx.f; ++t) d.per_tau.push_back(stratum_of(elementary_divisors(pr.X[t]), ctx.e));
  return d;
}

SeriesMatrix n0phi_matrix(const BKPair& pr, const SeriesMatrix& G, int i, int tau, const ArithContext& ctx) {
  SeriesMatrix phiN = pr.N[ctx.next(tau)].frobenius(ctx.p);
  SeriesMatrix inner = phiN * G + G.theta().scaled(ctx.c[tau]);
  return (ctx.inverse(G) * inner).shift(i - 1);
}

// ------------------------------------------------------------------ chains

ConvChain make_chain(const std::vector<std::vector<SeriesMatrix>>& steps, const ArithContext& ctx) {
  ConvChain ch;
  ch.steps = steps;
  for (const auto& st : steps) {
    std::vector<SeriesMatrix> cum{ctx.identity()};
    std::vector<Coweight> prof{Coweight(std::vector<int>(static_cast<std::size_t>(ctx.d), 0))};
    for (const auto& S : st) {
      cum.push_back(cum.back() * S);
      prof.push_back(elementary_divisors(cum.back()));
    }
    ch.cumulative.push_back(std::move(cum));
    ch.profile.push_back(std::move(prof));
  }
  return ch;
}

SeriesMatrix top_lattice_matrix(const BKPair& pr, int tau, const ArithContext& ctx) {
  return ctx.inverse(pr.X[tau]).shift(static_cast<std::int64_t>(ctx.e) * ctx.h);
}

bool chain_consistent(const ConvChain& ch, const BKPair& pr, const ArithContext& ctx, std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (ch.embeddings() != ctx.f) return fail("wrong number of embeddings");
  int H = ctx.e * ctx.h;
  for (int t = 0; t < ctx.f; ++t) {
    if (static_cast<int>(ch.steps[t].size()) != ctx.e) return fail("chain length differs from e");
    for (int i = 1; i <= ctx.e; ++i) {
      if (!step_bounded(ch.steps[t][i - 1])) return fail("step " + std::to_string(i) + " not in Gr_{<=(2,1,0)}");
      const Coweight& pf = ch.profile[t][i];
      if (!pf.dominant() || !dominance_leq(pf, Coweight{2 * i, i, 0}))
        return fail("profile " + pf.str() + " not below (2i,i,0)");
    }
    if (!(Lattice::from_matrix(ch.cumulative[t][ctx.e], H) == Lattice::from_matrix(top_lattice_matrix(pr, t, ctx), H)))
      return fail("M_e differs from the lattice of the pair");
  }
  return true;
}

bool stabilizes(const BKPair& pr, const SeriesMatrix& G, int i, int tau, const ArithContext& ctx) {
  SeriesMatrix phiN = pr.N[ctx.next(tau)].frobenius(ctx.p);
  SeriesMatrix V = (phiN * G + G.theta().scaled(ctx.c[tau])).shift(i - 1);
  V = V.truncated(static_cast<std::int64_t>(ctx.e) * ctx.p + i);
  return integral(ctx.inverse(G) * V);
}

bool check_A(const ConvChain& ch, const BKPair& pr, int i, const ArithContext& ctx) {
  if (i <= 0) return true;
  for (int t = 0; t < ctx.f; ++t)
    if (!stabilizes(pr, ch.cumulative[t][i], i, t, ctx)) return false;
  return true;
}

bool check_B(const ConvChain& ch, const BKPair& pr, int i, int tau, const ArithContext& ctx) {
  if (ctx.d != 3) throw PreconditionFailed("condition (B) is implemented for d = 3");
  if (i >= 2 && !stabilizes(pr, ch.cumulative[tau][i - 1], i - 1, tau, ctx))
    throw PreconditionFailed("(A_" + std::to_string(i - 1) + ") fails");
  Lattice L = Lattice::from_matrix(ch.steps[tau][i - 1], ctx.h);
  DerivationData D{n0phi_matrix(pr, ch.cumulative[tau][i - 1], i, tau, ctx).truncated(ctx.h), ctx.c[tau]};
  return s_locus_check(L, D, i, kQM, ctx.p);
}

bool check_B(const ConvChain& ch, const BKPair& pr, int i, const ArithContext& ctx) {
  for (int t = 0; t < ctx.f; ++t)
    if (!check_B(ch, pr, i, t, ctx)) return false;
  return true;
}

std::vector<SeriesMatrix> check_C_difference(const BKPair& pr, const ArithContext& ctx) {
  std::vector<SeriesMatrix> out;
  std::int64_t eh = static_cast<std::int64_t>(ctx.e) * ctx.h;
  for (int t = 0; t < ctx.f; ++t) {
    SeriesMatrix Xe = pr.X[t].shift(-eh);
    SeriesMatrix Xei = ctx.inverse(Xe);
    SeriesMatrix phiN = pr.N[ctx.next(t)].frobenius(ctx.p);
    SeriesMatrix lhs = (Xe * phiN * Xei - (Xe.theta() * Xei).scaled(ctx.c[t])).shift(ctx.e);
    SeriesMatrix rhs = (pr.N[t] + ctx.identity().scaled(ctx.monomial(eh, ctx.e))).scaled(ctx.c[t]);
    out.push_back((lhs - rhs).truncated(ctx.e + 1));
  }
  return out;
}

bool check_C(const BKPair& pr, const ArithContext& ctx) { return zero_mod(check_C_difference(pr, ctx), ctx.e + 1); }

bool genericity_check(const BKPair& pr, const SeriesMatrix& Gamma, int i, GenericFlavor fl, int tau,
                      const ArithContext& ctx) {
  SeriesMatrix Y = n0phi_matrix(pr, Gamma, i, tau, ctx).shift(1);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const Series& x = Y(a, b);
      if (x.is_zero()) continue;
      if (a > b && x.val() < i + 1) return false;
      if (a == b && x.val() < i) return false;
    }
  Coweight mu = elementary_divisors(Gamma);
  auto exact_val = [&](int a, int b, int want) {
    const Series& x = Y(a, b);
    return !x.is_zero() && x.val() == want;
  };
  bool al = exact_val(0, 1, i + 1 - alpha_pairing(mu));
  bool be = exact_val(1, 2, i + 1 - beta_pairing(mu));
  bool ga = exact_val(0, 2, i + 1 - gamma_pairing(mu));
  switch (fl) {
    case GenericFlavor::AlphaBeta:
      return al && be;
    case GenericFlavor::AlphaGamma:
      return al && ga;
    case GenericFlavor::BetaGamma:
      return be && ga;
  }
  return false;
}

// ------------------------------------------------------------ MV families

SeriesMatrix MVFamily::instantiate(const GF& F, const std::vector<std::uint32_t>& vals) const {
  SeriesMatrix M(3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const MVEntry& en = tmpl[a][b];
      if (en.kind == MVEntry::One) M(a, b) = Series::constant(Fe(F, 1));
      if (en.kind == MVEntry::Pole) M(a, b) = Series::monomial(Fe(F, vals.at(static_cast<std::size_t>(en.param))), -1);
    }
  return M;
}

bool mv_membership(const SeriesMatrix& M, const Coweight& delta) {
  SeriesMatrix C(3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) C(a, b) = M(a, b).shift(2 - delta[a]);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (!C(a, b).is_zero() && C(a, b).val() < 0) return false;
  if (C.det().is_zero()) return false;
  return step_bounded(C);
}

std::vector<MVFamily> mv_generator_families(const Coweight& delta) {
  if (delta.size() != 3 || delta.sum() != 3 || !dominance_leq(delta.sorted(), kQM))
    throw UnsupportedDelta(delta.str() + " is outside the (2,1,0) cone");
  const GF& F = GF::get(3, 1);
  std::vector<std::pair<int, int>> upper{{0, 1}, {0, 2}, {1, 2}};
  auto make = [&](const std::vector<std::pair<int, int>>& pos) {
    MVFamily fam;
    fam.params = static_cast<int>(pos.size());
    fam.tmpl.assign(3, std::vector<MVEntry>(3));
    for (int a = 0; a < 3; ++a) fam.tmpl[a][a].kind = MVEntry::One;
    for (std::size_t k = 0; k < pos.size(); ++k) {
      fam.tmpl[pos[k].first][pos[k].second].kind = MVEntry::Pole;
      fam.tmpl[pos[k].first][pos[k].second].param = static_cast<int>(k);
    }
    return fam;
  };
  auto all_members = [&](const MVFamily& fam) {
    std::vector<std::uint32_t> v(static_cast<std::size_t>(fam.params), 0);
    while (true) {
      if (!mv_membership(fam.instantiate(F, v), delta)) return false;
      std::size_t t = 0;
      while (t < v.size() && ++v[t] == F.q()) v[t++] = 0;
      if (t == v.size()) return true;
    }
  };
  std::vector<std::vector<std::pair<int, int>>> good;
  for (int mask = 7; mask >= 0; --mask) {
    std::vector<std::pair<int, int>> pos;
    for (int k = 0; k < 3; ++k)
      if (mask >> k & 1) pos.push_back(upper[static_cast<std::size_t>(k)]);
    bool contained = false;
    for (const auto& g : good)
      contained = contained || std::includes(g.begin(), g.end(), pos.begin(), pos.end());
    if (contained) continue;
    if (all_members(make(pos))) good.push_back(pos);
  }
  std::vector<MVFamily> out;
  for (const auto& pos : good) {
    MVFamily fam = make(pos);
    std::ostringstream os;
    os << "U0{";
    for (std::size_t k = 0; k < pos.size(); ++k) os << (k ? "," : "") << "(" << pos[k].first + 1 << pos[k].second + 1 << ")";
    os << "}";
    fam.name = os.str();
    out.push_back(std::move(fam));
  }
  std::sort(out.begin(), out.end(), [](const MVFamily& a, const MVFamily& b) { return a.name < b.name; });
  return out;
}

// ------------------------------------------------------------ enumeration

namespace {

struct FiberSearch {
  const ArithContext& ctx;
  int H;
  Lattice top;
  SeriesMatrix Ge;
  std::vector<SeriesMatrix> cands;

  FiberSearch(const BKPair& pr, int tau, const ArithContext& c)
      : ctx(c), H(c.e * c.h), Ge(top_lattice_matrix(pr, tau, c)) {
    if (ctx.d != 3 || ctx.h != 2) throw PreconditionFailed("convolution fibers are implemented for d = 3, h = 2");
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (!Ge(a, b).is_zero() && Ge(a, b).val() < 0) throw OutOfRange("M_e is not contained in M_0");
    top = Lattice::from_matrix(Ge, H);
    if (ctx.e > 1)
      for (const auto& L : enumerate_lattices(ctx.field(), 3, 2, 3)) cands.push_back(L.basis_matrix());
  }

  double work() const { return std::pow(static_cast<double>(std::max<std::size_t>(cands.size(), 1)), ctx.e - 1); }

  bool contains_top(const Lattice& L) const {
    for (const auto& r : top.rows())
      if (!L.contains(r)) return false;
    return true;
  }

  // Extends a prefix G_{i-1} (steps so far in `steps`); reports full chains.
  void extend(int i, const SeriesMatrix& G, std::vector<SeriesMatrix>& steps,
              const std::function<void(const std::vector<SeriesMatrix>&)>& emit) const {
    if (i == ctx.e) {
      SeriesMatrix S = ctx.inverse(G) * Ge;
      if (!integral(S) || !step_bounded(S)) return;
      steps.push_back(S);
      emit(steps);
      steps.pop_back();
      return;
    }
    for (const auto& C : cands) try_candidate(i, G, C, steps, emit);
  }

  void try_candidate(int i, const SeriesMatrix& G, const SeriesMatrix& C, std::vector<SeriesMatrix>& steps,
                     const std::function<void(const std::vector<SeriesMatrix>&)>& emit) const {
    SeriesMatrix Gi = G * C;
    if (!contains_top(Lattice::from_matrix(Gi, H))) return;
    steps.push_back(C);
    extend(i + 1, Gi, steps, emit);
    steps.pop_back();
  }
};

std::vector<std::vector<SeriesMatrix>> fiber_steps(const BKPair& pr, int tau, const ArithContext& ctx,
                                                   const EnumOptions& opt, bool parallel) {
  FiberSearch fs(pr, tau, ctx);
  if (fs.work() > opt.budget) throw BudgetExceeded("fiber enumeration needs about " + std::to_string(fs.work()) + " checks");
  std::vector<std::vector<SeriesMatrix>> out;
  if (ctx.e == 1) {
    if (opt.shard.index != 0) return out;
    std::vector<SeriesMatrix> steps;
    fs.extend(1, ctx.identity(), steps, [&](const std::vector<SeriesMatrix>& s) { out.push_back(s); });
    return out;
  }
  int n = static_cast<int>(fs.cands.size());
  std::vector<std::vector<std::vector<SeriesMatrix>>> per(static_cast<std::size_t>(n));
  auto body = [&](int c) {
    if (c % opt.shard.count != opt.shard.index) return;
    std::vector<SeriesMatrix> steps;
    auto& dst = per[static_cast<std::size_t>(c)];
    fs.try_candidate(1, ctx.identity(), fs.cands[static_cast<std::size_t>(c)], steps,
                     [&](const std::vector<SeriesMatrix>& s) { dst.push_back(s); });
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < n; ++c) body(c);
  } else {
    for (int c = 0; c < n; ++c) body(c);
  }
  for (auto& v : per)
    for (auto& s : v) out.push_back(std::move(s));
  return out;
}

std::vector<ConvChain> combine(const std::vector<std::vector<std::vector<SeriesMatrix>>>& per_tau,
                               const ArithContext& ctx) {
  std::vector<ConvChain> out;
  std::vector<std::size_t> idx(per_tau.size(), 0);
  for (const auto& v : per_tau)
    if (v.empty()) return out;
  while (true) {
    std::vector<std::vector<SeriesMatrix>> steps;
    for (std::size_t t = 0; t < per_tau.size(); ++t) steps.push_back(per_tau[t][idx[t]]);
    out.push_back(make_chain(steps, ctx));
    std::size_t t = 0;
    while (t < idx.size() && ++idx[t] == per_tau[t].size()) idx[t++] = 0;
    if (t == idx.size()) break;
  }
  return out;
}

std::vector<ConvChain> enumerate_impl(const BKPair& pr, const ArithContext& ctx, const EnumOptions& opt, bool par) {
  std::vector<std::vector<std::vector<SeriesMatrix>>> per_tau;
  for (int t = 0; t < ctx.f; ++t) {
    EnumOptions o = opt;
    if (t > 0) o.shard = Shard{};  // shard only the first embedding's search space
    per_tau.push_back(fiber_steps(pr, t, ctx, o, par));
  }
  return combine(per_tau, ctx);
}

}  // namespace

std::vector<ConvChain> conv_fiber_enumerate(const BKPair& pr, const ArithContext& ctx, const EnumOptions& opt) {
  return enumerate_impl(pr, ctx, opt, opt.parallel);
}

std::vector<ConvChain> conv_fiber_enumerate_serial(const BKPair& pr, const ArithContext& ctx, const EnumOptions& opt) {
  return enumerate_impl(pr, ctx, opt, false);
}

std::uint64_t conv_fiber_count(const BKPair& pr, int tau, const ArithContext& ctx, const EnumOptions& opt) {
  return fiber_steps(pr, tau, ctx, opt, opt.parallel).size();
}

int conv_fiber_dim_formula(const std::vector<Coweight>& lambdas, const Coweight& nu) {
  if (lambdas.empty()) throw PreconditionFailed("empty coweight list");
  Coweight s = lambdas.front();
  for (std::size_t k = 1; k < lambdas.size(); ++k) s = s + lambdas[k];
  if (!dominance_leq(nu, s)) throw NotInCone(nu.str() + " is not below " + s.str());
  return rho_pairing(s - nu);
}

// ------------------------------------------------------------ witnesses

WitnessResult failure_witness(const BKPair& pr, int tau, const SeriesMatrix& gamma_e,
                              const std::vector<Coweight>& profiles, int k, const ArithContext& ctx) {
  int e = ctx.e;
  if (k < 1 || k >= e || static_cast<int>(profiles.size()) != e + 1)
    throw PreconditionFailed("failure witness needs 1 <= k < e and profiles for levels 0..e");
  std::vector<SeriesMatrix> G(static_cast<std::size_t>(e + 1));
  G[static_cast<std::size_t>(e)] = gamma_e;
  for (int i = e - 1; i > k; --i) {
    Coweight nu = profiles[i + 1] - profiles[i];
    for (auto& x : nu.v) x = -x;
    G[static_cast<std::size_t>(i)] = G[static_cast<std::size_t>(i + 1)] * diag_of(nu, ctx.one());
  }
  Coweight nuk = profiles[k + 1] - profiles[k];
  Coweight neg = nuk;
  for (auto& x : neg.v) x = -x;
  const GF& F = ctx.field();
  WitnessResult res;
  res.g = ctx.identity();
  if (!stabilizes(pr, G[static_cast<std::size_t>(k + 1)], k + 1, tau, ctx)) {
    res.family = "identity";
    res.level = k + 1;
    return res;
  }
  bool pole_family = nuk == Coweight{1, 1, 1};
  std::vector<std::pair<std::string, std::vector<std::pair<int, int>>>> fams;
  if (pole_family)
    fams = {{"U_alpha,-1", {{0, 1}, {0, 2}}}, {"U_beta,-1", {{1, 2}, {0, 2}}}};
  else
    fams = {{"U", {{0, 1}, {0, 2}, {1, 2}}}};
  for (const auto& [name, pos] : fams) {
    std::vector<std::uint32_t> v(pos.size(), 0);
    while (true) {
      SeriesMatrix g = ctx.identity();
      for (std::size_t s = 0; s < pos.size(); ++s)
        g(pos[s].first, pos[s].second) = Series::monomial(Fe(F, v[s]), pole_family ? -1 : 0);
      SeriesMatrix Gk = G[static_cast<std::size_t>(k + 1)] * g * diag_of(neg, ctx.one());
      SeriesMatrix step = ctx.inverse(Gk) * G[static_cast<std::size_t>(k + 1)];
      if (integral(Gk) && integral(step) && step_bounded(step) && !stabilizes(pr, Gk, k, tau, ctx)) {
        res.g = g;
        res.params = v;
        res.family = name;
        res.level = k;
        return res;
      }
      std::size_t t = 0;
      while (t < v.size() && ++v[t] == F.q()) v[t++] = 0;
      if (t == v.size()) break;
    }
  }
  throw NoWitnessFound("no element of the allowed family breaks stabilization at level " + std::to_string(k) + " or " +
                       std::to_string(k + 1));
}

// ------------------------------------------------------------ degeneration

namespace {
bool is_monomial_step(const SeriesMatrix& S) {
  for (int a = 0; a < S.n(); ++a)
    for (int b = 0; b < S.n(); ++b) {
      const Series& x = S(a, b);
      if (a != b) {
        if (!x.is_zero()) return false;
      } else if (x.is_zero() || x.val() != x.top()) {
        return false;
      }
    }
  return true;
}
}  // namespace

bool is_monomial_chain(const ConvChain& ch) {
  for (const auto& st : ch.steps)
    for (const auto& S : st)
      if (!is_monomial_step(S)) return false;
  return true;
}

std::vector<std::int64_t> step_exponents(const SeriesMatrix& S) {
  if (!is_monomial_step(S)) throw MoveNotApplicable("step is not monomial");
  std::vector<std::int64_t> r;
  for (int a = 0; a < S.n(); ++a) r.push_back(S(a, a).val());
  return r;
}

bool step_extremal(const ConvChain& ch, int i) {
  for (const auto& st : ch.steps) {
    auto ex = step_exponents(st[static_cast<std::size_t>(i - 1)]);
    std::sort(ex.begin(), ex.end());
    if (ex != std::vector<std::int64_t>{0, 1, 2}) return false;
  }
  return true;
}

bool extremal_check(const ConvChain& ch) {
  if (!is_monomial_chain(ch)) throw MoveNotApplicable("chain is not monomial");
  for (int i = 1; i <= ch.length(); ++i)
    if (!step_extremal(ch, i)) return false;
  return true;
}

DegenerationFamily degeneration_family(const ConvChain& ch, int i, const ArithContext& ctx) {
  if (i < 2 || i > ch.length()) throw MoveNotApplicable("move needs 2 <= i <= e");
  if (!is_monomial_chain(ch)) throw MoveNotApplicable("chain is not monomial");
  struct Pos {
    int b, c;
  };
  std::vector<Pos> pos;
  for (const auto& st : ch.steps) {
    auto cur = step_exponents(st[static_cast<std::size_t>(i - 1)]);
    auto prev = step_exponents(st[static_cast<std::size_t>(i - 2)]);
    if (cur != std::vector<std::int64_t>(cur.size(), 1)) throw MoveNotApplicable("step i is not u*I");
    auto sorted = prev;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::vector<std::int64_t>{0, 1, 2}) throw MoveNotApplicable("step i-1 is not a permutation of (2,1,0)");
    Pos p{};
    for (int a = 0; a < 3; ++a) {
      if (prev[a] == 1) p.b = a;
      if (prev[a] == 0) p.c = a;
    }
    pos.push_back(p);
  }
  const GF& F = ctx.field();
  DegenerationFamily fam;
  for (std::uint32_t t = 0; t < F.q(); ++t) {
    auto steps = ch.steps;
    for (std::size_t tau = 0; tau < steps.size(); ++tau) {
      Series tt = Series::constant(Fe(F, t));
      auto& prev = steps[tau][static_cast<std::size_t>(i - 2)];
      auto& cur = steps[tau][static_cast<std::size_t>(i - 1)];
      prev(pos[tau].b, pos[tau].c) = prev(pos[tau].b, pos[tau].c) + tt;
      cur(pos[tau].b, pos[tau].c) = cur(pos[tau].b, pos[tau].c) - tt;
    }
    fam.members.push_back(make_chain(steps, ctx));
  }
  auto steps = ch.steps;
  for (std::size_t tau = 0; tau < steps.size(); ++tau) {
    auto prev = step_exponents(steps[tau][static_cast<std::size_t>(i - 2)]);
    std::swap(prev[static_cast<std::size_t>(pos[tau].b)], prev[static_cast<std::size_t>(pos[tau].c)]);
    std::vector<std::int64_t> cur(3);
    auto orig = step_exponents(steps[tau][static_cast<std::size_t>(i - 2)]);
    for (int a = 0; a < 3; ++a) cur[static_cast<std::size_t>(a)] = 1 + orig[static_cast<std::size_t>(a)] - prev[static_cast<std::size_t>(a)];
    steps[tau][static_cast<std::size_t>(i - 2)] = ctx.diag_u(prev);
    steps[tau][static_cast<std::size_t>(i - 1)] = ctx.diag_u(cur);
  }
  fam.at_infinity = make_chain(steps, ctx);
  return fam;
}

}  // namespace bkgr
