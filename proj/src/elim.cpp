#include "bkgr/elim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "bkgr/errors.hpp"
#include "bkgr/linalg.hpp"

namespace bkgr {

const char* root_name(Root r) {
  switch (r) {
    case Root::Alpha: return "alpha";
    case Root::Beta: return "beta";
    default: return "gamma";
  }
}

std::int64_t root_pairing(Root r, const Coweight& mu) {
  const auto& v = mu.v;
  switch (r) {
    case Root::Alpha: return v[0] - v[1];
    case Root::Beta: return v[1] - v[2];
    default: return v[0] - v[2];
  }
}

static constexpr Root kRoots[3] = {Root::Alpha, Root::Beta, Root::Gamma};

static VarKind b_kind(Root r) {
  return r == Root::Alpha ? VarKind::X : r == Root::Beta ? VarKind::Y : VarKind::Z;
}
static VarKind y_kind(Root r) {
  return r == Root::Alpha ? VarKind::YA : r == Root::Beta ? VarKind::YB : VarKind::YG;
}

std::string GradedVariable::name() const {
  static const char* names[] = {"x", "y", "z", "Ya", "Yb", "Yg"};
  std::ostringstream os;
  os << names[static_cast<int>(kind)] << tau << "_" << i;
  return os.str();
}

int GradedPolySystem::find(VarKind k, int tau, int i) const {
  for (int id = 0; id < nvars(); ++id) {
    const auto& v = vars[static_cast<std::size_t>(id)];
    if (v.kind == k && v.tau == tau && v.i == i) return id;
  }
  return -1;
}

std::string GradedPolySystem::to_string(const Poly& f) const {
  return f.to_string([this](int id) { return var_name(id); });
}

const ChartEquation* GradedPolySystem::equation(int tau, Root d, int i) const {
  for (const auto& q : eqs)
    if (q.tau == tau && q.delta == d && q.i == i) return &q;
  return nullptr;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// ------------------------------------------------------------ equations

namespace {

// Truncated power series with polynomial coefficients, indices 0..n-1.
using PS = std::vector<Poly>;

PS ps_mul(const PS& a, const PS& b) {
  PS r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; i + j < r.size(); ++j) {
      if (b[j].is_zero()) continue;
      r[i + j] += a[i] * b[j];
    }
  }
  return r;
}

PS ps_add(const PS& a, const PS& b) {
  PS r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

using PM = std::vector<PS>;  // 3x3 row-major

PM pm_zero(std::size_t len) { return PM(9, PS(len)); }

PM pm_mul(const PM& a, const PM& b) {
  std::size_t len = a[0].size();
  PM r = pm_zero(len);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i * 3 + j] = ps_add(r[i * 3 + j], ps_mul(a[i * 3 + k], b[k * 3 + j]));
  return r;
}

PS ps_const(const Series& s, std::size_t len) {
  if (!s.is_zero() && s.val() < 0) throw PreconditionFailed("specialization has a pole");
  PS r(len);
  for (std::size_t j = 0; j < len; ++j) {
    Fe c = s.coeff(static_cast<std::int64_t>(j));
    if (c.F && !c.is_zero()) r[j] = Poly::constant(c);
  }
  return r;
}

PM pm_const(const SeriesMatrix& M, std::size_t len) {
  PM r = pm_zero(len);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i * 3 + j] = ps_const(M(i, j), len);
  return r;
}

// entry index of a root in a 3x3 row-major matrix
int root_entry(Root r) { return r == Root::Alpha ? 3 : r == Root::Beta ? 7 : 6; }

}  // namespace

GradedPolySystem build_equations(const std::vector<Coweight>& mu, const ArithContext& ctx,
                                 const std::vector<SeriesMatrix>& h) {
  if (ctx.d != 3) throw PreconditionFailed("chart equations need d = 3");
  if (static_cast<int>(mu.size()) != ctx.f) throw RankMismatch("one coweight per embedding");
  if (!h.empty() && static_cast<int>(h.size()) != ctx.f) throw RankMismatch("one h per embedding");
  const int e = ctx.e, p = ctx.p;
  const Coweight top({2 * e, e, 0});
  for (const auto& m : mu) {
    if (m.v.size() != 3 || !m.dominant() || m.sum() != 3 * e || !dominance_leq(m, top))
      throw NotInCone("mu must be dominant and <= (2e,e,0)");
  }
  const GF& F = ctx.field();

  GradedPolySystem sys;
  sys.F = &F;
  sys.mu = mu;
  sys.e = e;
  sys.p = p;
  auto add_var = [&](VarKind k, int tau, int i) {
    sys.vars.push_back({k, tau, i});
    sys.weight.push_back(i);
    return sys.nvars() - 1;
  };
  // ids[tau][kind][i]
  std::vector<std::array<std::vector<int>, 6>> ids(static_cast<std::size_t>(ctx.f));
  std::int64_t top_index = 0;
  for (int tau = 0; tau < ctx.f; ++tau) {
    for (Root r : kRoots) {
      std::int64_t m = root_pairing(r, mu[static_cast<std::size_t>(tau)]);
      top_index = std::max(top_index, m);
      auto& v = ids[static_cast<std::size_t>(tau)][static_cast<int>(b_kind(r))];
      for (int i = 0; i < m; ++i) v.push_back(add_var(b_kind(r), tau, i));
    }
    for (Root r : kRoots) {
      auto& v = ids[static_cast<std::size_t>(tau)][static_cast<int>(y_kind(r))];
      v.push_back(-1);  // Y indices start at 1
      for (int j = 1; j <= e; ++j) v.push_back(add_var(y_kind(r), tau, j));
    }
  }

  const std::size_t len = static_cast<std::size_t>(top_index) + 1;
  const std::size_t ylen = static_cast<std::size_t>(top_index / p) + 1;
  for (int tau = 0; tau < ctx.f; ++tau) {
    const auto& id = ids[static_cast<std::size_t>(tau)];
    auto series_of = [&](VarKind k) {
      PS s(len);
      const auto& v = id[static_cast<int>(k)];
      for (std::size_t i = 0; i < v.size() && i < len; ++i) s[i] = Poly::var(F, v[i]);
      return s;
    };
    PS x = series_of(VarKind::X), y = series_of(VarKind::Y), z = series_of(VarKind::Z);
    PM B = pm_zero(len), Binv = pm_zero(len), thB = pm_zero(len);
    for (int i = 0; i < 3; ++i) {
      B[i * 4][0] = Poly::constant(ctx.one());
      Binv[i * 4][0] = Poly::constant(ctx.one());
    }
    B[3] = x;
    B[7] = y;
    B[6] = z;
    for (std::size_t i = 0; i < len; ++i) {
      Binv[3][i] = -x[i];
      Binv[7][i] = -y[i];
    }
    Binv[6] = ps_add(ps_mul(x, y), PS(len));
    for (std::size_t i = 0; i < len; ++i) Binv[6][i] -= z[i];
    for (int k : {3, 6, 7})
      for (std::size_t i = 0; i < len; ++i) thB[k][i] = B[k][i].scaled(static_cast<std::int64_t>(i));

    // phi(h'^{-1} d' Y' h') with tau' = tau + 1
    const int tn = ctx.next(tau);
    SeriesMatrix hn = h.empty() ? ctx.identity() : h[static_cast<std::size_t>(tn)];
    SeriesMatrix hinv = ctx.inverse(hn);
    PM Yp = pm_zero(ylen);
    const auto& idn = ids[static_cast<std::size_t>(tn)];
    for (Root r : kRoots) {
      const auto& v = idn[static_cast<int>(y_kind(r))];
      for (std::size_t j = 1; j < v.size() && j < ylen; ++j) Yp[root_entry(r)][j] = Poly::var(F, v[j]);
    }
    PS dn = ps_const(ctx.dd[static_cast<std::size_t>(tn)], ylen);
    for (auto& s : Yp) s = ps_mul(dn, s);
    PM M = pm_mul(pm_mul(pm_const(hinv, ylen), Yp), pm_const(hn, ylen));
    PM phiM = pm_zero(len);
    for (int k = 0; k < 9; ++k)
      for (std::size_t j = 0; j < ylen; ++j)
        if (j * static_cast<std::size_t>(p) < len) phiM[k][j * static_cast<std::size_t>(p)] = M[k][j];
    PM br = pm_mul(pm_mul(B, phiM), Binv);
    PM th = pm_mul(thB, Binv);

    for (Root r : kRoots) {
      const std::int64_t m = root_pairing(r, mu[static_cast<std::size_t>(tau)]);
      const std::int64_t lo = std::min<std::int64_t>(1, 1 + m - e);
      const auto& yv = id[static_cast<int>(y_kind(r))];
      for (std::int64_t i = lo; i <= m; ++i) {
        ChartEquation q;
        q.tau = tau;
        q.delta = r;
        q.i = static_cast<int>(i);
        std::int64_t j = i - (m - e);
        q.poly = Poly::constant(ctx.zero());
        if (j >= 1 && j <= e) {
          q.lhs = yv[static_cast<std::size_t>(j)];
          q.poly = Poly::var(F, q.lhs);
        }
        if (i >= 0) {
          auto k = static_cast<std::size_t>(i);
          q.poly -= br[root_entry(r)][k] + th[root_entry(r)][k];
        }
        sys.eqs.push_back(std::move(q));
      }
    }
  }
  sys.dead.assign(sys.vars.size(), 0);
  return sys;
}

// ------------------------------------------------------------ plans

void SubstitutionPlan::validate(const std::vector<Coweight>& mu, int e, int p) const {
  if (sets.size() != mu.size()) throw PreconditionFailed("plan/mu embedding mismatch");
  for (std::size_t tau = 0; tau < mu.size(); ++tau) {
    for (Root r : kRoots) {
      const auto& s = sets[tau][static_cast<int>(r)];
      const std::int64_t m = root_pairing(r, mu[tau]);
      const std::int64_t lo = std::min<std::int64_t>(1, 1 + m - e);
      for (int i : s.type1) {
        if (i > m || i < lo || static_cast<std::int64_t>(i) * (p - 1) <= p * (m - e))
          throw PreconditionFailed("Type I index out of range");
        if (s.type2.count(i)) throw PreconditionFailed("Type I and II overlap");
      }
      for (int i : s.type2)
        if (i > m || i < lo || i % p == 0) throw PreconditionFailed("Type II index out of range");
    }
  }
}

SubstitutionPlan empty_plan(int f) {
  SubstitutionPlan pl;
  pl.sets.resize(static_cast<std::size_t>(f));
  pl.offset.assign(static_cast<std::size_t>(f), 0);
  pl.threshold.assign(static_cast<std::size_t>(f), 0);
  return pl;
}

SubstitutionPlan default_plan(const std::vector<Coweight>& mu, int e, int p) {
  SubstitutionPlan pl = empty_plan(static_cast<int>(mu.size()));
  for (std::size_t tau = 0; tau < mu.size(); ++tau) {
    const std::int64_t a = root_pairing(Root::Alpha, mu[tau]);
    const std::int64_t b = root_pairing(Root::Beta, mu[tau]);
    const std::int64_t g = root_pairing(Root::Gamma, mu[tau]);
    const Root big = a >= b ? Root::Alpha : Root::Beta;
    for (Root r : kRoots) {
      auto& s = pl.sets[tau][static_cast<int>(r)];
      const std::int64_t m = root_pairing(r, mu[tau]);
      if (m <= e) {
        for (std::int64_t i = 1 + m - e; i <= m; ++i) s.type1.insert(static_cast<int>(i));
        continue;
      }
      for (std::int64_t n = 1; n * p <= m; ++n)
        if (n * (p - 1) > m - e) s.type1.insert(static_cast<int>(n * p));
      const std::int64_t cap = r == Root::Gamma ? m : m - e;
      if (r != Root::Gamma && r != big) continue;
      for (std::int64_t i = 1; i <= cap; ++i)
        if (i % p != 0) s.type2.insert(static_cast<int>(i));
    }
    const std::int64_t mbig = std::max(a, b);
    pl.offset[tau] = mbig > e ? static_cast<int>(ceil_div(mbig - e - p + 3, p)) : 0;
    pl.threshold[tau] = g > e ? static_cast<int>(floor_div(g - e, p - 1)) : 0;
  }
  return pl;
}

// ------------------------------------------------------------ substitution

namespace {

bool mentions(const Poly& f, int var) {
  for (const auto& [m, c] : f.terms())
    for (const auto& [v, ex] : m)
      if (v == var) return true;
  return false;
}

bool mentions_any(const Poly& f, const std::vector<char>& mask) {
  for (const auto& [m, c] : f.terms())
    for (const auto& [v, ex] : m)
      if (mask[static_cast<std::size_t>(v)]) return true;
  return false;
}

}  // namespace

std::map<int, Poly> Reduction::as_map() const {
  std::map<int, Poly> m;
  for (const auto& s : table) m[s.var] = s.expr;
  return m;
}

Reduction apply_substitutions(const GradedPolySystem& sys, const SubstitutionPlan& plan) {
  plan.validate(sys.mu, sys.e, sys.p);
  struct Op {
    int i, delta, tau, type;
  };
  std::vector<Op> ops;
  for (std::size_t tau = 0; tau < plan.sets.size(); ++tau)
    for (Root r : kRoots) {
      const auto& s = plan.sets[tau][static_cast<int>(r)];
      for (int i : s.type1) ops.push_back({i, static_cast<int>(r), static_cast<int>(tau), 1});
      for (int i : s.type2) ops.push_back({i, static_cast<int>(r), static_cast<int>(tau), 2});
    }
  std::sort(ops.begin(), ops.end(), [](const Op& a, const Op& b) {
    return std::tie(a.i, a.delta, a.tau) < std::tie(b.i, b.delta, b.tau);
  });

  Reduction red;
  std::vector<char> gone(sys.vars.size(), 0);
  std::map<int, Poly> sub;
  std::vector<Substitution>& table = red.table;
  for (const Op& op : ops) {
    const Root r = static_cast<Root>(op.delta);
    const ChartEquation* q = sys.equation(op.tau, r, op.i);
    if (!q) throw PreconditionFailed("plan names a missing equation");
    Substitution s;
    s.tau = op.tau;
    s.delta = r;
    s.i = op.i;
    s.type = op.type;
    if (op.type == 1) {
      s.var = q->lhs;
    } else {
      s.var = sys.find(b_kind(r), op.tau, op.i);
      if (s.var < 0) {
        s.var = q->lhs;
        s.fallback = true;
      }
    }
    if (s.var < 0) throw PreconditionFailed("substitution target out of range");
    if (gone[static_cast<std::size_t>(s.var)]) throw CyclicDependency("target already eliminated: " + sys.var_name(s.var));
    Poly g = mentions_any(q->poly, gone) ? q->poly.substitute(sub) : q->poly;
    Fe a = Fe(*sys.F, 0);
    Poly rest = Poly::constant(a);
    for (const auto& [m, c] : g.terms()) {
      bool has = false;
      for (const auto& [v, ex] : m) has = has || v == s.var;
      if (!has) {
        rest.add_term(m, c);
      } else if (m.size() == 1 && m[0].second == 1) {
        a = c;
      } else {
        throw CyclicDependency("target not isolated: " + sys.var_name(s.var));
      }
    }
    if (a.is_zero()) throw CyclicDependency("target absent from its equation: " + sys.var_name(s.var));
    s.expr = rest.scaled(-a.inv());
    std::map<int, Poly> one{{s.var, s.expr}};
    for (auto& t : table)
      if (mentions(t.expr, s.var)) t.expr = t.expr.substitute(one);
    sub.clear();
    gone[static_cast<std::size_t>(s.var)] = 1;
    table.push_back(std::move(s));
    for (const auto& t : table) sub[t.var] = t.expr;
  }

  auto w = [&sys](int id) { return sys.weight[static_cast<std::size_t>(id)]; };
  for (auto& t : table) {
    t.weight = t.expr.weighted_degree(w);
    if (!t.expr.is_zero() && t.weight > t.i) red.degree_ok = false;
    red.eliminated.push_back(t.var);
  }
  red.reduced = sys;
  red.reduced.eqs.clear();
  for (const auto& q : sys.eqs) {
    bool used = false;
    for (const auto& t : table) used = used || (t.tau == q.tau && t.delta == q.delta && t.i == q.i);
    if (used) continue;
    ChartEquation c = q;
    if (mentions_any(c.poly, gone)) c.poly = c.poly.substitute(sub);
    red.reduced.eqs.push_back(std::move(c));
  }
  for (int id = 0; id < sys.nvars(); ++id) {
    if (gone[static_cast<std::size_t>(id)]) red.reduced.dead[static_cast<std::size_t>(id)] = 1;
    else if (!sys.dead[static_cast<std::size_t>(id)]) red.survivors.push_back(id);
  }
  return red;
}

int remaining_variable_count(const Reduction& r) { return static_cast<int>(r.survivors.size()); }

int remaining_variable_count(const Coweight& mu, int e, int p) {
  ContextParams prm;
  prm.p = p;
  prm.e = e;
  prm.f = 1;
  prm.d = 3;
  ArithContext ctx(prm);
  auto sys = build_equations({mu}, ctx);
  return remaining_variable_count(apply_substitutions(sys, default_plan({mu}, e, p)));
}

int closed_form_variable_count(const Coweight& mu, int e, int p) {
  const std::int64_t a = root_pairing(Root::Alpha, mu);
  const std::int64_t b = root_pairing(Root::Beta, mu);
  const std::int64_t g = root_pairing(Root::Gamma, mu);
  if (g <= e) return static_cast<int>(a + b + g);
  const std::int64_t t = floor_div(g - e, p - 1);
  if (a <= e && b <= e) return static_cast<int>(a + b + e + t);
  const std::int64_t big = std::max(a, b), small = std::min(a, b);
  return static_cast<int>(e + floor_div(big - e, p - 1) + floor_div(big - e, p) + small + e + t);
}

// ------------------------------------------------------------ gradings

GradedPolySystem leading_terms(const GradedPolySystem& sys, const WeightTable& w) {
  if (w.size() != sys.vars.size()) throw PreconditionFailed("weight table must cover every variable");
  GradedPolySystem r = sys;
  r.weight = w;
  auto wf = [&w](int id) { return w[static_cast<std::size_t>(id)]; };
  for (auto& q : r.eqs) q.poly = q.poly.leading_form(wf);
  return r;
}

WeightTable claim_grading(const Reduction& r) {
  const auto& sys = r.reduced;
  WeightTable w = sys.weight;
  for (int id = 0; id < sys.nvars(); ++id)
    if (sys.vars[static_cast<std::size_t>(id)].kind == VarKind::YG) w[static_cast<std::size_t>(id)] = 0;
  return w;
}

WeightTable abcd_grading(const GradedPolySystem& sys) {
  WeightTable w(sys.vars.size(), 0);
  const std::int64_t p = sys.p;
  for (int id = 0; id < sys.nvars(); ++id) {
    const auto& v = sys.vars[static_cast<std::size_t>(id)];
    const Coweight& mu = sys.mu[static_cast<std::size_t>(v.tau)];
    const std::int64_t a = root_pairing(Root::Alpha, mu), b = root_pairing(Root::Beta, mu);
    // the larger of alpha, beta plays the x role
    const VarKind xk = a >= b ? VarKind::X : VarKind::Y;
    const VarKind yk = a >= b ? VarKind::Y : VarKind::X;
    const std::int64_t mx = std::max(a, b);
    const std::int64_t res = ((v.i % p) + p) % p;
    if (v.kind == xk && (res == p - 1 || res == p - 2) && v.i > mx - sys.e) w[static_cast<std::size_t>(id)] = 1;
    if (v.kind == yk && (res == 1 || res == 2)) w[static_cast<std::size_t>(id)] = 1;
  }
  return w;
}

// ------------------------------------------------------------ counting

namespace {

std::uint64_t checked_pow(std::uint64_t q, int n) {
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (r > UINT64_MAX / q) throw OutOfRange("point count exceeds 64 bits");
    r *= q;
  }
  return r;
}

int var_priority(const GradedVariable& v) {
  switch (v.kind) {
    case VarKind::X: return 0;
    case VarKind::Y: return 1;
    case VarKind::Z: return 2;
    default: return 3;
  }
}

struct Term {
  std::uint32_t coef;
  std::vector<std::pair<int, int>> emono;  // (enumerated slot, exponent)
  int col;                                 // -1 for the constant part
};

struct Compiled {
  const GF* F;
  std::vector<int> evars;  // enumerated variable ids
  int ncols = 0;
  std::vector<std::vector<Term>> rows;
};

Compiled compile(const GradedPolySystem& sys) {
  const int n = sys.nvars();
  std::vector<char> inE(static_cast<std::size_t>(n), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& q : sys.eqs)
      for (const auto& [m, c] : q.poly.terms()) {
        int deg = 0, pick = -1;
        for (const auto& [v, ex] : m) {
          if (inE[static_cast<std::size_t>(v)]) continue;
          deg += ex;
          if (pick < 0 || var_priority(sys.vars[static_cast<std::size_t>(v)]) <
                              var_priority(sys.vars[static_cast<std::size_t>(pick)]))
            pick = v;
        }
        if (deg >= 2) {
          inE[static_cast<std::size_t>(pick)] = 1;
          changed = true;
        }
      }
  }
  Compiled cp;
  cp.F = sys.F;
  std::vector<int> slot(static_cast<std::size_t>(n), -1), col(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    if (!sys.dead.empty() && sys.dead[static_cast<std::size_t>(v)]) continue;
    if (inE[static_cast<std::size_t>(v)]) {
      slot[static_cast<std::size_t>(v)] = static_cast<int>(cp.evars.size());
      cp.evars.push_back(v);
    } else {
      col[static_cast<std::size_t>(v)] = cp.ncols++;
    }
  }
  for (const auto& q : sys.eqs) {
    if (q.poly.is_zero()) continue;
    std::vector<Term> row;
    for (const auto& [m, c] : q.poly.terms()) {
      Term t{c.v, {}, -1};
      for (const auto& [v, ex] : m) {
        if (slot[static_cast<std::size_t>(v)] >= 0) {
          t.emono.emplace_back(slot[static_cast<std::size_t>(v)], ex);
        } else {
          if (col[static_cast<std::size_t>(v)] < 0) throw PreconditionFailed("equation mentions an eliminated variable");
          t.col = col[static_cast<std::size_t>(v)];
        }
      }
      row.push_back(std::move(t));
    }
    cp.rows.push_back(std::move(row));
  }
  return cp;
}

// Nullity of the linear system at one assignment, -1 when inconsistent.
int nullity_at(const Compiled& cp, const std::vector<std::uint32_t>& val, FRows& scratch) {
  const GF& F = *cp.F;
  scratch.assign(cp.rows.size(), FVec(static_cast<std::size_t>(cp.ncols) + 1, 0));
  for (std::size_t r = 0; r < cp.rows.size(); ++r) {
    auto& row = scratch[r];
    for (const Term& t : cp.rows[r]) {
      std::uint32_t x = t.coef;
      for (const auto& [s, ex] : t.emono)
        for (int k = 0; k < ex && x; ++k) x = F.mul(x, val[static_cast<std::size_t>(s)]);
      if (!x) continue;
      if (t.col >= 0) row[static_cast<std::size_t>(t.col)] = F.add(row[static_cast<std::size_t>(t.col)], x);
      else row.back() = F.sub(row.back(), x);
    }
  }
  return affine_nullity(F, scratch, cp.ncols);
}

void decode(std::uint64_t a, std::uint64_t q, std::vector<std::uint32_t>& val) {
  for (auto& x : val) {
    x = static_cast<std::uint32_t>(a % q);
    a /= q;
  }
}

CountResult count_impl(const GradedPolySystem& sys, const CountOptions& opt, bool parallel) {
  Compiled cp = compile(sys);
  const std::uint64_t q = sys.F->q();
  const int ne = static_cast<int>(cp.evars.size());
  CountResult res;
  res.enumerated_vars = ne;
  res.linear_vars = cp.ncols;
  const double space = std::pow(static_cast<double>(q), ne);
  if (space > opt.budget) {
    if (!opt.allow_sampling) throw BudgetExceeded("fiber enumeration exceeds budget");
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(q - 1));
    std::vector<std::uint32_t> val(static_cast<std::size_t>(ne));
    FRows scratch;
    double sum = 0, sum2 = 0;
    for (std::uint64_t k = 0; k < opt.samples; ++k) {
      for (auto& x : val) x = pick(rng);
      int nl = nullity_at(cp, val, scratch);
      double v = nl < 0 ? 0.0 : space * std::pow(static_cast<double>(q), nl);
      sum += v;
      sum2 += v * v;
    }
    const double n = static_cast<double>(opt.samples);
    const double mean = sum / n;
    const double var = std::max(0.0, sum2 / n - mean * mean);
    res.exact = false;
    res.estimate = mean;
    res.radius = 1.96 * std::sqrt(var / n);
    res.seed = opt.seed;
    res.assignments = opt.samples;
    return res;
  }
  const auto total = static_cast<std::uint64_t>(checked_pow(q, ne));
  std::uint64_t count = 0, visited = 0;
  long double guard = 0;
  const auto sidx = static_cast<std::uint64_t>(opt.shard.index), scnt = static_cast<std::uint64_t>(opt.shard.count);
  const auto body = [&](std::uint64_t a, std::vector<std::uint32_t>& val, FRows& scratch, std::uint64_t& c,
                        long double& g) {
    decode(a, q, val);
    int nl = nullity_at(cp, val, scratch);
    if (nl < 0) return;
    c += checked_pow(q, nl);
    g += std::pow(static_cast<long double>(q), nl);
  };
  if (parallel) {
#pragma omp parallel reduction(+ : count, visited, guard)
    {
      std::vector<std::uint32_t> val(static_cast<std::size_t>(ne));
      FRows scratch;
#pragma omp for schedule(dynamic, 64)
      for (std::int64_t a = 0; a < static_cast<std::int64_t>(total); ++a) {
        if (static_cast<std::uint64_t>(a) % scnt != sidx) continue;
        ++visited;
        body(static_cast<std::uint64_t>(a), val, scratch, count, guard);
      }
    }
  } else {
    std::vector<std::uint32_t> val(static_cast<std::size_t>(ne));
    FRows scratch;
    for (std::uint64_t a = sidx; a < total; a += scnt) {
      ++visited;
      body(a, val, scratch, count, guard);
    }
  }
  if (guard > 1.8e19L) throw OutOfRange("point count exceeds 64 bits");
  res.count = count;
  res.estimate = static_cast<double>(count);
  res.assignments = visited;
  return res;
}

}  // namespace

std::vector<int> enumeration_set(const GradedPolySystem& sys) { return compile(sys).evars; }

CountResult count_points(const GradedPolySystem& sys, const CountOptions& opt) {
  return count_impl(sys, opt, opt.parallel);
}
CountResult count_points_serial(const GradedPolySystem& sys, const CountOptions& opt) {
  return count_impl(sys, opt, false);
}

CountResult fiber_count(const std::vector<Coweight>& mu, const ArithContext& ctx,
                        const std::vector<SeriesMatrix>& h, const CountOptions& opt) {
  return count_points(build_equations(mu, ctx, h), opt);
}
CountResult fiber_count_serial(const std::vector<Coweight>& mu, const ArithContext& ctx,
                               const std::vector<SeriesMatrix>& h, const CountOptions& opt) {
  return count_points_serial(build_equations(mu, ctx, h), opt);
}

int estimated_dimension(double n1, double q1, double n2, double q2) {
  if (n1 <= 0 || n2 <= 0) throw PreconditionFailed("empty point set");
  return static_cast<int>(std::lround(std::log(n2 / n1) / std::log(q2 / q1)));
}

// ------------------------------------------------------------ abcd

AbcdPack abcd_pack(const Coweight& mu, int e, int p) {
  const std::int64_t a = root_pairing(Root::Alpha, mu), b = root_pairing(Root::Beta, mu);
  const std::int64_t g = root_pairing(Root::Gamma, mu);
  AbcdPack pk;
  pk.swapped = b > a;
  const std::int64_t big = std::max(a, b), small = std::min(a, b);
  pk.r = static_cast<int>(floor_div(small - 3, p));
  pk.s = static_cast<int>(floor_div(big, p) - 1);
  pk.t = g > e ? static_cast<int>(floor_div(g - e, p - 1)) : 0;
  pk.offset = big > e ? static_cast<int>(ceil_div(big - e - p + 3, p)) : 0;
  return pk;
}

namespace {

AbcdResult abcd_impl(int r, int s, int t, int offset, int q, const CountOptions& opt, bool parallel) {
  if (r < 0 || s < 0) throw PreconditionFailed("r, s must be >= 0");
  const GF& F = GF::of_order(q);
  const int na = r + 1;
  const int lo = std::max(0, offset);
  const int nb = std::max(0, s - lo + 1);
  AbcdResult res;
  res.ambient = 2 * na + 2 * nb;
  const std::uint64_t Q = static_cast<std::uint64_t>(q);
  if (opt.shard.count < 1 || opt.shard.index < 0 || opt.shard.index >= opt.shard.count)
    throw PreconditionFailed("bad shard descriptor");
  if (t <= 0) {
    res.count = opt.shard.index == 0 ? checked_pow(Q, res.ambient) : 0;
    res.witnessed_dim = res.ambient;
    return res;
  }
  // Enumerate the side with fewer points; the other side is solved linearly.
  const bool enum_ac = na <= nb;
  const int ne = enum_ac ? na : nb;  // coefficients per enumerated polynomial
  const int nu = enum_ac ? nb : na;  // unknown coefficients per polynomial
  const int e_lo = enum_ac ? 0 : lo, u_lo = enum_ac ? lo : 0;
  if (std::pow(static_cast<double>(q), 2 * ne) > opt.budget) throw BudgetExceeded("abcd enumeration exceeds budget");
  const std::uint64_t total = checked_pow(Q, 2 * ne);
  // shard s owns the assignments a = s + k * count
  const std::uint64_t s0 = static_cast<std::uint64_t>(opt.shard.index);
  const std::uint64_t step = static_cast<std::uint64_t>(opt.shard.count);
  const std::uint64_t mine = total > s0 ? (total - s0 + step - 1) / step : 0;
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(2 * nu) + 1, 0);
  auto kernel_at = [&](std::uint64_t a, std::vector<std::uint32_t>& v, FRows& rows) {
    decode(a, Q, v);  // v[0..ne) first polynomial, v[ne..2ne) second
    rows.assign(static_cast<std::size_t>(t), FVec(static_cast<std::size_t>(2 * nu), 0));
    for (int n = 0; n < t; ++n)
      for (int j = 0; j < nu; ++j) {
        int k = n - (u_lo + j) - e_lo;
        if (k < 0 || k >= ne) continue;
        // AB - CD: unknowns (B, D) when enumerating (A, C), else (A, C).
        rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(k)];
        rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(nu + j)] =
            F.neg(v[static_cast<std::size_t>(ne + k)]);
      }
    return 2 * nu - rank_of(F, rows);
  };
  if (parallel) {
#pragma omp parallel
    {
      std::vector<std::uint64_t> h(hist.size(), 0);
      std::vector<std::uint32_t> v(static_cast<std::size_t>(2 * ne));
      FRows rows;
#pragma omp for schedule(dynamic, 256)
      for (std::int64_t k = 0; k < static_cast<std::int64_t>(mine); ++k)
        ++h[static_cast<std::size_t>(kernel_at(s0 + static_cast<std::uint64_t>(k) * step, v, rows))];
#pragma omp critical
      for (std::size_t k = 0; k < h.size(); ++k) hist[k] += h[k];
    }
  } else {
    std::vector<std::uint32_t> v(static_cast<std::size_t>(2 * ne));
    FRows rows;
    for (std::uint64_t a = s0; a < total; a += step) ++hist[static_cast<std::size_t>(kernel_at(a, v, rows))];
  }
  for (std::size_t k = 0; k < hist.size(); ++k) {
    if (!hist[k]) continue;
    res.count += hist[k] * checked_pow(Q, static_cast<int>(k));
    int d = static_cast<int>(std::lround(std::log(static_cast<double>(hist[k])) / std::log(static_cast<double>(q))));
    res.witnessed_dim = std::max(res.witnessed_dim, d + static_cast<int>(k));
  }
  return res;
}

}  // namespace

AbcdResult abcd_count(int r, int s, int t, int offset, int q, const CountOptions& opt) {
  return abcd_impl(r, s, t, offset, q, opt, opt.parallel);
}
AbcdResult abcd_count_serial(int r, int s, int t, int offset, int q, const CountOptions& opt) {
  return abcd_impl(r, s, t, offset, q, opt, false);
}

// ------------------------------------------------------------ bounds

BoundResult bound_formula(const std::vector<Coweight>& mu, int e) {
  BoundResult b;
  for (const auto& m : mu) {
    StratumEntry s = stratum_of(m, e);
    b.bound += 3 * e - s.n - s.m;
    b.strict = b.strict || !s.balanced;
  }
  return b;
}

bool verify_claim_inequalities(int p, int e_max, std::vector<ClaimFailure>* failures) {
  if (p < 5) throw PreconditionFailed("claim needs p >= 5");
  bool ok = true;
  for (int e = p; e <= e_max; ++e)
    for (int x = 1; x < e; ++x)
      for (int y = 3; y < e; ++y) {
        const std::int64_t E = x - floor_div(x, p) - floor_div(x, p - 1) - floor_div(x + y, p - 1);
        const std::int64_t c3 = ceil_div(x + 3 - p, p);
        const std::int64_t A = 2 * floor_div(y - 3, p) + 2;
        const std::int64_t B = 2 * floor_div(x + e, p) - 2 * c3 + 2;
        const std::int64_t C = floor_div(x + y, p - 1) - c3;
        const std::pair<char, std::int64_t> vals[] = {{'A', E + A}, {'B', E + B}, {'C', E + C}};
        for (const auto& [w, v] : vals)
          if (v <= 0) {
            ok = false;
            if (failures) failures->push_back({p, e, x, y, w, v});
          }
      }
  return ok;
}

}  // namespace bkgr
