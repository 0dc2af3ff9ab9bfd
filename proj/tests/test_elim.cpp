#include <cmath>
#include <random>
#include <set>

#include "bkgr/elim.hpp"
#include "bkgr/errors.hpp"
#include "doctest.h"

using namespace bkgr;

namespace {

ArithContext make_ctx(int p, int e, int k = 1, int f = 1, std::vector<std::vector<std::int64_t>> c = {}) {
  ContextParams prm;
  prm.p = p;
  prm.k = k;
  prm.e = e;
  prm.f = f;
  prm.c = std::move(c);
  return ArithContext(prm);
}

Coweight cw(std::int64_t a, std::int64_t b, std::int64_t c) { return Coweight({a, b, c}); }

SeriesMatrix rand_gl(const ArithContext& ctx, std::mt19937_64& rng, int deg) {
  while (true) {
    SeriesMatrix m(3);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        std::vector<Fe> c;
        for (int k = 0; k <= deg; ++k) c.push_back(fe_from_word(ctx.field(), rng()));
        m(a, b) = Series::from_coeffs(0, c);
      }
    Series dt = m.det();
    if (!dt.is_zero() && dt.val() == 0) return m;
  }
}

// Plain evaluation of every equation at every point of the active variables.
struct Brute {
  std::vector<int> active;
  std::vector<std::vector<std::uint32_t>> points;
};

Brute brute_points(const GradedPolySystem& sys, bool keep = true) {
  Brute b;
  for (int v = 0; v < sys.nvars(); ++v)
    if (!sys.dead[static_cast<std::size_t>(v)]) b.active.push_back(v);
  const GF& F = *sys.F;
  const std::uint64_t q = F.q();
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < b.active.size(); ++k) total *= q;
  // flatten polynomials
  struct T {
    std::uint32_t c;
    std::vector<std::pair<int, int>> m;
  };
  std::vector<std::vector<T>> eqs;
  for (const auto& e : sys.eqs) {
    std::vector<T> ts;
    for (const auto& [m, c] : e.poly.terms()) ts.push_back({c.v, m});
    eqs.push_back(ts);
  }
  std::vector<std::uint32_t> val(static_cast<std::size_t>(sys.nvars()), 0);
  std::uint64_t hits = 0;
  for (std::uint64_t a = 0; a < total; ++a) {
    std::uint64_t r = a;
    for (int v : b.active) {
      val[static_cast<std::size_t>(v)] = static_cast<std::uint32_t>(r % q);
      r /= q;
    }
    bool ok = true;
    for (const auto& ts : eqs) {
      std::uint32_t acc = 0;
      for (const auto& t : ts) {
        std::uint32_t x = t.c;
        for (const auto& [v, ex] : t.m)
          for (int k = 0; k < ex; ++k) x = F.mul(x, val[static_cast<std::size_t>(v)]);
        acc = F.add(acc, x);
      }
      if (acc) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    ++hits;
    if (keep) b.points.push_back(val);
  }
  if (!keep) b.points.resize(hits);
  return b;
}

std::uint64_t ipow(std::uint64_t q, int n) {
  std::uint64_t r = 1;
  while (n-- > 0) r *= q;
  return r;
}

std::vector<Coweight> admissible(int e) {
  std::vector<Coweight> out;
  const Coweight top({2 * e, e, 0});
  for (int a = 0; a <= 2 * e; ++a)
    for (int b = 0; b <= a; ++b) {
      int c = 3 * e - a - b;
      if (c < 0 || c > b) continue;
      Coweight m({a, b, c});
      if (dominance_leq(m, top)) out.push_back(m);
    }
  return out;
}

}  // namespace

TEST_CASE("chart equations for (2,1,0) at e = 1") {
  auto ctx = make_ctx(5, 1);
  auto sys = build_equations({cw(2, 1, 0)}, ctx);
  CHECK(sys.eqs.size() == 4);
  CHECK(sys.nvars() == 7);
  // (gamma, 1): no left side, z_1 - x_0 y_1 with y_1 out of range
  const ChartEquation* g1 = sys.equation(0, Root::Gamma, 1);
  REQUIRE(g1);
  CHECK(g1->lhs == -1);
  CHECK(g1->poly == -Poly::var(ctx.field(), sys.find(VarKind::Z, 0, 1)));
  // bracket terms vanish below u^p: every equation is Y - (theta(B)B^{-1}) entry
  const ChartEquation* a1 = sys.equation(0, Root::Alpha, 1);
  CHECK(a1->poly == Poly::var(ctx.field(), sys.find(VarKind::YA, 0, 1)));
  CHECK(fiber_count({cw(2, 1, 0)}, ctx).count == 125);
}

TEST_CASE("gamma equation carries minus x_k y_l") {
  // e = 3, mu = (5,3,1): alpha = beta = 2, gamma = 4
  auto ctx = make_ctx(5, 3);
  auto sys = build_equations({cw(5, 3, 1)}, ctx);
  const GF& F = ctx.field();
  auto v = [&](VarKind k, int i) { return Poly::var(F, sys.find(k, 0, i)); };
  const ChartEquation* g1 = sys.equation(0, Root::Gamma, 1);
  REQUIRE(g1);
  // left side index 1 - (4 - 3) = 0 is out of range
  CHECK(g1->poly == -(v(VarKind::Z, 1) - v(VarKind::X, 0) * v(VarKind::Y, 1)));
  const ChartEquation* g2 = sys.equation(0, Root::Gamma, 2);
  // x_0 y_2 drops out: y_2 is out of range
  Poly rhs = v(VarKind::Z, 2).scaled(2) - v(VarKind::X, 1) * v(VarKind::Y, 1);
  CHECK(g2->poly == v(VarKind::YG, 1) - rhs);
}

TEST_CASE("unbalanced (1,1,1) at e = 1 has a single point") {
  // Every chart degree bound is 0, so there are no B-coordinates; the three
  // equations force Y = 0.
  for (int k : {1, 2}) {
    auto ctx = make_ctx(5, 1, k);
    auto sys = build_equations({cw(1, 1, 1)}, ctx);
    CHECK(sys.nvars() == 3);
    CHECK(sys.eqs.size() == 3);
    CHECK(fiber_count({cw(1, 1, 1)}, ctx).count == 1);
  }
}

TEST_CASE("fiber counts agree with brute force") {
  std::mt19937_64 rng(11);
  SUBCASE("e = 1, p = 5") {
    auto ctx = make_ctx(5, 1);
    for (const auto& m : admissible(1)) {
      std::vector<SeriesMatrix> h{rand_gl(ctx, rng, 1)};
      auto sys = build_equations({m}, ctx, h);
      auto bf = brute_points(sys, false);
      auto par = count_points(sys);
      auto ser = count_points_serial(sys);
      CHECK(par.count == bf.points.size());
      CHECK(ser.count == par.count);
    }
  }
  SUBCASE("p = 3, e = 2: bracket terms present") {
    auto ctx = make_ctx(3, 2);
    for (const auto& m : {cw(4, 2, 0), cw(3, 2, 1), cw(3, 3, 0)}) {
      std::vector<SeriesMatrix> h{rand_gl(ctx, rng, 2)};
      auto sys = build_equations({m}, ctx, h);
      // nonlinear in Y would break the solver; the bracket makes B.Y terms
      auto E = enumeration_set(sys);
      for (int id : E) CHECK(sys.vars[static_cast<std::size_t>(id)].is_B());
      auto bf = brute_points(sys, false);
      CHECK(count_points(sys).count == bf.points.size());
    }
  }
  SUBCASE("two embeddings") {
    auto ctx = make_ctx(5, 1, 1, 2);
    auto sys = build_equations({cw(2, 1, 0), cw(1, 1, 1)}, ctx);
    CHECK(count_points(sys).count == brute_points(sys, false).points.size());
    CHECK(count_points(sys).count == 125);
  }
}

TEST_CASE("fiber count shards, budget and sampling") {
  auto ctx = make_ctx(3, 2);
  auto sys = build_equations({cw(4, 2, 0)}, ctx);
  auto full = count_points(sys);
  REQUIRE(full.enumerated_vars > 0);
  std::uint64_t sum = 0;
  for (int s = 0; s < 3; ++s) {
    CountOptions o;
    o.shard = {s, 3};
    sum += count_points(sys, o).count;
  }
  CHECK(sum == full.count);
  CountOptions tight;
  tight.budget = 1;
  CHECK_THROWS_AS(count_points(sys, tight), BudgetExceeded);
  tight.allow_sampling = true;
  tight.samples = 4000;
  auto est = count_points(sys, tight);
  CHECK_FALSE(est.exact);
  CHECK(est.seed == tight.seed);
  CHECK(std::abs(est.estimate - static_cast<double>(full.count)) <= 3 * est.radius + 1e-9);
  auto again = count_points(sys, tight);
  CHECK(again.estimate == est.estimate);
}

TEST_CASE("fiber counts over two field sizes") {
  for (int k : {1, 2}) {
    auto ctx = make_ctx(5, 1, k);
    const std::uint64_t q = ctx.field().q();
    CHECK(fiber_count({cw(2, 1, 0)}, ctx).count == q * q * q);
  }
  double n[2][2];
  for (int k : {1, 2}) {
    auto ctx = make_ctx(5, 2, k);
    n[0][k - 1] = static_cast<double>(fiber_count({cw(4, 2, 0)}, ctx).count);
    n[1][k - 1] = static_cast<double>(fiber_count({cw(4, 1, 1)}, ctx).count);
  }
  CHECK(estimated_dimension(n[0][0], 5, n[0][1], 25) == 6);
  const int ub = estimated_dimension(n[1][0], 5, n[1][1], 25);
  CHECK(ub < bound_formula({cw(4, 1, 1)}, 2).bound);
}

TEST_CASE("default plan sets") {
  // mu_delta <= e: full Type I range
  auto pl = default_plan({cw(2, 1, 0)}, 1, 5);
  CHECK(pl.sets[0][0].type1 == std::set<int>{1});
  CHECK(pl.sets[0][0].type2.empty());
  CHECK(pl.sets[0][2].type1.empty());
  CHECK(pl.sets[0][2].type2 == std::set<int>{1, 2});
  // gamma > e: p-multiples above p(mu - e)/(p - 1)
  auto top = default_plan({cw(10, 5, 0)}, 5, 5);
  CHECK(top.sets[0][2].type1 == std::set<int>{10});
  CHECK(top.sets[0][2].type2.size() == 8);
  CHECK(top.threshold[0] == 1);
  // alpha > e: Type II stops at mu_alpha - e
  auto c3 = default_plan({cw(9, 3, 3)}, 5, 5);
  CHECK(c3.sets[0][0].type1 == std::set<int>{5});
  CHECK(c3.sets[0][0].type2 == std::set<int>{1});
  CHECK(c3.offset[0] == ceil_div(6 - 5 - 5 + 3, 5));
  for (int e = 1; e <= 6; ++e)
    for (const auto& m : admissible(e))
      for (int p : {5, 7}) CHECK_NOTHROW(default_plan({m}, e, p).validate({m}, e, p));
}

TEST_CASE("plan validation rejects bad sets") {
  auto pl = default_plan({cw(2, 1, 0)}, 1, 5);
  pl.sets[0][2].type1.insert(1);
  CHECK_THROWS_AS(pl.validate({cw(2, 1, 0)}, 1, 5), PreconditionFailed);
  auto p2 = default_plan({cw(10, 5, 0)}, 5, 5);
  p2.sets[0][2].type2.insert(5);
  CHECK_THROWS_AS(p2.validate({cw(10, 5, 0)}, 5, 5), PreconditionFailed);
}

TEST_CASE("substitutions for (2,1,0) at e = 1") {
  auto ctx = make_ctx(5, 1);
  auto sys = build_equations({cw(2, 1, 0)}, ctx);
  auto red = apply_substitutions(sys, default_plan({cw(2, 1, 0)}, 1, 5));
  std::set<std::string> gone;
  for (int v : red.eliminated) gone.insert(sys.var_name(v));
  CHECK(gone == std::set<std::string>{"Ya0_1", "Yb0_1", "Yg0_1", "z0_1"});
  CHECK(remaining_variable_count(red) == 3);
  CHECK(red.degree_ok);
  CHECK(count_points(red.reduced).count == 125);
  // the empty plan changes nothing
  auto same = apply_substitutions(sys, empty_plan(1));
  REQUIRE(same.reduced.eqs.size() == sys.eqs.size());
  for (std::size_t k = 0; k < sys.eqs.size(); ++k) CHECK(same.reduced.eqs[k].poly == sys.eqs[k].poly);
  CHECK(same.table.empty());
}

TEST_CASE("balanced alpha: Y identified with x_1") {
  for (int e : {2, 3, 4}) {
    for (const auto& m : admissible(e)) {
      if (!is_balanced(m, e) || root_pairing(Root::Alpha, m) < 2) continue;
      auto ctx = make_ctx(5, e);
      auto sys = build_equations({m}, ctx);
      auto red = apply_substitutions(sys, default_plan({m}, e, 5));
      const int target = sys.find(VarKind::YA, 0, e + 1 - static_cast<int>(root_pairing(Root::Alpha, m)));
      auto mp = red.as_map();
      REQUIRE(mp.count(target));
      CHECK(mp[target] == Poly::var(ctx.field(), sys.find(VarKind::X, 0, 1)));
    }
  }
}

TEST_CASE("substitution soundness against the full solution set") {
  std::mt19937_64 rng(5);
  auto run = [&](const ArithContext& ctx, const Coweight& m, std::vector<SeriesMatrix> h) {
    auto sys = build_equations({m}, ctx, h);
    auto red = apply_substitutions(sys, default_plan({m}, ctx.e, ctx.p));
    CHECK(red.degree_ok);
    auto bf = brute_points(sys);
    CHECK(count_points(red.reduced).count == bf.points.size());
    const GF& F = ctx.field();
    for (int trial = 0; trial < 100 && !bf.points.empty(); ++trial) {
      const auto& pt = bf.points[rng() % bf.points.size()];
      for (const auto& s : red.table) {
        Fe got = s.expr.evaluate([&](int v) { return Fe(F, pt[static_cast<std::size_t>(v)]); });
        CHECK(got.v == pt[static_cast<std::size_t>(s.var)]);
      }
    }
  };
  auto c5 = make_ctx(5, 1);
  for (const auto& m : admissible(1)) run(c5, m, {rand_gl(c5, rng, 1)});
  auto c3 = make_ctx(3, 2);
  for (const auto& m : {cw(4, 2, 0), cw(3, 2, 1)}) run(c3, m, {rand_gl(c3, rng, 2)});
}

TEST_CASE("degree control on default plans") {
  std::mt19937_64 rng(9);
  for (int p : {5, 7})
    for (int e = 1; e <= 7; ++e)
      for (const auto& m : admissible(e)) {
        auto ctx = make_ctx(p, e);
        auto sys = build_equations({m}, ctx, {rand_gl(ctx, rng, 1)});
        auto red = apply_substitutions(sys, default_plan({m}, e, p));
        CHECK(red.degree_ok);
        for (const auto& s : red.table) CHECK((s.expr.is_zero() || s.weight <= s.i));
      }
}

TEST_CASE("variable count after the default plan") {
  // Cases 1 and 2 match the closed form. In case 3 the equations with
  // delta = alpha, i > mu_alpha - e, p prime to i stay as equations, and the
  // count exceeds the closed form by e - floor(mu_alpha / p).
  std::mt19937_64 rng(21);
  int seen[3] = {0, 0, 0};
  for (int trial = 0; trial < 50; ++trial) {
    const int p = (rng() % 2) ? 5 : 7;
    const int e = 1 + static_cast<int>(rng() % 9);
    auto ms = admissible(e);
    const Coweight m = ms[rng() % ms.size()];
    const std::int64_t a = root_pairing(Root::Alpha, m), b = root_pairing(Root::Beta, m);
    const std::int64_t g = root_pairing(Root::Gamma, m);
    const int got = remaining_variable_count(m, e, p);
    const int closed = closed_form_variable_count(m, e, p);
    if (g <= e) {
      ++seen[0];
      CHECK(got == a + b + g);
      CHECK(got == closed);
    } else if (a <= e && b <= e) {
      ++seen[1];
      CHECK(got == closed);
    } else {
      ++seen[2];
      CHECK(got - closed == e - floor_div(std::max(a, b), p));
    }
  }
  CHECK(seen[0] + seen[1] + seen[2] == 50);
}

TEST_CASE("leading forms") {
  const GF& F = GF::get(5, 1);
  GradedPolySystem s;
  s.F = &F;
  s.vars = {{VarKind::X, 0, 0}, {VarKind::Y, 0, 0}};
  s.dead = {0, 0};
  s.weight = {0, 0};
  ChartEquation q;
  q.poly = Poly::var(F, 0) * Poly::var(F, 0) + Poly::var(F, 1);
  s.eqs.push_back(q);
  auto l = leading_terms(s, {1, 3});
  CHECK(l.eqs[0].poly == Poly::var(F, 1));
  CHECK(leading_terms(l, {1, 3}).eqs[0].poly == l.eqs[0].poly);
  // homogeneous input under equal weights
  s.eqs[0].poly = Poly::var(F, 0) * Poly::var(F, 1) + Poly::var(F, 1) * Poly::var(F, 1);
  CHECK(leading_terms(s, {2, 2}).eqs[0].poly == s.eqs[0].poly);
  CHECK_THROWS_AS(leading_terms(s, {1}), PreconditionFailed);
}

TEST_CASE("quadric extraction on the top stratum") {
  // p = e = 5, mu = (10,5,0): t = 1, the (gamma, 5) equation is unused and its
  // leading form under the claim grading is sum_{k + l = 5, k > 0} l x_k y_l.
  std::mt19937_64 rng(3);
  auto ctx = make_ctx(5, 5);
  const GF& F = ctx.field();
  const Coweight m = cw(10, 5, 0);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<SeriesMatrix> h;
    if (trial) h.push_back(rand_gl(ctx, rng, 1));
    auto sys = build_equations({m}, ctx, h);
    auto red = apply_substitutions(sys, default_plan({m}, 5, 5));
    CHECK(red.degree_ok);
    const ChartEquation* q = red.reduced.equation(0, Root::Gamma, 5);
    REQUIRE(q);
    auto lead = leading_terms(red.reduced, claim_grading(red));
    const ChartEquation* lq = lead.equation(0, Root::Gamma, 5);
    Poly want = Poly::constant(ctx.zero());
    for (int k = 1; k <= 4; ++k)
      want += (Poly::var(F, sys.find(VarKind::X, 0, k)) * Poly::var(F, sys.find(VarKind::Y, 0, 5 - k))).scaled(5 - k);
    CHECK(lq->poly == want);
    // 0/1 weights keep x_4 y_1 + 2 x_3 y_2
    WeightTable w = abcd_grading(lead);
    Poly ab = lq->poly.leading_form([&](int v) { return w[static_cast<std::size_t>(v)]; });
    Poly want2 = Poly::var(F, sys.find(VarKind::X, 0, 4)) * Poly::var(F, sys.find(VarKind::Y, 0, 1)) +
                 (Poly::var(F, sys.find(VarKind::X, 0, 3)) * Poly::var(F, sys.find(VarKind::Y, 0, 2))).scaled(2);
    CHECK(ab == want2);
  }
}

TEST_CASE("leading-term systems are not smaller (count growth)") {
  // Heuristic: exponents from counts over F_5 and F_25.
  std::mt19937_64 rng(17);
  const GF& F5 = GF::get(5, 1);
  const GF& F25 = GF::get(5, 2);
  int compared = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int nv = 2 + static_cast<int>(rng() % 2);
    const int neq = 1 + static_cast<int>(rng() % 2);
    WeightTable w;
    for (int v = 0; v < nv; ++v) w.push_back(1 + static_cast<std::int64_t>(rng() % 3));
    std::vector<std::vector<std::pair<Monomial, std::int64_t>>> polys;
    for (int k = 0; k < neq; ++k) {
      std::vector<std::pair<Monomial, std::int64_t>> terms;
      const int nt = 2 + static_cast<int>(rng() % 3);
      for (int t = 0; t < nt; ++t) {
        Monomial m;
        for (int v = 0; v < nv; ++v) {
          int ex = static_cast<int>(rng() % 3) - 1;
          if (ex > 0) m.emplace_back(v, ex);
        }
        terms.emplace_back(m, 1 + static_cast<std::int64_t>(rng() % 4));
      }
      polys.push_back(terms);
    }
    auto make = [&](const GF& F) {
      GradedPolySystem s;
      s.F = &F;
      for (int v = 0; v < nv; ++v) s.vars.push_back({VarKind::X, 0, v});
      s.dead.assign(static_cast<std::size_t>(nv), 0);
      s.weight = w;
      for (const auto& terms : polys) {
        ChartEquation q;
        q.poly = Poly::constant(Fe(F, 0));
        for (const auto& [m, c] : terms) q.poly.add_term(m, Fe::from_int(F, c));
        s.eqs.push_back(q);
      }
      return s;
    };
    auto s5 = make(F5), s25 = make(F25);
    const double a1 = static_cast<double>(count_points(s5).count), a2 = static_cast<double>(count_points(s25).count);
    const double b1 = static_cast<double>(count_points(leading_terms(s5, w)).count);
    const double b2 = static_cast<double>(count_points(leading_terms(s25, w)).count);
    if (a1 == 0 || a2 == 0) continue;  // empty variety: nothing to compare
    ++compared;
    CHECK(estimated_dimension(b1, 5, b2, 25) >= estimated_dimension(a1, 5, a2, 25));
  }
  CHECK(compared > 0);
}

TEST_CASE("abcd counts") {
  CHECK(abcd_count(0, 0, 1, 0, 2).count == 10);
  CHECK(abcd_count(1, 2, 0, 0, 3).count == ipow(3, 10));
  for (auto [r, s, t] : {std::tuple{1, 2, 3}, std::tuple{2, 1, 0}, std::tuple{0, 3, 2}}) {
    const auto whole = abcd_count(r, s, t, 0, 3).count;
    for (int n : {3, 7}) {
      std::uint64_t sum = 0;
      for (int i = 0; i < n; ++i) {
        CountOptions o;
        o.shard = Shard{i, n};
        sum += (i % 2 ? abcd_count_serial(r, s, t, 0, 3, o) : abcd_count(r, s, t, 0, 3, o)).count;
      }
      CHECK(sum == whole);
    }
  }
  // exhaustive oracle over small shapes
  for (int q : {2, 3})
    for (int r = 0; r <= 1; ++r)
      for (int s = 0; s <= 1; ++s)
        for (int off = 0; off <= s; ++off)
          for (int t = 0; t <= r + s + 2; ++t) {
            const GF& F = GF::of_order(q);
            const int na = r + 1, nb = s - off + 1;
            const int n = 2 * na + 2 * nb;
            std::uint64_t total = ipow(static_cast<std::uint64_t>(q), n), hits = 0;
            std::vector<std::uint32_t> v(static_cast<std::size_t>(n));
            for (std::uint64_t a = 0; a < total; ++a) {
              std::uint64_t x = a;
              for (auto& c : v) {
                c = static_cast<std::uint32_t>(x % static_cast<std::uint64_t>(q));
                x /= static_cast<std::uint64_t>(q);
              }
              // A = v[0..na), C = v[na..2na), B = v[2na..2na+nb), D = rest
              bool ok = true;
              for (int d = 0; d < t && ok; ++d) {
                std::uint32_t acc = 0;
                for (int i = 0; i < na; ++i) {
                  const int j = d - i - off;
                  if (j < 0 || j >= nb) continue;
                  acc = F.add(acc, F.mul(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(2 * na + j)]));
                  acc = F.sub(acc, F.mul(v[static_cast<std::size_t>(na + i)],
                                         v[static_cast<std::size_t>(2 * na + nb + j)]));
                }
                ok = acc == 0;
              }
              hits += ok;
            }
            auto got = abcd_count(r, s, t, off, q);
            CHECK(got.count == hits);
            CHECK(abcd_count_serial(r, s, t, off, q).count == hits);
          }
}

TEST_CASE("abcd codimension bound with slack 4") {
  for (int q : {2, 3, 4, 5})
    for (int r = 0; r <= 4; ++r)
      for (int s = 0; r + s <= 4; ++s)
        for (int t = 0; t <= r + s + 1; ++t) {
          auto res = abcd_count(r, s, t, 0, q);
          const int codim = std::min({2 * r + 2, 2 * s + 2, t});
          CHECK(static_cast<double>(res.count) <= 4.0 * std::pow(q, res.ambient - codim));
        }
  CHECK(abcd_count(1, 1, 2, 0, 5).count <= 4 * ipow(5, 6));
}

TEST_CASE("abcd packing") {
  auto pk = abcd_pack(cw(10, 5, 0), 5, 5);
  CHECK(pk.r == 0);
  CHECK(pk.s == 0);
  CHECK(pk.t == 1);
  CHECK(pk.offset == 0);
  auto c3 = abcd_pack(cw(20, 6, 4), 10, 5);  // alpha 14 > e, beta 2
  CHECK(c3.r == floor_div(2 - 3, 5));
  CHECK(c3.s == 14 / 5 - 1);
  CHECK(c3.t == floor_div(16 - 10, 4));
  CHECK(c3.offset == ceil_div(14 - 10 - 5 + 3, 5));
  CHECK(abcd_pack(cw(13, 11, 6), 10, 5).swapped);
}

TEST_CASE("dimension bound and strictness") {
  for (int e = 1; e <= 5; ++e) {
    auto b = bound_formula({cw(2 * e, e, 0), cw(2 * e, e, 0)}, e);
    CHECK(b.bound == 6 * e);
    CHECK_FALSE(b.strict);
    for (const auto& m : admissible(e))
      if (root_pairing(Root::Alpha, m) > e) CHECK(bound_formula({m}, e).strict);
  }
}

TEST_CASE("claim inequalities") {
  for (int p : {5, 7, 11}) {
    std::vector<ClaimFailure> bad;
    CHECK(verify_claim_inequalities(p, 40, &bad));
    CHECK(bad.empty());
  }
  CHECK_THROWS_AS(verify_claim_inequalities(3, 10), PreconditionFailed);
}
