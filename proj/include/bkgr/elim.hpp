#pragma once
// Chart equations of the naive local model, Type I/II substitutions, graded
// leading forms, dimension bookkeeping and exact point counts.

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "bkgr/bk.hpp"
#include "bkgr/context.hpp"
#include "bkgr/grassmann.hpp"
#include "bkgr/poly.hpp"

namespace bkgr {

// Positive roots of GL_3 by their entry in a lower triangular matrix:
// alpha = (1,0), beta = (2,1), gamma = (2,0).
enum class Root { Alpha = 0, Beta = 1, Gamma = 2 };
const char* root_name(Root r);
// <delta, mu>: mu0-mu1, mu1-mu2, mu0-mu2.
std::int64_t root_pairing(Root r, const Coweight& mu);

enum class VarKind { X, Y, Z, YA, YB, YG };

struct GradedVariable {
  VarKind kind = VarKind::X;
  int tau = 0;
  int i = 0;
  std::string name() const;
  bool is_B() const { return kind == VarKind::X || kind == VarKind::Y || kind == VarKind::Z; }
  auto key() const { return std::tuple(static_cast<int>(kind), tau, i); }
};

struct ChartEquation {
  int tau = 0;
  Root delta = Root::Alpha;
  int i = 0;
  int lhs = -1;  // id of Y_{tau,delta,i-(mu_delta-e)}, -1 when out of range
  Poly poly;     // lhs - rhs
};

using WeightTable = std::vector<std::int64_t>;

struct GradedPolySystem {
  const GF* F = nullptr;
  std::vector<GradedVariable> vars;
  std::vector<ChartEquation> eqs;
  WeightTable weight;  // u-adic: variable of index i has weight i
  std::vector<char> dead;  // eliminated: not a coordinate any more
  std::vector<Coweight> mu;
  int e = 0, p = 0;

  int nvars() const { return static_cast<int>(vars.size()); }
  int find(VarKind k, int tau, int i) const;  // -1 when absent
  std::string var_name(int id) const { return vars.at(static_cast<std::size_t>(id)).name(); }
  std::string to_string(const Poly& f) const;
  const ChartEquation* equation(int tau, Root d, int i) const;
};

// One equation per (tau, delta, i), min{1, 1 + mu_delta - e} <= i <= mu_delta.
// h holds h_tau for every tau (empty means identity); the bracket uses
// h_{tau+1} and d_{tau+1}.
GradedPolySystem build_equations(const std::vector<Coweight>& mu, const ArithContext& ctx,
                                 const std::vector<SeriesMatrix>& h = {});

struct PlanSets {
  std::set<int> type1, type2;
};
struct SubstitutionPlan {
  // sets[tau][delta]
  std::vector<std::array<PlanSets, 3>> sets;
  std::vector<int> offset;     // d_tau, meaningful in case 3
  std::vector<int> threshold;  // t_tau
  // Throws PreconditionFailed on overlap or out-of-range indices.
  void validate(const std::vector<Coweight>& mu, int e, int p) const;
};

std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t ceil_div(std::int64_t a, std::int64_t b);

SubstitutionPlan default_plan(const std::vector<Coweight>& mu, int e, int p);
SubstitutionPlan empty_plan(int f);

struct Substitution {
  int var = -1;
  int tau = 0;
  Root delta = Root::Alpha;
  int i = 0;
  int type = 1;
  bool fallback = false;  // Type II whose B-variable is out of range; solved for Y
  Poly expr;              // in surviving variables
  std::int64_t weight = -1;
};

struct Reduction {
  GradedPolySystem reduced;  // unused equations, rewritten in survivors
  std::vector<Substitution> table;
  std::vector<int> eliminated;  // variable ids, in order
  std::vector<int> survivors;
  // Every expression has u-adic weight <= the index i of its equation.
  bool degree_ok = true;
  std::map<int, Poly> as_map() const;
};

// Throws CyclicDependency when a target is not isolated in its equation.
Reduction apply_substitutions(const GradedPolySystem& sys, const SubstitutionPlan& plan);

int remaining_variable_count(const Reduction& r);
// Builds the f = 1 system with h = 1, c = 1 and applies the default plan.
int remaining_variable_count(const Coweight& mu, int e, int p);
// The closed-form Case 1/2/3 count of variables over tau.
int closed_form_variable_count(const Coweight& mu, int e, int p);

GradedPolySystem leading_terms(const GradedPolySystem& sys, const WeightTable& w);
// Unsubstituted x, y, z weigh i; surviving Y_gamma weigh 0; other survivors
// keep the u-adic weight.
WeightTable claim_grading(const Reduction& r);
// 0/1 weights: x_i with i = -1, -2 mod p and i > mu_alpha - e, y_i with
// i = 1, 2 mod p; everything else 0 (roles swap when mu_beta > mu_alpha).
WeightTable abcd_grading(const GradedPolySystem& sys);

// ---------------------------------------------------------------- counting

struct CountOptions {
  double budget = 2e8;  // cap on enumerated assignments
  Shard shard;
  bool parallel = true;
  bool allow_sampling = false;
  std::uint64_t samples = 20000;
  std::uint64_t seed = 0x5eed0fb1cULL;
};

struct CountResult {
  bool exact = true;
  std::uint64_t count = 0;  // exact count when exact
  double estimate = 0;      // equals count when exact
  double radius = 0;        // 95% normal-approximation half-width when sampled
  std::uint64_t seed = 0;
  int enumerated_vars = 0;
  int linear_vars = 0;
  std::uint64_t assignments = 0;
};

// Number of F_q-points of the system. Variables chosen greedily for
// enumeration make every equation affine-linear in the rest.
CountResult count_points(const GradedPolySystem& sys, const CountOptions& opt = {});
CountResult count_points_serial(const GradedPolySystem& sys, const CountOptions& opt = {});
// Variables enumerated by count_points (ids).
std::vector<int> enumeration_set(const GradedPolySystem& sys);

// Points of the chart equations over ctx.field(), all variables.
CountResult fiber_count(const std::vector<Coweight>& mu, const ArithContext& ctx,
                        const std::vector<SeriesMatrix>& h = {}, const CountOptions& opt = {});
CountResult fiber_count_serial(const std::vector<Coweight>& mu, const ArithContext& ctx,
                               const std::vector<SeriesMatrix>& h = {}, const CountOptions& opt = {});

// round(log(n2/n1) / log(q2/q1)); heuristic.
int estimated_dimension(double n1, double q1, double n2, double q2);

struct AbcdPack {
  int r = 0, s = 0, t = 0, offset = 0;
  bool swapped = false;  // mu_beta > mu_alpha
};
AbcdPack abcd_pack(const Coweight& mu, int e, int p);

struct AbcdResult {
  std::uint64_t count = 0;
  int ambient = 0;
  // max over kernel dimensions k of round(log_q #{(A,C) with kernel k}) + k
  int witnessed_dim = 0;
};
// A, C of degree <= r; B, D with coefficients in degrees offset..s;
// AB = CD mod Z^t.
AbcdResult abcd_count(int r, int s, int t, int offset, int q, const CountOptions& opt = {});
AbcdResult abcd_count_serial(int r, int s, int t, int offset, int q, const CountOptions& opt = {});

struct BoundResult {
  std::int64_t bound = 0;
  bool strict = false;
};
BoundResult bound_formula(const std::vector<Coweight>& mu, int e);

struct ClaimFailure {
  int p = 0, e = 0, x = 0, y = 0;
  char which = 'A';
  std::int64_t value = 0;
};
bool verify_claim_inequalities(int p, int e_max, std::vector<ClaimFailure>* failures = nullptr);

}  // namespace bkgr
