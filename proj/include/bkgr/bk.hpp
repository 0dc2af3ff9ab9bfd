#pragma once
// Breuil-Kisin pairs (X, N), the monodromy congruence, chart coordinates,
// strata, convolution chains and the conditions imposed on them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bkgr/context.hpp"
#include "bkgr/grassmann.hpp"

namespace bkgr {

// Per embedding tau: X_tau invertible over Laurent series, N_tau with
// valuation >= 1 and degree <= e (stored exactly).
struct BKPair {
  std::vector<SeriesMatrix> X;
  std::vector<SeriesMatrix> N;
};

// Throws PreconditionFailed when an invariant of BKPair is violated.
void validate_pair(const BKPair& pr, const ArithContext& ctx);

// u^e [X phi(N') X^{-1} - c theta(X) X^{-1}] - c N modulo u^{e+1}, with
// N' = N_{tau+1} and theta = u d/du.
std::vector<SeriesMatrix> monodromy_residual(const BKPair& pr, const ArithContext& ctx);
bool is_bk_point(const BKPair& pr, const ArithContext& ctx);

// Chart coordinates (h, B, Y, g) per embedding. B is lower unipotent with
// entries x = (2,1), y = (3,2), z = (3,1); Y strictly lower triangular.
struct ChartPoint {
  std::vector<SeriesMatrix> h, B, Y, g;
};

void validate_chart(const ChartPoint& cp, const std::vector<Coweight>& mu, const ArithContext& ctx);
std::vector<SeriesMatrix> chart_residual(const ChartPoint& cp, const std::vector<Coweight>& mu,
                                         const ArithContext& ctx);
bool is_chart_point(const ChartPoint& cp, const std::vector<Coweight>& mu, const ArithContext& ctx);
// (h u^mu B g, -h^{-1} Y h), N truncated to degree <= e.
BKPair chart_to_pair(const ChartPoint& cp, const std::vector<Coweight>& mu, const ArithContext& ctx);

struct ChartPairReport {
  std::vector<SeriesMatrix> chart, pair;  // both residuals modulo u^{e+1}
  std::vector<SeriesMatrix> diag_term;    // c diag(mu) u^e
  std::vector<SeriesMatrix> gauge_term;   // c h^{-1} theta(h) u^e, always 0 mod u^{e+1}
  // pair residual after adding the diagonal correction h diag_term h^{-1}
  std::vector<SeriesMatrix> corrected;
  bool chart_zero = false, pair_zero = false, corrected_zero = false;
  bool diag_term_nonzero = false;
  std::string summary() const;
};
ChartPairReport compare_chart_vs_pair(const ChartPoint& cp, const std::vector<Coweight>& mu,
                                      const ArithContext& ctx);

struct StratumEntry {
  Coweight mu;
  int n = 0, m = 0;
  bool balanced = false;
};
struct StratumDescriptor {
  std::vector<StratumEntry> per_tau;
};
StratumEntry stratum_of(const Coweight& mu, int e);  // throws NotInCone
StratumDescriptor stratum(const BKPair& pr, const ArithContext& ctx);
bool is_balanced(const Coweight& mu, int e);

// Matrix of u^{i-1} N_0^phi on the basis beta_0 * G of the tau-th part:
// G^{-1} (u^{i-1} phi(N_{tau+1}) G + u^{i-1} c theta(G)).
SeriesMatrix n0phi_matrix(const BKPair& pr, const SeriesMatrix& G, int i, int tau, const ArithContext& ctx);

// ------------------------------------------------------------------ chains

struct ConvChain {
  // [tau][i-1] for steps i = 1..e; cumulative[tau][i] for i = 0..e with
  // cumulative[tau][0] = I; profile[tau][i] = elementary divisors of cumulative.
  std::vector<std::vector<SeriesMatrix>> steps;
  std::vector<std::vector<SeriesMatrix>> cumulative;
  std::vector<std::vector<Coweight>> profile;

  int length() const { return steps.empty() ? 0 : static_cast<int>(steps[0].size()); }
  int embeddings() const { return static_cast<int>(steps.size()); }
};

// Builds cumulative transforms and profiles from steps.
ConvChain make_chain(const std::vector<std::vector<SeriesMatrix>>& steps, const ArithContext& ctx);
// u^{eh} X_tau^{-1}: the matrix of M_e in beta_0.
SeriesMatrix top_lattice_matrix(const BKPair& pr, int tau, const ArithContext& ctx);
// Invariants: steps bounded by (2,1,0), profiles bounded by (2i,i,0) and
// M_e equal to the lattice of the pair.
bool chain_consistent(const ConvChain& ch, const BKPair& pr, const ArithContext& ctx, std::string* why = nullptr);

// Integrality of the level-i matrix of u^{i-1} N_0^phi on the basis G, the
// computation truncated at u^{ep+i}.
bool stabilizes(const BKPair& pr, const SeriesMatrix& G, int i, int tau, const ArithContext& ctx);
bool check_A(const ConvChain& ch, const BKPair& pr, int i, const ArithContext& ctx);
// Throws PreconditionFailed when (A_{i-1}) fails.
bool check_B(const ConvChain& ch, const BKPair& pr, int i, int tau, const ArithContext& ctx);
bool check_B(const ConvChain& ch, const BKPair& pr, int i, const ArithContext& ctx);
bool check_C(const BKPair& pr, const ArithContext& ctx);
// The two sides of (C) per embedding, for the identity test against the residual.
std::vector<SeriesMatrix> check_C_difference(const BKPair& pr, const ArithContext& ctx);

enum class GenericFlavor { AlphaBeta, AlphaGamma, BetaGamma };
// Y = u * n0phi(Gamma, i) must be upper triangular modulo u^{i+1} with
// diagonal divisible by u^i; the designated entries need valuations
// i + 1 - <delta, mu^{(i)}> exactly, mu^{(i)} the type of Gamma.
bool genericity_check(const BKPair& pr, const SeriesMatrix& Gamma, int i, GenericFlavor fl, int tau,
                      const ArithContext& ctx);

// ---------------------------------------------------------- MV families

// Entry of a family template: 0, 1 or (parameter) * u^{-1}.
struct MVEntry {
  enum Kind { Zero, One, Pole } kind = Zero;
  int param = -1;
};
struct MVFamily {
  int params = 0;
  std::vector<std::vector<MVEntry>> tmpl;  // 3x3
  std::string name;
  SeriesMatrix instantiate(const GF& F, const std::vector<std::uint32_t>& vals) const;
};
// Unipotent families with simple poles whose members M satisfy
// u^{(2,2,2) - delta} M in Gr_{<=(2,1,0)}; maximal position sets.
std::vector<MVFamily> mv_generator_families(const Coweight& delta);
bool mv_membership(const SeriesMatrix& M, const Coweight& delta);

// ---------------------------------------------------------- enumeration

struct Shard {
  int index = 0;
  int count = 1;
};

struct EnumOptions {
  double budget = 5e7;  // cap on estimated candidate checks
  Shard shard;
  bool parallel = true;
};

// All chains M_e in ... in M_0 with every step in Gr_{<=(2,1,0)} and M_e
// the lattice of the pair, per embedding; combined across embeddings.
std::vector<ConvChain> conv_fiber_enumerate(const BKPair& pr, const ArithContext& ctx,
                                            const EnumOptions& opt = {});
std::vector<ConvChain> conv_fiber_enumerate_serial(const BKPair& pr, const ArithContext& ctx,
                                                   const EnumOptions& opt = {});
// Number of chains for one embedding, without materializing them.
std::uint64_t conv_fiber_count(const BKPair& pr, int tau, const ArithContext& ctx, const EnumOptions& opt = {});
int conv_fiber_dim_formula(const std::vector<Coweight>& lambdas, const Coweight& nu);

// ---------------------------------------------------------- witnesses

struct WitnessResult {
  SeriesMatrix g;
  std::vector<std::uint32_t> params;
  std::string family;
  int level = 0;  // check_A fails here
};
// gamma_e is the matrix of a basis of M_e in beta_0; profiles[i] = mu^{(i)}
// for k <= i <= e. Searches g in the family allowed by nu_k = mu^{(k+1)} - mu^{(k)}
// and returns the first g for which stabilization fails at level k or k+1.
WitnessResult failure_witness(const BKPair& pr, int tau, const SeriesMatrix& gamma_e,
                              const std::vector<Coweight>& profiles, int k, const ArithContext& ctx);

// ---------------------------------------------------------- degeneration

bool is_monomial_chain(const ConvChain& ch);
std::vector<std::int64_t> step_exponents(const SeriesMatrix& S);  // diagonal steps only
bool step_extremal(const ConvChain& ch, int i);                 // 1-based step index, all tau
bool extremal_check(const ConvChain& ch);

struct DegenerationFamily {
  std::vector<ConvChain> members;  // one per t in F_q, in encoding order
  ConvChain at_infinity;
};
// Step i = u I and step i-1 a permutation of diag(u^2, u, 1) for every tau.
DegenerationFamily degeneration_family(const ConvChain& ch, int i, const ArithContext& ctx);

}  // namespace bkgr
