#pragma once
// Lattices in V_h = (F_q[u]/u^h)^d, elementary divisors, Schubert cells,
// Pluecker vectors and derivation actions on exterior powers.
//
// Basis labels: y_{j*d+i} is u^j e_i, with G_m-weight j.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bkgr/linalg.hpp"
#include "bkgr/matrix.hpp"

namespace bkgr {

struct Coweight {
  std::vector<int> v;

  Coweight() = default;
  Coweight(std::initializer_list<int> il) : v(il) {}
  explicit Coweight(std::vector<int> x) : v(std::move(x)) {}

  int size() const { return static_cast<int>(v.size()); }
  int operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
  int sum() const;
  bool dominant() const;
  Coweight sorted() const;  // weakly decreasing rearrangement
  bool operator==(const Coweight& o) const { return v == o.v; }
  bool operator!=(const Coweight& o) const { return v != o.v; }
  bool operator<(const Coweight& o) const { return v < o.v; }
  Coweight operator+(const Coweight& o) const;
  Coweight operator-(const Coweight& o) const;
  std::string str() const;
};

Coweight dual_coweight(const Coweight& lambda, int h);
bool dominance_leq(const Coweight& nu, const Coweight& eta);
int schubert_dim(const Coweight& eta);
// <rho, lambda> = sum_{i<j} (lambda_i - lambda_j) / 2; for d = 3 this is a - c.
int rho_pairing(const Coweight& lambda);
inline int alpha_pairing(const Coweight& m) { return m[0] - m[1]; }
inline int beta_pairing(const Coweight& m) { return m[1] - m[2]; }
inline int gamma_pairing(const Coweight& m) { return m[0] - m[2]; }
// All dominant coweights of length d with entries in [lo, hi] and given sum.
std::vector<Coweight> dominant_coweights(int d, int lo, int hi, int sum);
// Dominant nu <= eta with entries in [lo, hi].
std::vector<Coweight> dominant_below(const Coweight& eta, int lo, int hi);

// Exponents of the elementary divisors of an invertible series matrix,
// weakly decreasing; negative exponents allowed for matrices with poles.
Coweight elementary_divisors(const SeriesMatrix& M);

class Lattice {
 public:
  Lattice() = default;
  // Image in V_h of the column span of an integral matrix G; requires
  // u^h * ambient inside G * ambient.
  static Lattice from_matrix(const SeriesMatrix& G, int h);
  // u-stable span of the given vectors of V_h.
  static Lattice from_span(const GF& F, int d, int h, const FRows& gens);

  int d() const { return d_; }
  int h() const { return h_; }
  int n() const { return d_ * h_; }
  const GF& field() const { return *F_; }
  int dim() const { return static_cast<int>(rows_.size()); }
  int colength() const { return n() - dim(); }
  const FRows& rows() const { return rows_; }
  bool contains(const FVec& x) const;
  bool is_u_stable() const;
  // Elementary divisor exponents of any matrix G with image this lattice.
  Coweight type() const;
  // Lower triangular polynomial matrix whose column span over F[[u]] is the
  // preimage of this lattice (column Hermite form).
  SeriesMatrix basis_matrix() const;
  bool operator==(const Lattice& o) const { return rows_ == o.rows_ && d_ == o.d_ && h_ == o.h_; }
  bool operator<(const Lattice& o) const { return rows_ < o.rows_; }
  std::string str() const;

 private:
  const GF* F_ = nullptr;
  int d_ = 0, h_ = 0;
  FRows rows_;  // reduced row echelon form
};

FVec u_times(const FVec& x, int d, int h);

// All u-stable subspaces of V_h of the given colength (column Hermite normal
// form enumeration).
std::vector<Lattice> enumerate_lattices(const GF& F, int d, int h, int colength);

bool schubert_member(const Lattice& L, const Coweight& eta);
bool schubert_member(const SeriesMatrix& G, const Coweight& eta);

struct WedgeVector {
  int n = 0;  // number of basis labels
  int k = 0;  // degree
  std::map<std::uint64_t, Fe> c;  // label mask -> coefficient; zeros absent

  static WedgeVector basis(int n, const std::vector<int>& labels, const GF& F);
  Fe coeff(std::uint64_t mask) const;
  void add(std::uint64_t mask, const Fe& x);
  WedgeVector scaled(const Fe& a) const;
  WedgeVector operator+(const WedgeVector& o) const;
  WedgeVector operator-(const WedgeVector& o) const;
  bool is_zero() const { return c.empty(); }
  // First nonzero coordinate scaled to 1.
  WedgeVector normalized() const;
  bool operator==(const WedgeVector& o) const;
  std::string str() const;
};

std::uint64_t labels_mask(const std::vector<int>& labels);
std::vector<int> mask_labels(std::uint64_t mask);

WedgeVector pluecker(const Lattice& L);
int gm_weight(const std::vector<int>& labels, int d);
// Coefficient of y_0 ^ ... ^ y_{n-1} in w ^ v.
Fe wedge_pairing(const WedgeVector& w, const WedgeVector& v);

struct DerivationData {
  SeriesMatrix N0;  // valuation >= 1, read modulo u^h
  Series alpha;     // scalar part alpha(u) * u d/du
};

// Matrix (columns = images of basis labels) of D acting on V_h.
FRows derivation_matrix(const DerivationData& D, int d, int h);
WedgeVector derivation_act_wedge(const DerivationData& D, const WedgeVector& w, int d, int h);

struct SLocusOptions {
  bool full_basis = false;  // evaluate every monomial w, not only the admissible ones
  std::vector<std::string>* warnings = nullptr;
};
// Membership of (L, D) in the locus S_{mu,i,c}: the derivation used is
// N0 + alpha(u) u^(i-1) * u d/du; the constant term alpha(0) * B applies at i = 1.
bool s_locus_check(const Lattice& L, const DerivationData& D, int i, const Coweight& mu, int p,
                   const SLocusOptions& opt = {});
// Values of the functionals (one per evaluated monomial w).
std::vector<Fe> s_locus_functionals(const Lattice& L, const DerivationData& D, int i, const Coweight& mu,
                                    bool full_basis);
// Weight bound B = sum_l sum_{j=1}^{mu*_l - 1} j.
int s_locus_weight_bound(const Coweight& mu, int h);
// sum_l sum_{j=nu*_l}^{h-1} j
int eigen_weight(const Coweight& nu, int h);
bool weight_bound_violated(const Coweight& mu, int h, int p);

// The single section for d = 3, h = 2, mu = (2,1,0), paired against
// pluecker(L); nmat holds the u-coefficients n_{jk} of N mod u^2.
Fe s_locus_equation_d3(const Lattice& L, const std::vector<std::vector<Fe>>& nmat, int i, const Fe& c0);

bool flag_member(const Lattice& L, const Coweight& nu, int h);
bool stabilization_check(const Lattice& L, const DerivationData& D);
bool eigenvector_check(const Lattice& L, const DerivationData& D, const Coweight& nu, int h);

}  // namespace bkgr
