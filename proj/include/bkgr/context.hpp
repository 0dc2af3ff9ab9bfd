#pragma once
// Arithmetic context: the numerical data shared by every computation.

#include <cstdint>
#include <vector>

#include "bkgr/matrix.hpp"

namespace bkgr {

struct ContextParams {
  int p = 5;
  int k = 1;
  int e = 1;
  int f = 1;
  int h = 2;
  int d = 3;
  std::int64_t P = 0;  // 0 selects the default (twice the minimum)
  // c_tau as coefficient lists over F_p (c[j] of u^j); empty means c = 1.
  std::vector<std::vector<std::int64_t>> c;
};

class ArithContext {
 public:
  explicit ArithContext(const ContextParams& prm);

  static std::int64_t min_precision(int p, int e, int h, int d) {
    return static_cast<std::int64_t>(e) * p + static_cast<std::int64_t>(h) * e * d + e + 2;
  }

  int p, k, e, f, h, d;
  std::int64_t P;
  const GF* F;
  std::vector<Series> c;   // exact, c_tau in F[[u^p]] with c_tau(0) != 0
  std::vector<Series> dd;  // d_tau = phi^{-1}(c_tau)^{-1} at precision P

  const GF& field() const { return *F; }
  Fe one() const { return Fe(*F, 1); }
  Fe zero() const { return Fe(*F, 0); }
  Fe fe(std::int64_t n) const { return Fe::from_int(*F, n); }
  Series constant(std::int64_t n) const { return Series::constant(fe(n)); }
  Series monomial(std::int64_t a, std::int64_t n) const { return Series::monomial(fe(a), n); }
  SeriesMatrix identity() const { return SeriesMatrix::identity(d, one()); }
  SeriesMatrix zero_matrix() const;
  SeriesMatrix diag_u(const std::vector<std::int64_t>& exps) const { return SeriesMatrix::diag_monomial(exps, one()); }
  SeriesMatrix inverse(const SeriesMatrix& M) const { return matrix_inverse(M, P); }
  int next(int tau) const { return (tau + 1) % f; }
};

}  // namespace bkgr
