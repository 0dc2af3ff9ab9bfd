#include "bkgr/matrix.hpp"

namespace bkgr {

InverseResult matrix_inverse_checked(const SeriesMatrix& M, std::int64_t cap, std::int64_t need) {
  Series det = M.det();
  if (det.is_zero()) throw SingularMatrix("determinant vanishes at precision " + std::to_string(det.prec()));
  SeriesMatrix adj = M.adjugate();
  std::int64_t v = det.val();
  // Extra room so the product keeps its precision after the 1/u^v factor.
  Series dinv = det.inverse(sat_add(cap, v));
  InverseResult out{adj.scaled(dinv), 0};
  out.inv = out.inv.truncated(cap);
  SeriesMatrix check = M * out.inv;
  out.guaranteed_prec = check.prec();
  if (out.guaranteed_prec < need)
    throw PrecisionExhausted("inverse known only modulo u^" + std::to_string(out.guaranteed_prec));
  return out;
}

SeriesMatrix matrix_inverse(const SeriesMatrix& M, std::int64_t cap) { return matrix_inverse_checked(M, cap).inv; }

SeriesMatrix constant_matrix(const GF& F, const std::vector<std::vector<std::int64_t>>& rows) {
  int n = static_cast<int>(rows.size());
  SeriesMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Series::constant(Fe::from_int(F, rows[i][j]));
  return m;
}

}  // namespace bkgr
