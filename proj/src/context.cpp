#include "bkgr/context.hpp"

#include <string>

namespace bkgr {

ArithContext::ArithContext(const ContextParams& prm)
    : p(prm.p), k(prm.k), e(prm.e), f(prm.f), h(prm.h), d(prm.d), P(prm.P), F(nullptr) {
  if (e < 1 || f < 1 || h < 1 || d < 1 || k < 1) throw ConfigError("context parameters must be positive");
  F = &GF::get(p, k);
  std::int64_t need = min_precision(p, e, h, d);
  if (P == 0) P = 2 * need;
  if (P < need) throw ConfigError("working precision " + std::to_string(P) + " below required " + std::to_string(need));
  for (int t = 0; t < f; ++t) {
    Series ct = Series::constant(one());
    if (t < static_cast<int>(prm.c.size()) && !prm.c[t].empty()) ct = series_from_ints(*F, prm.c[t]);
    if (ct.is_zero() || ct.val() != 0) throw ConfigError("c_tau must be a unit");
    Series pre;
    if (!ct.frobenius_preimage(p, &pre))
      throw ConfigError("c_tau must be a series in u^p so that its Frobenius preimage exists");
    c.push_back(ct);
    dd.push_back(pre.inverse(P));
  }
}

SeriesMatrix ArithContext::zero_matrix() const { return SeriesMatrix(d); }

}  // namespace bkgr
