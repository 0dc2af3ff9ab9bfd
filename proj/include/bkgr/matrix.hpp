#pragma once
// Square matrices of Laurent series.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <vector>

#include "bkgr/series.hpp"

namespace bkgr {

template <class R>
class Mat {
 public:
  using S = Laurent<R>;

  Mat() = default;
  explicit Mat(int n) : n_(n), a_(static_cast<std::size_t>(n * n)) {}

  static Mat identity(int n, const R& one) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = S::constant(one);
    return m;
  }
  // diag(u^e_0, ..., u^e_{n-1})
  static Mat diag_monomial(const std::vector<std::int64_t>& e, const R& one) {
    Mat m(static_cast<int>(e.size()));
    for (std::size_t i = 0; i < e.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = S::monomial(one, e[i]);
    return m;
  }

  int n() const { return n_; }
  S& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * n_ + j)]; }
  const S& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * n_ + j)]; }

  Mat operator+(const Mat& o) const {
    Mat r(n_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
  }
  Mat operator-(const Mat& o) const {
    Mat r(n_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
  }
  Mat operator-() const {
    Mat r(n_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = -a_[k];
    return r;
  }
  Mat operator*(const Mat& o) const {
    Mat r(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        S acc;
        for (int k = 0; k < n_; ++k) {
          const S& x = (*this)(i, k);
          const S& y = o(k, j);
          if (x.is_zero() && x.exact()) continue;
          if (y.is_zero() && y.exact()) continue;
          acc += x * y;
        }
        r(i, j) = acc;
      }
    return r;
  }
  Mat scaled(const S& s) const {
    Mat r(n_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
    return r;
  }
  Mat shift(std::int64_t k) const {
    return map_entries([k](const S& x) { return x.shift(k); });
  }

  template <class F>
  Mat map_entries(F&& fn) const {
    Mat r(n_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = fn(a_[k]);
    return r;
  }
  template <class F>
  auto map_coeffs(F&& fn) const {
    using T = decltype(fn(std::declval<R>()));
    Mat<T> r(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r(i, j) = (*this)(i, j).map(fn);
    return r;
  }

  Mat frobenius(int p) const {
    return map_entries([p](const S& x) { return x.frobenius(p); });
  }
  Mat theta() const {
    return map_entries([](const S& x) { return x.theta(); });
  }
  Mat truncated(std::int64_t m) const {
    return map_entries([m](const S& x) { return x.truncated(m); });
  }
  Mat transpose() const {
    Mat r(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r(i, j) = (*this)(j, i);
    return r;
  }

  // Smallest valuation among entries known to be nonzero; kExact if none.
  std::int64_t min_val() const {
    std::int64_t v = kExact;
    for (const auto& x : a_)
      if (!x.is_zero()) v = std::min(v, x.val());
    return v;
  }
  std::int64_t prec() const {
    std::int64_t p = kExact;
    for (const auto& x : a_) p = std::min(p, x.prec());
    return p;
  }
  bool is_zero_mod(std::int64_t m) const {
    bool ok = true;
    for (const auto& x : a_)
      if (!x.is_zero() && x.val() < m) ok = false;
    if (!ok) return false;
    for (const auto& x : a_) x.is_zero_mod(m);
    return true;
  }

  S det() const { return det_rec(std::vector<int>(static_cast<std::size_t>(n_), 0), 0); }

  // Transposed cofactor matrix: adj(M) M = det(M) I.
  Mat adjugate() const {
    Mat r(n_);
    if (n_ == 1) {
      r(0, 0) = S::constant(one_like());
      return r;
    }
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        Mat minor(n_ - 1);
        for (int a = 0, ra = 0; a < n_; ++a) {
          if (a == i) continue;
          for (int b = 0, rb = 0; b < n_; ++b) {
            if (b == j) continue;
            minor(ra, rb) = (*this)(a, b);
            ++rb;
          }
          ++ra;
        }
        S c = minor.det();
        r(j, i) = ((i + j) % 2 == 0) ? c : -c;
      }
    return r;
  }

  R one_like() const {
    for (const auto& x : a_)
      if (!x.is_zero()) {
        const GF* F = x.lead().field();
        if (F) return R::one_of(*F);
      }
    return R{};
  }

 private:
  S det_rec(std::vector<int> used, int row) const {
    if (row == n_) return S::constant(one_like());
    S acc;
    int sign = 1;
    for (int j = 0; j < n_; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const S& x = (*this)(row, j);
      if (!(x.is_zero() && x.exact())) {
        used[static_cast<std::size_t>(j)] = 1;
        S sub = det_rec(used, row + 1);
        used[static_cast<std::size_t>(j)] = 0;
        S t = x * sub;
        acc = sign > 0 ? acc + t : acc - t;
      }
      sign = -sign;
    }
    return acc;
  }

  int n_ = 0;
  std::vector<S> a_;
};

using SeriesMatrix = Mat<Fe>;

template <class R>
std::ostream& operator<<(std::ostream& os, const Mat<R>& m) {
  os << "[";
  for (int i = 0; i < m.n(); ++i) {
    os << (i ? "; " : "") << "[";
    for (int j = 0; j < m.n(); ++j) os << (j ? ", " : "") << m(i, j);
    os << "]";
  }
  return os << "]";
}

struct InverseResult {
  SeriesMatrix inv;
  std::int64_t guaranteed_prec;  // M * inv = I holds modulo u^guaranteed_prec
};

// Inverse via adjugate / det. cap bounds the precision of inverses of exact
// determinants. Throws SingularMatrix when det is zero at known precision and
// PrecisionExhausted when the guaranteed precision falls below `need`.
InverseResult matrix_inverse_checked(const SeriesMatrix& M, std::int64_t cap, std::int64_t need = -kExact);
SeriesMatrix matrix_inverse(const SeriesMatrix& M, std::int64_t cap);

// Entrywise integer matrix helpers over F.
SeriesMatrix constant_matrix(const GF& F, const std::vector<std::vector<std::int64_t>>& rows);

}  // namespace bkgr
