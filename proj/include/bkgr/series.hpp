#pragma once
// Laurent series in u over a coefficient ring R with explicit absolute
// precision. A series stores coefficients for exponents val, val+1, ... and
// is known modulo u^prec; coefficients between the stored block and prec are
// zero. prec == kExact marks an exact (finite Laurent polynomial) value.
//
// R needs: default construction as zero, is_zero(), +, -, unary -, *,
// scaled(int64). Fe and Poly both qualify.
//
// Precision rules:
//   a + b : prec = min(prec a, prec b)
//   a * b : prec = min(val a + prec b, val b + prec a)
//   phi   : u -> u^p, prec unchanged (conservative)
//   theta : u d/du, prec unchanged
//   d/du  : prec - 1
//   inverse(cap): relative precision preserved; exact inputs are cut at cap.
// A truncated power series is a Laurent series with val >= 0.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <ostream>
#include <utility>
#include <vector>

#include "bkgr/errors.hpp"
#include "bkgr/field.hpp"

namespace bkgr {

inline constexpr std::int64_t kExact = std::int64_t{1} << 60;

inline std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  if (a >= kExact || b >= kExact) return kExact;
  std::int64_t s = a + b;
  return s >= kExact ? kExact : s;
}

template <class R>
class Laurent {
 public:
  Laurent() : val_(kExact), prec_(kExact) {}

  static Laurent zero(std::int64_t prec = kExact) {
    Laurent r;
    r.prec_ = prec;
    r.val_ = prec;
    return r;
  }
  static Laurent constant(const R& a, std::int64_t prec = kExact) { return monomial(a, 0, prec); }
  static Laurent monomial(const R& a, std::int64_t n, std::int64_t prec = kExact) {
    Laurent r;
    r.prec_ = prec;
    r.val_ = n;
    r.c_ = {a};
    r.normalize();
    return r;
  }
  // coefficients c[j] of u^(val+j)
  static Laurent from_coeffs(std::int64_t val, std::vector<R> c, std::int64_t prec = kExact) {
    Laurent r;
    r.val_ = val;
    r.c_ = std::move(c);
    r.prec_ = prec;
    r.normalize();
    return r;
  }

  std::int64_t val() const { return val_; }
  std::int64_t prec() const { return prec_; }
  bool exact() const { return prec_ >= kExact; }
  const std::vector<R>& coeffs() const { return c_; }
  // Zero to the known precision.
  bool is_zero() const { return c_.empty(); }
  // Highest exponent with a stored nonzero coefficient (val-1 if zero).
  std::int64_t top() const { return val_ + static_cast<std::int64_t>(c_.size()) - 1; }

  R coeff(std::int64_t n) const {
    if (n < val_ || n >= val_ + static_cast<std::int64_t>(c_.size())) return R{};
    return c_[static_cast<std::size_t>(n - val_)];
  }
  R lead() const { return c_.empty() ? R{} : c_.front(); }

  Laurent operator+(const Laurent& o) const { return combine(o, false); }
  Laurent operator-(const Laurent& o) const { return combine(o, true); }
  Laurent operator-() const {
    Laurent r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  Laurent operator*(const Laurent& o) const {
    Laurent r;
    r.prec_ = std::min(sat_add(val_, o.prec_), sat_add(o.val_, prec_));
    if (c_.empty() || o.c_.empty()) {
      r.val_ = r.prec_;
      return r;
    }
    r.val_ = val_ + o.val_;
    std::int64_t len = static_cast<std::int64_t>(c_.size() + o.c_.size() - 1);
    if (r.prec_ < kExact) len = std::min(len, r.prec_ - r.val_);
    if (len <= 0) {
      r.val_ = r.prec_;
      return r;
    }
    r.c_.assign(static_cast<std::size_t>(len), R{});
    for (std::size_t i = 0; i < c_.size() && static_cast<std::int64_t>(i) < len; ++i) {
      if (c_[i].is_zero()) continue;
      std::size_t lim = std::min(o.c_.size(), static_cast<std::size_t>(len - static_cast<std::int64_t>(i)));
      for (std::size_t j = 0; j < lim; ++j) {
        if (o.c_[j].is_zero()) continue;
        r.c_[i + j] = r.c_[i + j] + c_[i] * o.c_[j];
      }
    }
    r.normalize();
    return r;
  }
  Laurent& operator+=(const Laurent& o) { return *this = *this + o; }
  Laurent& operator-=(const Laurent& o) { return *this = *this - o; }
  Laurent& operator*=(const Laurent& o) { return *this = *this * o; }

  Laurent scaled(const R& a) const {
    Laurent r = *this;
    for (auto& x : r.c_) x = x * a;
    r.normalize();
    return r;
  }
  Laurent scaled_int(std::int64_t n) const {
    Laurent r = *this;
    for (auto& x : r.c_) x = x.scaled(n);
    r.normalize();
    return r;
  }
  // Multiply by u^n.
  Laurent shift(std::int64_t n) const {
    Laurent r = *this;
    r.val_ = r.c_.empty() ? sat_add(r.prec_, n) : r.val_ + n;
    r.prec_ = sat_add(prec_, n);
    if (c_.empty()) r.val_ = r.prec_;
    return r;
  }
  // Forget everything from u^m on.
  Laurent truncated(std::int64_t m) const {
    Laurent r = *this;
    r.prec_ = std::min(prec_, m);
    r.normalize();
    return r;
  }
  // Exact polynomial obtained by dropping the precision marker (used when the
  // caller knows the value is a polynomial below prec).
  Laurent as_exact() const {
    Laurent r = *this;
    r.prec_ = kExact;
    return r;
  }

  // u -> u^p; coefficients untouched; precision unchanged.
  Laurent frobenius(int p) const {
    Laurent r;
    r.prec_ = prec_;
    if (c_.empty()) {
      r.val_ = r.prec_;
      return r;
    }
    r.val_ = val_ * p;
    std::int64_t len = static_cast<std::int64_t>(c_.size() - 1) * p + 1;
    if (r.prec_ < kExact) len = std::min(len, r.prec_ - r.val_);
    if (len > 0) {
      r.c_.assign(static_cast<std::size_t>(len), R{});
      for (std::size_t j = 0; j < c_.size(); ++j) {
        std::int64_t pos = static_cast<std::int64_t>(j) * p;
        if (pos < len) r.c_[static_cast<std::size_t>(pos)] = c_[j];
      }
    }
    r.normalize();
    return r;
  }
  // Inverse of frobenius on series supported on exponents divisible by p.
  // Returns false if some nonzero coefficient sits at an exponent prime to p.
  bool frobenius_preimage(int p, Laurent* out) const {
    Laurent r;
    if (c_.empty()) {
      *out = zero(prec_ >= kExact ? kExact : floor_div(prec_, p));
      return true;
    }
    for (std::size_t j = 0; j < c_.size(); ++j)
      if (!c_[j].is_zero() && (val_ + static_cast<std::int64_t>(j)) % p != 0) return false;
    std::int64_t v = floor_div(val_ + p - 1, p);
    std::int64_t t = floor_div(top(), p);
    std::vector<R> c;
    for (std::int64_t n = v; n <= t; ++n) c.push_back(coeff(n * p));
    *out = from_coeffs(v, std::move(c), prec_ >= kExact ? kExact : ceil_div(prec_, p));
    return true;
  }
  // theta = u d/du : u^n -> n u^n.
  Laurent theta() const {
    Laurent r = *this;
    for (std::size_t j = 0; j < r.c_.size(); ++j) r.c_[j] = r.c_[j].scaled(val_ + static_cast<std::int64_t>(j));
    r.normalize();
    return r;
  }
  // d/du : u^n -> n u^(n-1).
  Laurent ddu() const { return theta().shift(-1); }

  // Inverse of a series with nonzero leading coefficient (R must be a field
  // element type).
  Laurent inverse(std::int64_t cap) const {
    if (c_.empty()) throw SingularMatrix("inverse of a series that is zero at precision");
    std::int64_t rel = prec_ >= kExact ? kExact : prec_ - val_;
    std::int64_t out_prec = rel >= kExact ? cap : std::min(cap, -val_ + rel);
    std::int64_t n = out_prec - (-val_);
    Laurent r;
    r.prec_ = out_prec;
    r.val_ = -val_;
    if (n <= 0) {
      r.c_.clear();
      r.val_ = r.prec_;
      return r;
    }
    R inv0 = c_[0].inv();
    r.c_.assign(static_cast<std::size_t>(n), R{});
    r.c_[0] = inv0;
    for (std::int64_t k = 1; k < n; ++k) {
      R acc{};
      std::int64_t lim = std::min<std::int64_t>(k, static_cast<std::int64_t>(c_.size()) - 1);
      for (std::int64_t j = 1; j <= lim; ++j) acc = acc + c_[static_cast<std::size_t>(j)] * r.c_[static_cast<std::size_t>(k - j)];
      r.c_[static_cast<std::size_t>(k)] = -(acc * inv0);
    }
    r.normalize();
    return r;
  }

  // Congruence to zero modulo u^m. False if a known coefficient below m is
  // nonzero; otherwise throws when the value is not known modulo u^m.
  bool is_zero_mod(std::int64_t m) const {
    if (!c_.empty() && val_ < m) return false;
    if (prec_ < m) throw PrecisionExhausted("congruence mod u^" + std::to_string(m) + " needs precision " +
                                            std::to_string(m) + ", have " + std::to_string(prec_));
    return true;
  }
  // Value at u = 0 (requires val >= 0 or an exact zero below 0).
  R at_zero() const {
    if (!c_.empty() && val_ < 0) throw OutOfRange("series has a pole at 0");
    if (prec_ <= 0) throw PrecisionExhausted("constant term not known");
    return coeff(0);
  }

  template <class F>
  auto map(F&& fn) const {
    using S = decltype(fn(std::declval<R>()));
    std::vector<S> c;
    c.reserve(c_.size());
    for (const auto& x : c_) c.push_back(fn(x));
    return Laurent<S>::from_coeffs(val_, std::move(c), prec_);
  }

  bool equals(const Laurent& o) const {
    if (prec_ != o.prec_) return false;
    return (*this - o).is_zero();
  }

 private:
  static std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  }
  static std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

  Laurent combine(const Laurent& o, bool subtract) const {
    Laurent r;
    r.prec_ = std::min(prec_, o.prec_);
    if (c_.empty() && o.c_.empty()) {
      r.val_ = r.prec_;
      return r;
    }
    std::int64_t lo = std::min(c_.empty() ? o.val_ : val_, o.c_.empty() ? val_ : o.val_);
    std::int64_t hi = std::max(c_.empty() ? lo - 1 : top(), o.c_.empty() ? lo - 1 : o.top());
    if (r.prec_ < kExact) hi = std::min(hi, r.prec_ - 1);
    if (hi < lo) {
      r.val_ = r.prec_;
      return r;
    }
    r.val_ = lo;
    r.c_.assign(static_cast<std::size_t>(hi - lo + 1), R{});
    for (std::size_t j = 0; j < c_.size(); ++j) {
      std::int64_t n = val_ + static_cast<std::int64_t>(j);
      if (n > hi) break;
      r.c_[static_cast<std::size_t>(n - lo)] = c_[j];
    }
    for (std::size_t j = 0; j < o.c_.size(); ++j) {
      std::int64_t n = o.val_ + static_cast<std::int64_t>(j);
      if (n > hi) break;
      auto& slot = r.c_[static_cast<std::size_t>(n - lo)];
      slot = subtract ? slot - o.c_[j] : slot + o.c_[j];
    }
    r.normalize();
    return r;
  }

  void normalize() {
    if (prec_ < kExact) {
      std::int64_t keep = prec_ - val_;
      if (keep <= 0)
        c_.clear();
      else if (static_cast<std::int64_t>(c_.size()) > keep)
        c_.resize(static_cast<std::size_t>(keep));
    }
    std::size_t lead = 0;
    while (lead < c_.size() && c_[lead].is_zero()) ++lead;
    if (lead == c_.size()) {
      c_.clear();
      val_ = prec_;
      return;
    }
    if (lead > 0) {
      c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
      val_ += static_cast<std::int64_t>(lead);
    }
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  std::int64_t val_;
  std::vector<R> c_;
  std::int64_t prec_;
};

using Series = Laurent<Fe>;

template <class R>
std::ostream& operator<<(std::ostream& os, const Laurent<R>& s) {
  bool first = true;
  for (std::size_t j = 0; j < s.coeffs().size(); ++j) {
    if (s.coeffs()[j].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << s.coeffs()[j] << "*u^" << (s.val() + static_cast<std::int64_t>(j));
  }
  if (first) os << "0";
  if (!s.exact()) os << " + O(u^" << s.prec() << ")";
  return os;
}

// Series from coefficients over F given as integers (c[j] of u^j).
inline Series series_from_ints(const GF& F, const std::vector<std::int64_t>& c, std::int64_t prec = kExact) {
  std::vector<Fe> v;
  v.reserve(c.size());
  for (auto x : c) v.push_back(Fe::from_int(F, x));
  return Series::from_coeffs(0, std::move(v), prec);
}

inline Series frobenius_substitute(const Series& f, int p) { return f.frobenius(p); }

enum class DeriveMode { ddu, theta };
inline Series derive(const Series& f, DeriveMode mode) { return mode == DeriveMode::theta ? f.theta() : f.ddu(); }

}  // namespace bkgr
