#include "bkgr/field.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>

#include "bkgr/errors.hpp"
#include "bkgr/poly_table.hpp"

namespace bkgr {

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<int> prime_factors(std::uint32_t n) {
  std::vector<int> out;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(static_cast<int>(d));
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(static_cast<int>(n));
  return out;
}

}  // namespace

bool GF::is_prime_power(std::uint32_t q, int* p_out, int* k_out) {
  if (q < 2) return false;
  for (std::uint32_t p = 2; p <= q; ++p) {
    if (q % p != 0) continue;
    if (!is_prime(static_cast<int>(p))) return false;
    int k = 0;
    std::uint32_t r = q;
    while (r % p == 0) {
      r /= p;
      ++k;
    }
    if (r != 1) return false;
    if (p_out) *p_out = static_cast<int>(p);
    if (k_out) *k_out = k;
    return true;
  }
  return false;
}

const GF& GF::get(int p, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<GF>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, k);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto f = std::unique_ptr<GF>(new GF(p, k));
  const GF& ref = *f;
  cache.emplace(key, std::move(f));
  return ref;
}

const GF& GF::of_order(std::uint32_t q) {
  int p = 0, k = 0;
  if (!is_prime_power(q, &p, &k)) throw ConfigError("field order " + std::to_string(q) + " is not a prime power");
  return get(p, k);
}

GF::GF(int p, int k) : p_(p), k_(k) {
  if (!is_prime(p) || k < 1) throw ConfigError("invalid field parameters");
  std::uint64_t q = 1;
  for (int i = 0; i < k; ++i) q *= static_cast<std::uint64_t>(p);
  if (q > 4096) throw ConfigError("field order exceeds 4096");
  q_ = static_cast<std::uint32_t>(q);
  pow_p_.resize(k + 1);
  pow_p_[0] = 1;
  for (int i = 1; i <= k; ++i) pow_p_[i] = pow_p_[i - 1] * p;

  exp_.assign(2 * q_, 0);
  log_.assign(q_, 0);
  if (k == 1) {
    modulus_ = {0, 1};
    auto fac = prime_factors(q_ - 1);
    std::uint32_t g = 1;
    for (std::uint32_t cand = 1; cand < q_; ++cand) {
      bool ok = true;
      for (int r : fac) {
        std::uint64_t acc = 1, b = cand, e = (q_ - 1) / r;
        while (e) {
          if (e & 1) acc = acc * b % q_;
          b = b * b % q_;
          e >>= 1;
        }
        if (acc == 1) ok = false;
      }
      if (ok) {
        g = cand;
        break;
      }
    }
    if (q_ == 2) g = 1;
    std::uint64_t x = 1;
    for (std::uint32_t i = 0; i < q_ - 1; ++i) {
      exp_[i] = static_cast<std::uint32_t>(x);
      x = x * g % q_;
    }
  } else {
    bool found = false;
    for (const auto& row : detail::kPolyTable) {
      if (row.p == p && row.k == k) {
        modulus_.assign(row.coeffs.begin(), row.coeffs.begin() + k + 1);
        found = true;
      }
    }
    if (!found) throw ConfigError("no tabulated polynomial for this field");
    std::vector<int> cur(k, 0);
    cur[0] = 1;
    for (std::uint32_t i = 0; i < q_ - 1; ++i) {
      std::uint32_t enc = 0;
      for (int j = k - 1; j >= 0; --j) enc = enc * p + cur[j];
      exp_[i] = enc;
      // multiply by x and reduce by the monic modulus
      int top = cur[k - 1];
      for (int j = k - 1; j > 0; --j) cur[j] = cur[j - 1];
      cur[0] = 0;
      for (int j = 0; j < k; ++j) cur[j] = ((cur[j] - top * modulus_[j]) % p + p) % p;
    }
  }
  for (std::uint32_t i = 0; i < q_ - 1; ++i) {
    exp_[i + q_ - 1] = exp_[i];
    log_[exp_[i]] = i;
  }
  neg_.resize(q_);
  for (std::uint32_t a = 0; a < q_; ++a) {
    std::uint32_t r = 0;
    for (int j = 0; j < k_; ++j) {
      std::uint32_t dgt = (a / pow_p_[j]) % p_;
      r += ((p_ - dgt) % p_) * pow_p_[j];
    }
    neg_[a] = r;
  }
  if (p_ != 2 && q_ <= 1024) {
    add_table_.resize(static_cast<std::size_t>(q_) * q_);
    for (std::uint32_t a = 0; a < q_; ++a)
      for (std::uint32_t b = 0; b < q_; ++b) {
        std::uint32_t r = 0;
        for (int j = 0; j < k_; ++j) {
          std::uint32_t s = (a / pow_p_[j]) % p_ + (b / pow_p_[j]) % p_;
          r += (s % p_) * pow_p_[j];
        }
        add_table_[static_cast<std::size_t>(a) * q_ + b] = static_cast<std::uint16_t>(r);
      }
  }
}

std::uint32_t GF::add(std::uint32_t a, std::uint32_t b) const {
  if (p_ == 2) return a ^ b;
  if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * q_ + b];
  if (k_ == 1) return (a + b) % q_;
  std::uint32_t r = 0;
  for (int j = 0; j < k_; ++j) {
    std::uint32_t s = (a / pow_p_[j]) % p_ + (b / pow_p_[j]) % p_;
    r += (s % p_) * pow_p_[j];
  }
  return r;
}

std::uint32_t GF::neg(std::uint32_t a) const { return neg_[a]; }

std::uint32_t GF::inv(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("inverse of zero in finite field");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

std::uint32_t GF::pow(std::uint32_t a, std::int64_t n) const {
  if (a == 0) {
    if (n < 0) throw std::domain_error("negative power of zero");
    return n == 0 ? 1 : 0;
  }
  std::int64_t m = static_cast<std::int64_t>(q_ - 1);
  std::int64_t e = (static_cast<std::int64_t>(log_[a]) * (((n % m) + m) % m)) % m;
  return exp_[e];
}

std::uint32_t GF::from_int(std::int64_t n) const {
  std::int64_t r = ((n % p_) + p_) % p_;
  return static_cast<std::uint32_t>(r);
}

namespace {
const GF* pick(const GF* a, const GF* b) { return a ? a : b; }
}  // namespace

Fe Fe::operator+(const Fe& o) const {
  const GF* f = pick(F, o.F);
  if (!f) return Fe();
  Fe r;
  r.F = f;
  r.v = f->add(v, o.v);
  return r;
}
Fe Fe::operator-(const Fe& o) const {
  const GF* f = pick(F, o.F);
  if (!f) return Fe();
  Fe r;
  r.F = f;
  r.v = f->sub(v, o.v);
  return r;
}
Fe Fe::operator-() const {
  if (!F) return Fe();
  return Fe(*F, F->neg(v));
}
Fe Fe::operator*(const Fe& o) const {
  const GF* f = pick(F, o.F);
  if (!f) return Fe();
  Fe r;
  r.F = f;
  r.v = f->mul(v, o.v);
  return r;
}
Fe Fe::operator/(const Fe& o) const {
  const GF* f = pick(F, o.F);
  if (!f) throw std::domain_error("division without field");
  Fe r;
  r.F = f;
  r.v = f->div(v, o.v);
  return r;
}
Fe Fe::scaled(std::int64_t n) const {
  if (!F) return Fe();
  return Fe(*F, F->mul(v, F->from_int(n)));
}
Fe Fe::inv() const { return Fe(*F, F->inv(v)); }
Fe Fe::pow(std::int64_t n) const { return Fe(*F, F->pow(v, n)); }

std::ostream& operator<<(std::ostream& os, const Fe& a) {
  if (!a.F || a.F->k() == 1) return os << a.v;
  return os << "g" << "[" << a.v << "]";
}

std::string to_string(const Fe& a) {
  std::ostringstream s;
  s << a;
  return s.str();
}

}  // namespace bkgr
