#pragma once
// Finite fields F_{p^k} with q = p^k <= 4096.
//
// Elements are encoded as integers in [0, q): the base-p digits are the
// coefficients of a polynomial in the generator x modulo a fixed primitive
// polynomial, so 0..p-1 is the prime subfield.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bkgr {

class GF {
 public:
  static const GF& get(int p, int k);
  static const GF& of_order(std::uint32_t q);
  static bool is_prime_power(std::uint32_t q, int* p = nullptr, int* k = nullptr);

  int p() const { return p_; }
  int k() const { return k_; }
  std::uint32_t q() const { return q_; }
  const std::vector<int>& modulus() const { return modulus_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t div(std::uint32_t a, std::uint32_t b) const { return mul(a, inv(b)); }
  std::uint32_t pow(std::uint32_t a, std::int64_t n) const;
  std::uint32_t from_int(std::int64_t n) const;
  std::uint32_t frobenius(std::uint32_t a) const { return pow(a, p_); }
  // Generator of the multiplicative group; log is relative to it.
  std::uint32_t generator() const { return exp_[1]; }
  std::uint32_t exp(std::uint64_t n) const { return exp_[n % (q_ - 1)]; }
  std::uint32_t log(std::uint32_t a) const { return log_[a]; }

 private:
  GF(int p, int k);
  int p_, k_;
  std::uint32_t q_;
  std::vector<int> modulus_;  // monic, constant term first
  std::vector<std::uint32_t> exp_, log_, neg_;
  std::vector<std::uint16_t> add_table_;  // filled when q <= 1024
  std::vector<std::uint32_t> pow_p_;      // p^j
};

struct Fe {
  const GF* F = nullptr;
  std::uint32_t v = 0;

  Fe() = default;
  Fe(const GF& f, std::uint32_t value) : F(&f), v(value) {}
  static Fe from_int(const GF& f, std::int64_t n) { return Fe(f, f.from_int(n)); }
  static Fe one_of(const GF& f) { return Fe(f, 1); }

  bool is_zero() const { return v == 0; }
  bool is_one() const { return v == 1; }
  const GF* field() const { return F; }

  Fe operator+(const Fe& o) const;
  Fe operator-(const Fe& o) const;
  Fe operator-() const;
  Fe operator*(const Fe& o) const;
  Fe operator/(const Fe& o) const;
  Fe& operator+=(const Fe& o) { return *this = *this + o; }
  Fe& operator-=(const Fe& o) { return *this = *this - o; }
  Fe& operator*=(const Fe& o) { return *this = *this * o; }
  Fe scaled(std::int64_t n) const;
  Fe inv() const;
  Fe pow(std::int64_t n) const;
  bool operator==(const Fe& o) const { return v == o.v; }
  bool operator!=(const Fe& o) const { return v != o.v; }
};

std::ostream& operator<<(std::ostream& os, const Fe& a);
std::string to_string(const Fe& a);

// Uniform element of F from a 64-bit random word.
inline Fe fe_from_word(const GF& F, std::uint64_t w) { return Fe(F, static_cast<std::uint32_t>(w % F.q())); }

}  // namespace bkgr
