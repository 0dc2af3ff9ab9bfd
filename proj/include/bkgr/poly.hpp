#pragma once
// Sparse multivariate polynomials over F_q. Variables are integer ids; a
// monomial is a sorted list of (id, exponent) pairs.

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bkgr/field.hpp"

namespace bkgr {

using Monomial = std::vector<std::pair<int, int>>;

int mono_degree(const Monomial& m);
Monomial mono_mul(const Monomial& a, const Monomial& b);

class Poly {
 public:
  Poly() = default;
  static Poly constant(const Fe& a);
  static Poly var(const GF& F, int id);
  static Poly one_of(const GF& F) { return constant(Fe(F, 1)); }

  bool is_zero() const { return terms_.empty(); }
  const GF* field() const { return F_; }
  const std::map<Monomial, Fe>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_constant() const;
  Fe constant_term() const;
  int total_degree() const;
  std::vector<int> variables() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly scaled(std::int64_t n) const;
  Poly scaled(const Fe& a) const;
  bool operator==(const Poly& o) const;

  void add_term(const Monomial& m, const Fe& c);
  // Replace variables by polynomials; variables not in the map are kept.
  Poly substitute(const std::map<int, Poly>& sub) const;
  // Evaluate with all variables assigned (missing ids read as zero).
  Fe evaluate(const std::function<Fe(int)>& value) const;
  // Weighted degree under a weight table (missing ids weigh 0); -1 for zero.
  std::int64_t weighted_degree(const std::function<std::int64_t(int)>& w) const;
  Poly leading_form(const std::function<std::int64_t(int)>& w) const;

  std::string to_string(const std::function<std::string(int)>& name) const;

 private:
  const GF* F_ = nullptr;
  std::map<Monomial, Fe> terms_;
};

}  // namespace bkgr
