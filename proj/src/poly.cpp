#include "bkgr/poly.hpp"

#include <set>
#include <sstream>

namespace bkgr {

int mono_degree(const Monomial& m) {
  int d = 0;
  for (const auto& [v, e] : m) d += e;
  return d;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      r.push_back(b[j++]);
    } else {
      r.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return r;
}

Poly Poly::constant(const Fe& a) {
  Poly r;
  r.F_ = a.F;
  if (!a.is_zero()) r.terms_[{}] = a;
  return r;
}

Poly Poly::var(const GF& F, int id) {
  Poly r;
  r.F_ = &F;
  r.terms_[{{id, 1}}] = Fe(F, 1);
  return r;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

Fe Poly::constant_term() const {
  auto it = terms_.find({});
  if (it == terms_.end()) return F_ ? Fe(*F_, 0) : Fe();
  return it->second;
}

int Poly::total_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, mono_degree(m));
  return d;
}

std::vector<int> Poly::variables() const {
  std::set<int> s;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m) s.insert(v);
  return {s.begin(), s.end()};
}

void Poly::add_term(const Monomial& m, const Fe& c) {
  if (c.is_zero()) return;
  if (!F_) F_ = c.F;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  if (!r.F_) r.F_ = o.F_;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  if (!r.F_) r.F_ = o.F_;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  r.F_ = F_ ? F_ : o.F_;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) r.add_term(mono_mul(m1, m2), c1 * c2);
  return r;
}

Poly Poly::scaled(std::int64_t n) const {
  Poly r;
  r.F_ = F_;
  for (const auto& [m, c] : terms_) r.add_term(m, c.scaled(n));
  return r;
}

Poly Poly::scaled(const Fe& a) const {
  Poly r;
  r.F_ = F_ ? F_ : a.F;
  for (const auto& [m, c] : terms_) r.add_term(m, c * a);
  return r;
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  auto it = o.terms_.begin();
  for (const auto& [m, c] : terms_) {
    if (it->first != m || it->second != c) return false;
    ++it;
  }
  return true;
}

Poly Poly::substitute(const std::map<int, Poly>& sub) const {
  Poly r;
  r.F_ = F_;
  for (const auto& [m, c] : terms_) {
    Poly term = Poly::constant(c);
    Monomial kept;
    for (const auto& [v, e] : m) {
      auto it = sub.find(v);
      if (it == sub.end()) {
        kept.emplace_back(v, e);
        continue;
      }
      for (int k = 0; k < e; ++k) term = term * it->second;
    }
    Poly km;
    km.F_ = F_;
    km.terms_[kept] = Fe(*F_, 1);
    r += term * km;
  }
  return r;
}

Fe Poly::evaluate(const std::function<Fe(int)>& value) const {
  Fe acc = F_ ? Fe(*F_, 0) : Fe();
  for (const auto& [m, c] : terms_) {
    Fe t = c;
    for (const auto& [v, e] : m) t = t * value(v).pow(e);
    acc += t;
  }
  return acc;
}

std::int64_t Poly::weighted_degree(const std::function<std::int64_t(int)>& w) const {
  std::int64_t best = -1;
  for (const auto& [m, c] : terms_) {
    std::int64_t d = 0;
    for (const auto& [v, e] : m) d += w(v) * e;
    best = std::max(best, d);
  }
  return best;
}

Poly Poly::leading_form(const std::function<std::int64_t(int)>& w) const {
  std::int64_t top = weighted_degree(w);
  Poly r;
  r.F_ = F_;
  for (const auto& [m, c] : terms_) {
    std::int64_t d = 0;
    for (const auto& [v, e] : m) d += w(v) * e;
    if (d == top) r.terms_[m] = c;
  }
  return r;
}

std::string Poly::to_string(const std::function<std::string(int)>& name) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    bool unit = c.is_one() && !m.empty();
    if (!unit) os << c;
    bool star = !unit;
    for (const auto& [v, e] : m) {
      if (star) os << "*";
      star = true;
      os << name(v);
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

}  // namespace bkgr
