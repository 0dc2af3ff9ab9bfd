#include "bkgr/grassmann.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace bkgr {

// ---------------------------------------------------------------- coweights

int Coweight::sum() const { return std::accumulate(v.begin(), v.end(), 0); }

bool Coweight::dominant() const {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return true;
}

Coweight Coweight::sorted() const {
  Coweight r = *this;
  std::sort(r.v.begin(), r.v.end(), std::greater<int>());
  return r;
}

Coweight Coweight::operator+(const Coweight& o) const {
  Coweight r = *this;
  for (std::size_t i = 0; i < v.size(); ++i) r.v[i] += o.v[i];
  return r;
}

Coweight Coweight::operator-(const Coweight& o) const {
  Coweight r = *this;
  for (std::size_t i = 0; i < v.size(); ++i) r.v[i] -= o.v[i];
  return r;
}

std::string Coweight::str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

Coweight dual_coweight(const Coweight& lambda, int h) {
  int d = lambda.size();
  Coweight r;
  r.v.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    int x = lambda[d - 1 - i];
    if (x < 0 || x > h) throw OutOfRange("coweight entry outside [0,h]");
    r.v[static_cast<std::size_t>(i)] = h - x;
  }
  return r;
}

bool dominance_leq(const Coweight& nu, const Coweight& eta) {
  int d = nu.size();
  if (eta.size() != d) return false;
  int sn = 0, se = 0;
  for (int j = 0; j < d; ++j) {
    sn += nu[d - 1 - j];
    se += eta[d - 1 - j];
    if (sn < se) return false;
  }
  return sn == se;
}

int schubert_dim(const Coweight& eta) {
  int s = 0;
  for (int j = 0; j < eta.size(); ++j)
    for (int l = j + 1; l < eta.size(); ++l) s += eta[j] - eta[l];
  return s;
}

int rho_pairing(const Coweight& lambda) { return schubert_dim(lambda) / 2; }

std::vector<Coweight> dominant_coweights(int d, int lo, int hi, int sum) {
  std::vector<Coweight> out;
  std::vector<int> cur;
  std::function<void(int, int, int)> rec = [&](int pos, int maxv, int rem) {
    if (pos == d) {
      if (rem == 0) out.emplace_back(cur);
      return;
    }
    for (int x = std::min(maxv, hi); x >= lo; --x) {
      // remaining entries lie in [lo, x]
      int left = d - pos - 1;
      if (rem - x < lo * left || rem - x > x * left) continue;
      cur.push_back(x);
      rec(pos + 1, x, rem - x);
      cur.pop_back();
    }
  };
  rec(0, hi, sum);
  return out;
}

std::vector<Coweight> dominant_below(const Coweight& eta, int lo, int hi) {
  std::vector<Coweight> out;
  for (auto& c : dominant_coweights(eta.size(), lo, hi, eta.sum()))
    if (dominance_leq(c, eta)) out.push_back(c);
  return out;
}

// ------------------------------------------------------ elementary divisors

Coweight elementary_divisors(const SeriesMatrix& M0) {
  int n = M0.n();
  std::int64_t shift = M0.min_val();
  if (shift >= kExact) throw PrecisionExhausted("matrix is zero at precision");
  SeriesMatrix M = M0.shift(-shift);
  if (M.prec() >= kExact) {
    Series dt = M.det();
    if (dt.is_zero()) throw SingularMatrix("elementary divisors of a singular matrix");
    M = M.truncated(dt.val() + 1);
  }
  std::vector<int> out;
  for (int k = 0; k < n; ++k) {
    int bi = -1, bj = -1;
    std::int64_t best = kExact;
    for (int i = k; i < n; ++i)
      for (int j = k; j < n; ++j) {
        const Series& x = M(i, j);
        if (!x.is_zero() && x.val() < best) {
          best = x.val();
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) throw PrecisionExhausted("determinant not determined at precision");
    for (int j = 0; j < n; ++j) std::swap(M(k, j), M(bi, j));
    for (int i = 0; i < n; ++i) std::swap(M(i, k), M(i, bj));
    Series piv = M(k, k);
    Series unit_inv = piv.shift(-piv.val()).inverse(piv.prec() - piv.val());
    for (int i = k + 1; i < n; ++i) {
      if (M(i, k).is_zero()) continue;
      Series f = (M(i, k) * unit_inv).shift(-piv.val());
      for (int j = k; j < n; ++j) M(i, j) = M(i, j) - f * M(k, j);
    }
    for (int j = k + 1; j < n; ++j) {
      if (M(k, j).is_zero()) continue;
      Series f = (M(k, j) * unit_inv).shift(-piv.val());
      for (int i = k; i < n; ++i) M(i, j) = M(i, j) - M(i, k) * f;
    }
    out.push_back(static_cast<int>(best + shift));
  }
  Coweight r(out);
  return r.sorted();
}

// ---------------------------------------------------------------- lattices

FVec u_times(const FVec& x, int d, int h) {
  FVec r(x.size(), 0);
  for (int j = 0; j + 1 < h; ++j)
    for (int i = 0; i < d; ++i) r[static_cast<std::size_t>((j + 1) * d + i)] = x[static_cast<std::size_t>(j * d + i)];
  return r;
}

Lattice Lattice::from_span(const GF& F, int d, int h, const FRows& gens) {
  Lattice L;
  L.F_ = &F;
  L.d_ = d;
  L.h_ = h;
  FRows all;
  for (const auto& g : gens) {
    FVec x = g;
    for (int j = 0; j < h; ++j) {
      all.push_back(x);
      x = u_times(x, d, h);
    }
  }
  if (all.empty()) return L;
  rref(F, all);
  L.rows_ = std::move(all);
  return L;
}

Lattice Lattice::from_matrix(const SeriesMatrix& G, int h) {
  int d = G.n();
  const GF* F = nullptr;
  for (int i = 0; i < d && !F; ++i)
    for (int j = 0; j < d && !F; ++j)
      if (!G(i, j).is_zero()) F = G(i, j).lead().F;
  if (!F) throw RankMismatch("zero matrix");
  FRows gens;
  for (int j = 0; j < d; ++j) {
    FVec x(static_cast<std::size_t>(d * h), 0);
    for (int i = 0; i < d; ++i) {
      const Series& s = G(i, j);
      if (!s.is_zero() && s.val() < 0) throw OutOfRange("lattice matrix is not integral");
      if (s.prec() < h) throw PrecisionExhausted("lattice matrix not known modulo u^h");
      for (int k = 0; k < h; ++k) x[static_cast<std::size_t>(k * d + i)] = s.coeff(k).v;
    }
    gens.push_back(std::move(x));
  }
  Lattice L = from_span(*F, d, h, gens);
  Series det = G.det();
  if (det.is_zero()) throw SingularMatrix("lattice matrix is singular");
  if (L.colength() != det.val()) throw OutOfRange("lattice does not contain u^h times the ambient lattice");
  return L;
}

bool Lattice::contains(const FVec& x) const {
  FRows t = rows_;
  t.push_back(x);
  return rank_of(*F_, t) == dim();
}

bool Lattice::is_u_stable() const {
  for (const auto& r : rows_)
    if (!contains(u_times(r, d_, h_))) return false;
  return true;
}

Coweight Lattice::type() const {
  std::vector<int> c(static_cast<std::size_t>(h_ + 1), 0);
  for (int j = 1; j <= h_; ++j) {
    FRows proj;
    for (const auto& r : rows_) proj.emplace_back(r.begin(), r.begin() + j * d_);
    int rk = proj.empty() ? 0 : rank_of(*F_, proj);
    c[static_cast<std::size_t>(j)] = j * d_ - rk;
  }
  std::vector<int> m;
  for (int j = 1; j <= h_; ++j) m.push_back(c[static_cast<std::size_t>(j)] - c[static_cast<std::size_t>(j - 1)]);
  Coweight a;
  for (int i = 1; i <= d_; ++i) {
    int cnt = 0;
    for (int x : m)
      if (x >= i) ++cnt;
    a.v.push_back(cnt);
  }
  return a;
}

SeriesMatrix Lattice::basis_matrix() const {
  SeriesMatrix H(d_);
  Fe one(*F_, 1);
  for (int i = 0; i < d_; ++i) {
    // column order: coordinates < i, then coordinate i by degree, then the rest
    std::vector<int> order;
    for (int j = 0; j < h_; ++j)
      for (int c = 0; c < i; ++c) order.push_back(j * d_ + c);
    int block = static_cast<int>(order.size());
    for (int j = 0; j < h_; ++j) order.push_back(j * d_ + i);
    for (int j = 0; j < h_; ++j)
      for (int c = i + 1; c < d_; ++c) order.push_back(j * d_ + c);
    FRows perm;
    for (const auto& r : rows_) {
      FVec x;
      for (int c : order) x.push_back(r[static_cast<std::size_t>(c)]);
      perm.push_back(std::move(x));
    }
    auto piv = rref(*F_, perm);
    int best = -1;
    for (std::size_t r = 0; r < piv.size(); ++r)
      if (piv[r] >= block && piv[r] < block + h_) {
        best = static_cast<int>(r);
        break;
      }
    if (best < 0) {
      H(i, i) = Series::monomial(one, h_);
      continue;
    }
    FVec col(static_cast<std::size_t>(n()), 0);
    for (std::size_t k = 0; k < order.size(); ++k) col[static_cast<std::size_t>(order[k])] = perm[best][k];
    for (int r = 0; r < d_; ++r) {
      std::vector<Fe> c;
      for (int j = 0; j < h_; ++j) c.emplace_back(*F_, col[static_cast<std::size_t>(j * d_ + r)]);
      H(r, i) = Series::from_coeffs(0, std::move(c));
    }
  }
  return H;
}

std::string Lattice::str() const {
  std::ostringstream os;
  os << "span{";
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    os << (r ? ", " : "");
    bool first = true;
    for (std::size_t j = 0; j < rows_[r].size(); ++j) {
      if (!rows_[r][j]) continue;
      if (!first) os << "+";
      first = false;
      if (rows_[r][j] != 1) os << rows_[r][j] << "*";
      os << "y" << j;
    }
  }
  os << "}";
  return os.str();
}

std::vector<Lattice> enumerate_lattices(const GF& F, int d, int h, int colength) {
  std::vector<Lattice> out;
  std::vector<int> a(static_cast<std::size_t>(d), 0);
  int n = d * h;
  std::function<void(int, int)> rec = [&](int pos, int rem) {
    if (pos == d) {
      if (rem != 0) return;
      // free coefficients: entry (i,j), i<j, degree < a_i
      std::vector<std::pair<int, int>> slots;  // (row i, column j) per coefficient, with degree
      std::vector<int> degs;
      for (int j = 0; j < d; ++j)
        for (int i = 0; i < j; ++i)
          for (int k = 0; k < a[static_cast<std::size_t>(i)]; ++k) {
            slots.emplace_back(i, j);
            degs.push_back(k);
          }
      std::vector<std::uint32_t> val(slots.size(), 0);
      while (true) {
        FRows gens;
        for (int j = 0; j < d; ++j) {
          FVec x(static_cast<std::size_t>(n), 0);
          int aj = a[static_cast<std::size_t>(j)];
          if (aj < h) x[static_cast<std::size_t>(aj * d + j)] = 1;
          for (std::size_t s = 0; s < slots.size(); ++s)
            if (slots[s].second == j) x[static_cast<std::size_t>(degs[s] * d + slots[s].first)] = val[s];
          gens.push_back(std::move(x));
        }
        Lattice L = Lattice::from_span(F, d, h, gens);
        if (L.colength() == colength) out.push_back(std::move(L));
        std::size_t t = 0;
        while (t < val.size()) {
          if (++val[t] < F.q()) break;
          val[t] = 0;
          ++t;
        }
        if (t == val.size()) break;
      }
      return;
    }
    for (int x = 0; x <= std::min(h, rem); ++x) {
      a[static_cast<std::size_t>(pos)] = x;
      rec(pos + 1, rem - x);
    }
  };
  rec(0, colength);
  return out;
}

bool schubert_member(const Lattice& L, const Coweight& eta) { return dominance_leq(L.type(), eta); }
bool schubert_member(const SeriesMatrix& G, const Coweight& eta) {
  return dominance_leq(elementary_divisors(G), eta);
}

// ------------------------------------------------------------------ wedges

std::uint64_t labels_mask(const std::vector<int>& labels) {
  std::uint64_t m = 0;
  for (int l : labels) m |= std::uint64_t{1} << l;
  return m;
}

std::vector<int> mask_labels(std::uint64_t mask) {
  std::vector<int> out;
  for (int i = 0; i < 64; ++i)
    if (mask >> i & 1) out.push_back(i);
  return out;
}

namespace {

int popcount(std::uint64_t x) { return __builtin_popcountll(x); }

// Sign of the permutation sorting the sequence (labels of a in order, then
// labels of b in order), with a and b disjoint.
int concat_sign(std::uint64_t a, std::uint64_t b) {
  int inv = 0;
  for (int i = 0; i < 64; ++i)
    if (b >> i & 1) inv += popcount(a >> (i + 1));
  return (inv % 2) ? -1 : 1;
}

// Sign of the sequence `seq` (distinct labels) relative to sorted order.
int seq_sign(const std::vector<int>& seq) {
  int inv = 0;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (seq[i] > seq[j]) ++inv;
  return (inv % 2) ? -1 : 1;
}

void for_each_subset(int n, int k, const std::function<void(std::uint64_t)>& fn) {
  if (k > n || k < 0) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::uint64_t m = 0;
    for (int x : idx) m |= std::uint64_t{1} << x;
    fn(m);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

WedgeVector WedgeVector::basis(int n, const std::vector<int>& labels, const GF& F) {
  WedgeVector w;
  w.n = n;
  w.k = static_cast<int>(labels.size());
  int s = seq_sign(labels);
  w.c[labels_mask(labels)] = s > 0 ? Fe(F, 1) : -Fe(F, 1);
  return w;
}

Fe WedgeVector::coeff(std::uint64_t mask) const {
  auto it = c.find(mask);
  return it == c.end() ? Fe() : it->second;
}

void WedgeVector::add(std::uint64_t mask, const Fe& x) {
  if (x.is_zero()) return;
  auto it = c.find(mask);
  if (it == c.end()) {
    c.emplace(mask, x);
    return;
  }
  it->second += x;
  if (it->second.is_zero()) c.erase(it);
}

WedgeVector WedgeVector::scaled(const Fe& a) const {
  WedgeVector r{n, k, {}};
  for (const auto& [m, x] : c) r.add(m, x * a);
  return r;
}

WedgeVector WedgeVector::operator+(const WedgeVector& o) const {
  WedgeVector r = *this;
  for (const auto& [m, x] : o.c) r.add(m, x);
  return r;
}

WedgeVector WedgeVector::operator-(const WedgeVector& o) const {
  WedgeVector r = *this;
  for (const auto& [m, x] : o.c) r.add(m, -x);
  return r;
}

WedgeVector WedgeVector::normalized() const {
  if (c.empty()) return *this;
  return scaled(c.begin()->second.inv());
}

bool WedgeVector::operator==(const WedgeVector& o) const {
  if (c.size() != o.c.size()) return false;
  auto it = o.c.begin();
  for (const auto& [m, x] : c) {
    if (it->first != m || it->second != x) return false;
    ++it;
  }
  return true;
}

std::string WedgeVector::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, x] : c) {
    if (!first) os << " + ";
    first = false;
    os << x << "*y";
    auto l = mask_labels(m);
    for (std::size_t i = 0; i < l.size(); ++i) os << (i ? "," : "") << l[i];
  }
  if (first) os << "0";
  return os.str();
}

WedgeVector pluecker(const Lattice& L) {
  WedgeVector w;
  w.n = L.n();
  w.k = L.dim();
  if (!L.is_u_stable()) throw RankMismatch("lattice is not u-stable");
  const GF& F = L.field();
  for_each_subset(w.n, w.k, [&](std::uint64_t m) {
    auto cols = mask_labels(m);
    FRows minor;
    for (const auto& r : L.rows()) {
      FVec row;
      for (int c : cols) row.push_back(r[static_cast<std::size_t>(c)]);
      minor.push_back(std::move(row));
    }
    std::uint32_t dv = w.k == 0 ? 1 : det_of(F, minor);
    if (dv) w.c[m] = Fe(F, dv);
  });
  return w;
}

int gm_weight(const std::vector<int>& labels, int d) {
  int s = 0;
  for (int l : labels) s += l / d;
  return s;
}

Fe wedge_pairing(const WedgeVector& w, const WedgeVector& v) {
  Fe acc;
  if (w.k + v.k != w.n) return acc;
  std::uint64_t full = w.n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << w.n) - 1);
  for (const auto& [m, x] : w.c) {
    std::uint64_t comp = full & ~m;
    Fe y = v.coeff(comp);
    if (y.is_zero() && !y.F) continue;
    if (y.is_zero()) continue;
    Fe t = x * y;
    acc = concat_sign(m, comp) > 0 ? acc + t : acc - t;
  }
  return acc;
}

FRows derivation_matrix(const DerivationData& D, int d, int h) {
  int n = d * h;
  const GF* F = nullptr;
  if (!D.alpha.is_zero()) F = D.alpha.lead().F;
  for (int i = 0; i < d && !F; ++i)
    for (int j = 0; j < d && !F; ++j)
      if (!D.N0(i, j).is_zero()) F = D.N0(i, j).lead().F;
  FRows M(static_cast<std::size_t>(n), FVec(static_cast<std::size_t>(n), 0));
  if (!F) return M;
  if (D.alpha.prec() < h) throw PrecisionExhausted("scalar part not known modulo u^h");
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < d; ++i) {
      int col = j * d + i;
      for (int r = 0; r < d; ++r) {
        const Series& s = D.N0(r, i);
        if (s.prec() < h) throw PrecisionExhausted("N-part not known modulo u^h");
        if (!s.is_zero() && s.val() < 0) throw PreconditionFailed("N-part has a pole");
        for (int k = 0; j + k < h; ++k) {
          Fe a = s.coeff(k);
          if (a.is_zero()) continue;
          auto& slot = M[static_cast<std::size_t>((j + k) * d + r)][static_cast<std::size_t>(col)];
          slot = F->add(slot, a.v);
        }
      }
      if (j == 0) continue;
      for (int k = 0; j + k < h; ++k) {
        Fe a = D.alpha.coeff(k).scaled(j);
        if (a.is_zero()) continue;
        auto& slot = M[static_cast<std::size_t>((j + k) * d + i)][static_cast<std::size_t>(col)];
        slot = F->add(slot, a.v);
      }
    }
  return M;
}

namespace {

WedgeVector act_with_matrix(const GF& F, const FRows& M, const WedgeVector& w) {
  WedgeVector r{w.n, w.k, {}};
  for (const auto& [mask, x] : w.c) {
    auto labels = mask_labels(mask);
    for (std::size_t t = 0; t < labels.size(); ++t) {
      int s = labels[t];
      for (int m = 0; m < w.n; ++m) {
        std::uint32_t a = M[static_cast<std::size_t>(m)][static_cast<std::size_t>(s)];
        if (!a) continue;
        if (m != s && (mask >> m & 1)) continue;
        auto seq = labels;
        seq[t] = m;
        int sg = seq_sign(seq);
        std::uint64_t nm = (mask & ~(std::uint64_t{1} << s)) | (std::uint64_t{1} << m);
        Fe val = x * Fe(F, a);
        r.add(nm, sg > 0 ? val : -val);
      }
    }
  }
  return r;
}

const GF& field_of(const Lattice& L) { return L.field(); }

}  // namespace

WedgeVector derivation_act_wedge(const DerivationData& D, const WedgeVector& w, int d, int h) {
  FRows M = derivation_matrix(D, d, h);
  const GF* F = nullptr;
  for (const auto& [m, x] : w.c) F = x.F;
  if (!F) return w;
  return act_with_matrix(*F, M, w);
}

int s_locus_weight_bound(const Coweight& mu, int h) {
  Coweight ms = dual_coweight(mu, h);
  int b = 0;
  for (int x : ms.v)
    for (int j = 1; j <= x - 1; ++j) b += j;
  return b;
}

int eigen_weight(const Coweight& nu, int h) {
  Coweight ns = dual_coweight(nu, h);
  int b = 0;
  for (int x : ns.v)
    for (int j = x; j <= h - 1; ++j) b += j;
  return b;
}

bool weight_bound_violated(const Coweight& mu, int h, int p) {
  for (const auto& nu : dominant_below(mu, 0, h))
    if (eigen_weight(nu, h) >= p) return true;
  return false;
}

std::vector<Fe> s_locus_functionals(const Lattice& L, const DerivationData& D, int i, const Coweight& mu,
                                    bool full_basis) {
  const GF& F = field_of(L);
  int d = L.d(), h = L.h(), n = L.n();
  if (i < 1) throw OutOfRange("step index must be >= 1");
  if (D.N0.min_val() < 1) throw PreconditionFailed("N-part must have valuation >= 1");
  Coweight ms = dual_coweight(mu, h);
  int r = ms.sum();
  if (L.colength() != r) throw RankMismatch("lattice colength differs from |mu*|");
  DerivationData eff{D.N0, D.alpha.shift(i - 1)};
  Fe alpha0 = eff.alpha.is_zero() || eff.alpha.val() > 0 ? Fe(F, 0) : eff.alpha.coeff(0);
  int B = s_locus_weight_bound(mu, h);
  Fe C = alpha0.scaled(B);
  FRows M = derivation_matrix(eff, d, h);
  WedgeVector v = pluecker(L);
  std::vector<Fe> out;
  for_each_subset(n, r, [&](std::uint64_t m) {
    auto labels = mask_labels(m);
    if (!full_basis && gm_weight(labels, d) >= B) return;
    WedgeVector w = WedgeVector::basis(n, labels, F);
    WedgeVector Dw = act_with_matrix(F, M, w) - w.scaled(C);
    Fe val = wedge_pairing(Dw, v);
    out.push_back(val.F ? val : Fe(F, 0));
  });
  return out;
}

bool s_locus_check(const Lattice& L, const DerivationData& D, int i, const Coweight& mu, int p,
                   const SLocusOptions& opt) {
  if (opt.warnings && weight_bound_violated(mu, L.h(), p))
    opt.warnings->push_back("WeightBoundViolation: weight sum reaches p=" + std::to_string(p) + " for some nu <= " +
                            mu.str());
  for (const Fe& x : s_locus_functionals(L, D, i, mu, opt.full_basis))
    if (!x.is_zero()) return false;
  return true;
}

Fe s_locus_equation_d3(const Lattice& L, const std::vector<std::vector<Fe>>& nm, int i, const Fe& c0) {
  if (L.d() != 3 || L.h() != 2) throw RankMismatch("section is defined for d=3, h=2");
  const GF& F = L.field();
  WedgeVector v = pluecker(L);
  auto y = [&](int a, int b, int c) { return WedgeVector::basis(6, {a, b, c}, F); };
  WedgeVector s{6, 3, {}};
  s = s + y(1, 2, 3).scaled(nm[0][0]) + y(1, 2, 4).scaled(nm[1][0]) + y(1, 2, 5).scaled(nm[2][0]);
  s = s - y(0, 2, 3).scaled(nm[0][1]) - y(0, 2, 4).scaled(nm[1][1]) - y(0, 2, 5).scaled(nm[2][1]);
  s = s + y(0, 1, 3).scaled(nm[0][2]) + y(0, 1, 4).scaled(nm[1][2]) + y(0, 1, 5).scaled(nm[2][2]);
  // Constant term enters with a minus sign (eigenvalue bookkeeping of the
  // trace on V_h); see s_locus_functionals.
  if (i == 1) s = s - y(0, 1, 2).scaled(c0);
  Fe val = wedge_pairing(s, v);
  return val.F ? val : Fe(F, 0);
}

bool flag_member(const Lattice& L, const Coweight& nu, int h) {
  if (L.h() != h) return false;
  const GF& F = L.field();
  int d = L.d();
  // A_j = constant vectors a with u^j a in L
  std::vector<int> dimA(static_cast<std::size_t>(h), 0);
  int total = 0;
  for (int j = 0; j < h; ++j) {
    FRows t = L.rows();
    for (int i = 0; i < d; ++i) {
      FVec e(static_cast<std::size_t>(L.n()), 0);
      e[static_cast<std::size_t>(j * d + i)] = 1;
      t.push_back(e);
    }
    int sum_dim = rank_of(F, t);
    dimA[static_cast<std::size_t>(j)] = L.dim() + d - sum_dim;
    total += dimA[static_cast<std::size_t>(j)];
  }
  if (total != L.dim()) return false;
  // Fil^i = A_{h-i} for 1 <= i <= h, Fil^0 = everything, Fil^{h+1} = 0.
  auto fil = [&](int i) {
    if (i <= 0) return d;
    if (i > h) return 0;
    return dimA[static_cast<std::size_t>(h - i)];
  };
  std::vector<int> mult(static_cast<std::size_t>(h + 1), 0);
  for (int x : nu.v) {
    if (x < 0 || x > h) return false;
    ++mult[static_cast<std::size_t>(x)];
  }
  for (int i = 0; i <= h; ++i)
    if (fil(i) - fil(i + 1) != mult[static_cast<std::size_t>(i)]) return false;
  return L.type() == dual_coweight(nu.sorted(), h);
}

bool stabilization_check(const Lattice& L, const DerivationData& D) {
  FRows M = derivation_matrix(D, L.d(), L.h());
  const GF& F = L.field();
  for (const auto& r : L.rows()) {
    FVec img(static_cast<std::size_t>(L.n()), 0);
    for (int a = 0; a < L.n(); ++a)
      for (int b = 0; b < L.n(); ++b)
        if (M[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] && r[static_cast<std::size_t>(b)])
          img[static_cast<std::size_t>(a)] =
              F.add(img[static_cast<std::size_t>(a)],
                    F.mul(M[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)], r[static_cast<std::size_t>(b)]));
    if (!L.contains(img)) return false;
  }
  return true;
}

bool eigenvector_check(const Lattice& L, const DerivationData& D, const Coweight& nu, int h) {
  const GF& F = L.field();
  WedgeVector v = pluecker(L);
  WedgeVector Dv = act_with_matrix(F, derivation_matrix(D, L.d(), L.h()), v);
  Fe alpha0 = D.alpha.is_zero() || D.alpha.val() > 0 ? Fe(F, 0) : D.alpha.coeff(0);
  Fe lam = alpha0.scaled(eigen_weight(nu, h));
  return (Dv - v.scaled(lam)).is_zero();
}

}  // namespace bkgr
