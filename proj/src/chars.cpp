#include "bkgr/chars.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "bkgr/errors.hpp"
#include "bkgr/linalg.hpp"

namespace bkgr {

namespace {

void partitions_rec(int left, int cap, Partition& cur, std::vector<Partition>& out) {
  if (left == 0) {
    out.push_back(cur);
    return;
  }
  for (int k = std::min(left, cap); k >= 1; --k) {
    cur.push_back(k);
    partitions_rec(left - k, k, cur, out);
    cur.pop_back();
  }
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::uint32_t least_primitive_root(const GF& F) {
  const std::uint32_t l = F.q();
  std::vector<std::uint32_t> primes;
  std::uint32_t m = l - 1;
  for (std::uint32_t d = 2; d * d <= m; ++d)
    if (m % d == 0) {
      primes.push_back(d);
      while (m % d == 0) m /= d;
    }
  if (m > 1) primes.push_back(m);
  for (std::uint32_t a = 1; a < l; ++a) {
    bool ok = true;
    for (auto r : primes) ok = ok && F.pow(a, (l - 1) / r) != 1;
    if (ok) return a;
  }
  return 1;
}

std::vector<std::uint32_t> mat_mul(const GF& F, int n, const std::vector<std::uint32_t>& a,
                                   const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> r(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      std::uint32_t x = a[static_cast<std::size_t>(i * n + k)];
      if (!x) continue;
      for (int j = 0; j < n; ++j)
        r[static_cast<std::size_t>(i * n + j)] =
            F.add(r[static_cast<std::size_t>(i * n + j)], F.mul(x, b[static_cast<std::size_t>(k * n + j)]));
    }
  return r;
}

}  // namespace

std::vector<Partition> partitions(int n) {
  std::vector<Partition> out;
  Partition cur;
  partitions_rec(n, n, cur, out);
  return out;
}

bool is_partition(const Partition& P) {
  if (P.empty()) return false;
  for (std::size_t i = 0; i < P.size(); ++i)
    if (P[i] < 1 || (i && P[i] > P[i - 1])) return false;
  return true;
}

std::string partition_str(const Partition& P) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < P.size(); ++i) os << (i ? "," : "") << P[i];
  os << ")";
  return os.str();
}

int moebius(int n) {
  int r = 1;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return 0;
      r = -r;
    }
  if (n > 1) r = -r;
  return r;
}

std::int64_t moebius_orbit_count(std::uint32_t q, int n) {
  if (n < 1 || !GF::is_prime_power(q)) throw PreconditionFailed("q must be a prime power and n >= 1");
  std::int64_t s = 0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) s += moebius(d) * static_cast<std::int64_t>(ipow(q, n / d));
  return (n == 1 ? -1 : 0) + s / n;
}

std::vector<std::vector<std::uint32_t>> galois_orbits(std::uint32_t q, int n) {
  const std::uint64_t Q = ipow(q, n);
  if (Q > 4096) throw OutOfRange("F_{q^n} beyond the field table");
  const GF& K = GF::of_order(static_cast<std::uint32_t>(Q));
  std::vector<char> seen(Q, 0);
  std::vector<std::vector<std::uint32_t>> out;
  for (std::uint32_t x = 1; x < Q; ++x) {
    if (seen[x]) continue;
    std::vector<std::uint32_t> orb;
    std::uint32_t y = x;
    do {
      orb.push_back(y);
      seen[y] = 1;
      y = K.pow(y, q);
    } while (y != x);
    if (static_cast<int>(orb.size()) != n) continue;
    std::sort(orb.begin(), orb.end());
    out.push_back(orb);
  }
  return out;
}

SequenceResult select_sequence(std::uint32_t q, const Partition& P) {
  if (!is_partition(P)) throw PreconditionFailed("not a partition");
  SequenceResult res;
  std::map<int, std::vector<std::vector<std::uint32_t>>> pool;
  std::map<int, std::size_t> used;
  for (int m : P) {
    if (!pool.count(m)) pool[m] = galois_orbits(q, m);
    auto& orbs = pool[m];
    std::size_t& k = used[m];
    if (k >= orbs.size()) {
      std::ostringstream os;
      os << "F_" << ipow(q, m) << " has " << orbs.size() << " orbit(s) with trivial stabilizer, need "
         << std::count(P.begin(), P.end(), m);
      res.reason = os.str();
      res.elems.clear();
      return res;
    }
    res.elems.push_back(orbs[k++].front());
  }
  res.ok = true;
  return res;
}

bool sequence_valid(std::uint32_t q, const Partition& P, const std::vector<std::uint32_t>& elems) {
  if (elems.size() != P.size()) return false;
  std::vector<std::vector<std::uint32_t>> orbs;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const GF& K = GF::of_order(static_cast<std::uint32_t>(ipow(q, P[i])));
    if (elems[i] == 0 || elems[i] >= K.q()) return false;
    std::vector<std::uint32_t> o;
    std::uint32_t y = elems[i];
    do {
      o.push_back(y);
      y = K.pow(y, q);
    } while (y != elems[i]);
    if (static_cast<int>(o.size()) != P[i]) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (P[j] == P[i] && std::find(o.begin(), o.end(), elems[j]) != o.end()) return false;
    orbs.push_back(o);
  }
  return true;
}

// ------------------------------------------------------------------ groups

int GroupTable::find(const std::vector<std::uint32_t>& m) const {
  auto it = index_map.find(m);
  return it == index_map.end() ? -1 : it->second;
}

std::vector<int> GroupTable::p_regular_classes() const {
  std::vector<int> out;
  const int p = F->p();
  for (int c = 0; c < classes(); ++c)
    if (order[static_cast<std::size_t>(reps[static_cast<std::size_t>(c)])] % p != 0) out.push_back(c);
  return out;
}

GroupTable make_gl(int n, std::uint32_t q) {
  int p = 0, k = 0;
  if (!GF::is_prime_power(q, &p, &k) || k != 1) throw PreconditionFailed("q must be prime");
  const std::uint64_t cells = ipow(q, n * n);
  if (cells > (1u << 16)) throw BudgetExceeded("GL_n(F_q) too large to tabulate");
  GroupTable G;
  G.n = n;
  G.q = q;
  G.F = &GF::get(p, 1);
  const GF& F = *G.F;
  for (std::uint64_t a = 0; a < cells; ++a) {
    std::vector<std::uint32_t> m(static_cast<std::size_t>(n * n));
    std::uint64_t x = a;
    for (auto& v : m) {
      v = static_cast<std::uint32_t>(x % q);
      x /= q;
    }
    FRows rows(static_cast<std::size_t>(n), FVec(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m[static_cast<std::size_t>(i * n + j)];
    if (rank_of(F, rows) != n) continue;
    G.index_map[m] = G.size();
    G.elems.push_back(std::move(m));
  }
  const auto N = static_cast<std::size_t>(G.size());
  G.mul.assign(N * N, -1);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) G.mul[a * N + b] = G.find(mat_mul(F, n, G.elems[a], G.elems[b]));
  std::vector<std::uint32_t> id(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i * n + i)] = 1;
  G.identity = G.find(id);
  G.inv.assign(N, -1);
  G.order.assign(N, 0);
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t b = 0; b < N; ++b)
      if (G.mul[a * N + b] == G.identity) G.inv[a] = static_cast<int>(b);
    int o = 1;
    for (int y = static_cast<int>(a); y != G.identity; y = G.prod(y, static_cast<int>(a))) ++o;
    G.order[a] = o;
  }
  G.cls.assign(N, -1);
  for (std::size_t a = 0; a < N; ++a) {
    if (G.cls[a] >= 0) continue;
    const int c = G.classes();
    G.reps.push_back(static_cast<int>(a));
    int sz = 0;
    for (std::size_t x = 0; x < N; ++x) {
      int y = G.prod(G.prod(G.inv[x], static_cast<int>(a)), static_cast<int>(x));
      if (G.cls[static_cast<std::size_t>(y)] < 0) {
        G.cls[static_cast<std::size_t>(y)] = c;
        ++sz;
      }
    }
    G.class_size.push_back(sz);
    G.centralizer.push_back(static_cast<int>(N) / sz);
  }
  return G;
}

Torus make_torus(const GroupTable& G, const Partition& P) {
  if (!is_partition(P) || std::accumulate(P.begin(), P.end(), 0) != G.n) throw PreconditionFailed("partition of n");
  const GF& F = *G.F;
  const std::uint32_t q = G.q;
  Torus T;
  T.P = P;
  // companion block of the generator of F_{q^m} in the basis 1, x, ..., x^{m-1}
  std::vector<std::vector<std::vector<std::uint32_t>>> powers;
  for (int m : P) {
    const GF& K = GF::get(F.p(), m);
    const std::uint32_t g = K.generator();
    std::vector<std::uint32_t> blk(static_cast<std::size_t>(m * m));
    for (int j = 0; j < m; ++j) {
      std::uint32_t col = K.mul(g, static_cast<std::uint32_t>(ipow(q, j)));
      for (int i = 0; i < m; ++i) {
        blk[static_cast<std::size_t>(i * m + j)] = col % q;
        col /= q;
      }
    }
    const int o = static_cast<int>(K.q() - 1);
    T.orders.push_back(o);
    std::vector<std::vector<std::uint32_t>> pw;
    std::vector<std::uint32_t> cur(static_cast<std::size_t>(m * m), 0);
    for (int i = 0; i < m; ++i) cur[static_cast<std::size_t>(i * m + i)] = 1;
    for (int a = 0; a < o; ++a) {
      pw.push_back(cur);
      cur = mat_mul(F, m, cur, blk);
    }
    powers.push_back(std::move(pw));
  }
  std::vector<int> a(P.size(), 0);
  while (true) {
    std::vector<std::uint32_t> M(static_cast<std::size_t>(G.n * G.n), 0);
    int off = 0;
    for (std::size_t b = 0; b < P.size(); ++b) {
      const int m = P[b];
      const auto& blk = powers[b][static_cast<std::size_t>(a[b])];
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          M[static_cast<std::size_t>((off + i) * G.n + off + j)] = blk[static_cast<std::size_t>(i * m + j)];
      off += m;
    }
    const int id = G.find(M);
    if (id < 0 || T.log.count(id)) throw PreconditionFailed("torus embedding is not injective");
    T.log[id] = a;
    std::size_t b = 0;
    while (b < a.size() && ++a[b] == T.orders[b]) a[b++] = 0;
    if (b == a.size()) break;
  }
  return T;
}

std::uint64_t torus_exponent(int n, std::uint32_t q) {
  std::uint64_t L = 1;
  for (int m = 1; m <= n; ++m) L = std::lcm(L, ipow(q, m) - 1);
  return L;
}

void check_modulus(const GroupTable& G, std::uint32_t l) {
  if (!is_prime(l) || l > 4096) throw BadModulus("l must be a prime <= 4096");
  if (static_cast<std::uint64_t>(G.size()) % l == 0) throw BadModulus("l divides |G|");
  if ((l - 1) % torus_exponent(G.n, G.q) != 0) throw BadModulus("l must be 1 mod the torus exponent");
}

std::vector<std::uint32_t> admissible_moduli(const GroupTable& G, int count) {
  std::vector<std::uint32_t> out;
  const std::uint64_t L = torus_exponent(G.n, G.q);
  for (std::uint64_t l = L + 1; l <= 4096 && static_cast<int>(out.size()) < count; l += L)
    if (is_prime(l) && static_cast<std::uint64_t>(G.size()) % l != 0) out.push_back(static_cast<std::uint32_t>(l));
  return out;
}

std::vector<std::vector<int>> characters(const Torus& T) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(T.orders.size(), 0);
  while (true) {
    out.push_back(c);
    std::size_t b = 0;
    while (b < c.size() && ++c[b] == T.orders[b]) c[b++] = 0;
    if (b == c.size()) break;
  }
  return out;
}

std::uint32_t character_value(const GroupTable& G, const Torus& T, const std::vector<int>& c, int t, std::uint32_t l) {
  const GF& Fl = GF::get(static_cast<int>(l), 1);
  const std::uint64_t L = torus_exponent(G.n, G.q);
  const std::uint32_t zeta = Fl.pow(least_primitive_root(Fl), static_cast<std::int64_t>((l - 1) / L));
  const auto& a = T.log.at(t);
  std::uint64_t ex = 0;
  for (std::size_t b = 0; b < a.size(); ++b)
    ex = (ex + static_cast<std::uint64_t>(a[b]) * static_cast<std::uint64_t>(c[b]) * (L / static_cast<std::uint64_t>(T.orders[b]))) % L;
  return Fl.pow(zeta, static_cast<std::int64_t>(ex));
}

namespace {

std::uint32_t induce_at(const GroupTable& G, const Torus& T, int g, std::uint32_t l,
                        const std::map<int, std::uint32_t>& chi) {
  const GF& Fl = GF::get(static_cast<int>(l), 1);
  std::uint32_t acc = 0;
  for (int x = 0; x < G.size(); ++x) {
    int y = G.prod(G.prod(G.inv[static_cast<std::size_t>(x)], g), x);
    auto it = chi.find(y);
    if (it != chi.end()) acc = Fl.add(acc, it->second);
  }
  return Fl.div(acc, Fl.from_int(T.size()));
}

std::map<int, std::uint32_t> chi_table(const GroupTable& G, const Torus& T, const std::vector<int>& c, std::uint32_t l) {
  std::map<int, std::uint32_t> chi;
  for (const auto& [t, a] : T.log) chi[t] = character_value(G, T, c, t, l);
  return chi;
}

}  // namespace

ClassFunction induce(const GroupTable& G, const Torus& T, const std::vector<int>& c, std::uint32_t l) {
  check_modulus(G, l);
  auto chi = chi_table(G, T, c, l);
  ClassFunction f;
  f.l = l;
  f.values.resize(static_cast<std::size_t>(G.classes()));
  for (int k = 0; k < G.classes(); ++k)
    f.values[static_cast<std::size_t>(k)] = induce_at(G, T, G.reps[static_cast<std::size_t>(k)], l, chi);
  return f;
}

std::vector<std::uint32_t> induce_pointwise(const GroupTable& G, const Torus& T, const std::vector<int>& c,
                                            std::uint32_t l) {
  check_modulus(G, l);
  auto chi = chi_table(G, T, c, l);
  std::vector<std::uint32_t> v(static_cast<std::size_t>(G.size()));
  for (int g = 0; g < G.size(); ++g) v[static_cast<std::size_t>(g)] = induce_at(G, T, g, l, chi);
  return v;
}

std::uint32_t inner_product(const GroupTable& G, const ClassFunction& f, const ClassFunction& g) {
  const GF& Fl = GF::get(static_cast<int>(f.l), 1);
  std::uint32_t acc = 0;
  for (int x = 0; x < G.size(); ++x) {
    const auto cx = static_cast<std::size_t>(G.cls[static_cast<std::size_t>(x)]);
    const auto ci = static_cast<std::size_t>(G.cls[static_cast<std::size_t>(G.inv[static_cast<std::size_t>(x)])]);
    acc = Fl.add(acc, Fl.mul(f.values[cx], g.values[ci]));
  }
  return Fl.div(acc, Fl.from_int(G.size()));
}

std::uint32_t inner_product_torus(const GroupTable& G, const Torus& T, const ClassFunction& f,
                                  const std::vector<int>& c, std::uint32_t l) {
  const GF& Fl = GF::get(static_cast<int>(l), 1);
  std::uint32_t acc = 0;
  for (const auto& [t, a] : T.log) {
    const int ti = G.inv[static_cast<std::size_t>(t)];
    acc = Fl.add(acc, Fl.mul(f.values[static_cast<std::size_t>(G.cls[static_cast<std::size_t>(t)])],
                             character_value(G, T, c, ti, l)));
  }
  return Fl.div(acc, Fl.from_int(T.size()));
}

SpanResult spanning_rank(const GroupTable& G, std::uint32_t l) {
  check_modulus(G, l);
  const GF& Fl = GF::get(static_cast<int>(l), 1);
  const auto cols = G.p_regular_classes();
  FRows rows;
  for (const auto& P : partitions(G.n)) {
    Torus T = make_torus(G, P);
    for (const auto& c : characters(T)) {
      ClassFunction f = induce(G, T, c, l);
      FVec r;
      for (int k : cols) r.push_back(f.values[static_cast<std::size_t>(k)]);
      rows.push_back(std::move(r));
    }
  }
  SpanResult res;
  res.l = l;
  res.rows = static_cast<int>(rows.size());
  res.p_regular = static_cast<int>(cols.size());
  res.rank = rank_of(Fl, rows);
  return res;
}

SpanResult spanning_rank(int n, std::uint32_t q, std::uint32_t l) { return spanning_rank(make_gl(n, q), l); }

SpanCheck spanning_check(int n, std::uint32_t q) {
  GroupTable G = make_gl(n, q);
  SpanCheck out;
  for (std::uint32_t l : admissible_moduli(G, 5)) {
    out.tried.push_back(l);
    out.last = spanning_rank(G, l);
    if (out.last.full()) {
      out.full = true;
      break;
    }
  }
  return out;
}

}  // namespace bkgr
