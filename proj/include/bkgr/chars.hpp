#pragma once
// Finite combinatorics for GL_n(F_q): Galois orbit counts, sequence
// selection, tori and induced class functions, and the spanning rank check.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bkgr/field.hpp"

namespace bkgr {

using Partition = std::vector<int>;  // weakly decreasing, positive
std::vector<Partition> partitions(int n);
bool is_partition(const Partition& P);
std::string partition_str(const Partition& P);

int moebius(int n);
// -[n = 1] + n^{-1} sum_{d | n} mu(d) q^{n/d}
std::int64_t moebius_orbit_count(std::uint32_t q, int n);
// Orbits of x -> x^q on the nonzero elements of F_{q^n} with trivial
// stabilizer, each orbit sorted; orbits ordered by their least element.
std::vector<std::vector<std::uint32_t>> galois_orbits(std::uint32_t q, int n);

struct SequenceResult {
  bool ok = false;
  std::vector<std::uint32_t> elems;  // one per part, encoded in F_{q^{n_i}}
  std::string reason;
};
// Greedy over orbit representatives: parts of equal size get distinct orbits.
SequenceResult select_sequence(std::uint32_t q, const Partition& P);
// Properties (1) and (2) for a proposed sequence.
bool sequence_valid(std::uint32_t q, const Partition& P, const std::vector<std::uint32_t>& elems);

// ------------------------------------------------------------------ groups

struct GroupTable {
  int n = 0;
  std::uint32_t q = 0;
  const GF* F = nullptr;
  std::vector<std::vector<std::uint32_t>> elems;  // row-major n x n
  std::vector<int> mul;                           // size^2 table
  std::vector<int> inv;
  std::vector<int> order;        // per element
  std::vector<int> cls;          // class index per element
  std::vector<int> reps;         // representative per class
  std::vector<int> class_size;   // per class
  std::vector<int> centralizer;  // per class
  int identity = 0;

  int size() const { return static_cast<int>(elems.size()); }
  int classes() const { return static_cast<int>(reps.size()); }
  int prod(int a, int b) const { return mul[static_cast<std::size_t>(a) * elems.size() + static_cast<std::size_t>(b)]; }
  int find(const std::vector<std::uint32_t>& m) const;  // -1 when not invertible
  std::vector<int> p_regular_classes() const;
  std::map<std::vector<std::uint32_t>, int> index_map;
};

// q prime, q^{n^2} small.
GroupTable make_gl(int n, std::uint32_t q);

// T_P as block-diagonal companion matrices of the generator of F_{q^{n_i}}.
struct Torus {
  Partition P;
  std::vector<int> orders;              // q^{n_i} - 1
  std::map<int, std::vector<int>> log;  // element index -> exponent per block
  int size() const { return static_cast<int>(log.size()); }
};
Torus make_torus(const GroupTable& G, const Partition& P);

// Class functions with values in F_l, one value per conjugacy class.
struct ClassFunction {
  std::uint32_t l = 0;
  std::vector<std::uint32_t> values;
};

// Exponent of the tori of GL_n(F_q): lcm of q^m - 1, m <= n.
std::uint64_t torus_exponent(int n, std::uint32_t q);
// Throws BadModulus unless l is prime, l does not divide |G| and
// l = 1 mod torus_exponent.
void check_modulus(const GroupTable& G, std::uint32_t l);
std::vector<std::uint32_t> admissible_moduli(const GroupTable& G, int count);

// chi(t) = zeta^{sum_i a_i c_i L / o_i} for t with exponents a, zeta of
// order L = torus_exponent built from the least primitive root mod l.
std::uint32_t character_value(const GroupTable& G, const Torus& T, const std::vector<int>& c, int t, std::uint32_t l);
// Ind_T^G chi(g) = |T|^{-1} sum_{x : x^{-1} g x in T} chi(x^{-1} g x)
ClassFunction induce(const GroupTable& G, const Torus& T, const std::vector<int>& c, std::uint32_t l);
// The same sum evaluated at every element (for class-function checks).
std::vector<std::uint32_t> induce_pointwise(const GroupTable& G, const Torus& T, const std::vector<int>& c,
                                            std::uint32_t l);
// <f, g>_G = |G|^{-1} sum_x f(x) g(x^{-1})
std::uint32_t inner_product(const GroupTable& G, const ClassFunction& f, const ClassFunction& g);
// <Res_T f, chi>_T
std::uint32_t inner_product_torus(const GroupTable& G, const Torus& T, const ClassFunction& f,
                                  const std::vector<int>& c, std::uint32_t l);
// All character index tuples c of T.
std::vector<std::vector<int>> characters(const Torus& T);

struct SpanResult {
  int rank = 0;
  int p_regular = 0;
  int rows = 0;
  std::uint32_t l = 0;
  bool full() const { return rank == p_regular; }
};
SpanResult spanning_rank(const GroupTable& G, std::uint32_t l);
SpanResult spanning_rank(int n, std::uint32_t q, std::uint32_t l);

struct SpanCheck {
  SpanResult last;
  std::vector<std::uint32_t> tried;
  bool full = false;  // false means inconclusive
};
// Tries admissible moduli in increasing order, at most five.
SpanCheck spanning_check(int n, std::uint32_t q);

}  // namespace bkgr
