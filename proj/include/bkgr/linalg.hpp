#pragma once
// Dense linear algebra over a finite field, on raw element encodings.

#include <cstdint>
#include <optional>
#include <vector>

#include "bkgr/field.hpp"

namespace bkgr {

using FVec = std::vector<std::uint32_t>;
using FRows = std::vector<FVec>;

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(const GF& F, FRows& rows);
int rank_of(const GF& F, FRows rows);
FRows nullspace(const GF& F, FRows rows, int ncols);
std::uint32_t det_of(const GF& F, FRows rows);

// Solve A x = b (A given as rows, b one entry per row). Returns a particular
// solution and the nullity, or nullopt when inconsistent.
struct AffineSolution {
  FVec x;
  int nullity = 0;
};
std::optional<AffineSolution> solve_affine(const GF& F, FRows A, FVec b, int ncols);

// Rank and consistency only; cheaper than solve_affine. Augmented rows have
// the right-hand side in the last column. Returns -1 when inconsistent,
// otherwise the nullity.
int affine_nullity(const GF& F, FRows& augmented, int ncols);

}  // namespace bkgr
