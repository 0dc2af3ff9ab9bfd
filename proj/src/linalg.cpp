#include "bkgr/linalg.hpp"

#include <utility>

namespace bkgr {

std::vector<int> rref(const GF& F, FRows& rows) {
  std::vector<int> piv;
  if (rows.empty()) return piv;
  std::size_t ncols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][c] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    std::uint32_t inv = F.inv(rows[r][c]);
    if (inv != 1)
      for (std::size_t j = c; j < ncols; ++j) rows[r][j] = F.mul(rows[r][j], inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      std::uint32_t f = F.neg(rows[i][c]);
      for (std::size_t j = c; j < ncols; ++j)
        if (rows[r][j]) rows[i][j] = F.add(rows[i][j], F.mul(f, rows[r][j]));
    }
    piv.push_back(static_cast<int>(c));
    ++r;
  }
  rows.resize(r);
  return piv;
}

int rank_of(const GF& F, FRows rows) { return static_cast<int>(rref(F, rows).size()); }

FRows nullspace(const GF& F, FRows rows, int ncols) {
  for (auto& r : rows) r.resize(static_cast<std::size_t>(ncols), 0);
  auto piv = rref(F, rows);
  std::vector<int> is_piv(static_cast<std::size_t>(ncols), -1);
  for (std::size_t i = 0; i < piv.size(); ++i) is_piv[static_cast<std::size_t>(piv[i])] = static_cast<int>(i);
  FRows out;
  for (int c = 0; c < ncols; ++c) {
    if (is_piv[static_cast<std::size_t>(c)] >= 0) continue;
    FVec v(static_cast<std::size_t>(ncols), 0);
    v[static_cast<std::size_t>(c)] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[static_cast<std::size_t>(piv[i])] = F.neg(rows[i][static_cast<std::size_t>(c)]);
    out.push_back(std::move(v));
  }
  return out;
}

std::uint32_t det_of(const GF& F, FRows rows) {
  std::size_t n = rows.size();
  std::uint32_t det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t sel = c;
    while (sel < n && rows[sel][c] == 0) ++sel;
    if (sel == n) return 0;
    if (sel != c) {
      std::swap(rows[c], rows[sel]);
      det = F.neg(det);
    }
    det = F.mul(det, rows[c][c]);
    std::uint32_t inv = F.inv(rows[c][c]);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (rows[i][c] == 0) continue;
      std::uint32_t f = F.neg(F.mul(rows[i][c], inv));
      for (std::size_t j = c; j < n; ++j) rows[i][j] = F.add(rows[i][j], F.mul(f, rows[c][j]));
    }
  }
  return det;
}

std::optional<AffineSolution> solve_affine(const GF& F, FRows A, FVec b, int ncols) {
  for (std::size_t i = 0; i < A.size(); ++i) {
    A[i].resize(static_cast<std::size_t>(ncols), 0);
    A[i].push_back(b[i]);
  }
  auto piv = rref(F, A);
  if (!piv.empty() && piv.back() == ncols) return std::nullopt;
  AffineSolution s;
  s.x.assign(static_cast<std::size_t>(ncols), 0);
  for (std::size_t i = 0; i < piv.size(); ++i) s.x[static_cast<std::size_t>(piv[i])] = A[i][static_cast<std::size_t>(ncols)];
  s.nullity = ncols - static_cast<int>(piv.size());
  return s;
}

int affine_nullity(const GF& F, FRows& A, int ncols) {
  std::size_t r = 0;
  std::size_t width = static_cast<std::size_t>(ncols) + 1;
  for (std::size_t c = 0; c < width && r < A.size(); ++c) {
    std::size_t sel = r;
    while (sel < A.size() && A[sel][c] == 0) ++sel;
    if (sel == A.size()) continue;
    if (c == static_cast<std::size_t>(ncols)) return -1;
    std::swap(A[r], A[sel]);
    std::uint32_t inv = F.inv(A[r][c]);
    for (std::size_t i = r + 1; i < A.size(); ++i) {
      if (A[i][c] == 0) continue;
      std::uint32_t f = F.neg(F.mul(A[i][c], inv));
      for (std::size_t j = c; j < width; ++j)
        if (A[r][j]) A[i][j] = F.add(A[i][j], F.mul(f, A[r][j]));
    }
    ++r;
  }
  return ncols - static_cast<int>(r);
}

}  // namespace bkgr
