// Generated by scripts/gen_poly_table.py. Do not edit.
#pragma once
#include <array>
#include <cstdint>

namespace bkgr::detail {

struct PolyRow {
  std::uint16_t p;
  std::uint8_t k;
  std::array<std::uint16_t, 13> coeffs;  // constant term first, monic
};

inline constexpr std::array<PolyRow, 40> kPolyTable{{
    {2, 2, {1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {2, 3, {1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {2, 4, {1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
    {2, 5, {1, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0}},
    {2, 6, {1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0}},
    {2, 7, {1, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0}},
    {2, 8, {1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0}},
    {2, 9, {1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0}},
    {2, 10, {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0}},
    {2, 11, {1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0}},
    {2, 12, {1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1}},
    {3, 2, {2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {3, 3, {1, 2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {3, 4, {2, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
    {3, 5, {1, 2, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0}},
    {3, 6, {2, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0}},
    {3, 7, {1, 2, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0}},
    {5, 2, {2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {5, 3, {2, 3, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {5, 4, {2, 2, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
    {5, 5, {2, 4, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0}},
    {7, 2, {3, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {7, 3, {2, 3, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {7, 4, {5, 3, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
    {11, 2, {7, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {11, 3, {4, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {13, 2, {2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {13, 3, {6, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {17, 2, {3, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {19, 2, {2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {23, 2, {7, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {29, 2, {3, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {31, 2, {12, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {37, 2, {5, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {41, 2, {12, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {43, 2, {3, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {47, 2, {13, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {53, 2, {5, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {59, 2, {2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {61, 2, {2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
}};

}  // namespace bkgr::detail
