#!/usr/bin/env python3
"""Emit include/bkgr/poly_table.hpp: for each prime power p^k <= 4096 with k >= 2,
the lexicographically least monic primitive polynomial of degree k over F_p.
Coefficients are listed constant term first; the ordering compares the
coefficient vector read from the constant term upward as a base-p integer."""
import sys

LIMIT = 4096


def primes(n):
    s = [True] * (n + 1)
    s[0] = s[1] = False
    for i in range(2, int(n ** 0.5) + 1):
        if s[i]:
            s[i * i :: i] = [False] * len(s[i * i :: i])
    return [i for i, v in enumerate(s) if v]


def factor(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def mulmod(a, b, f, p):
    k = len(f) - 1
    res = [0] * (2 * k)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] = (res[i + j] + x * y) % p
    for i in range(2 * k - 1, k - 1, -1):
        c = res[i]
        if c:
            for j in range(k + 1):
                res[i - k + j] = (res[i - k + j] - c * f[j]) % p
    return res[:k]


def powx(e, f, p):
    k = len(f) - 1
    r = [1] + [0] * (k - 1)
    b = [0, 1] + [0] * (k - 2) if k >= 2 else [0]
    while e:
        if e & 1:
            r = mulmod(r, b, f, p)
        b = mulmod(b, b, f, p)
        e >>= 1
    return r


def primitive(f, p):
    k = len(f) - 1
    q1 = p ** k - 1
    one = [1] + [0] * (k - 1)
    if powx(q1, f, p) != one:
        return False
    return all(powx(q1 // r, f, p) != one for r in factor(q1))


def least(p, k):
    n = 0
    while True:
        coeffs = [(n // p ** i) % p for i in range(k)]
        n += 1
        if coeffs[0] == 0:
            continue
        f = coeffs + [1]
        if primitive(f, p):
            return f


rows = []
for p in primes(LIMIT):
    k = 2
    while p ** k <= LIMIT:
        rows.append((p, k, least(p, k)))
        k += 1

out = sys.stdout
out.write("// Generated by scripts/gen_poly_table.py. Do not edit.\n")
out.write("#pragma once\n#include <array>\n#include <cstdint>\n\nnamespace bkgr::detail {\n\n")
out.write("struct PolyRow {\n  std::uint16_t p;\n  std::uint8_t k;\n  std::array<std::uint16_t, 13> coeffs;  // constant term first, monic\n};\n\n")
out.write(f"inline constexpr std::array<PolyRow, {len(rows)}> kPolyTable{{{{\n")
for p, k, f in rows:
    padded = f + [0] * (13 - len(f))
    out.write("    {%d, %d, {%s}},\n" % (p, k, ", ".join(map(str, padded))))
out.write("}};\n\n}  // namespace bkgr::detail\n")
