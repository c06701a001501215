"""Slow, obviously-correct reference implementations used by the tests."""
from __future__ import annotations

from fractions import Fraction
from math import comb


def gf_mul(a: int, b: int, modulus: int) -> int:
    """Shift-and-add multiplication with reduction after every step."""
    m = modulus.bit_length() - 1
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> m & 1:
            a ^= modulus
    return out


def gf_pow(a: int, e: int, modulus: int) -> int:
    out = 1
    for _ in range(e):
        out = gf_mul(out, a, modulus)
    return out


def brute_count(field, coeffs: list[int]) -> int:
    """Affine solutions of y^2 + y = f(x) by trying every (x, y), plus one
    point at infinity.  ``coeffs[i-1]`` is the x^i coefficient."""
    mod = field.modulus
    q = field.size
    # y^2 + y for every y, as a multiset
    hits = [0] * q
    for y in range(q):
        hits[gf_mul(y, y, mod) ^ y] += 1
    total = 1
    for x in range(q):
        fx, xp = 0, 1
        for c in coeffs:
            xp = gf_mul(xp, x, mod)
            fx ^= gf_mul(c, xp, mod)
        total += hits[fx]
    return total


def stable_series_int(f: list[int], R: int, K: int) -> list[int]:
    """(1 + 4f)^(-1/2) mod 2^K for f with integer coefficients (f[i] at x^(i+1)),
    as sum_k (-1)^k binom(2k, k) f^k with exact integers."""
    out = [0] * (R + 1)
    power = [1] + [0] * R
    for k in range(R + 1):
        coef = (-1) ** k * comb(2 * k, k)
        for r in range(R + 1):
            out[r] += coef * power[r]
        new = [0] * (R + 1)
        for i, p in enumerate(power):
            if p:
                for j, fj in enumerate(f, start=1):
                    if i + j <= R:
                        new[i + j] += p * fj
        power = new
    return [x % (1 << K) for x in out]


def series_N_int(f: list[int], N: int, R: int, K: int) -> list[int]:
    """(1 + 4f)^((2^N - 1)/2) mod 2^K by the generalized binomial theorem."""
    x = Fraction((1 << N) - 1, 2)
    out = [Fraction(0)] * (R + 1)
    power = [Fraction(1)] + [Fraction(0)] * R
    binom = Fraction(1)
    for k in range(R + 1):
        for r in range(R + 1):
            out[r] += binom * 4 ** k * power[r]
        binom = binom * (x - k) / (k + 1)
        new = [Fraction(0)] * (R + 1)
        for i, p in enumerate(power):
            if p:
                for j, fj in enumerate(f, start=1):
                    if i + j <= R:
                        new[i + j] += p * fj
        power = new
    mod = 1 << K
    res = []
    for v in out:
        assert v.denominator % 2 == 1
        res.append(v.numerator * pow(v.denominator, -1, mod) % mod)
    return res


def v2(n: int) -> int:
    return (n & -n).bit_length() - 1
