"""Index tuples, 2-adic boxes and the brute-force expansion of C_r.

For f = a_1 x + ... + a_d x^d, nesting f = x(a_1 + x(a_2 + ... + x a_d))
expands f^k1 as a sum over nonincreasing tuples k_1 >= ... >= k_d >= 0 of
prod binom(k_l, k_(l+1)) a_l^(k_l - k_(l+1)) x^(k_1 + ... + k_d).  The
valuation of the k-term, s(k), telescopes into digit sums of consecutive
differences, and the box of k records which binary digits each difference
contributes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterator, Sequence

import numpy as np

from .twoadic import GaloisRingElement, digit_sum

ENUMERATION_CAP = 40


def enumerate_Kr(d: int, r: int, cap: int = ENUMERATION_CAP) -> Iterator[tuple[int, ...]]:
    """Nonincreasing d-tuples of nonnegative integers summing to r.

    Partitions of r into at most d parts, zero padded, each exactly once, in
    reverse lexicographic order (largest first part first).  Iterative, no
    recursion.
    """
    if d < 1 or r < 0:
        raise ValueError("need d >= 1 and r >= 0")
    if r > cap:
        raise ValueError(f"r = {r} exceeds the enumeration cap {cap}")
    # stack items: (prefix, remaining sum, max allowed next part)
    stack = [((), r, r)]
    while stack:
        prefix, rest, bound = stack.pop()
        slots = d - len(prefix)
        if rest == 0:
            yield prefix + (0,) * slots
            continue
        if slots == 0 or rest > bound * slots:
            continue
        lo = -(-rest // slots)
        for part in range(lo, min(bound, rest) + 1):
            stack.append((prefix + (part,), rest - part, part))


def s_of_tuple(k: Sequence[int]) -> int:
    """s(k_1 - k_2) + ... + s(k_(d-1) - k_d) + s(k_d)."""
    total = digit_sum(k[-1])
    for hi, lo in zip(k, k[1:]):
        total += digit_sum(hi - lo)
    return total


@dataclass(frozen=True)
class TwoAdicBox:
    """Digit matrix of an index tuple.

    ``rows[l][v]`` is the dot digit of k_(l+1) at bit position v, so column
    v of the written box (most significant on the left) is ``rows[:, v]``.
    """

    k: tuple[int, ...]
    rows: np.ndarray = field(repr=False)

    def row_value(self, l: int) -> int:
        return int(sum(int(x) << v for v, x in enumerate(self.rows[l])))

    def column_sums(self) -> np.ndarray:
        return self.rows.sum(axis=0)

    def gammas(self) -> list[int]:
        """Sums of the nonzero columns, leftmost (highest bit) first."""
        return [int(x) for x in self.column_sums()[::-1] if x]

    @property
    def top_digit_sum(self) -> int:
        return int(self.rows[0].sum())

    @property
    def is_binary(self) -> bool:
        return bool(np.all(self.rows <= 1))


def box_of(k: Sequence[int]) -> TwoAdicBox:
    k = tuple(k)
    d = len(k)
    r = sum(k)
    width = (r + 1).bit_length() + 1
    rows = np.zeros((d, width), dtype=np.int64)

    def bits(n):
        return [(n >> v) & 1 for v in range(width)]

    rows[d - 1] = bits(k[-1])
    for l in range(d - 1, 0, -1):
        rows[l - 1] = rows[l] + np.array(bits(k[l - 1] - k[l]))
    return TwoAdicBox(k, rows)


def _binom_half(N: int | None, k1: int) -> Fraction:
    """4^k1 binom(x, k1) at x = (2^N - 1)/2, or at x = -1/2 for N None."""
    x = Fraction(-1, 2) if N is None else Fraction((1 << N) - 1, 2)
    out = Fraction(1)
    for i in range(k1):
        out *= 4 * (x - i) / (i + 1)
    return out


def term_coefficient(k: Sequence[int], N: int | None) -> Fraction:
    """Rational factor of the k-term: 4^k1 binom(., k1) prod binom(k_l, k_(l+1))."""
    out = _binom_half(N, k[0])
    for hi, lo in zip(k, k[1:]):
        out *= comb(hi, lo)
    return out


def c_r_oracle(a: Sequence[GaloisRingElement], r: int, N: int | None, K: int | None = None,
               cap: int = ENUMERATION_CAP) -> GaloisRingElement:
    """C_r(N) by summing the index-tuple expansion over K_r (N None: stable limit)."""
    ring = a[0].ring
    if K is not None and K != ring.K:
        raise ValueError(f"lifted coefficients have precision {ring.K}, not {K}")
    if a[-1].coeffs != ring.one():
        raise ValueError("top lifted coefficient must be exactly 1")
    d = len(a)
    mod = ring.modulus
    total = GaloisRingElement(ring, ring.zero())
    for k in enumerate_Kr(d, r, cap):
        q = term_coefficient(k, N)
        scalar = q.numerator * pow(q.denominator, -1, mod) % mod
        if scalar == 0:
            continue
        term = GaloisRingElement(ring, ring.from_int(scalar))
        for l in range(d - 1):
            if k[l] != k[l + 1]:
                term = term * a[l] ** (k[l] - k[l + 1])
        total = total + term
    return total


@dataclass
class MiracleReport:
    d: int
    r: int
    h: int
    bound: int
    tuples: int = 0
    min_s: int | None = None
    equality_cases: int = 0
    failures: list[tuple[tuple[int, ...], str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = (
            f"{status} miracle d={self.d} r={self.r} h={self.h}: {self.tuples} tuples, "
            f"min s(k)={self.min_s} >= {self.bound}, {self.equality_cases} equality cases"
        )
        if self.failures:
            k, why = self.failures[0]
            text += f"; counterexample k={k}: {why}"
        return text


def check_miracle(d: int, r: int, cap: int = ENUMERATION_CAP) -> MiracleReport:
    """Check the digit-sum bound s(k) >= ceil(s(r)/h) over K_r and the
    shape of the box in the equality case, h = floor(log2(d + 1))."""
    if r < 1:
        raise ValueError("r must be positive")
    h = (d + 1).bit_length() - 1
    sr = digit_sum(r)
    report = MiracleReport(d, r, h, bound=-(-sr // h))
    for k in enumerate_Kr(d, r, cap):
        report.tuples += 1
        s = s_of_tuple(k)
        report.min_s = s if report.min_s is None else min(report.min_s, s)
        if s < report.bound:
            report.failures.append((k, f"s(k)={s} below bound"))
            continue
        if s * h != sr:
            continue
        report.equality_cases += 1
        box = box_of(k)
        if not box.is_binary:
            report.failures.append((k, "box has an entry > 1"))
        if box.top_digit_sum != sr // h:
            report.failures.append((k, f"top row has {box.top_digit_sum} ones"))
        bad = [g for g in box.column_sums() if g and digit_sum(int(g)) != h]
        if bad:
            report.failures.append((k, f"column sums {bad} without digit sum h"))
    return report
