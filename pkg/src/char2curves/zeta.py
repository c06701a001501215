"""Point counts, L-polynomials and Newton polygons of y^2 - y = f(x).

For the odd-degree model there is one point at infinity, and an affine x
contributes two points when trace(f(x)) = 0 and none otherwise.  Because
the trace is GF(2)-linear, trace(c * x^i) is the parity of (x^i & M_c) for
a mask M_c depending only on c, so a whole extension field is counted with
a few vectorised XOR/AND passes over the table of powers x^i.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .curves import CurveEquation
from .gf2 import BinaryField, make_field

_CHUNK = 1 << 18
_CACHED_TABLE_LIMIT = 1 << 21


def _v2(n: int) -> int:
    return (n & -n).bit_length() - 1


@lru_cache(maxsize=32)
def _power_table(m: int, degree: int) -> tuple[np.ndarray, ...]:
    E = make_field(m)
    xs = np.arange(E.size, dtype=np.uint64)
    powers = [xs]
    for _ in range(degree - 1):
        powers.append(E.vmul(powers[-1], xs))
    return tuple(p.astype(np.uint32) for p in powers)


def _chunked_powers(E: BinaryField, degree: int):
    if E.size * degree <= _CACHED_TABLE_LIMIT:
        yield _power_table(E.m, degree)
        return
    for start in range(0, E.size, _CHUNK):
        xs = np.arange(start, min(start + _CHUNK, E.size), dtype=np.uint64)
        powers = [xs]
        for _ in range(degree - 1):
            powers.append(E.vmul(powers[-1], xs))
        yield powers


def count_points(c: CurveEquation, n: int = 1, cache=None) -> int:
    """N_n: points of the smooth model over GF(2^(e n)), infinity included."""
    if not c.is_odd_reduced:
        raise ValueError("count_points needs an odd-reduced equation")
    M = c.field.m * n
    if n < 1 or M > 32:
        raise ValueError(f"extension GF(2^{M}) out of range (need 1 <= e*n <= 32)")
    if cache is not None:
        hit = cache.get(c, n)
        if hit is not None:
            return hit
    E = make_field(M)
    ext = c.base_change(E)
    masks = {
        i: np.uint32(E.linear_functional_mask(ext.coeff(i)))
        for i in range(1, ext.degree + 1)
        if ext.coeff(i)
    }
    zeros = 0
    for powers in _chunked_powers(E, ext.degree):
        acc = np.zeros(len(powers[0]), dtype=np.uint32)
        for i, mask in masks.items():
            acc ^= powers[i - 1] & mask
        zeros += int(np.count_nonzero((np.bitwise_count(acc) & 1) == 0))
    count = 1 + 2 * zeros
    if cache is not None:
        cache.put(c, n, count)
    return count


@dataclass(frozen=True)
class LPolynomial:
    """L(T) = b_0 + b_1 T + ... + b_2g T^2g over GF(q)."""

    q: int
    g: int
    b: tuple[int, ...]

    def __post_init__(self):
        if len(self.b) != 2 * self.g + 1 or self.b[0] != 1:
            raise ValueError("L-polynomial must have 2g+1 coefficients with b_0 = 1")
        for i in range(self.g + 1):
            if self.b[2 * self.g - i] != self.q ** (self.g - i) * self.b[i]:
                raise ValueError(f"functional equation fails at i={i}")

    @property
    def e(self) -> int:
        return self.q.bit_length() - 1

    def point_count(self, n: int) -> int:
        """N_n recovered from the reciprocal roots via Newton's identities."""
        p = []
        for k in range(1, n + 1):
            # p_k + b_1 p_(k-1) + ... + b_(k-1) p_1 + k b_k = 0
            bk = self.b[k] if k <= 2 * self.g else 0
            s = k * bk + sum(self.b[i] * p[k - i - 1] for i in range(1, min(k, 2 * self.g + 1)))
            p.append(-s)
        return self.q ** n + 1 - p[-1]

    def to_json(self) -> dict:
        return {"q": self.q, "g": self.g, "b": list(self.b)}


def weil_bound_holds(N: int, q: int, n: int, g: int) -> bool:
    # |N - q^n - 1| <= 2g q^(n/2), squared to stay in integers
    a = N - q ** n - 1
    return a * a <= 4 * g * g * q ** n


def l_polynomial(c: CurveEquation, cache=None) -> LPolynomial:
    """L-polynomial from N_1..N_g.

    Power sums p_n = q^n + 1 - N_n give b_1..b_g through Newton's
    identities; the rest follows from b_(2g-i) = q^(g-i) b_i.
    """
    g = c.genus
    q = c.field.size
    p = []
    b = [1]
    for n in range(1, g + 1):
        N = count_points(c, n, cache=cache)
        if not weil_bound_holds(N, q, n, g):
            raise AssertionError(f"N_{n} = {N} violates the Weil bound for {c}")
        p.append(q ** n + 1 - N)
        s = p[n - 1] + sum(b[i] * p[n - 1 - i] for i in range(1, n))
        if s % n:
            raise AssertionError(f"non-integral L-coefficient b_{n} for {c}")
        b.append(-s // n)
    for i in range(g - 1, -1, -1):
        b.append(q ** (g - i) * b[i])
    return LPolynomial(q, g, tuple(b))


@dataclass(frozen=True)
class NewtonPolygon:
    """2-adic Newton polygon with valuations normalised so that v(q) = 1."""

    slopes: tuple[Fraction, ...]
    vertices: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        s = self.slopes
        if s and (s[0] < 0 or s[-1] > 1 or any(x > y for x, y in zip(s, s[1:]))):
            raise ValueError(f"slopes out of order or range: {s}")
        if any(x + y != 1 for x, y in zip(s, reversed(s))):
            raise ValueError(f"slopes are not symmetric: {s}")

    @property
    def g(self) -> int:
        return len(self.slopes) // 2

    def to_json(self) -> list[str]:
        return [str(x) for x in self.slopes]


def lower_hull(points: list[tuple]) -> list[tuple]:
    hull: list[tuple] = []
    for p in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def newton_polygon(L: LPolynomial) -> NewtonPolygon:
    e = L.e
    # hull on integer valuations; normalising by e afterwards keeps it exact
    hull = lower_hull([(i, _v2(bi)) for i, bi in enumerate(L.b) if bi])
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes += [Fraction(y2 - y1, e * (x2 - x1))] * (x2 - x1)
    return NewtonPolygon(tuple(slopes), tuple((x, Fraction(y, e)) for x, y in hull))


def np1(np_: NewtonPolygon) -> Fraction:
    return np_.slopes[0]


def is_supersingular(np_: NewtonPolygon) -> bool:
    return all(s == Fraction(1, 2) for s in np_.slopes)


def two_rank(np_: NewtonPolygon) -> int:
    return sum(1 for s in np_.slopes if s == 0)


def newton_polygon_of(c: CurveEquation, cache=None) -> NewtonPolygon:
    np_ = newton_polygon(l_polynomial(c, cache=cache))
    g = c.genus
    if sum(np_.slopes) != g:
        raise AssertionError(f"slopes of {c} do not sum to g")
    return np_
