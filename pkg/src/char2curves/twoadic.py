"""Truncated Witt-vector arithmetic and the coefficient series C_r.

``GaloisRing`` realises W(GF(2^e)) / 2^K as (Z/2^K)[X]/(Phi), Phi being the
field modulus read with integer coefficients.  Ring elements are tuples of
e integers in [0, 2^K); power series over the ring are ``uint64`` arrays of
shape (length, e).  All array arithmetic wraps modulo 2^64 and is masked to
K bits afterwards, which is exact because 2^K divides 2^64.

C_r(N) is the x^r coefficient of (1 + 4 f(x))^((2^N - 1)/2) and C_r of the
N-stable limit (1 + 4 f)^(-1/2).  Two independent constructions exist:

* ``method="powers"``: the defining expansion sum_k T(k) f^k with
  T(k) = 4^k binom((2^N - 1)/2, k), evaluated by a truncated Horner scheme.
  Quadratic in R, fine up to a few thousand terms.
* ``method="newton"``: with Y the power series root of Y^2 - Y = f,
  (1 - 2Y)^2 = 1 + 4f, so C(N) = (1 - 2Y)^(2^N - 1) and the stable series
  is 1/(1 - 2Y).  Y comes from x-adic Newton iteration, whose derivative
  2Y - 1 is a unit, so no division by 2 ever happens.  Products use
  Kronecker substitution into big integers.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import gmpy2
import numpy as np

from .curves import CurveEquation
from .gf2 import BinaryField

MAX_PRECISION = 62


def _v2(n: int) -> int:
    return (n & -n).bit_length() - 1


def digit_sum(m: int) -> int:
    if m < 0:
        raise ValueError("digit sum of a negative integer")
    return m.bit_count()


class GaloisRing:
    """GR(2^K, e) = (Z/2^K)[X] / (Phi)."""

    def __init__(self, field: BinaryField, K: int):
        if not 1 <= K <= MAX_PRECISION:
            raise ValueError(f"precision K must be in [1, {MAX_PRECISION}], got {K}")
        self.field = field
        self.K = K
        self.e = field.m
        self.modulus = 1 << K
        self.mask = self.modulus - 1
        self.phi = tuple((field.modulus >> t) & 1 for t in range(self.e))

    def __repr__(self):
        return f"GR(2^{self.K}, {self.e})"

    def __eq__(self, other):
        return isinstance(other, GaloisRing) and (self.field, self.K) == (other.field, other.K)

    def __hash__(self):
        return hash((self.field, self.K))

    # -- scalars ----------------------------------------------------------

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.e

    def one(self) -> tuple[int, ...]:
        return (1,) + (0,) * (self.e - 1)

    def from_int(self, n: int) -> tuple[int, ...]:
        return ((n & self.mask),) + (0,) * (self.e - 1)

    def lift(self, bits: int) -> tuple[int, ...]:
        """Teichmuller-free lift: polynomial-basis bits copied verbatim."""
        return tuple((bits >> t) & 1 for t in range(self.e))

    def reduce(self, a: Sequence[int]) -> int:
        return sum((c & 1) << t for t, c in enumerate(a))

    def add(self, a, b):
        return tuple((x + y) & self.mask for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) & self.mask for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) & self.mask for x in a)

    def mul(self, a, b):
        e = self.e
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for j in range(2 * e - 2, e - 1, -1):
            c = prod[j]
            if c:
                for t, p in enumerate(self.phi):
                    if p:
                        prod[j - e + t] -= c
        return tuple(c & self.mask for c in prod[:e])

    def scalar(self, n: int, a):
        return tuple((n * x) & self.mask for x in a)

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        result = self.one()
        while n:
            if n & 1:
                result = self.mul(result, a)
            n >>= 1
            if n:
                a = self.mul(a, a)
        return result

    def inv(self, a):
        r = self.reduce(a)
        if r == 0:
            raise ZeroDivisionError("non-unit in the Galois ring")
        x = self.lift(self.field.inv(r))
        prec = 1
        two = self.from_int(2)
        while prec < self.K:
            x = self.mul(x, self.sub(two, self.mul(a, x)))
            prec *= 2
        return x

    def ord2(self, a) -> int:
        """Largest k <= K with a in 2^k R; K stands for "at least K"."""
        acc = 0
        for x in a:
            acc |= x & self.mask
        return self.K if acc == 0 else _v2(acc)

    def congruent(self, a, b, k: int) -> bool:
        m = (1 << k) - 1
        return all((x - y) & m == 0 for x, y in zip(a, b))

    def element(self, coeffs) -> GaloisRingElement:
        return GaloisRingElement(self, tuple(int(c) & self.mask for c in coeffs))

    def random_element(self, rng: random.Random) -> tuple[int, ...]:
        return tuple(rng.randrange(self.modulus) for _ in range(self.e))

    # -- power series ------------------------------------------------------

    @cached_property
    def _unit_matrix_cache(self):
        return {}

    def _mult_matrix(self, a) -> np.ndarray:
        """Matrix of y -> a*y acting on row vectors."""
        key = tuple(a)
        mat = self._unit_matrix_cache.get(key)
        if mat is None:
            rows = []
            for t in range(self.e):
                basis = tuple(1 if s == t else 0 for s in range(self.e))
                rows.append(self.mul(basis, a))
            mat = np.array(rows, dtype=np.uint64)
            self._unit_matrix_cache[key] = mat
        return mat

    def series_scale(self, A: np.ndarray, a) -> np.ndarray:
        if self.e == 1:
            return (A * np.uint64(a[0])) & np.uint64(self.mask)
        return (A @ self._mult_matrix(a)) & np.uint64(self.mask)

    def series_mul(self, A: np.ndarray, B: np.ndarray, n: int) -> np.ndarray:
        """(A * B) mod x^n by Kronecker substitution."""
        la, lb = min(len(A), n), min(len(B), n)
        out = np.zeros((n, self.e), dtype=np.uint64)
        if la == 0 or lb == 0:
            return out
        e = self.e
        span = 2 * e - 1
        bits = 2 * self.K + (min(la, lb) * e).bit_length() + 1
        width = (bits + 7) // 8
        ia = self._pack(A[:la], span, width)
        ib = self._pack(B[:lb], span, width)
        nslots = min(n, la + lb - 1) * span
        prod = gmpy2.f_mod_2exp(ia * ib, nslots * width * 8)
        raw = np.frombuffer(int(prod).to_bytes(nslots * width, "little"), dtype=np.uint8)
        raw = raw.reshape(nslots, width)
        low = np.zeros((nslots, 8), dtype=np.uint8)
        low[:, : min(8, width)] = raw[:, :8]
        vals = low.view("<u8").reshape(-1, span)
        vals = self._reduce_x_degree(vals)
        out[: len(vals)] = vals
        return out

    def _pack(self, A: np.ndarray, span: int, width: int):
        buf = np.zeros((len(A) * span, width), dtype=np.uint8)
        body = np.ascontiguousarray(A, dtype="<u8").view(np.uint8).reshape(len(A), self.e, 8)
        slots = buf.reshape(len(A), span, width)
        k = min(8, width)
        slots[:, : self.e, :k] = body[:, :, :k]
        return gmpy2.mpz(int.from_bytes(buf.tobytes(), "little"))

    def _reduce_x_degree(self, P: np.ndarray) -> np.ndarray:
        e = self.e
        P = P.copy()
        for j in range(2 * e - 2, e - 1, -1):
            c = P[:, j]
            for t, p in enumerate(self.phi):
                if p:
                    P[:, j - e + t] -= c
        return P[:, :e] & np.uint64(self.mask)

    def series_const(self, a, n: int) -> np.ndarray:
        out = np.zeros((n, self.e), dtype=np.uint64)
        out[0] = a
        return out

    def series_inv(self, A: np.ndarray, n: int) -> np.ndarray:
        """1/A mod x^n for A with unit constant term."""
        g = self.series_const(self.inv(tuple(int(x) for x in A[0])), 1)
        prec = 1
        two = self.series_const(self.from_int(2), 1)
        while prec < n:
            prec = min(2 * prec, n)
            ag = self.series_mul(A, g, prec)
            corr = (self._pad(two, prec) - ag) & np.uint64(self.mask)
            g = self.series_mul(g, corr, prec)
        return g[:n]

    def _pad(self, A: np.ndarray, n: int) -> np.ndarray:
        if len(A) >= n:
            return A[:n].copy()
        out = np.zeros((n, self.e), dtype=np.uint64)
        out[: len(A)] = A
        return out

    def artin_schreier_lift(self, F: np.ndarray, n: int) -> np.ndarray:
        """Series Y with Y^2 - Y = F mod x^n and Y(0) = 0 (needs F(0) = 0)."""
        if np.any(F[:1]):
            raise ValueError("f must have zero constant term")
        mask = np.uint64(self.mask)
        Y = np.zeros((1, self.e), dtype=np.uint64)
        one = self.series_const(self.one(), 1)
        prec = 1
        while prec < n:
            prec = min(2 * prec, n)
            Yp = self._pad(Y, prec)
            G = (self.series_mul(Yp, Yp, prec) - Yp - self._pad(F, prec)) & mask
            D = (Yp + Yp - self._pad(one, prec)) & mask
            Y = (Yp - self.series_mul(G, self.series_inv(D, prec), prec)) & mask
        return self._pad(Y, n)


@dataclass(frozen=True)
class GaloisRingElement:
    ring: GaloisRing
    coeffs: tuple[int, ...]

    def _other(self, other):
        if isinstance(other, GaloisRingElement):
            if other.ring != self.ring:
                raise ValueError("mixing elements of different Galois rings")
            return other.coeffs
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return b if b is NotImplemented else GaloisRingElement(self.ring, self.ring.add(self.coeffs, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return b if b is NotImplemented else GaloisRingElement(self.ring, self.ring.sub(self.coeffs, b))

    def __rsub__(self, other):
        b = self._other(other)
        return b if b is NotImplemented else GaloisRingElement(self.ring, self.ring.sub(b, self.coeffs))

    def __neg__(self):
        return GaloisRingElement(self.ring, self.ring.neg(self.coeffs))

    def __mul__(self, other):
        b = self._other(other)
        return b if b is NotImplemented else GaloisRingElement(self.ring, self.ring.mul(self.coeffs, b))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return GaloisRingElement(self.ring, self.ring.pow(self.coeffs, n))

    def __eq__(self, other):
        b = self._other(other)
        return b is not NotImplemented and tuple(b) == self.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def ord2(self) -> int:
        return self.ring.ord2(self.coeffs)

    def reduce(self) -> int:
        return self.ring.reduce(self.coeffs)

    def congruent(self, other, k: int) -> bool:
        return self.ring.congruent(self.coeffs, self._other(other), k)

    def residue(self, k: int) -> tuple[int, ...]:
        return tuple(c & ((1 << k) - 1) for c in self.coeffs)

    def __repr__(self):
        return f"GR{self.coeffs}"


def gr_make(field: BinaryField, K: int) -> GaloisRing:
    return GaloisRing(field, K)


def lift_curve(
    c: CurveEquation, K: int, rng: random.Random | None = None
) -> list[GaloisRingElement]:
    """Lifted coefficients a_1..a_d with a_i = c_i mod 2 and a_d = 1.

    With ``rng`` the higher 2-adic digits of a_1..a_(d-1) are random, which
    is how lift independence of the congruences gets sampled.
    """
    if not c.is_monic:
        raise ValueError("lifting needs a monic equation (a_d = 1)")
    ring = GaloisRing(c.field, K)
    out = []
    for i in range(1, c.degree + 1):
        a = ring.lift(c.coeff(i))
        if rng is not None and i < c.degree:
            a = ring.add(a, ring.scalar(2, ring.random_element(rng)))
        out.append(GaloisRingElement(ring, a))
    return out


def _ring_of(a: Sequence[GaloisRingElement]) -> GaloisRing:
    if not a:
        raise ValueError("empty coefficient vector")
    ring = a[0].ring
    if any(x.ring != ring for x in a):
        raise ValueError("lifted coefficients live in different rings")
    if a[-1].coeffs != ring.one():
        raise ValueError("top lifted coefficient must be exactly 1")
    return ring


def half_binom_factor(k1: int, N: int, K: int) -> int:
    """4^k1 binom((2^N - 1)/2, k1) reduced mod 2^K.

    Equal to 2^s(k1) * prod_(i<k1) (2^N - 1 - 2i) / oddpart(k1!), so its
    2-adic valuation is the digit sum s(k1).
    """
    if k1 < 0 or N < 1:
        raise ValueError("need k1 >= 0 and N >= 1")
    mod = 1 << K
    prod, odd_fact = 1, 1
    for i in range(k1):
        prod = prod * ((1 << N) - 1 - 2 * i) % mod
        j = i + 1
        odd_fact = odd_fact * (j >> _v2(j)) % mod
    return (prod * pow(odd_fact, -1, mod) << digit_sum(k1)) % mod


def _factors(R: int, N: int | None, K: int) -> list[int]:
    mod = 1 << K
    out = []
    if N is None:
        # (-1)^k binom(2k, k), exactly
        c = 1
        for k in range(R + 1):
            out.append((-c if k % 2 else c) % mod)
            c = c * 2 * (2 * k + 1) // (k + 1)
        return out
    prod, odd_fact = 1, 1
    for k in range(R + 1):
        out.append((prod * pow(odd_fact, -1, mod) << digit_sum(k)) % mod)
        prod = prod * ((1 << N) - 1 - 2 * k) % mod
        j = k + 1
        odd_fact = odd_fact * (j >> _v2(j)) % mod
    return out


@dataclass(frozen=True)
class TwoAdicSeries:
    """Coefficients C_0..C_R modulo 2^K; C_r = 0 for r < 0."""

    ring: GaloisRing
    terms: np.ndarray
    N: int | None

    @property
    def R(self) -> int:
        return len(self.terms) - 1

    @property
    def K(self) -> int:
        return self.ring.K

    def coeff(self, r: int) -> tuple[int, ...]:
        if r < 0:
            return self.ring.zero()
        if r > self.R:
            raise IndexError(f"C_{r} beyond the computed degree {self.R}")
        return tuple(int(x) for x in self.terms[r])

    def __getitem__(self, r: int) -> GaloisRingElement:
        return GaloisRingElement(self.ring, self.coeff(r))

    def ord2(self, r: int) -> int:
        return self.ring.ord2(self.coeff(r))

    def ords(self) -> np.ndarray:
        acc = np.bitwise_or.reduce(self.terms, axis=1)
        low = acc & (~acc + np.uint64(1))
        out = np.full(len(acc), self.K, dtype=np.int64)
        nz = acc != 0
        out[nz] = np.log2(low[nz].astype(np.float64)).astype(np.int64)
        return out

    def reduced(self, K: int) -> TwoAdicSeries:
        ring = GaloisRing(self.ring.field, K)
        return TwoAdicSeries(ring, self.terms & np.uint64(ring.mask), self.N)


def _f_array(ring: GaloisRing, a: Sequence[GaloisRingElement], n: int) -> np.ndarray:
    F = np.zeros((n, ring.e), dtype=np.uint64)
    for i, ai in enumerate(a, start=1):
        if i < n:
            F[i] = ai.coeffs
    return F


def _powers_series(ring: GaloisRing, a, factors: list[int], R: int) -> np.ndarray:
    mask = np.uint64(ring.mask)
    terms = [(i, ai.coeffs) for i, ai in enumerate(a, start=1) if any(ai.coeffs)]
    nu = terms[0][0]
    kmax = R // nu
    acc = np.zeros((1, ring.e), dtype=np.uint64)
    acc[0, 0] = factors[kmax]
    for k in range(kmax - 1, -1, -1):
        length = R - k * nu + 1
        new = np.zeros((length, ring.e), dtype=np.uint64)
        for i, ai in terms:
            if i >= length:
                break
            part = acc[: length - i]
            new[i : i + len(part)] += ring.series_scale(part, ai)
        new[0, 0] += np.uint64(factors[k])
        acc = new & mask
    return acc


def _newton_series(ring: GaloisRing, a, N: int | None, R: int) -> np.ndarray:
    n = R + 1
    mask = np.uint64(ring.mask)
    Y = ring.artin_schreier_lift(_f_array(ring, a, n), n)
    root = (ring._pad(ring.series_const(ring.one(), 1), n) - Y - Y) & mask
    if N is None:
        return ring.series_inv(root, n)
    # (1 - 2Y)^(2^N - 1) = prod_(i<N) (1 - 2Y)^(2^i)
    result, power = root, root
    for _ in range(N - 1):
        power = ring.series_mul(power, power, n)
        result = ring.series_mul(result, power, n)
    return result


def _series(a, N, R, method) -> TwoAdicSeries:
    ring = _ring_of(a)
    if R < 0:
        raise ValueError("degree cap must be nonnegative")
    if method == "auto":
        method = "powers" if R <= 256 else "newton"
    if method == "powers":
        terms = _powers_series(ring, a, _factors(R, N, ring.K), R)
    elif method == "newton":
        terms = _newton_series(ring, a, N, R)
    else:
        raise ValueError(f"unknown method {method!r}")
    return TwoAdicSeries(ring, terms, N)


def c_series(a: Sequence[GaloisRingElement], N: int, R: int, method: str = "auto") -> TwoAdicSeries:
    """C_0(N)..C_R(N) mod 2^K for lifted coefficients ``a`` (a_d = 1)."""
    if N < 1:
        raise ValueError("N must be at least 1")
    return _series(a, N, R, method)


def c_series_stable(a: Sequence[GaloisRingElement], R: int, method: str = "auto") -> TwoAdicSeries:
    """Coefficients of (1 + 4f)^(-1/2) mod 2^K; equals c_series(N) for N >= K."""
    return _series(a, None, R, method)


def ord_profile(s: TwoAdicSeries) -> list[tuple[int, int]]:
    """(r, ord_2 C_r) pairs; an order equal to K means "at least K"."""
    return list(enumerate(int(v) for v in s.ords()))


# -- the congruences of the binary lemma ------------------------------------

def slope_parameter(g: int) -> int:
    """h = floor(log2(g + 1) + 1)."""
    if g < 1:
        raise ValueError("genus must be positive")
    return (g + 1).bit_length()


def frobenius_twist(x: GaloisRingElement, b: int, bp: int) -> GaloisRingElement:
    """2^b * lift(u^(2^bp)) where x = 2^b u; only meaningful mod 2^(b+1)."""
    ring = x.ring
    if x.ord2() < b:
        raise ValueError(f"element has valuation {x.ord2()} < {b}")
    F = ring.field
    u = ring.reduce(tuple(c >> b for c in x.coeffs))
    for _ in range(bp):
        u = F.square(u)
    return GaloisRingElement(ring, ring.scalar(1 << b, ring.lift(u)))


def lemma_b(s: TwoAdicSeries, h: int, b: int, bp: int, literal: bool = False) -> tuple[tuple, tuple, bool]:
    """C_(2^(bh+b') - 2^b') against C_(2^(bh) - 1) "raised to 2^b'" mod 2^(b+1).

    C_(2^(bh) - 1) = 2^b u, and the tuples contributing to the left side
    are 2^b' times those on the right, which replaces every a_l by
    a_l^(2^b'): the right side is 2^b u^(2^b') with the power taken on the
    residue u.  ``literal=True`` uses the ring power instead, which is
    0 mod 2^(b+1) as soon as b, b' >= 1 and does not hold in general.
    """
    k = b + 1
    lhs = s[(1 << (b * h + bp)) - (1 << bp)]
    base = s[(1 << (b * h)) - 1]
    rhs = base ** (1 << bp) if literal else frobenius_twist(base, b, bp)
    return lhs.residue(k), rhs.residue(k), lhs.congruent(rhs, k)


def lemma_c(s: TwoAdicSeries, a, h: int, b: int) -> tuple[tuple, tuple, bool]:
    """C_(2^(bh) - 1) against 2^b a_(2^h - 1)^((2^(bh) - 1)/(2^h - 1)) mod 2^(b+1)."""
    k = b + 1
    lhs = s[(1 << (b * h)) - 1]
    top = (1 << h) - 1
    coeff = a[top - 1] if top <= len(a) else GaloisRingElement(s.ring, s.ring.zero())
    rhs = (coeff ** (((1 << (b * h)) - 1) // top)) * (1 << b)
    return lhs.residue(k), rhs.residue(k), lhs.congruent(rhs, k)


def lemma_d(s: TwoAdicSeries, a, h: int, b: int) -> tuple[tuple, tuple, bool]:
    """Two-term recursion for C_(2^(bh) - 1) mod 2^(b+1), case g = 2^h - 2."""
    if b < 1:
        raise ValueError("b must be positive")
    k = b + 1
    ring = s.ring
    zero = GaloisRingElement(ring, ring.zero())

    def a_(i):
        return a[i - 1] if 1 <= i <= len(a) else zero

    lhs = s[(1 << (b * h)) - 1]
    rhs = 2 * (a_((1 << h) - 1) ** (1 << ((b - 1) * h))) * s[(1 << ((b - 1) * h)) - 1]
    if b >= 2:
        rhs = rhs + 4 * (a_(3 * (1 << (h - 1)) - 1) ** (1 << ((b - 2) * h))) * s[(1 << ((b - 2) * h)) - 1]
    return lhs.residue(k), rhs.residue(k), lhs.congruent(rhs, k)
