"""Artin-Schreier curve equations y^2 - y = c_1 x + ... + c_d x^d and their
normal forms.

Coefficients are stored as raw field integers, ``coeffs[i - 1]`` being the
x^i coefficient.  Constant terms are not part of the model: a constant c
with trace(c) = 0 is absorbed by y -> y + beta, beta^2 + beta = c.

The isomorphisms handled here are (x, y) -> (zeta x + t0, y + h(x)), which
turn f into f(zeta x + t0) + h(x)^2 + h(x).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

import numpy as np

from .gf2 import (
    BinaryField,
    FieldElement,
    embed_bits,
    field_from_json,
    make_field,
)


class DegenerateCurveError(ValueError):
    """The equation reduces to degree < 3, i.e. genus 0."""


def _as_bits(field: BinaryField, c) -> int:
    if isinstance(c, FieldElement):
        if c.field != field:
            raise ValueError(f"coefficient {c!r} does not live in {field}")
        return c.bits
    c = int(c)
    if not 0 <= c < field.size:
        raise ValueError(f"{c} is not an element of {field}")
    return c


@dataclass(frozen=True)
class CurveEquation:
    field: BinaryField
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("empty coefficient vector")
        if self.coeffs[-1] == 0:
            raise ValueError("leading coefficient is zero")
        if any(not 0 <= c < self.field.size for c in self.coeffs):
            raise ValueError(f"coefficient outside {self.field}")

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def coeff(self, i: int) -> int:
        """The x^i coefficient (0 outside 1..d)."""
        return self.coeffs[i - 1] if 1 <= i <= self.degree else 0

    def poly(self) -> list[int]:
        """Coefficient list indexed by degree, constant term included."""
        return [0, *self.coeffs]

    @cached_property
    def is_odd_reduced(self) -> bool:
        return (
            self.degree % 2 == 1
            and self.degree >= 3
            and all(self.coeff(i) == 0 for i in range(2, self.degree, 2))
        )

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    @property
    def genus(self) -> int:
        return genus(self)

    def base_change(self, target: BinaryField) -> CurveEquation:
        """The same equation read over an extension field."""
        return CurveEquation(target, tuple(embed_bits(c, self.field, target) for c in self.coeffs))

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "coeffs": list(self.coeffs)}

    @cached_property
    def _key(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"), sort_keys=True)

    def key(self) -> str:
        """Canonical serialization, used for sorting and as a cache key."""
        return self._key

    def sort_key(self) -> tuple:
        # integer encoding of the coefficient vector, top coefficient most significant
        width = self.field.m
        code = 0
        for c in reversed(self.coeffs):
            code = (code << width) | c
        return (self.field.m, self.degree, code)

    def __str__(self):
        terms = []
        for i in range(self.degree, 0, -1):
            c = self.coeff(i)
            if c == 0:
                continue
            mono = "x" if i == 1 else f"x^{i}"
            terms.append(mono if c == 1 else f"{c:#x}*{mono}")
        return f"y^2 - y = {' + '.join(terms)} over GF(2^{self.field.m})"


def curve_new(field: BinaryField, coeffs: Sequence) -> CurveEquation:
    """Validated curve y^2 - y = sum c_i x^i from c_1..c_d.

    Accepts raw integers or :class:`FieldElement` values.  Trailing zero
    coefficients are an error rather than silently trimmed.
    """
    return CurveEquation(field, tuple(_as_bits(field, c) for c in coeffs))


def curve_from_json(data: dict | str) -> CurveEquation:
    if isinstance(data, str):
        data = json.loads(data)
    return curve_new(field_from_json(data["field"]), data["coeffs"])


def genus(c: CurveEquation) -> int:
    if not c.is_odd_reduced:
        raise ValueError(f"genus needs an odd-reduced equation, got {c}")
    return (c.degree - 1) // 2


# -- polynomial helpers over a binary field --------------------------------

def _trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(F: BinaryField, a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] ^= F.mul(x, y)
    return out


def compose_linear(F: BinaryField, f: Sequence[int], zeta: int, t0: int) -> list[int]:
    """f(zeta x + t0) for f given by its coefficient list."""
    out = [0]
    lin = [t0, zeta]
    for c in reversed(f):
        out = _poly_mul(F, out, lin)
        out[0] ^= c
    return _trim(out)


def _absorb_constant(F: BinaryField, poly: list[int], *, over_closure: bool = False) -> list[int]:
    c0 = poly[0]
    if c0 and not over_closure and F.artin_schreier_root(c0) is None:
        raise ValueError(
            f"constant term {c0:#x} has trace 1 in {F}; it is removable only over "
            "the quadratic extension, extend the field first"
        )
    poly = list(poly)
    poly[0] = 0
    return poly


def _from_poly(F: BinaryField, poly: Sequence[int]) -> CurveEquation:
    poly = _trim(list(poly))
    if len(poly) < 2:
        raise DegenerateCurveError("equation reduces to a constant")
    return CurveEquation(F, tuple(poly[1:]))


@dataclass(frozen=True)
class IsomorphismData:
    zeta: int = 1
    t0: int = 0
    hpoly: tuple[int, ...] = dc_field(default=())


def apply_isomorphism(c: CurveEquation, iso: IsomorphismData) -> CurveEquation:
    """Equation of the image curve: f(zeta x + t0) + h(x)^2 + h(x).

    The constant term of the result is absorbed into y when it has trace 0;
    otherwise a ``ValueError`` asks for a field extension.
    """
    F = c.field
    if iso.zeta == 0:
        raise ValueError("zeta must be nonzero")
    g_bound = (c.degree - 1) // 2
    h = _trim(list(iso.hpoly)) if iso.hpoly else []
    if len(h) - 1 > g_bound:
        raise ValueError(f"deg h must be at most {g_bound}")
    poly = compose_linear(F, c.poly(), iso.zeta, iso.t0)
    poly += [0] * (c.degree + 1 - len(poly))
    for i, hi in enumerate(h):
        if hi:
            poly[i] ^= hi
            poly[2 * i] ^= F.mul(hi, hi)
    return _from_poly(F, _absorb_constant(F, poly))


def _eliminate_even_terms(F: BinaryField, poly: list[int]) -> list[int]:
    poly = _trim(list(poly))
    top = len(poly) - 1
    for j in range(top - (top % 2), 1, -2):
        cj = poly[j]
        if cj:
            # h = sqrt(c_j) x^(j/2) contributes c_j x^j + sqrt(c_j) x^(j/2)
            poly[j] = 0
            poly[j // 2] ^= F.sqrt(cj)
    return _trim(poly)


def reduce_odd(c: CurveEquation) -> CurveEquation:
    """Remove every even-degree term by Artin-Schreier shifts y -> y + h.

    Idempotent; the zeta function is unchanged.  Raises
    :class:`DegenerateCurveError` when the result has degree < 3.
    """
    poly = _eliminate_even_terms(c.field, c.poly())
    if len(poly) - 1 < 3:
        raise DegenerateCurveError(f"{c} reduces to degree {len(poly) - 1} (genus 0)")
    return _from_poly(c.field, poly)


def _dth_root_candidates(F: BinaryField, d: int, target: int) -> int | None:
    """Smallest zeta in F with zeta^d = target, or None."""
    chunk = 1 << 16
    for start in range(1, F.size, chunk):
        zs = np.arange(start, min(start + chunk, F.size), dtype=np.uint64)
        hits = np.flatnonzero(F.vpow(zs, d) == np.uint64(target))
        if hits.size:
            return int(zs[hits[0]])
    return None


def _has_dth_root(F: BinaryField, d: int, u: int) -> bool:
    from math import gcd

    return F.pow(u, F.order // gcd(d, F.order)) == 1


def make_monic(c: CurveEquation, allow_extension: bool = False) -> CurveEquation:
    """Scale x -> zeta x with zeta^d = 1/c_d so that the top coefficient is 1.

    Without a d-th root in the base field, the coefficients are moved to the
    smallest extension containing one when ``allow_extension`` is set; this
    keeps the Newton polygon but base-changes the L-polynomial.
    """
    if not c.is_odd_reduced:
        raise ValueError("make_monic expects an odd-reduced equation")
    if c.is_monic:
        return c
    F, d = c.field, c.degree
    u = F.inv(c.coeffs[-1])
    if not _has_dth_root(F, d, u):
        if not allow_extension:
            raise ValueError(f"no {d}-th root of {u:#x} in {F}; pass allow_extension")
        for k in range(2, 32 // F.m + 1):
            E = make_field(F.m * k)
            if _has_dth_root(E, d, embed_bits(u, F, E)):
                return make_monic(c.base_change(E))
        raise ValueError(f"no extension of {F} of degree <= 32 has the required root")
    zeta = _dth_root_candidates(F, d, u)
    scaled = []
    power = 1
    for ci in c.coeffs:
        power = F.mul(power, zeta)
        scaled.append(F.mul(ci, power))
    return CurveEquation(F, tuple(scaled))


def lucas_admissible(d: int, m: int) -> bool:
    """True iff binom(d, 2^k m) is odd for some k >= 0 (Lucas: bitwise domination)."""
    j = m
    while j <= d:
        if j & d == j:
            return True
        j <<= 1
    return False


def _vsqrt(E: BinaryField, a: np.ndarray) -> np.ndarray:
    for _ in range(E.m - 1):
        a = E.vmul(a, a)
    return a


def kill_coefficient(c: CurveEquation, m: int, searchdeg: int) -> list[CurveEquation]:
    """Normal forms of ``c`` with vanishing x^m coefficient, searched over
    translations t0 in GF(2^(e * searchdeg)).

    Every t0 is tried: translate, eliminate even terms, drop the constant
    (removable over the algebraic closure), keep results with c_m = 0.
    Output is deduplicated and sorted; it may be empty if no admissible t0
    lies in the searched field.
    """
    if not (c.is_odd_reduced and c.is_monic):
        raise ValueError("kill_coefficient expects an odd-reduced monic equation")
    g = c.genus
    if m % 2 == 0 or not 1 <= m < 2 * g:
        raise ValueError(f"m must be odd with 1 <= m < 2g = {2 * g}, got {m}")
    if not lucas_admissible(c.degree, m):
        raise ValueError(f"binom({c.degree}, 2^k * {m}) is even for every k")
    E = make_field(c.field.m * searchdeg)
    base = c.base_change(E)
    d = base.degree
    ts = np.arange(E.size, dtype=np.uint64)
    tpow = [np.ones_like(ts)]
    for _ in range(d):
        tpow.append(E.vmul(tpow[-1], ts))
    # coefficient of x^j in f(x + t) is sum_i binom(i, j) c_i t^(i-j)
    cols = []
    for j in range(d + 1):
        acc = np.zeros_like(ts)
        for i in range(max(j, 1), d + 1):
            ci = base.coeff(i)
            if ci and (i & j) == j:
                acc ^= E.vmul(tpow[i - j], ci)
        cols.append(acc)
    for j in range(d - 1, 1, -2):
        cols[j // 2] ^= _vsqrt(E, cols[j])
        cols[j] = np.zeros_like(ts)
    hits = np.flatnonzero(cols[m] == 0)
    found = {
        CurveEquation(E, tuple(int(cols[j][t]) for j in range(1, d + 1))) for t in hits
    }
    return sorted(found, key=CurveEquation.sort_key)
