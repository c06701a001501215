"""Bounded valuation certificates for the first Newton slope.

The criterion relates NP_1 to the valuations of C_r along the progressions
r = m 2^(n+g-1) - j:

* part i: ord_2 C_r >= ceil(n lam) for all m, n >= 1 and 1 <= j <= g
  gives NP_1 >= lam;
* part ii: the same bound for n < n0 (all m) and for n = n0, m >= 2,
  together with ord_2 C_(2^(n0+g-1) - j) < ceil(n0 lam), gives NP_1 < lam.

Here m and n are truncated at ``m_max`` and ``n_max``, so an "all-hold"
verdict is bounded evidence.  It becomes unconditional only when the digit
sum bound ord_2 C_r >= ceil(s(r)/h) already forces every inequality, which
happens exactly when lam <= 1/h.

The criterion is stated for C_r(n + g - 2).  C_r(N) and the stable C_r agree
mod 2^N, and every threshold here satisfies ceil(n lam) <= n + g - 2, so
comparing the stable coefficients against the thresholds gives the same
answers; one stable series then serves all n.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Sequence

from .curves import CurveEquation
from .twoadic import (
    GaloisRingElement,
    TwoAdicSeries,
    c_series_stable,
    slope_parameter,
)

HALF = Fraction(1, 2)


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def np1_lower_bound(g: int) -> Fraction:
    if g < 3:
        raise ValueError("the slope bound is stated for g >= 3")
    return Fraction(1, slope_parameter(g))


def lambda_n(g: int, n: int) -> Fraction:
    """(n + g - 2) / (h (n - 1)), defined for n > 1."""
    if n <= 1:
        raise ValueError("lambda_n needs n > 1")
    return Fraction(n + g - 2, slope_parameter(g) * (n - 1))


def lambda_prime_n(g: int, n: int) -> Fraction:
    """(n + g - h - 2) / (h (n - 2)), defined for n > 2."""
    if n <= 2:
        raise ValueError("lambda'_n needs n > 2")
    h = slope_parameter(g)
    return Fraction(n + g - h - 2, h * (n - 2))


def schedule_n0(g: int, target: str, np1_hint: Fraction) -> int:
    """Smallest n0 meeting the constraints of the case-II / case-III argument.

    Case II: lambda_n0 < hint, h | n0 + g - 1 and (g - 1)/(h(n0 - 1)) <= 1.
    Case III additionally needs lambda'_n0 < hint and (g - h)/(h(n0 - 1)) <= 1.
    """
    h = slope_parameter(g)
    hint = Fraction(np1_hint)
    if hint <= Fraction(1, h):
        raise ValueError(f"hint {hint} must exceed 1/h = 1/{h}")
    if target not in ("II", "III"):
        raise ValueError("target must be 'II' or 'III'")
    n0 = 2 if target == "II" else 3
    while True:
        ok = (
            (n0 + g - 1) % h == 0
            and lambda_n(g, n0) < hint
            and Fraction(g - 1, h * (n0 - 1)) <= 1
        )
        if ok and target == "III":
            ok = lambda_prime_n(g, n0) < hint and Fraction(g - h, h * (n0 - 1)) <= 1
        if ok:
            return n0
        n0 += 1


def part2_parameters(g: int, target: str, np1_hint: Fraction) -> tuple[Fraction, int, int]:
    """(lam, n0, j) for the part-ii query used in the case-II/III argument.

    Case II queries lam = lambda_n0 at n0 with j = 1; case III queries
    lam = lambda'_n0 at n0 - 1 with j = 2^(h-1).
    """
    n0 = schedule_n0(g, target, np1_hint)
    if target == "II":
        return lambda_n(g, n0), n0, 1
    h = slope_parameter(g)
    return lambda_prime_n(g, n0), n0 - 1, 1 << (h - 1)


@dataclass(frozen=True)
class CertificateQuery:
    lam: Fraction
    n_max: int = 6
    m_max: int = 8
    j_values: tuple[int, ...] | None = None
    n0: int | None = None
    K: int | None = None

    def __post_init__(self):
        lam = Fraction(self.lam)
        object.__setattr__(self, "lam", lam)
        if not 0 <= lam <= HALF:
            raise ValueError(f"lambda must lie in [0, 1/2], got {lam}")
        if self.n_max < 1 or self.m_max < 1:
            raise ValueError("bounds must be positive")

    def required(self, n: int) -> int:
        return _ceil(n * self.lam)

    def precision(self, n_top: int) -> int:
        return _ceil(n_top * self.lam) + 2


@dataclass(frozen=True)
class Witness:
    m: int
    n: int
    j: int
    r: int
    observed: int
    required: int

    def to_json(self) -> dict:
        return {
            "m": self.m, "n": self.n, "j": self.j, "r": self.r,
            "observed": self.observed, "required": self.required,
        }


@dataclass
class SlopeBoundReport:
    verdict: str
    query: CertificateQuery
    g: int
    K: int
    witnesses: list[Witness] = field(default_factory=list)
    unconditional: bool = False
    checked: int = 0
    part: str = "i"

    def to_json(self) -> dict:
        q = self.query
        return {
            "part": self.part,
            "verdict": self.verdict,
            "unconditional": self.unconditional,
            "lambda": str(q.lam),
            "n_max": q.n_max,
            "m_max": q.m_max,
            "n0": q.n0,
            "g": self.g,
            "K": self.K,
            "checked": self.checked,
            "witnesses": [w.to_json() for w in self.witnesses],
        }


def _genus_of_lift(a: Sequence[GaloisRingElement]) -> int:
    d = len(a)
    if d % 2 == 0 or d < 3:
        raise ValueError("lifted curve must have odd degree >= 3")
    if a[-1].coeffs != a[-1].ring.one():
        raise ValueError("lifted curve must be monic")
    return (d - 1) // 2


def _at_precision(a: Sequence[GaloisRingElement], K: int) -> list[GaloisRingElement]:
    from .twoadic import GaloisRing

    ring = GaloisRing(a[0].ring.field, K)
    return [ring.element(x.coeffs) for x in a]


def _series_for(a, q: CertificateQuery, n_top: int, g: int) -> tuple[TwoAdicSeries, int]:
    K = q.precision(n_top)
    if q.K is not None:
        if q.K < K:
            raise ValueError(f"precision K={q.K} too small, need at least {K}")
        K = q.K
    R = q.m_max * (1 << (n_top + g - 1)) - 1
    return c_series_stable(_at_precision(a, K), R), K


def _scan(series, q, g, n, ms, js, out: list[Witness]) -> int:
    req = q.required(n)
    assert req <= n + g - 2 or req == 0, "threshold beyond the stable range"
    checked = 0
    for m in ms:
        for j in js:
            r = m * (1 << (n + g - 1)) - j
            obs = series.ord2(r)
            checked += 1
            if obs < req:
                out.append(Witness(m, n, j, r, obs, req))
    return checked


def keylemma_check_i(a: Sequence[GaloisRingElement], q: CertificateQuery) -> SlopeBoundReport:
    """Check the part-i hypothesis for n <= n_max, m <= m_max, j in j_values."""
    g = _genus_of_lift(a)
    js = q.j_values or tuple(range(1, g + 1))
    if any(not 1 <= j <= g for j in js):
        raise ValueError(f"j must lie in 1..{g}")
    series, K = _series_for(a, q, q.n_max, g)
    witnesses: list[Witness] = []
    checked = 0
    for n in range(1, q.n_max + 1):
        checked += _scan(series, q, g, n, range(1, q.m_max + 1), js, witnesses)
    verdict = "violation-found" if witnesses else "all-hold"
    # lam <= 1/h: the digit-sum bound covers every (m, n, j), checked or not
    unconditional = not witnesses and q.lam <= Fraction(1, slope_parameter(g))
    return SlopeBoundReport(verdict, q, g, K, witnesses, unconditional, checked, "i")


def keylemma_check_ii(a: Sequence[GaloisRingElement], q: CertificateQuery, j: int) -> SlopeBoundReport:
    """Check the three hypothesis groups of part ii at (q.n0, j).

    Verdicts: "all-hold" when the pattern is present within bounds (so
    NP_1 < lam is predicted), "violation-found" when one of the two
    inequality groups fails (witnesses list the failures), "inconclusive"
    when they hold but the strict failure at m = 1, n = n0 is absent.
    """
    g = _genus_of_lift(a)
    if q.n0 is None or q.n0 < 1:
        raise ValueError("part ii needs n0 >= 1")
    if not 1 <= j <= g:
        raise ValueError(f"j must lie in 1..{g}")
    n0 = q.n0
    series, K = _series_for(a, q, n0, g)
    witnesses: list[Witness] = []
    checked = 0
    for n in range(1, n0):
        checked += _scan(series, q, g, n, range(1, q.m_max + 1), (j,), witnesses)
    checked += _scan(series, q, g, n0, range(2, q.m_max + 1), (j,), witnesses)
    if witnesses:
        return SlopeBoundReport("violation-found", q, g, K, witnesses, False, checked, "ii")
    r = (1 << (n0 + g - 1)) - j
    obs, req = series.ord2(r), q.required(n0)
    checked += 1
    verdict = "all-hold" if obs < req else "inconclusive"
    return SlopeBoundReport(verdict, q, g, K, [Witness(1, n0, j, r, obs, req)], False, checked, "ii")


@dataclass(frozen=True)
class Theorem3Prediction:
    case: str
    lower_bound: Fraction
    exact: Fraction | None

    def consistent_with(self, np1: Fraction) -> bool:
        if np1 < self.lower_bound:
            return False
        return self.exact is None or np1 == self.exact

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "lower_bound": str(self.lower_bound),
            "exact": None if self.exact is None else str(self.exact),
        }


def theorem3_slope(c: CurveEquation) -> Theorem3Prediction:
    """Slope bound 1/h, exact when the case II or III coefficient is nonzero."""
    if not (c.is_odd_reduced and c.is_monic):
        raise ValueError("theorem3_slope expects an odd-reduced monic equation")
    g = c.genus
    bound = np1_lower_bound(g)
    h = slope_parameter(g)
    first = c.coeff((1 << h) - 1)
    second = c.coeff(3 * (1 << (h - 1)) - 1)
    if g < (1 << h) - 2 and first:
        return Theorem3Prediction("II", bound, bound)
    if g == (1 << h) - 2 and (first or second):
        return Theorem3Prediction("III", bound, bound)
    return Theorem3Prediction("I", bound, None)
