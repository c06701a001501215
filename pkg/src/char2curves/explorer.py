"""Sweeps over normal-form curves, classification records and the count cache."""
from __future__ import annotations

import hashlib
import itertools
import json
import logging
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator

from .curves import CurveEquation, DegenerateCurveError, curve_new, reduce_odd
from .gf2 import make_field
from .slopecert import np1_lower_bound, theorem3_slope
from .twoadic import slope_parameter
from .zeta import is_supersingular, newton_polygon_of, np1

log = logging.getLogger(__name__)

CACHE_ENV = "CHAR2CURVES_CACHE"
SWEEP_CAP = 24


# -- count cache ------------------------------------------------------------

def curve_hash(c: CurveEquation) -> str:
    return hashlib.sha256(c.key().encode()).hexdigest()[:20]


class CountCache:
    """Append-only store of point counts N_n keyed by (curve, n).

    ``counts.txt`` holds lines ``<curvehash> <n> <count>``; ``manifest.txt``
    maps each hash to its serialized curve once.  A file that fails to parse
    is discarded with a warning and the cache starts over.
    """

    COUNTS = "counts.txt"
    MANIFEST = "manifest.txt"

    def __init__(self, directory: str | os.PathLike | None = None):
        if directory is None:
            directory = os.environ.get(CACHE_ENV)
        if directory is None:
            raise ValueError(f"no cache directory given and ${CACHE_ENV} is unset")
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self._counts: dict[tuple[str, int], int] = {}
        self._known: set[str] = set()
        self.hits = 0
        self.misses = 0
        try:
            self._load()
        except (ValueError, json.JSONDecodeError) as exc:
            log.warning("count cache in %s is corrupt (%s); rebuilding", self.dir, exc)
            self._reset()

    @classmethod
    def from_env(cls) -> CountCache | None:
        return cls() if os.environ.get(CACHE_ENV) else None

    def _paths(self):
        return self.dir / self.COUNTS, self.dir / self.MANIFEST

    def _load(self):
        counts, manifest = self._paths()
        if manifest.exists():
            for line in manifest.read_text().splitlines():
                h, _, blob = line.partition(" ")
                json.loads(blob)
                if len(h) != 20:
                    raise ValueError(f"bad manifest line {line!r}")
                self._known.add(h)
        if counts.exists():
            for line in counts.read_text().splitlines():
                h, n, v = line.split()
                if h not in self._known:
                    raise ValueError(f"count for unknown curve {h}")
                self._counts[h, int(n)] = int(v)

    def _reset(self):
        for p in self._paths():
            p.write_text("")
        self._counts.clear()
        self._known.clear()

    def __len__(self):
        return len(self._counts)

    def get(self, c: CurveEquation, n: int) -> int | None:
        v = self._counts.get((curve_hash(c), n))
        if v is None:
            self.misses += 1
        else:
            self.hits += 1
        return v

    def put(self, c: CurveEquation, n: int, value: int) -> None:
        h = curve_hash(c)
        old = self._counts.get((h, n))
        if old is not None:
            if old != value:
                raise ValueError(f"cache entry {h} n={n} is {old}, refusing to overwrite with {value}")
            return
        counts, manifest = self._paths()
        if h not in self._known:
            with open(manifest, "a") as fh:
                fh.write(f"{h} {c.key()}\n")
            self._known.add(h)
        with open(counts, "a") as fh:
            fh.write(f"{h} {n} {value}\n")
        self._counts[h, n] = value


# -- enumeration ------------------------------------------------------------

def free_indices(g: int, zero: Iterable[int] = ()) -> list[int]:
    zero = set(zero)
    bad = [i for i in zero if i % 2 == 0 or not 1 <= i <= 2 * g - 1]
    if bad:
        raise ValueError(f"forced-zero indices must be odd in 1..{2 * g - 1}: {sorted(bad)}")
    return [i for i in range(1, 2 * g, 2) if i not in zero]


def enumerate_normal_forms(g: int, e: int, zero: Iterable[int] = (), cap: int = SWEEP_CAP) -> Iterator[CurveEquation]:
    """All y^2 - y = x^(2g+1) + sum c_i x^i (i odd) over GF(2^e) with the
    indices in ``zero`` forced to vanish, in ascending coefficient-code order."""
    if g < 1 or e < 1:
        raise ValueError("need g >= 1 and e >= 1")
    if e * g > cap:
        raise ValueError(f"e*g = {e * g} exceeds the sweep cap {cap}")
    F = make_field(e)
    free = free_indices(g, zero)
    # top free index varies slowest, so the integer encoding increases
    for values in itertools.product(range(F.size), repeat=len(free)):
        coeffs = [0] * (2 * g + 1)
        coeffs[-1] = 1
        for i, v in zip(reversed(free), values):
            coeffs[i - 1] = v
        yield CurveEquation(F, tuple(coeffs))


def sweep_size(g: int, e: int, zero: Iterable[int] = ()) -> int:
    return (1 << e) ** len(free_indices(g, zero))


# -- classification ---------------------------------------------------------

@dataclass(frozen=True)
class ClassificationRecord:
    curve: CurveEquation
    slopes: tuple[Fraction, ...]
    np1: Fraction
    supersingular: bool
    theorem3: dict | None
    consistent: bool

    def to_json(self) -> dict:
        return {
            "curve": self.curve.to_json(),
            "field": f"GF(2^{self.curve.field.m})",
            "np": [str(s) for s in self.slopes],
            "np1": str(self.np1),
            "supersingular": self.supersingular,
            "theorem3": self.theorem3,
            "consistent": self.consistent,
        }

    def line(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def classify_one(c: CurveEquation, cache=None) -> ClassificationRecord:
    polygon = newton_polygon_of(c, cache=cache)
    first = np1(polygon)
    ss = is_supersingular(polygon)
    g = c.genus
    if g <= 2:
        # no slope 0 leaves only 1/2 for g <= 2
        return ClassificationRecord(c, polygon.slopes, first, ss, None, ss)
    if first < np1_lower_bound(g):
        raise AssertionError(f"NP_1 = {first} of {c} is below 1/h")
    pred = theorem3_slope(c)
    return ClassificationRecord(c, polygon.slopes, first, ss, pred.to_json(), pred.consistent_with(first))


def classify(stream: Iterable[CurveEquation], cache=None) -> Iterator[ClassificationRecord]:
    for c in stream:
        yield classify_one(c, cache=cache)


# -- desk-scale theorem checks ----------------------------------------------

@dataclass
class SweepReport:
    name: str
    field: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name} over {self.field}: {self.checked} curves checked"
        if self.notes:
            text += "; " + "; ".join(self.notes)
        if self.failures:
            text += f"; first failure: {self.failures[0]}"
        return text

    def to_json(self) -> dict:
        return {
            "name": self.name, "field": self.field, "passed": self.passed,
            "checked": self.checked, "failures": self.failures, "notes": self.notes,
        }


def verify_thm1(e: int = 1, cache=None) -> SweepReport:
    """Genus 3 over GF(2^e): every NP_1 is 1/3, nothing is supersingular."""
    rep = SweepReport("genus-3 sweep", f"GF(2^{e})")
    for rec in classify(enumerate_normal_forms(3, e), cache):
        rep.checked += 1
        if rec.np1 != Fraction(1, 3) or rec.supersingular or not rec.consistent:
            rep.failures.append(f"{rec.curve}: np1={rec.np1}")
    rep.notes.append("statement checked over the searched field only")
    return rep


def verify_thm2(e: int = 1, cache=None) -> SweepReport:
    """Genus 4 with c_1 = 0 over GF(2^e): supersingular iff c_7 = 0."""
    rep = SweepReport("genus-4 sweep", f"GF(2^{e})")
    ss = 0
    for rec in classify(enumerate_normal_forms(4, e, zero={1}), cache):
        rep.checked += 1
        ss += rec.supersingular
        if rec.supersingular != (rec.curve.coeff(7) == 0) or not rec.consistent:
            rep.failures.append(f"{rec.curve}: supersingular={rec.supersingular}")
    rep.notes.append(f"{ss} supersingular")
    rep.notes.append("statement checked over the searched field only")
    return rep


def verify_geer(n: int, e: int, samples: int | None = None, seed: int = 0, cache=None) -> SweepReport:
    """Supersingularity of y^2 - y = sum_(i=0..n+1) c_(2^i+1) x^(2^i+1), genus 2^n.

    ``samples=None`` runs every coefficient tuple; tuples with a zero top
    coefficient drop the genus and are skipped with a note.  Sampling draws
    the top coefficient from the nonzero elements.
    """
    g = 1 << n
    if n < 0 or e * g > SWEEP_CAP:
        raise ValueError(f"e * 2^n = {e * g} exceeds the cap {SWEEP_CAP}")
    F = make_field(e)
    exps = [(1 << i) + 1 for i in range(n + 2)]
    if samples is None:
        tuples: Iterable = itertools.product(range(F.size), repeat=len(exps))
    else:
        rng = random.Random(seed)
        tuples = (
            [rng.randrange(F.size) for _ in exps[:-1]] + [rng.randrange(1, F.size)]
            for _ in range(samples)
        )
    rep = SweepReport(f"genus-{g} family", f"GF(2^{e})")
    skipped = 0
    for vals in tuples:
        if vals[-1] == 0:
            skipped += 1
            continue
        coeffs = [0] * exps[-1]
        for x, v in zip(exps, vals):
            coeffs[x - 1] ^= v
        try:
            c = reduce_odd(curve_new(F, coeffs))
        except DegenerateCurveError:
            skipped += 1
            continue
        rep.checked += 1
        if c.genus != g:
            rep.failures.append(f"{c}: genus {c.genus} instead of {g}")
        elif not is_supersingular(newton_polygon_of(c, cache=cache)):
            rep.failures.append(f"{c} is not supersingular")
    if skipped:
        rep.notes.append(f"{skipped} tuples with zero top coefficient skipped")
    return rep


# -- moduli count -----------------------------------------------------------

def forced_zero_indices(g: int) -> set[int]:
    """Coefficients a supersingular normal form must lack: c_1 (removed by a
    translation), c_(2^h - 1), and c_(3 2^(h-1) - 1) when g = 2^h - 2."""
    if g < 3:
        raise ValueError("the bound is stated for g >= 3")
    h = slope_parameter(g)
    out = {1, (1 << h) - 1}
    if g == (1 << h) - 2:
        out.add(3 * (1 << (h - 1)) - 1)
    return out


def constraints_satisfiable(g: int) -> bool:
    """False when a forced index is the leading one, which can never vanish
    in a monic equation; then there is no supersingular normal form at all."""
    return 2 * g + 1 not in forced_zero_indices(g)


def supersingular_parameter_bound(g: int) -> int:
    """g - 2, or g - 3 when g = 2^h - 2: the number of normal-form
    coefficients c_1, c_3, ..., c_(2g-1) left after the forced zeros."""
    count = g - len(forced_zero_indices(g))
    h = slope_parameter(g)
    closed = g - 3 if g == (1 << h) - 2 else g - 2
    assert count == closed, (g, count, closed)
    return count
