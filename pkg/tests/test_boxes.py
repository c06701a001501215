from fractions import Fraction
from functools import lru_cache
import random

import pytest

from char2curves.boxes import (
    box_of,
    c_r_oracle,
    check_miracle,
    enumerate_Kr,
    s_of_tuple,
    term_coefficient,
)
from char2curves.curves import curve_new
from char2curves.gf2 import make_field
from char2curves.twoadic import c_series, c_series_stable, digit_sum, lift_curve


@lru_cache(maxsize=None)
def _partitions(r, parts, largest):
    if r == 0:
        return 1
    if parts == 0:
        return 0
    return sum(_partitions(r - k, parts - 1, k) for k in range(1, min(r, largest) + 1))


def test_enumerate_examples():
    assert list(enumerate_Kr(2, 3)) == [(3, 0), (2, 1)]
    assert len(list(enumerate_Kr(7, 7))) == 15
    assert list(enumerate_Kr(3, 0)) == [(0, 0, 0)]
    with pytest.raises(ValueError):
        list(enumerate_Kr(3, 41))


def test_enumerate_counts_and_shape():
    for d in range(1, 8):
        for r in range(0, 16):
            ks = list(enumerate_Kr(d, r))
            assert len(ks) == len(set(ks)) == _partitions(r, d, r)
            for k in ks:
                assert len(k) == d and sum(k) == r
                assert all(x >= y >= 0 for x, y in zip(k, k[1:] + (0,)))


def test_box_examples():
    b = box_of((1,) * 7)
    assert b.rows[:, 0].tolist() == [1] * 7 and b.gammas() == [7]
    b = box_of((7,) + (0,) * 6)
    assert b.rows[0, :3].tolist() == [1, 1, 1] and b.gammas() == [1, 1, 1]
    assert box_of((2, 1, 0)).row_value(0) == 2


def test_box_invariants_exhaustive():
    for d in (1, 3, 7, 13):
        for r in range(13):
            for k in enumerate_Kr(d, r):
                b = box_of(k)
                assert all(b.row_value(l) == k[l] for l in range(d))
                assert s_of_tuple(k) == b.top_digit_sum


def _v2(q: Fraction) -> int:
    n, d = q.numerator, q.denominator
    if n == 0:
        return 10 ** 6
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    while d % 2 == 0:
        d //= 2
        v -= 1
    return v


def test_term_valuation_is_s_of_tuple():
    for d in (3, 5, 7):
        for r in range(11):
            for k in enumerate_Kr(d, r):
                for N in (None, 11):
                    assert _v2(term_coefficient(k, N)) == s_of_tuple(k)


def test_oracle_matches_series():
    rng = random.Random(0)
    for g in (3, 4, 5, 6):
        F = make_field(rng.choice([1, 2]))
        co = [rng.randrange(F.size) if i % 2 == 0 else 0 for i in range(2 * g)] + [1]
        a = lift_curve(curve_new(F, co), 10, rng)
        s, st = c_series(a, 5, 12), c_series_stable(a, 12)
        for r in range(13):
            assert c_r_oracle(a, r, 5) == s[r]
            assert c_r_oracle(a, r, None) == st[r]
    a = lift_curve(curve_new(make_field(1), [0] * 6 + [1]), 6)
    assert c_r_oracle(a, 0, 3).coeffs == (1,)
    with pytest.raises(ValueError):
        c_r_oracle(a, 3, 3, K=5)


def test_miracle_examples():
    rep = check_miracle(7, 7)
    assert rep.passed and rep.tuples == 15 and rep.min_s == 1 and rep.equality_cases == 1
    rep = check_miracle(7, 1)
    assert rep.passed and rep.min_s == 1 and rep.equality_cases == 0
    rep = check_miracle(13, 15)
    assert rep.passed and rep.bound == 2
    assert rep.line().startswith("PASS")


def test_miracle_exhaustive():
    for d in (7, 9, 11, 13):
        for r in range(1, 21):
            assert check_miracle(d, r).passed
