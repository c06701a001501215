import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_count

from char2curves.curves import (
    CurveEquation,
    DegenerateCurveError,
    IsomorphismData,
    apply_isomorphism,
    curve_from_json,
    curve_new,
    genus,
    kill_coefficient,
    lucas_admissible,
    make_monic,
    reduce_odd,
)
from char2curves.gf2 import make_field
from char2curves.zeta import count_points, newton_polygon_of

F2, F4, F8 = make_field(1), make_field(2), make_field(3)


def test_construction_and_validation():
    c = curve_new(F2, [0, 0, 1])
    assert c.degree == 3 and c.genus == 1 and c.is_odd_reduced and c.is_monic
    with pytest.raises(ValueError):
        curve_new(F2, [1, 0, 0])
    with pytest.raises(ValueError):
        curve_new(F2, [2, 0, 1])
    with pytest.raises(ValueError):
        curve_new(F2, [])
    with pytest.raises(ValueError):
        genus(curve_new(F2, [0, 1, 1]))
    assert curve_new(F4, [F4(1), 0, F4(2)]).coeffs == (1, 0, 2)
    with pytest.raises(ValueError):
        curve_new(F4, [F8(1)])


def test_json_and_sort_key():
    c = curve_new(F8, [3, 0, 5, 0, 1])
    assert curve_from_json(c.key()) == c
    assert curve_from_json(c.to_json()) == c
    a = curve_new(F2, [1, 0, 0, 0, 1])
    b = curve_new(F2, [0, 0, 1, 0, 1])
    assert a.sort_key() < b.sort_key()
    assert "x^5" in str(c) and "0x3*x" in str(c)


def test_reduce_odd_examples():
    # x^4 + x^3: x^4 -> x^2 -> x
    c = reduce_odd(curve_new(F2, [0, 0, 1, 1]))
    assert c.coeffs == (1, 0, 1)
    assert count_points(c) == 5
    with pytest.raises(DegenerateCurveError):
        reduce_odd(curve_new(F2, [1, 1]))
    with pytest.raises(DegenerateCurveError):
        reduce_odd(curve_new(F4, [0, 1, 0, 1]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(2, 9), st.data())
def test_reduce_odd_keeps_counts_and_is_idempotent(m, d, data):
    F = make_field(m)
    coeffs = data.draw(st.lists(st.integers(0, F.size - 1), min_size=d, max_size=d))
    coeffs[-1] = data.draw(st.integers(1, F.size - 1))
    raw = curve_new(F, coeffs)
    try:
        c = reduce_odd(raw)
    except DegenerateCurveError:
        return
    assert c.is_odd_reduced
    assert reduce_odd(c) == c
    # the raw model has the same affine count: y -> y + h is a bijection
    assert brute_count(F, list(raw.coeffs)) == brute_count(F, list(c.coeffs)) == count_points(c)


def test_apply_isomorphism_errors():
    c = curve_new(F2, [0, 0, 1])
    with pytest.raises(ValueError):
        apply_isomorphism(c, IsomorphismData(zeta=0))
    with pytest.raises(ValueError):
        apply_isomorphism(c, IsomorphismData(hpoly=(0, 0, 1)))
    # x -> x + 1 gives constant f(1) = 1 of trace 1 over GF(2)
    with pytest.raises(ValueError, match="trace 1"):
        apply_isomorphism(c, IsomorphismData(t0=1))


def test_apply_isomorphism_example():
    c = curve_new(F4, [0, 0, 1])
    # x -> x + w with trace(w^3) = trace(1) = 0 over GF(4)
    out = apply_isomorphism(c, IsomorphismData(t0=2))
    assert out.coeffs == (F4.mul(2, 2), 2, 1)
    assert count_points(reduce_odd(out)) == count_points(c)


def test_make_monic():
    c = curve_new(F8, [1, 0, 0, 0, 5])
    m = make_monic(c)
    assert m.is_monic and m.field == F8
    assert [count_points(m, n) for n in (1, 2)] == [count_points(c, n) for n in (1, 2)]
    # cubing is trivial on GF(4)*, so w x^3 needs GF(64)
    w = curve_new(F4, [0, 0, 2])
    with pytest.raises(ValueError):
        make_monic(w)
    big = make_monic(w, allow_extension=True)
    assert big.field.m == 6 and big.coeffs == (0, 0, 1)
    assert newton_polygon_of(big).slopes == newton_polygon_of(w).slopes
    with pytest.raises(ValueError):
        make_monic(curve_new(F2, [0, 1, 1]))


def test_lucas_admissible():
    assert lucas_admissible(9, 1)
    assert not lucas_admissible(9, 3) and not lucas_admissible(9, 5) and not lucas_admissible(9, 7)
    assert [m for m in (1, 3, 5) if lucas_admissible(7, m)] == [1, 3, 5]


def _translate_reference(c, t):
    """f(x + t) by naive expansion and reduction, constant dropped."""
    F = c.field
    poly = [0] * (c.degree + 1)
    from math import comb
    for i in range(1, c.degree + 1):
        for j in range(i + 1):
            if comb(i, j) % 2:
                poly[j] ^= F.mul(c.coeff(i), F.pow(t, i - j))
    poly[0] = 0
    return reduce_odd(CurveEquation(F, tuple(poly[1:])))


def test_kill_coefficient():
    c = curve_new(F2, [1, 0, 1, 0, 0, 0, 1])
    forms = kill_coefficient(c, 1, 2)
    assert forms, "some translation over GF(4) kills c_1"
    E = make_field(2)
    want = {_translate_reference(c.base_change(E), t) for t in E.elements()}
    want = {w for w in want if w.coeff(1) == 0}
    assert set(forms) == want
    for f in forms:
        assert f.coeff(1) == 0 and f.is_odd_reduced and f.is_monic
        assert newton_polygon_of(f).slopes == newton_polygon_of(c).slopes
    assert forms == sorted(forms, key=CurveEquation.sort_key)
    with pytest.raises(ValueError):
        kill_coefficient(curve_new(F2, [1, 0, 1, 0, 1, 0, 1, 0, 1]), 3, 1)
    with pytest.raises(ValueError):
        kill_coefficient(c, 2, 1)


def test_kill_coefficient_random_genus4():
    rng = random.Random(3)
    for _ in range(5):
        co = [rng.randrange(2) if i % 2 == 0 else 0 for i in range(8)] + [1]
        c = curve_new(F2, co)
        for f in kill_coefficient(c, 1, 3):
            assert f.coeff(1) == 0
            assert newton_polygon_of(f).slopes == newton_polygon_of(c).slopes
