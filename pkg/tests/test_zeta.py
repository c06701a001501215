import random
from fractions import Fraction

import pytest

from oracles import brute_count, v2

from char2curves.curves import curve_new
from char2curves.gf2 import make_field
from char2curves.zeta import (
    LPolynomial,
    NewtonPolygon,
    count_points,
    is_supersingular,
    l_polynomial,
    lower_hull,
    newton_polygon,
    newton_polygon_of,
    np1,
    two_rank,
    weil_bound_holds,
)

F = make_field
H = Fraction(1, 2)


def test_counts_match_brute_force():
    rng = random.Random(0)
    for _ in range(40):
        m = rng.randint(1, 3)
        g = rng.randint(1, 3)
        n = rng.randint(1, max(1, 6 // m))
        co = [rng.randrange(1 << m) if i % 2 == 0 else 0 for i in range(2 * g)] + [rng.randrange(1, 1 << m)]
        c = curve_new(F(m), co)
        E = F(m * n)
        assert count_points(c, n) == brute_count(E, list(c.base_change(E).coeffs))


def test_known_counts():
    x3 = curve_new(F(1), [0, 0, 1])
    assert [count_points(x3, n) for n in (1, 2, 3, 4)] == [3, 9, 9, 9]  # roots +-i sqrt2: alpha^4 = 4
    x5 = curve_new(F(1), [0, 0, 0, 0, 1])
    assert count_points(x5, 2) == 5
    with pytest.raises(ValueError):
        count_points(x3, 33)
    with pytest.raises(ValueError):
        count_points(curve_new(F(1), [0, 1, 1]))


@pytest.mark.parametrize("coeffs,m,b", [
    ([0, 0, 1], 1, (1, 0, 2)),
    ([0, 0, 1, 0, 1], 1, (1, 2, 2, 4, 4)),
    ([1, 0, 1], 1, (1, 2, 2)),
    ([0, 0, 0, 0, 0, 0, 1], 1, (1, 0, 0, -2, 0, 0, 8)),
])
def test_l_polynomials(coeffs, m, b):
    assert l_polynomial(curve_new(F(m), coeffs)).b == b


def test_l_polynomial_predicts_higher_counts():
    rng = random.Random(4)
    for _ in range(10):
        g = rng.randint(1, 3)
        co = [rng.randrange(2) if i % 2 == 0 else 0 for i in range(2 * g)] + [1]
        c = curve_new(F(1), co)
        L = l_polynomial(c)
        for n in range(g + 1, 2 * g + 3):
            assert L.point_count(n) == count_points(c, n)


def test_lpolynomial_validation():
    with pytest.raises(ValueError):
        LPolynomial(2, 1, (1, 0, 3))
    with pytest.raises(ValueError):
        LPolynomial(2, 1, (2, 0, 4))


def test_weil_bound():
    assert weil_bound_holds(3, 2, 1, 1)
    assert weil_bound_holds(5, 2, 1, 1)
    assert not weil_bound_holds(6, 2, 1, 1)


def test_lower_hull():
    pts = [(0, Fraction(0)), (1, Fraction(1)), (2, Fraction(1, 2)), (3, Fraction(3)), (4, Fraction(2))]
    assert lower_hull(pts) == [(0, 0), (2, H), (4, 2)]


def _hull_oracle(b, e):
    """Slopes by checking every segment against every point (quadratic)."""
    pts = [(i, Fraction(v2(x), e)) for i, x in enumerate(b) if x]
    slopes = []
    i = 0
    while i < len(b) - 1:
        x0, y0 = next(p for p in pts if p[0] == i)
        best = min(((y - y0) / (x - x0), -x) for x, y in pts if x > i)
        s, nx = best[0], -best[1]
        slopes += [s] * (nx - i)
        i = nx
    return tuple(slopes)


def test_newton_polygon_matches_oracle():
    rng = random.Random(5)
    for _ in range(30):
        m = rng.randint(1, 2)
        g = rng.randint(1, 4)
        co = [rng.randrange(1 << m) if i % 2 == 0 else 0 for i in range(2 * g)] + [1]
        c = curve_new(F(m), co)
        L = l_polynomial(c)
        poly = newton_polygon(L)
        assert poly.slopes == _hull_oracle(L.b, m)
        assert sum(poly.slopes) == g and two_rank(poly) == 0


def test_polygon_values():
    assert newton_polygon_of(curve_new(F(1), [0] * 6 + [1])).slopes == (Fraction(1, 3),) * 3 + (Fraction(2, 3),) * 3
    x13 = curve_new(F(1), [0] * 10 + [1, 0, 1])
    assert np1(newton_polygon_of(x13)) == Fraction(1, 3)
    assert is_supersingular(newton_polygon_of(curve_new(F(4), [0, 0, 7, 0, 1])))


def test_polygon_validation():
    with pytest.raises(ValueError):
        NewtonPolygon((H, Fraction(1, 3)), ())
    with pytest.raises(ValueError):
        NewtonPolygon((Fraction(1, 3), Fraction(1, 3)), ())
