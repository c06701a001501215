from fractions import Fraction as Fr

import pytest

from char2curves.curves import curve_new
from char2curves.gf2 import make_field
from char2curves.slopecert import (
    CertificateQuery,
    keylemma_check_i,
    keylemma_check_ii,
    lambda_n,
    lambda_prime_n,
    np1_lower_bound,
    part2_parameters,
    schedule_n0,
    theorem3_slope,
)
from char2curves.twoadic import c_series, lift_curve
from char2curves.zeta import newton_polygon_of, np1

F2 = make_field(1)


def lift(coeffs, K=8):
    return lift_curve(curve_new(F2, coeffs), K)


X7 = [0] * 6 + [1]
X97 = [0] * 6 + [1, 0, 1]
X95 = [0] * 4 + [1, 0, 0, 0, 1]


def test_np1_lower_bound():
    assert [np1_lower_bound(g) for g in (3, 4, 7)] == [Fr(1, 3), Fr(1, 3), Fr(1, 4)]
    with pytest.raises(ValueError):
        np1_lower_bound(2)


def test_query_validation():
    with pytest.raises(ValueError):
        CertificateQuery(Fr(3, 5))
    with pytest.raises(ValueError):
        CertificateQuery(Fr(-1, 5))
    with pytest.raises(ValueError):
        CertificateQuery(Fr(1, 3), n_max=0)


def test_part_i_examples():
    rep = keylemma_check_i(lift(X7), CertificateQuery(Fr(1, 3), 6, 8))
    assert rep.verdict == "all-hold" and rep.unconditional
    assert rep.K == 4 and rep.checked == 6 * 8 * 3
    rep = keylemma_check_i(lift(X7), CertificateQuery(0))
    assert rep.verdict == "all-hold"
    rep = keylemma_check_i(lift(X97), CertificateQuery(Fr(1, 2), 6, 8))
    assert rep.verdict == "violation-found" and not rep.unconditional
    for w in rep.witnesses:
        assert w.r == w.m * 2 ** (w.n + 4 - 1) - w.j and w.observed < w.required
    # frozen from a scan over n_max = 1..9: the first violation appears at n = 5
    assert rep.witnesses[0].to_json() == {"m": 1, "n": 5, "j": 4, "r": 252, "observed": 2, "required": 3}
    assert keylemma_check_i(lift(X97), CertificateQuery(Fr(1, 2), 4, 8)).verdict == "all-hold"


def test_witness_against_finite_N_series():
    # the criterion is stated for C_r(n + g - 2); check the frozen witness there
    a = lift(X97, 6)
    for method in ("powers", "newton"):
        s = c_series(a, 5 + 4 - 2, 252, method=method)
        assert s.ord2(252) == 2


def test_part_i_precision():
    with pytest.raises(ValueError, match="too small"):
        keylemma_check_i(lift(X7), CertificateQuery(Fr(1, 2), 6, 8, K=3))
    rep = keylemma_check_i(lift(X7), CertificateQuery(Fr(1, 3), 6, 8, K=9))
    assert rep.K == 9 and rep.verdict == "all-hold"
    with pytest.raises(ValueError):
        keylemma_check_i(lift(X7), CertificateQuery(Fr(1, 3), j_values=(4,)))


def test_part_ii_examples():
    lam, n0, j = part2_parameters(4, "II", Fr(1, 2))
    assert (lam, n0, j) == (Fr(11, 24), 9, 1)
    rep = keylemma_check_ii(lift(X97), CertificateQuery(lam, m_max=8, n0=n0), j)
    assert rep.verdict == "all-hold"
    assert np1(newton_polygon_of(curve_new(F2, X97))) < lam
    # supersingular: no strict failure at lambda = 1/2
    rep = keylemma_check_ii(lift(X95), CertificateQuery(Fr(1, 2), m_max=8, n0=9), 1)
    assert rep.verdict == "inconclusive"
    with pytest.raises(ValueError):
        keylemma_check_ii(lift(X95), CertificateQuery(Fr(1, 2)), 1)
    with pytest.raises(ValueError):
        keylemma_check_ii(lift(X95), CertificateQuery(Fr(1, 2), n0=3), 5)


def test_theorem3_cases():
    c = curve_new(F2, X7)
    p = theorem3_slope(c)
    assert (p.case, p.exact, p.lower_bound) == ("II", Fr(1, 3), Fr(1, 3))
    g6 = curve_new(F2, [0] * 10 + [1, 0, 1])
    assert theorem3_slope(g6).case == "III" and theorem3_slope(g6).exact == Fr(1, 3)
    g6b = curve_new(F2, [0] * 6 + [1] + [0] * 5 + [1])
    assert theorem3_slope(g6b).case == "III"
    g4 = curve_new(F2, X95)
    p = theorem3_slope(g4)
    assert p.case == "I" and p.exact is None
    assert p.consistent_with(Fr(1, 2)) and not p.consistent_with(Fr(1, 4))
    with pytest.raises(ValueError):
        theorem3_slope(curve_new(F2, [0, 0, 1, 0, 1]))


def test_schedule():
    assert schedule_n0(3, "II", Fr(1, 2)) == 7
    assert lambda_n(3, 7) == Fr(8, 18)
    assert schedule_n0(4, "II", Fr(1, 2)) == 9
    n0 = schedule_n0(6, "III", Fr(1, 2))
    assert (n0 + 6 - 1) % 3 == 0 and lambda_prime_n(6, n0) < Fr(1, 2)
    with pytest.raises(ValueError):
        schedule_n0(3, "II", Fr(1, 3))
    with pytest.raises(ValueError):
        schedule_n0(3, "IV", Fr(1, 2))
    with pytest.raises(ValueError):
        lambda_n(3, 1)
    with pytest.raises(ValueError):
        lambda_prime_n(3, 2)


def test_lambda_monotone_with_limit():
    for g in (3, 4, 5, 8):
        h = Fr(1, (g + 1).bit_length())
        vals = [lambda_n(g, n) for n in range(2, 200)]
        assert all(x >= y for x, y in zip(vals, vals[1:]))
        n = 1000 * (g - 1) + 1
        assert 0 < lambda_n(g, n) - h < Fr(1, 1000)
