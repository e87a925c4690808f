from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btmelnikov.exact import (ONE, ZERO, ExactScalar, QSqrt2, Series, bareiss_det, cramer_solve,
                              revert)

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=30)
qs = st.builds(QSqrt2, fracs, fracs)
scalars = st.lists(qs, min_size=0, max_size=4).map(ExactScalar)


def test_sqrt2_squares_to_two():
    r = QSqrt2(0, 1)
    assert r * r == QSqrt2(2)


def test_unit_times_conjugate():
    u = QSqrt2(1, 1)
    assert u * u.conjugate() == QSqrt2(-1)
    assert u.inverse() == QSqrt2(-1, 1)


@given(qs, qs, qs)
def test_qsqrt2_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == QSqrt2()


@given(qs)
def test_qsqrt2_inverse(a):
    if a:
        assert a * a.inverse() == QSqrt2(1)
    else:
        with pytest.raises(ZeroDivisionError):
            a.inverse()


@given(qs)
def test_qsqrt2_float_matches(a):
    assert float(a) == pytest.approx(float(a.a) + float(a.b) * 2 ** 0.5, rel=1e-12, abs=1e-12)


@given(scalars, scalars, scalars)
def test_scalar_distributive(a, b, c):
    assert (a + b) * c == a * c + b * c


@given(scalars)
def test_scalar_string_round_trip(a):
    assert ExactScalar.parse(str(a)) == a


@given(scalars, scalars)
def test_exact_division_inverts_product(a, b):
    if b.is_zero():
        return
    assert (a * b).exact_div(b) == a


def test_pi_power_formatting():
    x = ExactScalar.pi(Fraction(3, 7), 2)
    assert str(x) == "3/7 * pi^2"
    assert x.pi_degree() == 2


def test_revert_catalan():
    # inverse of t + t^2 is t - t^2 + 2t^3 - 5t^4 + 14t^5 - ...
    f = Series([ZERO, ONE, ONE], 6)
    g = revert(f)
    assert [g[k] for k in range(7)] == [ExactScalar.coerce(c) for c in (0, 1, -1, 2, -5, 14, -42)]


@given(st.lists(fracs, min_size=2, max_size=5))
def test_revert_composes_to_identity(tail):
    order = 6
    f = Series([ZERO, ONE] + [ExactScalar.rational(c) for c in tail], order)
    g = revert(f)
    t = Series.variable(order)
    assert f.compose(g) == t
    assert g.compose(f) == t


def test_revert_rejects_constant_term():
    with pytest.raises(ValueError):
        revert(Series([ONE, ONE], 3))


def _fraction_det(m):
    m = [list(map(Fraction, r)) for r in m]
    n, det = len(m), Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if m[r][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for r in range(k + 1, n):
            f = m[r][k] / m[k][k]
            m[r] = [a - f * b for a, b in zip(m[r], m[k])]
    return det


int_matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n))


@settings(max_examples=60)
@given(int_matrices)
def test_bareiss_matches_gaussian_elimination(m):
    assert bareiss_det(m) == ExactScalar.rational(_fraction_det(m))


def test_bareiss_with_irrational_entries():
    s2, pi = ExactScalar.sqrt2(), ExactScalar.pi()
    m = [[s2, pi], [pi, s2]]
    assert bareiss_det(m) == ExactScalar.rational(2) - pi * pi


@settings(max_examples=40)
@given(int_matrices, st.lists(st.integers(-9, 9), min_size=5, max_size=5))
def test_cramer_residual_is_exactly_zero(m, rhs):
    rhs = rhs[:len(m)]
    if _fraction_det(m) == 0:
        with pytest.raises(ZeroDivisionError):
            cramer_solve(m, rhs)
        return
    nums, det = cramer_solve(m, rhs)
    for row, b in zip(m, rhs):
        lhs = sum((ExactScalar.coerce(a) * x for a, x in zip(row, nums)), ZERO)
        assert lhs == det * ExactScalar.coerce(b)
