from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btmelnikov.core import du_dh, solve_u
from btmelnikov.polys import H_OF_U, RationalPoly, SigmaForm, to_u

fracs = st.fractions(min_value=-10, max_value=10, max_denominator=12)
polys = st.lists(fracs, max_size=6).map(RationalPoly)
upolys = st.lists(fracs, max_size=6).map(lambda c: RationalPoly(c, "u"))


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert a - a == RationalPoly()


@given(polys, polys)
def test_divmod_identity(a, b):
    if not b:
        with pytest.raises(ZeroDivisionError):
            a.divmod(b)
        return
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.degree < b.degree or not r


@given(polys, polys)
def test_chain_rule(p, q):
    assert p.compose(q).derivative() == p.derivative().compose(q) * q.derivative()


@given(polys, st.floats(-2, 2))
def test_evaluate_matches_exact(p, x):
    xf = Fraction(x)
    assert p.evaluate(x) == pytest.approx(float(p(xf)), rel=1e-12, abs=1e-9)


def test_mixed_variables_rejected():
    with pytest.raises(ValueError):
        RationalPoly([1, 1], "h") + RationalPoly([1], "u")


def test_json_round_trip():
    p = RationalPoly([Fraction(1, 3), 0, Fraction(-7, 2)])
    assert RationalPoly.from_json(p.to_json()) == p


def test_to_u_substitutes_level():
    assert to_u(RationalPoly([0, 1])) == H_OF_U


@settings(max_examples=30)
@given(upolys, st.integers(0, 3), st.integers(0, 3), st.floats(0.1, 0.5))
def test_sigma_form_du_matches_finite_difference(num, k, d, u):
    f = SigmaForm(k, num, d)
    step = 1e-6
    fd = (f(u + step) - f(u - step)) / (2 * step)
    assert f.du()(u) == pytest.approx(fd, rel=1e-6, abs=1e-6 * (1 + abs(f(u)) / u ** 2))


@settings(max_examples=30)
@given(upolys, upolys, st.integers(0, 3), st.integers(0, 3), st.floats(0.1, 0.5))
def test_sigma_form_addition_is_pointwise(a, b, k, d, u):
    fa, fb = SigmaForm(k, a, d), SigmaForm(k + 1, b, d + 1)
    assert (fa + fb)(u) == pytest.approx(fa(u) + fb(u), rel=1e-9, abs=1e-9 * (1 + abs(fa(u)) + abs(fb(u))))


def test_dh_is_du_times_dudh():
    f = SigmaForm(1, RationalPoly([0, 1, 0, 2], "u"), 1)
    h = 0.07
    u = solve_u(h)
    assert f.dh()(u) == pytest.approx(f.du()(u) * du_dh(u), rel=1e-12)


def test_denominator_is_reduced():
    f = SigmaForm(2, RationalPoly([0, 0, 3], "u"), 3)
    assert (f.d, f.num) == (1, RationalPoly([3], "u"))
