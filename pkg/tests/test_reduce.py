import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btmelnikov.arcgen import ArcSpec, generator_dx
from btmelnikov.core import Curve, solve_u
from btmelnikov.melnikov import CurveCoeffs, RhoCoeffs, melnikov_eval, rho_map
from btmelnikov.polys import RationalPoly, SigmaForm
from btmelnikov.reduce import (DiffOperator, MelnikovForm, build_annihilator, central_differences,
                               count_sigma_zeros, coupled_system_residual, curve_generators, expand,
                               k1_degree, k2_degree, n1_budget, pf_residual, reduce_representation,
                               riccati_coeffs, zero_bound)
from btmelnikov.verify import _closed_orbit, random_curve_coeffs


def test_bound_formulas():
    assert [zero_bound(n, 1)["statement"] for n in (1, 2, 3)] == [102, 152, 202]
    assert zero_bound(1, 2)["statement"] == 289
    assert zero_bound(2, 3)["statement"] == (39 * 3 + 36) * 2 + 77 * 3 + 21
    assert (k1_degree(3), k2_degree(2), k2_degree(3)) == (23, 53, 68)
    with pytest.raises(ValueError):
        zero_bound(0, 1)


def test_index_21_rewrite():
    form = reduce_representation(RhoCoeffs({(2, 1, "plus"): Fraction(1)}, {}, 2))
    assert form.beta == RationalPoly([1])
    assert form.phi == RationalPoly.monomial(3, Fraction(-2, 3), "u")
    h = 0.09
    lhs = generator_dx(2, 1, ArcSpec(h, "plus"))
    rhs = generator_dx(1, 1, ArcSpec(h, "plus")) - 2 / 3 * solve_u(h) ** 3
    assert lhs == pytest.approx(rhs, rel=1e-12)


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10 ** 6), st.floats(0.01, 0.16))
def test_form_matches_quadrature(n, seed, h):
    coeffs = random_curve_coeffs(n, random.Random(seed))
    form = reduce_representation(rho_map(coeffs), n)
    direct = melnikov_eval(h, coeffs, Curve(1)).value
    assert form.evaluate(h, *curve_generators(h)) == pytest.approx(direct, rel=1e-9, abs=1e-10)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([1, 3]), st.integers(0, 10 ** 6))
def test_degree_bounds_hold_for_odd_degree(n, seed):
    form = reduce_representation(rho_map(random_curve_coeffs(n, random.Random(seed))), n)
    assert form.degree_violations(n) == []


def test_phi_bound_counterexample_for_degree_two():
    # p+ = x^2 contributes (2/1) u^5 through its boundary term
    form = reduce_representation(rho_map(CurveCoeffs(2, a_plus={(2, 0): 1})), 2)
    assert form.phi.degree == 5
    assert form.degree_violations(2) == ["phi: degree 5 > 3"]


def test_reduction_needs_m_one():
    with pytest.raises(ValueError):
        reduce_representation(rho_map(CurveCoeffs(1, b_plus={(0, 1): 1}), m=2))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_annihilator_is_exact(n):
    form = reduce_representation(rho_map(random_curve_coeffs(n, random.Random(n))), n)
    L = build_annihilator(form.alpha, form.beta, n1_budget(n))
    assert not L.is_zero()
    X, Y = expand(L, form.alpha, form.beta)
    assert not X and not Y


@pytest.mark.parametrize("n", [3, 4])
def test_riccati_relation(n):
    form = reduce_representation(rho_map(random_curve_coeffs(n, random.Random(3 + n))), n)
    R = riccati_coeffs(form.alpha, form.beta)

    def F(h):
        J0, J1, _, _ = _closed_orbit(h)
        return form.alpha.evaluate(h) + form.beta.evaluate(h) * J1 / J0

    for h in (0.05, 0.1):
        v, dv, _ = central_differences(F, h, 1e-4, 5)
        scale = abs(R.N2.evaluate(h)) + abs(R.N1.evaluate(h) * v) + abs(float(R.k01)) * v * v
        assert abs(R.residual(h, form.alpha, form.beta, v, dv)) <= 1e-8 * scale


def test_riccati_needs_beta():
    with pytest.raises(ValueError):
        riccati_coeffs(RationalPoly([1]), RationalPoly())


@pytest.mark.parametrize("h", [0.03, 0.1, 0.15])
def test_picard_fuchs_residuals(h):
    plus, minus = pf_residual(h)
    assert np.linalg.norm(plus) < 1e-6 and np.linalg.norm(minus) < 1e-6
    r = coupled_system_residual(h)
    assert max(abs(x) for x in r[:2]) < 1e-6 and max(abs(x) for x in r[2:]) < 1e-5


def test_central_differences_on_cubic():
    f = lambda x: x ** 3
    for points in (3, 5):
        v, d1, d2 = central_differences(f, 0.5, 1e-3, points)
        assert (v, d1, d2) == pytest.approx((0.125, 0.75, 3.0), rel=1e-5)
    with pytest.raises(ValueError):
        central_differences(f, 0.5, 1e-3, 4)


def test_sigma_zero_count():
    # numerator (u - 0.2)(u - 0.5) has two sign changes below u_star
    num = RationalPoly([Fraction(1, 10), Fraction(-7, 10), 1], "u")
    assert count_sigma_zeros(SigmaForm(3, num, 1)) == 2
    assert count_sigma_zeros(SigmaForm.zero()) == 0


def test_json_round_trips():
    form = reduce_representation(rho_map(random_curve_coeffs(3, random.Random(1))), 3)
    assert MelnikovForm.from_json(form.to_json()) == form
    L = DiffOperator(RationalPoly([1, 2]), RationalPoly([Fraction(1, 3)]), RationalPoly())
    assert DiffOperator.from_json(L.to_json()) == L
