from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btmelnikov.cycles import DESIGN_COLUMNS
from btmelnikov.exact import ExactScalar, Series
from btmelnikov.localseries import (COLUMNS, QUOTED_DET, branch_series, compare_delta_forms,
                                    delta_forms, delta_jacobian_det, generator_series, mseries_eval,
                                    phi_series, series_at)
from btmelnikov.melnikov import AggregatedCoeffs, aggregated_generators, melnikov_eval_aggregated

small = st.fractions(min_value=-2, max_value=2, max_denominator=5)


def test_phi_inverts_level_function():
    # v(x) = x (1/2 - x/3)^(1/2) satisfies v^2 = x^2/2 - x^3/3
    order = 12
    x = phi_series(order)
    v = Series.variable(order)
    lhs = x * x * ExactScalar.rational(Fraction(1, 2)) - x ** 3 * ExactScalar.rational(Fraction(1, 3))
    assert lhs == v * v


def test_phi_leading_coefficients():
    phi = phi_series(4)
    assert phi[1] == ExactScalar.sqrt2(1)
    assert phi[2] == ExactScalar.rational(Fraction(2, 3))
    assert phi[3] == ExactScalar.sqrt2(Fraction(5, 9))


def test_branch_series_sign_flip():
    xr, xl = branch_series(8)
    for k in range(1, 9):
        assert xl[k] == xr[k] * ExactScalar.rational((-1) ** k)


@pytest.mark.parametrize("name", COLUMNS)
def test_generator_series_against_quadrature(name):
    h = 1e-3
    gens, _ = aggregated_generators(h)
    exact = gens[(name[0], int(name[1]), int(name[2]))]
    assert series_at(generator_series(name), h) == pytest.approx(exact, rel=1e-9)


def test_area_leading_term():
    # quarter disc of radius sqrt(2h): pi h / 2
    assert generator_series("J01")[2] == ExactScalar.pi(Fraction(1, 2))


@settings(max_examples=10, deadline=None)
@given(st.tuples(*[small] * 6), st.tuples(*[small] * 6), st.tuples(*[small] * 3))
def test_mseries_matches_quadrature(p, q, e):
    agg = AggregatedCoeffs(p, q, e)
    h = 1e-4
    approx = series_at(mseries_eval(agg), h)
    exact = melnikov_eval_aggregated(h, agg).value
    scale = sum(abs(float(c)) for c in agg.vector(True)) * h ** 0.5
    assert abs(approx - exact) <= 1e-9 * max(scale, 1e-300)


def test_generator_relations():
    # J10 - J20 = h = I20 - I10 exactly at the series level
    h = Series([ExactScalar()] * 2 + [ExactScalar.rational(1)], 12)
    assert generator_series("J10") - generator_series("J20") == h
    assert generator_series("I20") - generator_series("I10") == h


def test_derived_generator_matrix_is_singular():
    assert delta_jacobian_det("derived").is_zero()


def test_design_matrix_determinant():
    det = delta_jacobian_det("derived", DESIGN_COLUMNS)
    assert str(det) == "9010452244322886457568/376896443538222609104380725 * pi^2"


def test_quoted_matrix_determinant():
    det = delta_jacobian_det("quoted")
    assert str(det) == "-27450313605683048479400805553832/22438529766048083033029306462875 * pi^2"
    assert det != QUOTED_DET


def test_quoted_forms_disagree_with_derived():
    bad = compare_delta_forms()
    assert len(bad) == 38
    with pytest.raises(ValueError):
        delta_forms("quoted", strict=True)


def test_bad_names():
    with pytest.raises(ValueError):
        generator_series("K01")
    with pytest.raises(ValueError):
        delta_forms("guessed")
