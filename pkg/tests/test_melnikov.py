from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btmelnikov.arcgen import monomials
from btmelnikov.core import Curve, Quadrants
from btmelnikov.melnikov import (GEN_ORDER, QUADRANT_FIELDS, AggregatedCoeffs, CurveCoeffs,
                                 QuadrantCoeffs, aggregate, melnikov_eval, melnikov_eval_aggregated,
                                 melnikov_grid, rho_map, section)
from btmelnikov.reduce import curve_generators

small = st.fractions(min_value=-3, max_value=3, max_denominator=7)


def coeff_maps(n):
    return st.dictionaries(st.sampled_from(monomials(n)), small, max_size=4)


curve_coeffs = st.integers(1, 3).flatmap(
    lambda n: st.builds(CurveCoeffs, st.just(n), coeff_maps(n), coeff_maps(n), coeff_maps(n),
                        coeff_maps(n)))
quadrant_coeffs = st.fixed_dictionaries({k: coeff_maps(2) for k in QUADRANT_FIELDS}).map(
    lambda d: QuadrantCoeffs(**d))
aggregated = st.builds(AggregatedCoeffs, st.tuples(*[small] * 6), st.tuples(*[small] * 6),
                       st.tuples(*[small] * 3))


def test_area_perturbation():
    c = CurveCoeffs(1, b_plus={(0, 1): 1}, b_minus={(0, 1): 1})
    m = melnikov_eval(0.05, c, Curve(1))
    assert m.value == pytest.approx(0.321536220235305393393765642877, rel=1e-12)
    assert m.est_error <= 1e-10 * abs(m.value)


def test_zero_perturbation():
    assert melnikov_eval(0.1, CurveCoeffs(2), Curve(1)).value == 0


@settings(max_examples=15, deadline=None)
@given(curve_coeffs, curve_coeffs, small, st.floats(0.01, 0.16))
def test_linearity(a, b, lam, h):
    lhs = melnikov_eval(h, a.scaled_sum(b, lam), Curve(1)).value
    rhs = melnikov_eval(h, a, Curve(1)).value + float(lam) * melnikov_eval(h, b, Curve(1)).value
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


@settings(max_examples=15, deadline=None)
@given(curve_coeffs, st.floats(0.01, 0.16))
def test_rho_map_preserves_value(c, h):
    rho = rho_map(c)
    J01, J11, I01, I11 = curve_generators(h)
    direct = melnikov_eval(h, c, Curve(1)).value
    # evaluate the collapsed form with quadrature for every generator it touches
    from btmelnikov.arcgen import ArcSpec, generator_dx
    from btmelnikov.core import solve_u
    total = sum(float(v) * generator_dx(i, j, ArcSpec(h, side)) for (i, j, side), v in rho.rho.items())
    total += sum(float(v) * solve_u(h) ** k for k, v in rho.boundary.items())
    assert total == pytest.approx(direct, rel=1e-10, abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(quadrant_coeffs, st.floats(0.005, 0.16))
def test_aggregation_preserves_value(c, h):
    direct = melnikov_eval(h, c, Quadrants()).value
    agg = melnikov_eval_aggregated(h, aggregate(c)).value
    assert agg == pytest.approx(direct, rel=1e-10, abs=1e-12)


@given(aggregated)
def test_section_is_right_inverse(agg):
    assert aggregate(section(agg)) == agg


def test_single_q_coefficient_gives_branch():
    # q+_{0,0} = 1 on the first quadrant: integral of dx = x_right
    from btmelnikov.core import branch_x
    c = QuadrantCoeffs(q_plus={(0, 0): 1})
    assert melnikov_eval(1e-4, c, Quadrants()).value == pytest.approx(branch_x(1e-4, "right"), rel=1e-12)


def test_variant_mismatch_rejected():
    with pytest.raises(ValueError):
        melnikov_eval(0.1, CurveCoeffs(1), Quadrants())


def test_coefficient_validation():
    with pytest.raises(ValueError):
        CurveCoeffs(1, a_plus={(2, 0): 1})
    with pytest.raises(ValueError):
        CurveCoeffs(0)
    with pytest.raises(ValueError):
        AggregatedCoeffs((1,) * 5)


def test_grid_records_failures():
    out = melnikov_grid([0.05, 0.3], CurveCoeffs(1, b_plus={(0, 1): 1}), Curve(1))
    assert out[0].value > 0
    assert isinstance(out[1], Exception)


def test_multiprecision_aggregated():
    from btmelnikov.arcgen import QuadratureSettings
    agg = AggregatedCoeffs(p=(0, 0, 1, 0, 0, 0), q=(0, 0, 1, 0, 0, 0))
    v = melnikov_eval_aggregated(0.05, agg, QuadratureSettings(precision=30)).value
    assert abs(float(v) - (0.087991723827476105698178296396 + 0.0727763862901765909987045250427)) < 1e-16


def test_gen_order():
    assert GEN_ORDER == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
    assert Fraction(AggregatedCoeffs.from_vector(range(15)).edge[2]) == 14
