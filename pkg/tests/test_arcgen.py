import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btmelnikov.arcgen import (ArcSpec, QuadratureSettings, generator_dx, generator_dy,
                               generator_table, identity_residuals)
from btmelnikov.core import Curve, DomainError, Quadrants, solve_u

# independent 30-digit mpmath.quad values of the y dx and x y dx integrals
CURVE_ORACLE = {
    0.05: {"J01": 0.118561591768206169768433679182, "I01": 0.202974628467099223625331963695,
           "J11": 0.0241322660167015109841419029606, "I11": -0.0153753470392948111775148107073},
    0.1: {"J01": 0.227745681547378938136751168035, "I01": 0.435151689335150823238739231771,
          "J11": 0.0757544080051753239517669447224, "I11": -0.0352883512461789603249047639121},
}
QUADRANT_ORACLE = {
    0.05: {"J01": 0.087991723827476105698178296396, "I01": 0.0727763862901765909987045250427,
           "J11": 0.0133784294214779411820090874679, "I11": -0.00899996993277459127869554134126},
    0.1: {"J01": 0.189610150088128396432288070342, "I01": 0.141838535353136484255457129561,
          "J11": 0.0443662379108616625366726350158, "I11": -0.0241332095313634807232415446106},
}
AREA = {0.05: 0.321536220235305393393765642877, 0.1: 0.662897370882529761375490399806}


@pytest.mark.parametrize("h", sorted(CURVE_ORACLE))
def test_curve_generators_against_oracle(h):
    o = CURVE_ORACLE[h]
    for name, side in (("J", "plus"), ("I", "minus")):
        arc = ArcSpec(h, side)
        assert generator_dx(0, 1, arc) == pytest.approx(o[name + "01"], rel=1e-12)
        assert generator_dx(1, 1, arc) == pytest.approx(o[name + "11"], rel=1e-12)


@pytest.mark.parametrize("h", sorted(QUADRANT_ORACLE))
def test_quadrant_generators_against_oracle(h):
    o = QUADRANT_ORACLE[h]
    for name, side in (("J", "plus"), ("I", "minus")):
        arc = ArcSpec(h, side, Quadrants(), "upper")
        assert generator_dx(0, 1, arc) == pytest.approx(o[name + "01"], rel=1e-12)
        assert generator_dx(1, 1, arc) == pytest.approx(o[name + "11"], rel=1e-12)


@pytest.mark.parametrize("h", sorted(AREA))
def test_closed_orbit_area(h):
    total = sum(generator_dx(0, 1, ArcSpec(h, side)) for side in ("plus", "minus"))
    assert total == pytest.approx(AREA[h], rel=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.floats(1e-5, 0.166), st.integers(1, 3))
def test_dy_endpoint_values(h, m):
    # integral of y^j dy depends only on the end points (u^(2m), +-u)
    u = solve_u(h, m)
    arc = ArcSpec(h, "plus", Curve(m))
    assert generator_dy(0, 0, arc) == pytest.approx(-2 * u, rel=1e-12)
    assert generator_dy(0, 2, arc) == pytest.approx(-2 * u ** 3 / 3, rel=1e-11)


def test_even_j_vanishes_on_curve_arcs():
    arc = ArcSpec(0.08, "minus", Curve(2))
    assert generator_dx(3, 2, arc) == 0.0


@settings(max_examples=15, deadline=None)
@given(st.floats(1e-4, 0.1666))
def test_area_is_positive(h):
    assert generator_dx(0, 1, ArcSpec(h, "plus")) + generator_dx(0, 1, ArcSpec(h, "minus")) > 0


@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("h", [1e-5, 0.03, 0.13, 0.1666])
def test_identity_residuals(h, m):
    res = identity_residuals(h, 6, m)
    assert res and max(res.values()) < 1e-10, res


def test_table_matches_single_entries():
    t = generator_table(0.07, 4, Quadrants())
    assert t.J(2, 1) == pytest.approx(generator_dx(2, 1, ArcSpec(0.07, "plus", Quadrants(), "upper")),
                                      rel=1e-13)
    # lower arcs mirror the upper ones with sign (-1)^(j+1)
    assert t.J_mirror(1, 1) == pytest.approx(t.J(1, 1), rel=1e-12)
    assert t.I_mirror(1, 2) == pytest.approx(-t.I(1, 2), rel=1e-12)


def test_multiprecision_agrees():
    arc = ArcSpec(0.05, "plus")
    v = generator_dx(1, 1, arc, QuadratureSettings(precision=30))
    assert abs(float(v) - CURVE_ORACLE[0.05]["J11"]) < 1e-16


def test_bad_inputs():
    with pytest.raises(DomainError):
        ArcSpec(0.2, "plus")
    with pytest.raises(ValueError):
        ArcSpec(0.1, "up")
    with pytest.raises(ValueError):
        ArcSpec(0.1, "plus", Quadrants(), "full")
    with pytest.raises(ValueError):
        generator_dx(-1, 1, ArcSpec(0.1, "plus"))
    with pytest.raises(ValueError):
        generator_dx(10, 3, ArcSpec(0.1, "plus"))
    with pytest.raises(ValueError):
        QuadratureSettings(abs_tol=0)
    with pytest.raises(ValueError):
        QuadratureSettings(endpoint_scheme="gauss")
