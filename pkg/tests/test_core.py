import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from btmelnikov.core import (Curve, DomainError, Quadrants, branch_x, hamiltonian, parse_switching,
                             pf_data, sigma, solve_u, third_root, u_star)

levels = st.floats(1e-6, 1 / 6 - 1e-6)

# abscissae and switching ordinates from a 30-digit mpmath root solve
ORACLE = {
    0.05: {"xr": 0.363257491090567613576734277299, "xl": -0.289519248286085427626802970142,
           "u": 0.303392867937875601543448019599},
    0.1: {"xr": 0.567068922852268236254340214075, "xl": -0.397609874622561880402831224791,
          "u": 0.416420955110798850928549344503},
}


@pytest.mark.parametrize("h", sorted(ORACLE))
def test_against_oracle(h):
    o = ORACLE[h]
    assert branch_x(h, "right") == pytest.approx(o["xr"], rel=1e-14)
    assert branch_x(h, "left") == pytest.approx(o["xl"], rel=1e-14)
    assert solve_u(h) == pytest.approx(o["u"], rel=1e-14)


@given(levels)
def test_branches_lie_on_level(h):
    for side in ("right", "left"):
        x = branch_x(h, side)
        assert hamiltonian(x, 0.0) == pytest.approx(h, rel=1e-12)
    assert branch_x(h, "left") < 0 < branch_x(h, "right") < 1 < third_root(h)


@given(levels, st.integers(1, 3))
def test_switching_point_lies_on_level(h, m):
    u = solve_u(h, m)
    assert 0 < u < u_star(m)
    assert hamiltonian(u ** (2 * m), u) == pytest.approx(h, rel=1e-12)


@given(levels, levels)
def test_solve_u_is_monotone(a, b):
    if a < b:
        assert solve_u(a) <= solve_u(b)


@pytest.mark.parametrize("h", [0.0, -0.1, 1 / 6, 0.2, Fraction(1, 6)])
def test_energy_outside_annulus(h):
    with pytest.raises(DomainError):
        solve_u(h)


def test_u_star_at_saddle():
    u = u_star(1)
    assert u * u / 2 + u ** 4 / 2 - u ** 6 / 3 == pytest.approx(1 / 6, rel=1e-15)


def test_sigma_positive_below_u_star():
    for k in range(1, 100):
        assert sigma(u_star(1) * k / 100) > 0


def test_parse_switching():
    assert parse_switching("curve:2") == Curve(2)
    assert parse_switching(" Quadrants ") == Quadrants()
    assert parse_switching("curve") == Curve(1)
    for bad in ("curve:0", "curve:x", "lines"):
        with pytest.raises(ValueError):
            parse_switching(bad)


def test_curve_rejects_bad_exponent():
    with pytest.raises(ValueError):
        Curve(0)


def test_pf_constants():
    pf = pf_data()
    assert pf.k01[0] == Fraction(7, 6)
    # det(B1 h + C1) = (6/35) h (6h - 1)
    for h in (Fraction(1, 10), Fraction(1, 7)):
        m = pf.matrix_at(h)
        assert m[0][0] * m[1][1] - m[0][1] * m[1][0] == Fraction(6, 35) * h * (6 * h - 1)


def test_third_root_on_level():
    h = 0.12
    x = third_root(h)
    assert hamiltonian(x, 0.0) == pytest.approx(h, rel=1e-12)
    assert math.isfinite(x)
