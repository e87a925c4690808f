import math

import mpmath
import numpy as np
import pytest

from btmelnikov.quadrature import QuadratureError, tanh_sinh, tanh_sinh_mp


def test_endpoint_singularity():
    v, e = tanh_sinh(lambda x: np.array([np.log(x)]), 0.0, 1.0)
    assert v[0] == pytest.approx(-1.0, rel=1e-12)
    assert e[0] < 1e-10


def test_inverse_sqrt_tail_is_truncated():
    # the abscissa cut-off drops a tail of about 2 sqrt(1e-17) for x^(-1/2)
    v, _ = tanh_sinh(lambda x: np.array([1 / np.sqrt(x)]), 0.0, 1.0)
    assert abs(v[0] - 2.0) < 2e-8


def test_quarter_disc_vector():
    f = lambda x: np.array([np.sqrt(1 - x * x), x * np.sqrt(1 - x * x)])
    v, _ = tanh_sinh(f, 0.0, 1.0)
    assert v == pytest.approx([math.pi / 4, 1 / 3], rel=1e-13)


def test_reverse_orientation():
    v, _ = tanh_sinh(lambda x: np.array([x * x]), 1.0, 0.0)
    assert v[0] == pytest.approx(-1 / 3, rel=1e-13)


def test_empty_interval():
    v, e = tanh_sinh(lambda x: np.array([x]), 0.5, 0.5)
    assert v[0] == 0 and e[0] == 0


def test_level_limit_raises():
    with pytest.raises(QuadratureError):
        tanh_sinh(lambda x: np.array([np.sin(400 * x)]), 0.0, 1.0, abs_tol=1e-15, rel_tol=1e-15,
                  max_levels=2)


def test_multiprecision():
    mp = mpmath.mp.clone()
    mp.dps = 40
    v, e = tanh_sinh_mp(lambda t: [mp.sqrt(1 - t * t)], mp.mpf(0), mp.mpf(1), mp)
    assert abs(v[0] - mp.pi / 4) < mp.mpf(10) ** -35
