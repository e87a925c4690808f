"""Geometry of the cubic center ``H = x^2/2 + y^2/2 - x^3/3`` and fixed
Picard-Fuchs data.

The period annulus is ``0 < h < 1/6``.  The switching curve ``x = y^(2m)``
meets the level curve ``H = h`` at ``(u^(2m), +-u)`` with ``u = solve_u(h, m)``;
the level curve meets ``y = 0`` at ``x_left < 0 < x_right``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .polys import D_H, RationalPoly, SigmaForm, to_u

SADDLE_LEVEL = Fraction(1, 6)
H_LO = 1e-6
H_HI = 1 / 6 - 1e-6


class DomainError(ValueError):
    """Energy level outside the open period annulus."""


@dataclass(frozen=True)
class Curve:
    """Switching curve ``x = y^(2m)``."""

    m: int = 1

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"switching exponent m must be a positive integer, got {self.m!r}")

    def __str__(self):
        return f"curve:{self.m}"


@dataclass(frozen=True)
class Quadrants:
    """Switching lines ``x = 0`` and ``y = 0``."""

    def __str__(self):
        return "quadrants"


SwitchingConfig = Union[Curve, Quadrants]


def parse_switching(text: str) -> SwitchingConfig:
    """Parse ``"curve:<m>"`` or ``"quadrants"``."""
    text = text.strip().lower()
    if text == "quadrants":
        return Quadrants()
    if text.startswith("curve"):
        _, _, m = text.partition(":")
        try:
            return Curve(int(m) if m else 1)
        except ValueError as exc:
            raise ValueError(f"bad switching spec {text!r}") from exc
    raise ValueError(f"bad switching spec {text!r}")


def hamiltonian(x, y):
    """``x^2/2 + y^2/2 - x^3/3``."""
    return x * x / 2 + y * y / 2 - x ** 3 / 3


def check_energy(h) -> None:
    if not (0 < h and 6 * h < 1):
        raise DomainError(f"energy {h!r} outside the open annulus (0, 1/6)")


def _switch_level(u: float, m: int) -> float:
    return 0.5 * u * u + 0.5 * u ** (4 * m) - u ** (6 * m) / 3


def _solve_level(h: float, m: int) -> float:
    # g(u) = u^2/2 + u^(4m)/2 - u^(6m)/3 is increasing on (0, 1) with g(1) = 2/3
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _switch_level(mid, m) < h:
            lo = mid
        else:
            hi = mid
    u = 0.5 * (lo + hi)
    for _ in range(8):
        g = _switch_level(u, m) - h
        dg = u + 2 * m * u ** (4 * m - 1) - 2 * m * u ** (6 * m - 1)
        step = g / dg
        u -= step
        if abs(step) <= 4e-17 * u:
            break
    return u


def solve_u(h: float, m: int = 1) -> float:
    """Ordinate of the upper intersection of ``H = h`` with ``x = y^(2m)``.

    Parameters
    ----------
    h : float
        Energy in the open interval (0, 1/6).
    m : int
        Switching exponent.

    Returns
    -------
    float
        The root ``u`` in ``(0, u_star(m))`` of ``u^2/2 + u^(4m)/2 - u^(6m)/3 = h``.
    """
    check_energy(h)
    if m < 1:
        raise ValueError("m must be >= 1")
    return _solve_level(float(h), m)


@lru_cache(maxsize=None)
def u_star(m: int = 1) -> float:
    """Value of ``u`` at the saddle level ``h = 1/6``."""
    return _solve_level(1 / 6, m)


def u_star_mp(mp, m: int = 1):
    """``u_star`` at the working precision of the mpmath context ``mp``."""
    g = lambda u: u * u / 2 + u ** (4 * m) / 2 - u ** (6 * m) / 3 - mp.mpf(1) / 6
    return mp.findroot(g, mp.mpf(u_star(m)))


def solve_u_mp(h, mp, m: int = 1):
    """``solve_u`` at the working precision of ``mp``."""
    check_energy(float(h))
    u = mp.mpf(_solve_level(float(h), m))
    h = mp.mpf(h)
    for _ in range(10):
        g = u * u / 2 + u ** (4 * m) / 2 - u ** (6 * m) / 3 - h
        dg = u + 2 * m * u ** (4 * m - 1) - 2 * m * u ** (6 * m - 1)
        step = g / dg
        u -= step
        if abs(step) <= abs(u) * mp.eps * 4:
            break
    return u


def _branch(h, side: str, M):
    c = M.acos(12 * h - 1) / 3
    if side == "right":
        x = M.cos(M.pi / 3 + c) + 0.5
    elif side == "left":
        x = 0.5 - M.cos(c)
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    # Newton polish on x^2/2 - x^3/3 = h; the trig form loses digits near h = 0
    for _ in range(3):
        x -= (x * x / 2 - x ** 3 / 3 - h) / (x - x * x)
    return x


def branch_x(h: float, side: str) -> float:
    """Abscissa where ``H = h`` crosses ``y = 0``.

    ``side="right"`` gives the root in (0, 1), ``side="left"`` the root in
    (-1/2, 0).
    """
    check_energy(h)
    return _branch(float(h), side, math)


def branch_x_mp(h, side: str, mp):
    check_energy(float(h))
    return _branch(mp.mpf(h), side, mp)


def third_root(h: float) -> float:
    """The root of ``x^2/2 - x^3/3 = h`` beyond the saddle (x > 1)."""
    return 1.5 - branch_x(h, "right") - branch_x(h, "left")


def sigma(u):
    """``1/(1 + 2u^2 - 2u^4)``."""
    return 1 / (1 + 2 * u * u - 2 * u ** 4)


def D(h):
    """``h(6h - 1)``, negative on the annulus."""
    return h * (6 * h - 1)


def du_dh(u):
    """``du/dh`` along the switching curve ``x = y^2``."""
    return sigma(u) / u


@dataclass(frozen=True)
class PicardFuchsData:
    """Fixed exact data of the first-order systems for m = 1.

    ``B1 h + C1`` multiplies the h-derivative in the matrix equations for
    ``(J_{0,1}, J_{1,1})`` and ``(I_{0,1}, I_{1,1})``; ``W`` is their common
    inhomogeneity (with opposite signs).  ``k00 ... k11`` define the coupled
    system for the sums ``J0 = J_{0,1} + I_{0,1}``, ``J1 = J_{1,1} + I_{1,1}``:
    ``D J0' = k00 J0 + k01 J1`` and ``D J1' = k10 J0 + k11 J1``.
    The plus-side generators satisfy the same system with inhomogeneities
    ``w1, w2`` (first order) and ``w1star, w2star`` (second order):

    ``D J_{0,1}'' = -5/6 J_{0,1} + w1star``,
    ``D J_{1,1}'' = -J_{0,1} + 7/6 J_{1,1} + w2star``;

    the minus side carries the negated inhomogeneities.
    """

    B1: tuple
    C1: tuple
    W: tuple
    k00: RationalPoly
    k01: RationalPoly
    k10: RationalPoly
    k11: RationalPoly
    w1: SigmaForm
    w2: SigmaForm
    w1star: SigmaForm
    w2star: SigmaForm
    D: RationalPoly = D_H

    @staticmethod
    def sigma(u):
        return sigma(u)

    def matrix_at(self, h):
        """``B1 h + C1`` evaluated at ``h`` (exact when ``h`` is rational)."""
        return tuple(tuple(self.B1[r][c] * h + self.C1[r][c] for c in range(2)) for r in range(2))


@lru_cache(maxsize=1)
def pf_data() -> PicardFuchsData:
    """Exact Picard-Fuchs data; the inhomogeneities are derived from ``W``."""
    F = Fraction
    B1 = ((F(6, 5), F(0)), (F(6, 35), F(6, 7)))
    C1 = ((F(0), F(-1, 5)), (F(0), F(-6, 35)))
    W = (SigmaForm(1, RationalPoly([0, F(2, 5), 0, F(8, 5)], "u")),
         SigmaForm(1, RationalPoly([0, F(12, 35), 0, F(18, 35), 0, F(8, 7)], "u")))
    k00 = RationalPoly([-1, 5])
    k01 = RationalPoly([F(7, 6)])
    k10 = RationalPoly([0, -1])
    k11 = RationalPoly([0, 7])
    # V' = (B1 h + C1)^{-1} (V - W), det(B1 h + C1) = (6/35) D(h); the
    # homogeneous part gives the k's, the W part the first-order w's.
    adj = ((RationalPoly([F(-6, 35), F(6, 7)]), RationalPoly([F(1, 5)])),
           (RationalPoly([0, F(-6, 35)]), RationalPoly([0, F(6, 5)])))
    scale = F(-35, 6)
    w1 = (W[0] * to_u(adj[0][0]) + W[1] * to_u(adj[0][1])) * scale
    w2 = (W[0] * to_u(adj[1][0]) + W[1] * to_u(adj[1][1])) * scale
    # differentiate D V' = K V + w once more and eliminate V'
    Du = to_u(D_H)
    w1s = (w1 * to_u(RationalPoly([0, -7])) + w2 * F(7, 6) + w1.dh() * Du).divide_poly(Du)
    w2s = (w1 * to_u(RationalPoly([0, -1])) + w2 * to_u(RationalPoly([0, 7]) - D_H.derivative())
           + w2.dh() * Du).divide_poly(Du)
    return PicardFuchsData(B1=B1, C1=C1, W=W, k00=k00, k01=k01, k10=k10, k11=k11,
                           w1=w1, w2=w2, w1star=w1s, w2star=w2s)


# Inhomogeneities in the scaling under which they are usually quoted; each
# is 6/35 times (up to sign) the value consistent with the system above.
QUOTED_W = {
    "w1": SigmaForm(1, RationalPoly([0, 0, 0, 0, 0, Fraction(-38, 35), 0, Fraction(-4, 7), 0,
                                     Fraction(16, 35)], "u")),
    "w2": SigmaForm(1, RationalPoly([0, 0, 0, Fraction(-6, 35), 0, Fraction(-12, 35), 0,
                                     Fraction(-26, 35), 0, Fraction(-4, 7), 0,
                                     Fraction(16, 35)], "u")),
    "w1star": SigmaForm(3, RationalPoly([0, 7, 0, -39, 0, -72, 0, -46, 0, -24, 0, 32], "u")
                        * Fraction(-2, 35)),
    "w2star": SigmaForm(3, RationalPoly([0, 3, 0, 3, 0, 77, 0, 176, 0, 22, 0, -120, 0, 32], "u")
                        * Fraction(-2, 35)),
}
QUOTED_K01 = Fraction(6, 7)
