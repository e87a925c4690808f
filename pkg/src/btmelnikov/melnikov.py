"""Perturbation data and direct evaluation of the first-order Melnikov function.

For the perturbed system ``x' = y + eps p(x, y)``, ``y' = -x + x^2 + eps q(x, y)``
with piecewise polynomial ``p, q``, the Melnikov function is the sum over
the arcs of ``H = h`` of ``integral q dx - p dy`` with each arc's own pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

import numpy as np

from .arcgen import (DEFAULT_SETTINGS, ArcSpec, GeneratorTable, QuadratureSettings, arcs_of,
                     line_integrals)
from .core import Curve, Quadrants, SwitchingConfig, branch_x, branch_x_mp, check_energy


def _coeff_map(data, max_degree: int, name: str) -> dict:
    out = {}
    for key, val in dict(data or {}).items():
        if isinstance(key, str):
            i, j = (int(s) for s in key.split(","))
        else:
            i, j = key
        if i < 0 or j < 0 or i + j > max_degree:
            raise ValueError(f"{name}: index ({i},{j}) outside 0 <= i+j <= {max_degree}")
        val = Fraction(val)
        if val:
            out[(i, j)] = out.get((i, j), Fraction(0)) + val
    return out


@dataclass(frozen=True, eq=True)
class CurveCoeffs:
    """Degree-``n`` perturbation with switching curve ``x = y^(2m)``.

    ``a_*`` are the coefficients of ``p`` and ``b_*`` those of ``q``; the plus
    pair acts in ``x > y^(2m)``.
    """

    n: int
    a_plus: Mapping = field(default_factory=dict)
    a_minus: Mapping = field(default_factory=dict)
    b_plus: Mapping = field(default_factory=dict)
    b_minus: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("degree n must be >= 1")
        for name in ("a_plus", "a_minus", "b_plus", "b_minus"):
            object.__setattr__(self, name, _coeff_map(getattr(self, name), self.n, name))

    def arc_pair(self, side: str, arc_id: str = "full"):
        """``(p, q)`` coefficient maps acting on the given arc."""
        return (self.a_plus, self.b_plus) if side == "plus" else (self.a_minus, self.b_minus)

    def scaled_sum(self, other: "CurveCoeffs", lam=1) -> "CurveCoeffs":
        def comb(x, y):
            keys = set(x) | set(y)
            return {k: x.get(k, 0) + Fraction(lam) * y.get(k, 0) for k in keys}

        return CurveCoeffs(max(self.n, other.n), comb(self.a_plus, other.a_plus),
                           comb(self.a_minus, other.a_minus), comb(self.b_plus, other.b_plus),
                           comb(self.b_minus, other.b_minus))


QUADRANT_FIELDS = ("p_plus", "q_plus", "pt_plus", "qt_plus",
                   "p_minus", "q_minus", "pt_minus", "qt_minus")


@dataclass(frozen=True, eq=True)
class QuadrantCoeffs:
    """Degree-2 perturbation switching on the coordinate axes.

    ``p_plus/q_plus`` act in the first quadrant, ``pt_plus/qt_plus`` in the
    fourth, ``pt_minus/qt_minus`` in the third and ``p_minus/q_minus`` in the
    second.
    """

    p_plus: Mapping = field(default_factory=dict)
    q_plus: Mapping = field(default_factory=dict)
    pt_plus: Mapping = field(default_factory=dict)
    qt_plus: Mapping = field(default_factory=dict)
    p_minus: Mapping = field(default_factory=dict)
    q_minus: Mapping = field(default_factory=dict)
    pt_minus: Mapping = field(default_factory=dict)
    qt_minus: Mapping = field(default_factory=dict)

    n = 2

    def __post_init__(self):
        for name in QUADRANT_FIELDS:
            object.__setattr__(self, name, _coeff_map(getattr(self, name), 2, name))

    def arc_pair(self, side: str, arc_id: str):
        lower = arc_id == "lower"
        if side == "plus":
            return (self.pt_plus, self.qt_plus) if lower else (self.p_plus, self.q_plus)
        return (self.pt_minus, self.qt_minus) if lower else (self.p_minus, self.q_minus)

    def scaled_sum(self, other: "QuadrantCoeffs", lam=1) -> "QuadrantCoeffs":
        out = {}
        for name in QUADRANT_FIELDS:
            x, y = getattr(self, name), getattr(other, name)
            out[name] = {k: x.get(k, 0) + Fraction(lam) * y.get(k, 0) for k in set(x) | set(y)}
        return QuadrantCoeffs(**out)


PerturbationCoeffs = Union[CurveCoeffs, QuadrantCoeffs]


def _check_variant(coeffs, switching):
    if isinstance(switching, Curve) != isinstance(coeffs, CurveCoeffs):
        raise ValueError(f"coefficient variant {type(coeffs).__name__} does not match {switching}")


@dataclass(frozen=True)
class RhoCoeffs:
    """Collapsed coefficients of ``M = sum rho+ J + sum rho- I + boundary(u)``.

    ``rho`` maps ``(i, j, side)`` to the coefficient of ``J_{i,j}`` (plus) or
    ``I_{i,j}`` (minus); ``boundary`` maps an exponent ``k`` to the
    coefficient of ``u^k``.
    """

    rho: Mapping
    boundary: Mapping
    n: int
    m: int = 1

    def is_zero(self) -> bool:
        return not any(self.rho.values()) and not any(self.boundary.values())


def rho_map(coeffs: CurveCoeffs, m: int = 1) -> RhoCoeffs:
    """Fold the ``dy`` terms into ``dx`` generators plus u-power boundary terms."""
    if not isinstance(coeffs, CurveCoeffs):
        raise TypeError("rho_map needs curve-switching coefficients")
    rho, boundary = {}, {}
    for side in ("plus", "minus"):
        a, b = coeffs.arc_pair(side)
        sign = 1 if side == "plus" else -1
        for (i, j), c in b.items():
            rho[(i, j, side)] = rho.get((i, j, side), Fraction(0)) + c
        for (i, j), c in a.items():
            if i >= 1:
                key = (i - 1, j + 1, side)
                rho[key] = rho.get(key, Fraction(0)) + Fraction(i, j + 1) * c
            if j % 2 == 0:
                k = 2 * m * i + j + 1
                boundary[k] = boundary.get(k, Fraction(0)) + sign * Fraction(2, j + 1) * c
    rho = {k: v for k, v in rho.items() if v}
    boundary = {k: v for k, v in boundary.items() if v}
    return RhoCoeffs(rho, boundary, coeffs.n, m)


@dataclass(frozen=True)
class MelnikovSample:
    h: float
    value: float
    est_error: float


def _arc_form(pc, qc):
    p_items = list(pc.items())
    q_items = list(qc.items())

    def form(x, y, dx, dy):
        acc = 0 * x
        for (i, j), c in q_items:
            acc = acc + _num(c, x) * x ** i * y ** j * dx
        for (i, j), c in p_items:
            acc = acc - _num(c, x) * x ** i * y ** j * dy
        return (acc,)

    return form


def _num(c: Fraction, like):
    if isinstance(like, np.ndarray) or isinstance(like, float):
        return float(c)
    return like.context.mpf(c.numerator) / c.denominator


def melnikov_eval(h: float, coeffs: PerturbationCoeffs, switching: SwitchingConfig = Curve(1),
                  settings: QuadratureSettings = DEFAULT_SETTINGS) -> MelnikovSample:
    """``M(h)`` by direct quadrature of ``q dx - p dy`` over every arc."""
    _check_variant(coeffs, switching)
    check_energy(h)
    value, err = 0.0, 0.0
    for side, arc_id in arcs_of(switching):
        pc, qc = coeffs.arc_pair(side, arc_id)
        if not pc and not qc:
            continue
        (v,), (e,) = line_integrals(ArcSpec(h, side, switching, arc_id), _arc_form(pc, qc), settings)
        value = value + v
        err = err + e
    return MelnikovSample(h, value, err)


def melnikov_grid(h_grid, coeffs: PerturbationCoeffs, switching: SwitchingConfig = Curve(1),
                  settings: QuadratureSettings = DEFAULT_SETTINGS):
    """Samples in grid order; a failing point yields its exception in place."""
    out = []
    for h in h_grid:
        try:
            out.append(melnikov_eval(h, coeffs, switching, settings))
        except Exception as exc:  # collected, not fatal
            out.append(exc)
    return out


def melnikov_from_table(rho: RhoCoeffs, table: GeneratorTable, u: float) -> float:
    """Evaluate ``sum rho J + sum rho I + sum c_k u^k`` from tabulated generators."""
    total = 0.0
    for (i, j, side), c in rho.rho.items():
        g = table.J(i, j) if side == "plus" else table.I(i, j)
        total += float(c) * g
    for k, c in rho.boundary.items():
        total += float(c) * u ** k
    return total


# ---------------------------------------------------------------- quadrants

GEN_ORDER = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))


@dataclass(frozen=True)
class AggregatedCoeffs:
    """Coefficients of the quadrant Melnikov function in generator form.

    ``M = sum p[k] J_{g_k} + sum q[k] I_{g_k} + e0 s + e1 s^2/2 + e2 s^3/3``
    with ``g_k`` running over ``GEN_ORDER``, ``J``/``I`` the upper-arc
    generators and ``s = sqrt(2h)``.  The ``e`` terms come from the ``y^j dy``
    parts of the ``p`` polynomials, which integrate to endpoint values.
    """

    p: tuple = (0,) * 6
    q: tuple = (0,) * 6
    edge: tuple = (0, 0, 0)

    def __post_init__(self):
        for name, size in (("p", 6), ("q", 6), ("edge", 3)):
            vals = tuple(Fraction(v) for v in getattr(self, name))
            if len(vals) != size:
                raise ValueError(f"{name} needs {size} entries")
            object.__setattr__(self, name, vals)

    @classmethod
    def from_vector(cls, vec) -> "AggregatedCoeffs":
        vec = list(vec)
        edge = vec[12:15] + [0] * (15 - max(len(vec), 12))
        return cls(tuple(vec[:6]), tuple(vec[6:12]), tuple(edge[:3]))

    def vector(self, with_edge: bool = False) -> tuple:
        return self.p + self.q + (self.edge if with_edge else ())


def _rho_quadrant(p: Mapping, q: Mapping, i: int, j: int) -> Fraction:
    if j == 0:
        return q.get((i, 0), Fraction(0))
    return q.get((i, j), Fraction(0)) + Fraction(i + 1, j) * p.get((i + 1, j - 1), Fraction(0))


def aggregate(coeffs: QuadrantCoeffs) -> AggregatedCoeffs:
    """Collapse the 48 quadrant coefficients onto the 12 generators and 3 edge terms.

    Lower-arc generators equal ``(-1)^(j+1)`` times the upper ones.
    """
    c = coeffs
    p = tuple(_rho_quadrant(c.p_plus, c.q_plus, i, j)
              + (-1) ** (j + 1) * _rho_quadrant(c.pt_plus, c.qt_plus, i, j) for i, j in GEN_ORDER)
    q = tuple(_rho_quadrant(c.p_minus, c.q_minus, i, j)
              + (-1) ** (j + 1) * _rho_quadrant(c.pt_minus, c.qt_minus, i, j) for i, j in GEN_ORDER)
    z = Fraction(0)

    def a0(m, j):
        return m.get((0, j), z)

    edge = tuple(a0(c.p_plus, j) - a0(c.p_minus, j)
                 + (-1) ** j * (a0(c.pt_plus, j) - a0(c.pt_minus, j)) for j in range(3))
    return AggregatedCoeffs(p, q, edge)


def section(agg: AggregatedCoeffs) -> QuadrantCoeffs:
    """A right inverse of :func:`aggregate`.

    Each J-coefficient goes to ``q_plus``, each I-coefficient to ``q_minus``
    and the edge terms to ``p_plus[(0, j)]``.
    """
    q_plus = {g: v for g, v in zip(GEN_ORDER, agg.p) if v}
    q_minus = {g: v for g, v in zip(GEN_ORDER, agg.q) if v}
    p_plus = {(0, j): v for j, v in enumerate(agg.edge) if v}
    return QuadrantCoeffs(p_plus=p_plus, q_plus=q_plus, q_minus=q_minus)


def closed_form_generators(h, mp=None) -> dict:
    """Upper-arc generators with polynomial closed forms (``j`` even).

    Keys ``("J", i, j)`` / ``("I", i, j)``.
    """
    if mp is None:
        xr, xl = branch_x(h, "right"), branch_x(h, "left")
    else:
        h = mp.mpf(h)
        xr, xl = branch_x_mp(h, "right", mp), branch_x_mp(h, "left", mp)
    out = {}
    for i in range(3):
        out[("J", i, 0)] = xr ** (i + 1) / (i + 1)
        out[("I", i, 0)] = -xl ** (i + 1) / (i + 1)
    out[("J", 0, 2)] = 2 * h * xr - xr ** 3 / 3 + xr ** 4 / 6
    out[("I", 0, 2)] = -(2 * h * xl - xl ** 3 / 3 + xl ** 4 / 6)
    return out


def quadrant_from_generators(agg: AggregatedCoeffs, h, gens: Mapping, mp=None):
    """Assemble ``M(h)`` from generator values keyed ``("J"|"I", i, j)``."""
    conv = float if mp is None else (lambda c: mp.mpf(c.numerator) / c.denominator)
    s = (2 * h) ** 0.5 if mp is None else mp.sqrt(2 * mp.mpf(h))
    total = 0 if mp is None else mp.mpf(0)
    for (i, j), cp, cq in zip(GEN_ORDER, agg.p, agg.q):
        if cp:
            total += conv(cp) * gens[("J", i, j)]
        if cq:
            total += conv(cq) * gens[("I", i, j)]
    for j, e in enumerate(agg.edge):
        if e:
            total += conv(e) * s ** (j + 1) / (j + 1)
    return total


def table_generators(table: GeneratorTable) -> dict:
    out = {}
    for i, j in GEN_ORDER:
        out[("J", i, j)] = table.J(i, j)
        out[("I", i, j)] = table.I(i, j)
    return out


@lru_cache(maxsize=1 << 16)
def aggregated_generators(h, settings: QuadratureSettings = DEFAULT_SETTINGS):
    """All twelve upper-arc generators at ``h`` plus quadrature errors.

    Returns ``(values, errors)`` keyed ``("J"|"I", i, j)``.  Only the ``j = 1``
    generators need quadrature.  Results are memoized, so repeated scans over
    one grid with different coefficients pay for the quadrature once.
    """
    check_energy(float(h))
    mp = settings.mp_context() if settings.precision is not None else None
    gens = closed_form_generators(h, mp)
    errs = {}
    for side, tag in (("plus", "J"), ("minus", "I")):
        # an mp level must reach the arc unrounded to match the closed forms
        arc = ArcSpec(h if mp is not None else float(h), side, Quadrants(), "upper")
        vals, e = line_integrals(arc, lambda x, y, dx, dy: (y * dx, x * y * dx), settings)
        gens[(tag, 0, 1)], gens[(tag, 1, 1)] = vals
        errs[(tag, 0, 1)], errs[(tag, 1, 1)] = float(e[0]), float(e[1])
    return gens, errs


def melnikov_eval_aggregated(h, agg: AggregatedCoeffs,
                             settings: QuadratureSettings = DEFAULT_SETTINGS) -> MelnikovSample:
    """Quadrant ``M(h)`` from aggregated coefficients.

    Works in double or multiprecision per ``settings``.  The error estimate
    adds the quadrature errors and the rounding error of the final sum, which
    dominates when the terms cancel heavily.
    """
    mp = settings.mp_context() if settings.precision is not None else None
    gens, errs = aggregated_generators(h, settings)
    err = 0.0
    for (tag, i, j), e in errs.items():
        coef = (agg.p if tag == "J" else agg.q)[GEN_ORDER.index((i, j))]
        err += abs(float(coef)) * e
    magnitude = quadrant_from_generators(_abs_coeffs(agg), h, {k: abs(v) for k, v in gens.items()}, mp)
    eps = 2.0 ** -52 if mp is None else 10.0 ** (-settings.precision)
    err += 16 * eps * float(magnitude)
    return MelnikovSample(h, quadrant_from_generators(agg, h, gens, mp), err)


def _abs_coeffs(agg: AggregatedCoeffs) -> AggregatedCoeffs:
    return AggregatedCoeffs(tuple(map(abs, agg.p)), tuple(map(abs, agg.q)), tuple(map(abs, agg.edge)))
