"""Line integrals of monomial forms along arcs of the level curve ``H = h``.

Each arc is traced through one of two smooth charts centred on the points
where the level curve meets ``y = 0``:

* right chart: ``x = x_r - t^2``, ``y = t * sqrt(2/3 (x - x_l)(x_3 - x))``
* left chart:  ``x = x_l + t^2``, ``y = t * sqrt(2/3 (x_r - x)(x_3 - x))``

with ``x_l < 0 < x_r < 1 < x_3`` the roots of ``x^2/2 - x^3/3 = h``.  The
integrands are analytic in ``t``, so the square-root turning points cost
nothing.  Every arc is split at ``t = 0`` (its ``y = 0`` crossing), which keeps
the near-singularity that forms as ``h -> 1/6`` at an interval end where
tanh-sinh clusters its nodes.  Orientation is clockwise throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import Curve, Quadrants, SwitchingConfig, branch_x, branch_x_mp, check_energy, solve_u
from .quadrature import QuadratureError, tanh_sinh, tanh_sinh_mp

SIDES = ("plus", "minus")


@dataclass(frozen=True)
class QuadratureSettings:
    """Tolerances and limits for arc quadrature.

    ``precision=None`` uses double precision; an integer selects mpmath with
    that many decimal digits (tolerances are then derived from it).
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_levels: int = 12
    endpoint_scheme: str = "tanh-sinh"
    precision: int | None = None
    max_degree: int = 12

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("abs_tol and rel_tol must be positive")
        if self.endpoint_scheme != "tanh-sinh":
            raise ValueError(f"unsupported endpoint scheme {self.endpoint_scheme!r}")
        if self.max_levels < 1:
            raise ValueError("max_levels must be >= 1")

    def mp_context(self):
        import mpmath

        ctx = mpmath.mp.clone()
        ctx.dps = self.precision
        return ctx


DEFAULT_SETTINGS = QuadratureSettings()


def arcs_of(switching: SwitchingConfig) -> tuple:
    """``(side, arc_id)`` pairs covering the oval for a switching configuration."""
    if isinstance(switching, Quadrants):
        return (("plus", "upper"), ("plus", "lower"), ("minus", "upper"), ("minus", "lower"))
    return (("plus", "full"), ("minus", "full"))


@dataclass(frozen=True)
class ArcSpec:
    """An oriented arc of ``H = h``.

    For curve switching ``arc_id`` is ``"full"``: the plus arc runs clockwise
    from ``(u^(2m), u)`` through ``(x_r, 0)`` to ``(u^(2m), -u)``; the minus arc
    from ``(u^(2m), -u)`` through ``(x_l, 0)`` back up.  For quadrant
    switching ``arc_id`` is ``"upper"`` or ``"lower"``: plus arcs lie in
    ``x > 0``, minus arcs in ``x < 0``.
    """

    h: float
    side: str
    switching: SwitchingConfig = Curve(1)
    arc_id: str = "full"

    def __post_init__(self):
        check_energy(self.h)
        if self.side not in SIDES:
            raise ValueError(f"side must be 'plus' or 'minus', got {self.side!r}")
        if (self.side, self.arc_id) not in arcs_of(self.switching):
            raise ValueError(f"arc {self.arc_id!r} does not exist for {self.switching}")

    @property
    def endpoints(self):
        """Start and end points in the clockwise direction."""
        if isinstance(self.switching, Curve):
            u = solve_u(self.h, self.switching.m)
            a, b = (u ** (2 * self.switching.m), u), (u ** (2 * self.switching.m), -u)
            return (a, b) if self.side == "plus" else (b, a)
        s = math.sqrt(2 * self.h)
        xr, xl = branch_x(self.h, "right"), branch_x(self.h, "left")
        return {
            ("plus", "upper"): ((0.0, s), (xr, 0.0)),
            ("plus", "lower"): ((xr, 0.0), (0.0, -s)),
            ("minus", "lower"): ((0.0, -s), (xl, 0.0)),
            ("minus", "upper"): ((xl, 0.0), (0.0, s)),
        }[(self.side, self.arc_id)]


class _Roots:
    """Crossings of ``y = 0`` at a given level, in float or mp arithmetic."""

    def __init__(self, h, mp=None):
        if mp is None:
            self.xr = branch_x(h, "right")
            self.xl = branch_x(h, "left")
            self.sqrt = np.sqrt
            self.two_thirds = 2.0 / 3.0
        else:
            self.xr = branch_x_mp(h, "right", mp)
            self.xl = branch_x_mp(h, "left", mp)
            self.sqrt = mp.sqrt
            self.two_thirds = mp.mpf(2) / 3
        self.x3 = 1.5 - self.xr - self.xl

    def right(self, t):
        """Right chart: returns ``x, y, dx/dt, dy/dt``."""
        x = self.xr - t * t
        a, b = x - self.xl, self.x3 - x
        r = self.sqrt(self.two_thirds * a * b)
        dr = self.two_thirds * (b - a) / (2 * r)
        return x, t * r, -2 * t, r - 2 * t * t * dr

    def left(self, t):
        x = self.xl + t * t
        a, b = self.xr - x, self.x3 - x
        r = self.sqrt(self.two_thirds * a * b)
        dr = -self.two_thirds * (a + b) / (2 * r)
        return x, t * r, 2 * t, r + 2 * t * t * dr


def _pieces(arc: ArcSpec, roots: _Roots, mp=None):
    """Chart and t-intervals (split at t = 0) tracing ``arc`` clockwise."""
    sqrt = math.sqrt if mp is None else mp.sqrt
    zero = 0.0 if mp is None else mp.mpf(0)
    if isinstance(arc.switching, Curve):
        m = arc.switching.m
        if mp is None:
            xs = solve_u(arc.h, m) ** (2 * m)
        else:
            from .core import solve_u_mp

            xs = solve_u_mp(arc.h, mp, m) ** (2 * m)
        if arc.side == "plus":
            T = sqrt(roots.xr - xs)
            return [(roots.right, T, zero), (roots.right, zero, -T)]
        T = sqrt(xs - roots.xl)
        return [(roots.left, -T, zero), (roots.left, zero, T)]
    if arc.side == "plus":
        T = sqrt(roots.xr)
        return [(roots.right, T, zero)] if arc.arc_id == "upper" else [(roots.right, zero, -T)]
    T = sqrt(-roots.xl)
    return [(roots.left, zero, T)] if arc.arc_id == "upper" else [(roots.left, -T, zero)]


def line_integrals(arc: ArcSpec, form: Callable, settings: QuadratureSettings = DEFAULT_SETTINGS):
    """Integrate a family of 1-forms along ``arc``.

    Parameters
    ----------
    form : callable
        ``form(x, y, dx, dy)`` returns a sequence of ``k`` integrand values,
        i.e. the coefficients of ``dt`` after pulling back.  Called with numpy
        arrays (double precision) or mpf scalars (multiprecision).

    Returns
    -------
    values, errors : list
        ``k`` integrals and their error estimates.
    """
    if settings.precision is None:
        roots = _Roots(arc.h)

        total = err = None
        for chart, t0, t1 in _pieces(arc, roots):
            def f(t, chart=chart):
                vals = form(*chart(t))
                return np.array([np.broadcast_to(v, t.shape) for v in vals], dtype=float)

            v, e = tanh_sinh(f, t0, t1, settings.abs_tol, settings.rel_tol, settings.max_levels)
            total = v if total is None else total + v
            err = e if err is None else err + e
        return list(total), list(err)

    mp = settings.mp_context()
    roots = _Roots(mp.mpf(arc.h), mp)
    total = err = None
    for chart, t0, t1 in _pieces(arc, roots, mp):
        v, e = tanh_sinh_mp(lambda t, chart=chart: form(*chart(t)), t0, t1, mp,
                            max_levels=settings.max_levels)
        total = v if total is None else [p + q for p, q in zip(total, v)]
        err = e if err is None else [p + q for p, q in zip(err, e)]
    return total, err


def _check_indices(i: int, j: int, settings: QuadratureSettings):
    if i < 0 or j < 0:
        raise ValueError(f"negative exponent in x^{i} y^{j}")
    if i + j > settings.max_degree:
        raise ValueError(f"degree {i + j} exceeds max_degree={settings.max_degree}")


def generator_dx(i: int, j: int, arc: ArcSpec, settings: QuadratureSettings = DEFAULT_SETTINGS,
                 with_error: bool = False):
    """``integral of x^i y^j dx`` along ``arc`` (clockwise).

    Curve-switching arcs are symmetric in ``y``, so even ``j`` gives exactly 0.
    """
    _check_indices(i, j, settings)
    if isinstance(arc.switching, Curve) and j % 2 == 0:
        return (0.0, 0.0) if with_error else 0.0
    (v,), (e,) = line_integrals(arc, lambda x, y, dx, dy: (x ** i * y ** j * dx,), settings)
    _accept(v, e, settings, (i, j, arc.side, arc.arc_id))
    return (v, e) if with_error else v


def generator_dy(i: int, j: int, arc: ArcSpec, settings: QuadratureSettings = DEFAULT_SETTINGS,
                 with_error: bool = False):
    """``integral of x^i y^j dy`` along ``arc`` (clockwise)."""
    _check_indices(i, j, settings)
    (v,), (e,) = line_integrals(arc, lambda x, y, dx, dy: (x ** i * y ** j * dy,), settings)
    _accept(v, e, settings, (i, j, arc.side, arc.arc_id))
    return (v, e) if with_error else v


def _accept(v, e, settings, tag):
    if settings.precision is None and e > max(settings.abs_tol, settings.rel_tol * abs(v)):
        raise QuadratureError(f"entry {tag}: error estimate {e:.3e} above tolerance", e)


@dataclass
class GeneratorTable:
    """Values of ``integral x^i y^j dx`` on every arc of a switching configuration.

    ``entries`` maps ``(i, j, side, arc_id)`` to the value and ``errors`` to
    its estimate.  ``J``/``I`` give the plus/minus generators (upper arcs for
    quadrant switching); ``J_mirror``/``I_mirror`` the lower quadrant arcs.
    """

    h: float
    switching: SwitchingConfig
    entries: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    def _arc(self, side, lower=False):
        if isinstance(self.switching, Curve):
            return side, "full"
        return side, "lower" if lower else "upper"

    def J(self, i, j):
        return self.entries[(i, j) + self._arc("plus")]

    def I(self, i, j):
        return self.entries[(i, j) + self._arc("minus")]

    def J_mirror(self, i, j):
        return self.entries[(i, j) + self._arc("plus", True)]

    def I_mirror(self, i, j):
        return self.entries[(i, j) + self._arc("minus", True)]


def monomials(max_degree: int) -> list:
    return [(i, d - i) for d in range(max_degree + 1) for i in range(d, -1, -1)]


def generator_table(h: float, max_degree: int, switching: SwitchingConfig = Curve(1),
                    settings: QuadratureSettings = DEFAULT_SETTINGS) -> GeneratorTable:
    """All ``x^i y^j dx`` integrals with ``i + j <= max_degree`` on every arc."""
    if max_degree > settings.max_degree:
        raise ValueError(f"max_degree {max_degree} exceeds the configured {settings.max_degree}")
    table = GeneratorTable(h, switching)
    curve = isinstance(switching, Curve)
    idx = [(i, j) for i, j in monomials(max_degree) if not (curve and j % 2 == 0)]
    for side, arc_id in arcs_of(switching):
        arc = ArcSpec(h, side, switching, arc_id)
        if curve:
            for i, j in monomials(max_degree):
                if j % 2 == 0:
                    table.entries[(i, j, side, arc_id)] = 0.0
                    table.errors[(i, j, side, arc_id)] = 0.0
        if not idx:
            continue
        vals, errs = line_integrals(
            arc, lambda x, y, dx, dy: [x ** i * y ** j * dx for i, j in idx], settings)
        for (i, j), v, e in zip(idx, vals, errs):
            if settings.precision is None:
                _accept(v, e, settings, (i, j, side, arc_id))
            table.entries[(i, j, side, arc_id)] = v
            table.errors[(i, j, side, arc_id)] = e
    return table


# ------------------------------------------------------------ identity checks

#: terms below this magnitude are compared absolutely, not relatively
RESIDUAL_FLOOR = 1e-12


def _relative(terms) -> float:
    scale = max(max(abs(t) for t in terms), RESIDUAL_FLOOR)
    return abs(sum(terms)) / scale


def identity_residuals(h: float, max_degree: int = 6, m: int = 1,
                       settings: QuadratureSettings = DEFAULT_SETTINGS) -> dict:
    """Largest relative residual of each monomial identity at level ``h``.

    With ``J``/``I`` the plus/minus ``x^i y^j dx`` integrals, ``u`` the
    switching height and ``e_j = 1 + (-1)^j``:

    ``green_plus`` / ``green_minus``
        ``integral x^i y^j dy = -i/(j+1) J_{i-1,j+1} -+ e_j/(j+1) u^(2mi+j+1)``
    ``level_derivative`` (and ``_minus``)
        ``J_{i+1,j} - i/(j+2) J_{i-1,j+2} - J_{i+2,j} -+ e_{j+1}/(j+2) u^(2mi+j+2) = 0``,
        from multiplying ``x + y y_x - x^2 = 0`` by ``x^i y^j dx``
    ``level_product`` (and ``_minus``)
        ``J_{i+2,j}/2 + J_{i,j+2}/2 - J_{i+3,j}/3 = h J_{i,j}``
    ``lower_j``, ``lower_i`` and their ``_minus`` versions (``m = 1`` only)
        the two elimination rules that lower ``j`` by 2 and ``i`` by 1
    ``index_21`` / ``index_21_minus`` (``m = 1`` only)
        ``J_{2,1} = J_{1,1} - 2/3 u^3`` and ``I_{2,1} = I_{1,1} + 2/3 u^3``

    Every identity is checked for all index pairs with ``i + j <= max_degree``
    whose terms exist.  Residuals are ``|sum of terms| / max |term|``.
    """
    switching = Curve(m)
    table = generator_table(h, max_degree + 3, switching, settings)
    u = solve_u(h, m)
    out = {}

    def record(name, terms):
        out[name] = max(out.get(name, 0.0), _relative(terms))

    for side, sign, G, suffix in (("plus", -1, table.J, ""), ("minus", 1, table.I, "_minus")):
        arc = ArcSpec(h, side, switching)
        pairs = [(i, j) for i, j in monomials(max_degree)]
        dys, _ = line_integrals(arc, lambda x, y, dx, dy: [x ** i * y ** j * dy for i, j in pairs],
                                settings)
        # |x| <= X and |y| <= Y on the oval, and y varies by at most 4Y along an arc,
        # so X^i Y^j 4Y bounds the integral; it sets the scale where the terms
        # vanish by symmetry (odd j)
        X = max(branch_x(h, "right"), -branch_x(h, "left"))
        Y = math.sqrt(2 * h)
        for (i, j), dy in zip(pairs, dys):
            e = 1 + (-1) ** j
            terms = [dy, i / (j + 1) * G(i - 1, j + 1) if i else 0.0,
                     -sign * e / (j + 1) * u ** (2 * m * i + j + 1)]
            name = "green" + ("_plus" if side == "plus" else "_minus")
            mass = X ** i * Y ** j * 4 * Y
            out[name] = max(out.get(name, 0.0), abs(sum(terms)) / max(max(abs(t) for t in terms), mass))
        for i, j in pairs:
            e1 = 1 + (-1) ** (j + 1)
            record("level_derivative" + suffix,
                   [G(i + 1, j), -i / (j + 2) * G(i - 1, j + 2) if i else 0.0, -G(i + 2, j),
                    sign * e1 / (j + 2) * u ** (2 * m * i + j + 2)])
            record("level_product" + suffix,
                   [G(i + 2, j) / 2, G(i, j + 2) / 2, -G(i + 3, j) / 3, -h * G(i, j)])
            if m != 1:
                continue
            d = 2 * i + 3 * j + 2
            if j >= 2:
                record("lower_j" + suffix,
                       [G(i, j), -6 * j / d * h * G(i, j - 2), j / d * G(i + 2, j - 2),
                        -sign * 2 * (1 + (-1) ** (j - 1)) / d * u ** (2 * i + j + 2)])
            if i >= 2:
                record("lower_i" + suffix,
                       [G(i, j), 6 * (i - 2) / d * h * G(i - 3, j) if i >= 3 else 0.0,
                        -3 * (i + j) / d * G(i - 1, j),
                        -sign * 3 * (1 + (-1) ** (j + 1)) / d * u ** (2 * i + j - 2)])
        if m == 1:
            record("index_21" + suffix, [G(2, 1), -G(1, 1), -sign * 2 / 3 * u ** 3])
    return out
