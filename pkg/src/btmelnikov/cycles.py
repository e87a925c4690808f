"""Counting zeros of ``M(h)``, empirical bound checks and the 11-zero design.

Only sign changes count as zeros: a bracket ``[lo, hi]`` with
``M(lo) M(hi) < 0`` holds a zero of odd multiplicity.  Grid points where
``|M|`` sits below ten times its error estimate without a neighbouring sign
change are reported as *suspect* (possibly an even-multiplicity zero) and
are not counted.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .arcgen import DEFAULT_SETTINGS, ArcSpec, QuadratureSettings, arcs_of, line_integrals, monomials
from .core import H_HI, H_LO, Curve, Quadrants, SwitchingConfig
from .exact import ExactScalar, cramer_solve
from .localseries import COLUMNS, generator_matrix
from .melnikov import (AggregatedCoeffs, QuadrantCoeffs, aggregate,
                       aggregated_generators, melnikov_eval, melnikov_eval_aggregated, section)

#: columns solved for by the series design: the generators without ``I_{2,0}``
#: (``J10 - J20 = h = I20 - I10`` makes the twelve generators dependent)
#: plus the ``sqrt(2h)`` edge term
DESIGN_COLUMNS = tuple(c for c in COLUMNS if c != "I20") + ("E0",)
DESIGN_PRECISION = 40
BISECTION_WIDTH = 1e-12


class DesignError(RuntimeError):
    """The 11-zero construction did not reach 11 confirmed zeros."""

    def __init__(self, message: str, attempts: list):
        super().__init__(message)
        self.attempts = attempts


class BoundViolation(AssertionError):
    pass


def worker_count() -> int:
    """Worker cap from ``BTMEL_THREADS`` (default 1)."""
    raw = os.environ.get("BTMEL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _ordered_map(fn, items):
    # results come back in input order whatever the worker count
    n = worker_count()
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ------------------------------------------------------------------ reports

@dataclass(frozen=True)
class Zero:
    lo: float
    hi: float
    root: float
    flag: str  # "simple" or "suspect"


@dataclass
class ZeroReport:
    zeros: list
    grid: str
    identically_zero: bool
    skipped: list = field(default_factory=list)

    @property
    def simple(self) -> list:
        return [z for z in self.zeros if z.flag == "simple"]

    @property
    def count(self) -> int:
        """Number of confirmed (sign-change) zeros."""
        return len(self.simple)

    def to_json(self) -> dict:
        return {
            "grid": self.grid,
            "identically_zero": self.identically_zero,
            "count": self.count,
            "zeros": [{"lo": z.lo, "hi": z.hi, "root": z.root, "flag": z.flag} for z in self.zeros],
            "skipped": [{"h": h, "reason": r} for h, r in self.skipped],
        }


def make_grid(points: int, kind: str = "uniform", lo: float = H_LO, hi: float = H_HI) -> np.ndarray:
    """Scan grid on ``[lo, hi]``.

    ``"log-dense"`` puts half the points log-spaced on ``[lo, 1e-2]`` and the
    rest uniformly on ``[1e-2, hi]``.
    """
    if points < 2:
        raise ValueError("a grid needs at least 2 points")
    if kind == "uniform":
        return np.linspace(lo, hi, points)
    if kind == "log-dense":
        knee = min(1e-2, hi)
        first = np.geomspace(lo, knee, points // 2, endpoint=False)
        return np.concatenate([first, np.linspace(knee, hi, points - points // 2)])
    raise ValueError(f"unknown grid kind {kind!r}")


def evaluator_for(coeffs, switching: SwitchingConfig,
                  settings: QuadratureSettings = DEFAULT_SETTINGS) -> Callable:
    """``h -> (M, est_error)`` for either coefficient variant.

    Quadrant coefficients go through their aggregated form, which shares the
    memoized generator values across calls.
    """
    if isinstance(coeffs, QuadrantCoeffs):
        if not isinstance(switching, Quadrants):
            raise ValueError("quadrant coefficients need the quadrant switching")
        agg = aggregate(coeffs)
        return lambda h: _pair(melnikov_eval_aggregated(h, agg, settings))
    if isinstance(coeffs, AggregatedCoeffs):
        return lambda h: _pair(melnikov_eval_aggregated(h, coeffs, settings))
    return lambda h: _pair(melnikov_eval(h, coeffs, switching, settings))


def _pair(sample):
    return sample.value, sample.est_error


def _sign(v) -> int:
    return int(v > 0) - int(v < 0)


def _bisect(f: Callable, lo: float, hi: float, f_lo, width: float):
    s_lo = _sign(f_lo)
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        v, _ = f(mid)
        s = _sign(v)
        if s == 0:
            return mid, mid, mid
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi, 0.5 * (lo + hi)


def scan_zeros(f: Callable, grid: Sequence[float], description: str,
               width: float = BISECTION_WIDTH) -> ZeroReport:
    """Bracket and refine the sign changes of ``f`` over ``grid``.

    ``f(h)`` returns ``(value, error)``; points that raise are skipped.
    """
    def safe(h):
        try:
            return f(float(h))
        except Exception as exc:  # recorded, the scan goes on
            return exc

    raw = _ordered_map(safe, list(grid))
    pts, skipped = [], []
    for h, r in zip(grid, raw):
        if isinstance(r, Exception):
            skipped.append((float(h), f"{type(r).__name__}: {r}"))
        else:
            pts.append((float(h), r[0], r[1]))
    if not pts:
        return ZeroReport([], description, False, skipped)
    small = [abs(v) <= 10 * e for _, v, e in pts]
    if all(small):
        return ZeroReport([], description, True, skipped)

    zeros = []
    signs = [_sign(v) for _, v, _ in pts]
    for k in range(len(pts) - 1):
        (h0, v0, _), (h1, _, _) = pts[k], pts[k + 1]
        if signs[k] * signs[k + 1] < 0:
            lo, hi, root = _bisect(f, h0, h1, v0, width)
            zeros.append(Zero(lo, hi, root, "simple"))
        elif signs[k] == 0 and k > 0 and signs[k - 1] * signs[k + 1] < 0:
            zeros.append(Zero(pts[k - 1][0], h1, h0, "simple"))
    crossing = set()
    for k in range(len(pts) - 1):
        if signs[k] * signs[k + 1] <= 0:
            crossing.update((k, k + 1))
    for k, is_small in enumerate(small):
        if is_small and k not in crossing:
            zeros.append(Zero(pts[k][0], pts[k][0], pts[k][0], "suspect"))
    zeros.sort(key=lambda z: (z.lo, z.hi))
    return ZeroReport(zeros, description, False, skipped)


def count_zeros(coeffs, switching: SwitchingConfig = Curve(1), grid_points: int = 4096,
                settings: QuadratureSettings = DEFAULT_SETTINGS, grid: str = "uniform") -> ZeroReport:
    """Zeros of ``M(h)`` on ``[1e-6, 1/6 - 1e-6]`` by scan and bisection."""
    if grid_points < 64:
        raise ValueError("grid_points must be >= 64")
    nodes = make_grid(grid_points, grid)
    desc = f"{grid}:{H_LO!r}:{H_HI!r}:{grid_points}"
    return scan_zeros(evaluator_for(coeffs, switching, settings), nodes, desc)


# ------------------------------------------------------------------- design

@dataclass
class DesignAttempt:
    scale: float
    target_h: list
    zeros_found: int
    within_tolerance: bool
    residual_zero: bool


@dataclass
class DesignResult:
    """A quadrant perturbation whose ``M`` has (at least) 11 simple zeros.

    ``section`` names the right inverse used to lift the aggregated
    coefficients back to the 48 quadrant coefficients.
    """

    coeffs: QuadrantCoeffs
    aggregated: AggregatedCoeffs
    target_roots: list
    achieved: ZeroReport
    scale: float
    method: str
    attempts: list
    section: str = "J -> q_plus, I -> q_minus, edge -> p_plus[0,j]"

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "scale": self.scale,
            "target_roots": self.target_roots,
            "aggregated": {"p": [str(v) for v in self.aggregated.p],
                           "q": [str(v) for v in self.aggregated.q],
                           "edge": [str(v) for v in self.aggregated.edge]},
            "section": self.section,
            "achieved": self.achieved.to_json(),
            "attempts": [a.__dict__ for a in self.attempts],
        }


def default_target_s() -> list:
    return [Fraction(k, 100) for k in range(1, 12)]


def root_polynomial(roots: Sequence[Fraction]) -> list:
    """Coefficients on ``s^1 .. s^(n+1)`` of ``s * prod(s - r)``."""
    poly = [Fraction(1)]
    for r in roots:
        nxt = [Fraction(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] += c
            nxt[i] -= r * c
        poly = nxt
    return poly


def _to_fraction(x, mp) -> Fraction:
    return Fraction(mp.nstr(x, mp.dps, min_fixed=-mp.inf, max_fixed=mp.inf))


def _vector_to_agg(values: Sequence[Fraction], columns=DESIGN_COLUMNS) -> AggregatedCoeffs:
    full = dict(zip(columns, values))
    names = COLUMNS + ("E0", "E1", "E2")
    return AggregatedCoeffs.from_vector([full.get(c, Fraction(0)) for c in names])


def solve_delta(delta: Sequence, columns=DESIGN_COLUMNS, dps: int = DESIGN_PRECISION):
    """Exact solve of ``DeltaForms x = delta`` over the design columns.

    Returns ``(AggregatedCoeffs, residual_zero)``; the coefficients are the
    exact solution rounded to ``dps`` significant digits.
    """
    import mpmath

    mp = mpmath.mp.clone()
    mp.dps = dps
    matrix = generator_matrix(tuple(columns))
    rhs = [ExactScalar.coerce(d) for d in delta]
    nums, det = cramer_solve(matrix, rhs)
    if det.is_zero():
        raise DesignError("singular delta system", [])
    residual = [sum((a * n for a, n in zip(row, nums)), ExactScalar()) - det * d
                for row, d in zip(matrix, rhs)]
    residual_zero = all(r.is_zero() for r in residual)
    d = det.to_mpf(mp)
    values = [_to_fraction(n.to_mpf(mp) / d, mp) if not n.is_zero() else Fraction(0) for n in nums]
    return _vector_to_agg(values, columns), residual_zero


def _check_targets(target_roots):
    if len(target_roots) != 11:
        raise ValueError("need exactly 11 target roots")
    hs = [Fraction(t) for t in target_roots]
    if len(set(hs)) != 11 or not all(0 < h < Fraction(1, 6) for h in hs):
        raise ValueError("target roots must be 11 distinct values in (0, 1/6)")
    return sorted(hs)


def _design_settings() -> QuadratureSettings:
    return QuadratureSettings(precision=DESIGN_PRECISION)


def _finish(agg, target_h, scale, settings, grid_points, residual_zero, attempts):
    coeffs = section(agg)
    report = count_zeros(agg, Quadrants(), grid_points, settings, grid="log-dense")
    roots = [z.root for z in report.simple]
    close = len(roots) >= 11 and all(
        any(abs(r - float(t)) <= 0.1 * float(t) for r in roots) for t in target_h)
    attempts.append(DesignAttempt(scale, [float(t) for t in target_h], report.count, close,
                                  residual_zero))
    return coeffs, report, close


def design_eleven(target_roots: Sequence | None = None, initial_scale: float = 1.0,
                  grid_points: int = 4096, max_retries: int = 8,
                  settings: QuadratureSettings | None = None) -> DesignResult:
    """Perturbation with 11 zeros from the truncated expansion of ``M``.

    The expansion ``M = sum delta_k s^k`` (``s = h^(1/2)``) is matched to
    ``s prod(s - s_k)`` through ``s^12``, solved exactly for the aggregated
    coefficients, then confirmed by :func:`count_zeros`.  Target roots are
    ``h``-values; by default ``s_k = k/100``.  On a shortfall all roots shrink
    by half and the design is repeated.
    """
    settings = settings or _design_settings()
    if target_roots is None:
        s_roots = [s * Fraction(initial_scale) for s in default_target_s()]
    else:
        s_roots = None
        target_h = [h * Fraction(initial_scale) ** 2 for h in _check_targets(target_roots)]
    attempts = []
    scale = float(initial_scale)
    for attempt in range(max_retries + 1):
        if s_roots is not None:
            target_h = [s * s for s in s_roots]
            delta = root_polynomial(s_roots)
        else:
            delta = _sqrt_target_delta(target_h)
        agg, exact = solve_delta(delta)
        if not exact:
            raise DesignError("delta solve left a nonzero exact residual", attempts)
        coeffs, report, close = _finish(agg, target_h, scale, settings, grid_points, exact,
                                        attempts)
        if report.count >= 11 and close:
            return DesignResult(coeffs, agg, [float(t) for t in target_h], report, scale,
                                "series", attempts)
        scale /= 2
        if s_roots is not None:
            s_roots = [s / 2 for s in s_roots]
        else:
            target_h = [h / 4 for h in target_h]
    found = ", ".join(f"scale {a.scale:g}: {a.zeros_found}" for a in attempts)
    raise DesignError(f"11 zeros not reached after {max_retries} retries ({found})", attempts)


def _sqrt_target_delta(target_h):
    # s-roots of user-given h targets, rounded to 30 digits
    import mpmath

    mp = mpmath.mp.clone()
    mp.dps = 40
    return root_polynomial([_to_fraction(mp.sqrt(mp.mpf(h.numerator) / h.denominator), mp)
                            for h in target_h])


def design_collocation(target_roots: Sequence | None = None, grid_points: int = 4096,
                       settings: QuadratureSettings | None = None) -> DesignResult:
    """Perturbation whose ``M`` vanishes exactly at 11 prescribed ``h``-values.

    Unlike :func:`design_eleven` this imposes ``M(h_k) = 0`` directly on the
    twelve design columns evaluated by quadrature, so no truncation error
    enters.  The solution spans the null space of that 11 x 12 system and is
    scaled so its largest entry has magnitude 1.
    """
    settings = settings or _design_settings()
    target_h = (_check_targets(target_roots) if target_roots is not None
                else [s * s for s in default_target_s()])
    mp = settings.mp_context()
    rows = []
    for h in target_h:
        hv = mp.mpf(h.numerator) / h.denominator
        gens, _ = aggregated_generators(hv, settings)
        row = []
        for c in DESIGN_COLUMNS:
            if c.startswith("E"):
                row.append(mp.sqrt(2 * hv) ** (int(c[1]) + 1) / (int(c[1]) + 1))
            else:
                row.append(gens[(c[0], int(c[1]), int(c[2]))])
        rows.append(row)
    a = mp.matrix([r[:-1] for r in rows])
    b = mp.matrix([-r[-1] for r in rows])
    sol = list(mp.lu_solve(a, b)) + [mp.mpf(1)]
    top = max(sol, key=abs)
    values = [_to_fraction(v / abs(top), mp) for v in sol]
    agg = _vector_to_agg(values)
    attempts = []
    coeffs, report, close = _finish(agg, target_h, 1.0, settings, grid_points, True, attempts)
    result = DesignResult(coeffs, agg, [float(t) for t in target_h], report, 1.0, "collocation",
                          attempts)
    if report.count < 11 or not close:
        raise DesignError(f"collocation reached {report.count} zeros", attempts)
    return result


# ------------------------------------------------------------ bound checks

def zero_bound(n: int, m: int) -> int:
    """Upper bound on zeros of ``M`` for the curve switching ``x = y^(2m)``."""
    from .reduce import zero_bound as bounds

    return bounds(n, m)["statement"]


def _curve_basis(n: int, m: int, grid: np.ndarray, settings: QuadratureSettings):
    """Values on ``grid`` of each coefficient's contribution to ``M``.

    Column order follows :func:`_curve_layout`; a coefficient ``a`` multiplies
    ``-integral x^i y^j dy`` and ``b`` multiplies ``integral x^i y^j dx`` over
    its own arc.
    """
    monos = monomials(n)
    layout = _curve_layout(n)
    cols = {name: k for k, name in enumerate(layout)}
    switching = Curve(m)

    def row(h):
        out = np.zeros(len(layout))
        err = np.zeros(len(layout))
        for side, arc_id in arcs_of(switching):
            def form(x, y, dx, dy):
                terms = []
                for i, j in monos:
                    mono = x ** i * y ** j
                    terms.append(-mono * dy)
                    terms.append(mono * dx)
                return terms

            vals, errs = line_integrals(ArcSpec(float(h), side, switching, arc_id), form, settings)
            for k, (i, j) in enumerate(monos):
                for kind, off in (("a", 0), ("b", 1)):
                    c = cols[(kind, side, i, j)]
                    out[c] = vals[2 * k + off]
                    err[c] = errs[2 * k + off]
        return out, err

    rows = _ordered_map(row, list(grid))
    return np.array([r[0] for r in rows]), np.array([r[1] for r in rows])


def _curve_layout(n: int) -> list:
    return [(kind, side, i, j) for side in ("plus", "minus") for i, j in monomials(n)
            for kind in ("a", "b")]


def _sign_changes(values: np.ndarray, errors: np.ndarray) -> int:
    signs = np.sign(values)
    signs[np.abs(values) < 10 * errors] = 0
    nz = signs[signs != 0]
    return int(np.count_nonzero(nz[1:] != nz[:-1]))


def bound_check(n: int, m: int = 1, trials: int = 100, seed: int = 0, grid_points: int = 4096,
                settings: QuadratureSettings = DEFAULT_SETTINGS) -> dict:
    """Random curve perturbations against the zero bound.

    Each trial draws every coefficient uniformly from ``{-1, -0.999, ..., 1}``
    and counts sign changes of ``M`` on a uniform grid; the arc integrals of
    the monomials are computed once and reused across trials.
    """
    if n > 4:
        raise ValueError("n must be <= 4")
    if not 0 <= trials <= 1000:
        raise ValueError("trials must be in [0, 1000]")
    bound = zero_bound(n, m)
    report = {"n": n, "m": m, "trials": trials, "seed": seed, "bound": bound,
              "grid_points": grid_points, "counts": [], "max_observed": None, "passed": True}
    if trials == 0:
        return report
    grid = make_grid(grid_points)
    basis, basis_err = _curve_basis(n, m, grid, settings)
    rng = random.Random(seed)
    layout = _curve_layout(n)
    counts = []
    for _ in range(trials):
        vec = np.array([rng.randint(-1000, 1000) / 1000 for _ in layout])
        values = basis @ vec
        errors = np.abs(basis_err) @ np.abs(vec) + 1e-14 * (np.abs(basis) @ np.abs(vec))
        counts.append(_sign_changes(values, errors))
    report["counts"] = counts
    report["max_observed"] = max(counts)
    report["passed"] = max(counts) <= bound
    if not report["passed"]:
        raise BoundViolation(f"n={n}, m={m}: observed {max(counts)} zeros > bound {bound}")
    return report
