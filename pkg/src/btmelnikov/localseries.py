"""Expansions of the quadrant generators at the center, over Q(sqrt2)[pi].

All series are in ``s = h^(1/2)``: coefficient ``k`` multiplies ``h^(k/2)``.
On ``y = 0`` write ``v^2 = H(x, 0)``, i.e. ``v = x (1/2 - x/3)^(1/2)``; its
inverse ``x = phi(v)`` gives ``x_right = phi(s)`` and ``x_left = phi(-s)``.
Along the upper arcs ``y = sqrt(2h - 2 v^2)``, so with ``v = s t``

    integral x^i y dx = sqrt2 s^2 integral sqrt(1 - t^2) phi(st)^i phi'(st) dt

over ``t`` in ``[0, 1]`` (right) or ``[-1, 0]`` (left); the moments of
``sqrt(1 - t^2)`` bring in ``pi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import ONE, ZERO, ExactScalar, QSqrt2, Series, bareiss_det, revert
from .melnikov import GEN_ORDER, AggregatedCoeffs

F = Fraction
R = lambda a, b=1: ExactScalar.rational(F(a, b))
S2 = lambda a, b=1: ExactScalar.sqrt2(F(a, b))
PI = lambda a, b=1: ExactScalar.pi(F(a, b))
S2PI = lambda a, b=1: ExactScalar([QSqrt2(), QSqrt2(0, F(a, b))])

#: column labels of the generator matrix, J's then I's, then edge terms
COLUMNS = tuple(f"J{i}{j}" for i, j in GEN_ORDER) + tuple(f"I{i}{j}" for i, j in GEN_ORDER)
EDGE_COLUMNS = ("E0", "E1", "E2")
MAX_ORDER = 12


@lru_cache(maxsize=None)
def phi_series(order: int) -> Series:
    """Inverse of ``v = x (1/2 - x/3)^(1/2)`` through ``v^order``."""
    if order > 24:
        raise ValueError("order must be <= 24")
    # (1/2 - x/3)^(1/2) = (sqrt2/2) sum binom(1/2, k) (-2x/3)^k
    coeffs = [ZERO]
    binom = F(1)
    for k in range(order):
        coeffs.append(S2(1, 2) * (binom * F(-2, 3) ** k))
        binom = binom * (F(1, 2) - k) / (k + 1)
    return revert(Series(coeffs, order))


def branch_series(order: int = MAX_ORDER):
    """``(x_right(s), x_left(s))`` through ``s^order``."""
    if order > MAX_ORDER:
        raise ValueError(f"order must be <= {MAX_ORDER}")
    phi = phi_series(order)
    return phi, phi.substitute_scale(-1)


@lru_cache(maxsize=None)
def _moment(k: int) -> ExactScalar:
    """``integral_0^1 t^k sqrt(1 - t^2) dt``."""
    if k == 0:
        return PI(1, 4)
    if k == 1:
        return R(1, 3)
    return _moment(k - 2) * F(k - 1, k + 2)


def _area_series(i: int, order: int, left: bool) -> Series:
    """``integral x^i y dx`` on the upper right (left) quarter arc."""
    phi = phi_series(order + 1)
    psi = phi ** i * phi.derivative() if i else phi.derivative()
    out = [ZERO, ZERO]
    for k in range(order - 1):
        c = psi[k] * _moment(k)
        if left and k % 2:
            c = -c
        out.append(c * S2(1))
    return Series(out, order)


@lru_cache(maxsize=None)
def generator_series(which: str, order: int = MAX_ORDER) -> Series:
    """Series of a quadrant generator, e.g. ``"J01"`` or ``"I20"``.

    ``J`` generators live on the first-quadrant arc, ``I`` on the second;
    both are oriented clockwise, so the ``y dx`` generators are positive.
    """
    if which not in COLUMNS:
        raise ValueError(f"unknown generator {which!r}; expected one of {COLUMNS}")
    if order > MAX_ORDER:
        raise ValueError(f"order must be <= {MAX_ORDER}")
    side, i, j = which[0], int(which[1]), int(which[2])
    xr, xl = branch_series(order)
    x, sgn = (xr, 1) if side == "J" else (xl, -1)
    if j == 0:
        return x ** (i + 1) * R(sgn, i + 1)
    if j == 2:
        h = Series([ZERO, ZERO, ONE], order)
        return (h * x * 2 - x ** 3 * R(1, 3) + x ** 4 * R(1, 6)) * sgn
    return _area_series(i, order, side == "I")


def edge_series(k: int, order: int = MAX_ORDER) -> Series:
    """``sqrt(2h)^(k+1) / (k+1)`` as a series in ``s``."""
    c = ExactScalar.sqrt2(1) ** (k + 1) * F(1, k + 1)
    return Series([ZERO] * (k + 1) + [c], order)


@lru_cache(maxsize=None)
def generator_matrix(columns=COLUMNS, order: int = MAX_ORDER):
    """Rows ``s^1 .. s^order`` of the listed generator and edge series."""
    columns = tuple(columns)
    series = [edge_series(int(c[1]), order) if c.startswith("E") else generator_series(c, order)
              for c in columns]
    return tuple(tuple(sr[k] for sr in series) for k in range(1, order + 1))


# --------------------------------------------------------------- quoted data

def _row(**terms):
    """Gradient over (p.., q..) of ``sum coef (q_g +- p_g)``."""
    out = [ZERO] * 12
    for name, (coef, kind) in terms.items():
        g = GEN_ORDER.index((int(name[1]), int(name[2])))
        out[6 + g] = coef
        out[g] = coef if kind == "+" else -coef
    return out


QUOTED_DELTA = (
    _row(c00=(S2(1), "+")),
    _row(c00=(R(-2, 3), "-"), c01=(PI(-1, 2), "+"), c10=(R(-1), "-")),
    _row(c00=(S2(5, 9), "+"), c01=(R(4, 9), "-"), c02=(S2(-4, 3), "-"), c10=(S2(2, 3), "+"),
         c11=(S2(-2, 3), "-"), c20=(S2(2, 3), "+")),
    _row(c00=(R(-32, 27), "-"), c01=(PI(-11, 144), "+"), c02=(R(2, 3), "+"), c10=(R(-4, 3), "+"),
         c11=(S2PI(1, 8), "+"), c20=(R(-4, 3), "-")),
    _row(c00=(S2(77, 54), "+"), c01=(R(2, 15), "-"), c02=(S2(4, 9), "+"), c10=(S2(14, 9), "+"),
         c11=(S2(-112, 405), "-"), c20=(S2(14, 9), "+")),
    _row(c00=(R(-896, 243), "-"), c01=(PI(-379, 10368), "+"), c02=(R(-64, 81), "-"),
         c10=(R(-320, 81), "-"), c11=(S2PI(625, 10368), "+"), c20=(R(-320, 81), "-")),
    _row(c00=(S2(2431, 486), "+"), c01=(R(452, 5103), "-"), c02=(S2(22, 27), "+"),
         c10=(S2(143, 27), "+"), c11=(S2(-20924, 127575), "-"), c20=(S2(143, 27), "+")),
    _row(c00=(R(-10240, 729), "-"), c01=(PI(-3755, 165888), "+"), c02=(R(-448, 243), "-"),
         c10=(R(-3584, 243), "-"), c11=(S2PI(65863, 1492992), "+"), c20=(R(-3584, 243), "-")),
    _row(c00=(S2(1062347, 52488), "+"), c01=(R(1928, 32805), "-"), c02=(S2(4862, 2187), "+"),
         c10=(S2(46189, 2187), "+"), c11=(S2(-319442, 2679075), "-"), c20=(S2(46189, 2187), "+")),
    _row(c00=(R(-1171456, 19683), "-"), c01=(PI(-1132663, 71663616), "+"),
         c02=(R(-4096, 729), "-"), c10=(R(-45056, 729), "-"),
         c11=(S2PI(5919829, 179159040), "+"), c20=(R(-45056, 729), "-")),
    _row(c00=(S2(14003665, 157464), "+"), c01=(R(415876, 9743085), "-"),
         c02=(S2(96577, 13122), "+"), c10=(S2(2414425, 26244), "+"),
         c11=(S2(-218941144, 2387055825), "-"), c20=(S2(2414425, 26244), "+")),
    _row(c00=(R(-47710208, 177147), "-"), c01=(PI(-61116755, 5159780352), "+"),
         c02=(R(-1171456, 59049), "-"), c10=(R(-16400384, 59049), "-"),
         c11=(S2PI(336369143, 12899450880), "+"), c20=(R(-16400384, 59049), "-")),
)

#: |coefficients| of phi on v^1 .. v^11 as commonly quoted (all multiples of sqrt2)
QUOTED_PHI = tuple(S2(a, b) for a, b in (
    (1, 1), (1, 3), (11, 54), (1, 8), (379, 3240), (565, 5832), (751, 9072), (1687, 23328),
    (161809, 2519424), (727783, 12597120), (8730965, 166281984)))

#: x_right coefficients on s^1 .. s^12
QUOTED_BRANCH = tuple(c for c in (
    S2(1), R(2, 3), S2(5, 9), R(32, 27), S2(77, 54), R(896, 243), S2(2431, 486), R(10240, 729),
    S2(1062347, 52488), R(1171456, 19683), S2(14003665, 157464), R(47710208, 177147)))

#: |coefficients| of the upper-right y dx generator on s^2 .. s^12
QUOTED_AREA = tuple(S2(1) * c for c in (
    S2PI(1, 4), S2(2, 9), S2PI(11, 288), S2(1, 15), S2PI(379, 20736), S2(226, 5103),
    S2PI(3755, 331776), S2(964, 32805), S2PI(1132663, 143327232), S2(207938, 9743085),
    S2PI(61116755, 10319560704)))

#: |coefficients| of the upper-right x y dx generator on s^2 .. s^12
QUOTED_MOMENT = tuple(S2(1) * c for c in (
    ZERO, R(2, 3), PI(1, 8), R(112, 405), PI(625, 10368), R(20924, 127575), PI(65863, 1492992),
    R(319442, 2679075), PI(5919829, 179159040), R(218941144, 2387055825),
    PI(336369143, 12899450880)))

QUOTED_DET = ExactScalar.pi(F(59886739950651665292703225049, 15759296625811548028684506048), 2)


@dataclass(frozen=True)
class CoefficientCheck:
    index: int
    derived: ExactScalar
    quoted: ExactScalar
    status: str  # "equal", "sign" or "mismatch"


def compare_coefficients(derived, quoted, start: int = 0) -> list:
    """Classify each derived coefficient against a quoted one."""
    out = []
    for k, (d, q) in enumerate(zip(derived, quoted)):
        if d == q:
            status = "equal"
        elif d == -q:
            status = "sign"
        else:
            status = "mismatch"
        out.append(CoefficientCheck(start + k, d, q, status))
    return out


def series_checks() -> dict:
    """Derived expansions against the quoted ones, keyed by expansion name."""
    phi = phi_series(11)
    xr, xl = branch_series(12)
    area = generator_series("J01", 12)
    mom = generator_series("J11", 12)
    area_l = generator_series("I01", 12)
    mom_l = generator_series("I11", 12)
    flip = lambda seq, lo: [c if (k + lo) % 2 == 0 else -c for k, c in enumerate(seq)]
    return {
        "phi": compare_coefficients([phi[k] for k in range(1, 12)], QUOTED_PHI, 1),
        "x_right": compare_coefficients([xr[k] for k in range(1, 13)], QUOTED_BRANCH, 1),
        "x_left": compare_coefficients([xl[k] for k in range(1, 13)], flip(QUOTED_BRANCH, 1), 1),
        "area_right": compare_coefficients([area[k] for k in range(2, 13)], QUOTED_AREA, 2),
        "area_left": compare_coefficients([area_l[k] for k in range(2, 13)],
                                          flip(QUOTED_AREA, 2), 2),
        "moment_right": compare_coefficients([mom[k] for k in range(2, 13)], QUOTED_MOMENT, 2),
        "moment_left": compare_coefficients([mom_l[k] for k in range(2, 13)],
                                            flip(QUOTED_MOMENT, 2), 2),
    }


# ---------------------------------------------------------------- delta forms

@dataclass(frozen=True)
class DeltaForms:
    """Gradient matrix of ``delta_1 .. delta_12`` over the listed columns."""

    matrix: tuple
    columns: tuple
    source: str

    def apply(self, vector) -> list:
        vec = [ExactScalar.coerce(v) for v in vector]
        return [sum((a * b for a, b in zip(row, vec)), ZERO) for row in self.matrix]


class DeltaConsistencyError(ValueError):
    pass


def delta_forms(source: str = "quoted", columns=COLUMNS, strict: bool = False) -> DeltaForms:
    """Linear forms ``delta_k`` of the expansion ``M = sum delta_k h^(k/2)``.

    ``source="quoted"`` returns the commonly quoted forms over the twelve
    generator coefficients; ``source="derived"`` computes them from
    :func:`generator_series` and accepts edge columns as well.  With
    ``strict=True`` the quoted forms are checked against the derived ones and
    the first disagreement (beyond a global sign) is raised.
    """
    if source == "derived":
        return DeltaForms(generator_matrix(tuple(columns)), tuple(columns), source)
    if source != "quoted":
        raise ValueError("source must be 'quoted' or 'derived'")
    if tuple(columns) != COLUMNS:
        raise ValueError("quoted forms exist only for the twelve generator columns")
    forms = DeltaForms(tuple(tuple(r) for r in QUOTED_DELTA), COLUMNS, source)
    if strict:
        bad = compare_delta_forms()
        if bad:
            k, col, d, q = bad[0]
            raise DeltaConsistencyError(
                f"delta_{k} coefficient on {col}: derived {d}, quoted {q} ({len(bad)} total)")
    return forms


def compare_delta_forms() -> list:
    """Entries where quoted and derived forms differ beyond sign.

    Returns ``(k, column, derived, quoted)`` tuples.
    """
    derived = generator_matrix()
    bad = []
    for k, (drow, qrow) in enumerate(zip(derived, QUOTED_DELTA), start=1):
        for col, d, q in zip(COLUMNS, drow, qrow):
            if not d.abs_equal(q):
                bad.append((k, col, d, q))
    return bad


def delta_jacobian_det(source: str = "quoted", columns=COLUMNS) -> ExactScalar:
    """Exact determinant of the delta gradient matrix."""
    return bareiss_det(delta_forms(source, columns).matrix)


def mseries_eval(coeffs: AggregatedCoeffs, order: int = MAX_ORDER) -> Series:
    """Truncated expansion of the quadrant ``M`` in ``s = h^(1/2)``."""
    if order > MAX_ORDER:
        raise ValueError(f"order must be <= {MAX_ORDER}")
    out = Series([], order)
    for col, c in zip(COLUMNS + EDGE_COLUMNS, coeffs.vector(with_edge=True)):
        if c:
            sr = edge_series(int(col[1]), order) if col.startswith("E") else generator_series(col, order)
            out = out + sr * ExactScalar.rational(c)
    return out


def series_at(series: Series, h: float) -> float:
    """Evaluate a series in ``s`` at ``s = sqrt(h)``."""
    return series.evaluate(h ** 0.5)
