"""Exact reduction of the curve-switching Melnikov function (m = 1).

``M(h)`` is rewritten as ``alpha J_{0,1} + beta J_{1,1} + gamma I_{0,1} +
eta I_{1,1} + Phi(u)`` with rational polynomials ``alpha .. eta`` in ``h``
and an odd polynomial ``Phi`` in ``u``.  Second-order operators
``L = P2 D d^2/dh^2 + P1 D d/dh + P0`` are then built to kill the
``J``-part and afterwards the ``I``-part, leaving sigma-forms in ``u`` whose
zeros are easy to count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce as _fold

from .arcgen import DEFAULT_SETTINGS, ArcSpec, QuadratureSettings, line_integrals
from .core import D, pf_data, solve_u, u_star
from .melnikov import RhoCoeffs
from .polys import D_H, H, RationalPoly, SigmaForm, to_u


class ReductionError(RuntimeError):
    """Internal invariant of the rewriting or the kernel search failed."""


class InfeasibleError(ReductionError):
    """No nontrivial annihilating operator within the degree budget."""


def _floors(n: int):
    return (n - 1) // 2, n // 2


def n1_budget(n: int) -> int:
    A, B = _floors(n)
    return A + B + 2


def n2_budget(n: int) -> int:
    A, B = _floors(n)
    return 3 * (A + B) + 6


def k1_degree(n: int) -> int:
    A, B = _floors(n)
    return 6 * A + 3 * B + 14


def k2_degree(n: int) -> int:
    A, B = _floors(n)
    return 15 * A + 12 * B + 41


@dataclass(frozen=True)
class MelnikovForm:
    """``alpha J01 + beta J11 + gamma I01 + eta I11 + phi(u)``."""

    alpha: RationalPoly
    beta: RationalPoly
    gamma: RationalPoly
    eta: RationalPoly
    phi: RationalPoly

    def evaluate(self, h: float, J01: float, J11: float, I01: float, I11: float,
                 u: float | None = None) -> float:
        if u is None:
            u = solve_u(h, 1)
        return (self.alpha.evaluate(h) * J01 + self.beta.evaluate(h) * J11
                + self.gamma.evaluate(h) * I01 + self.eta.evaluate(h) * I11
                + self.phi.evaluate(u))

    def degree_violations(self, n: int) -> list:
        """Names of components exceeding the degree bounds for degree ``n``."""
        A, B = _floors(n)
        bad = []
        for name, poly, bound in (("alpha", self.alpha, A), ("gamma", self.gamma, A),
                                  ("beta", self.beta, B - 1), ("eta", self.eta, B - 1),
                                  ("phi", self.phi, 2 * (3 * A + 1) + 1)):
            if poly.degree > bound:
                bad.append(f"{name}: degree {poly.degree} > {bound}")
        if not self.phi.is_odd():
            bad.append("phi has even powers of u")
        return bad

    def to_json(self) -> dict:
        return {"alpha": self.alpha.to_json(), "beta": self.beta.to_json(),
                "gamma": self.gamma.to_json(), "eta": self.eta.to_json(),
                "phi": self.phi.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "MelnikovForm":
        return cls(*(RationalPoly.from_json(data[k], "h") for k in ("alpha", "beta", "gamma", "eta")),
                   RationalPoly.from_json(data["phi"], "u"))


def _add(terms: dict, key, poly: RationalPoly):
    cur = terms.get(key)
    terms[key] = poly if cur is None else cur + poly


def reduce_representation(rho: RhoCoeffs, n: int | None = None) -> MelnikovForm:
    """Rewrite collapsed coefficients into the four-generator form.

    Terms are rewritten highest weight ``2i + 3j`` first: odd ``j >= 3`` is
    lowered by two, ``J_{i,1}`` with ``i >= 3`` loses one or three in ``i``,
    and ``J_{2,1} = J_{1,1} - (2/3) u^3``.  Minus-side terms use the same
    identities with the boundary sign flipped.  Even ``j`` generators vanish.
    """
    if rho.m != 1:
        raise ValueError("exact reduction is available for m = 1 only")
    n = rho.n if n is None else n
    terms = {}
    for (i, j, side), c in rho.rho.items():
        if j % 2 == 1:
            _add(terms, (side, i, j), RationalPoly([c]))
    phi = RationalPoly((), "u")
    for k, c in rho.boundary.items():
        phi = phi + RationalPoly.monomial(k, c, "u")
    keep = {(0, 1), (1, 1)}
    while True:
        pending = [(2 * i + 3 * j, side, i, j) for (side, i, j), c in terms.items()
                   if (i, j) not in keep and c]
        if not pending:
            break
        _, side, i, j = max(pending)
        c = terms.pop((side, i, j))
        sgn = 1 if side == "plus" else -1
        cu = to_u(c)
        if j >= 3:
            d = 2 * i + 3 * j + 2
            _add(terms, (side, i, j - 2), c * H * Fraction(6 * j, d))
            _add(terms, (side, i + 2, j - 2), c * Fraction(-j, d))
            phi = phi + cu * RationalPoly.monomial(2 * i + j + 2, Fraction(-4 * sgn, d), "u")
        elif j == 1 and i >= 3:
            d = 2 * i + 5
            _add(terms, (side, i - 3, 1), c * H * Fraction(-6 * (i - 2), d))
            _add(terms, (side, i - 1, 1), c * Fraction(3 * (i + 1), d))
            phi = phi + cu * RationalPoly.monomial(2 * i - 1, Fraction(-6 * sgn, d), "u")
        elif (i, j) == (2, 1):
            _add(terms, (side, 1, 1), c)
            phi = phi + cu * RationalPoly.monomial(3, Fraction(-2 * sgn, 3), "u")
        else:
            raise ReductionError(f"no rewriting rule for index ({i},{j})")

    zero = RationalPoly()
    form = MelnikovForm(terms.get(("plus", 0, 1), zero), terms.get(("plus", 1, 1), zero),
                        terms.get(("minus", 0, 1), zero), terms.get(("minus", 1, 1), zero), phi)
    # the caller checks degree_violations(n); small even n can exceed the phi bound
    return form


# ------------------------------------------------------------ numeric checks

def curve_generators(h: float, settings: QuadratureSettings = DEFAULT_SETTINGS):
    """``(J01, J11, I01, I11)`` at ``h`` for the switching curve ``x = y^2``."""
    out = []
    for side in ("plus", "minus"):
        vals, _ = line_integrals(ArcSpec(h, side), lambda x, y, dx, dy: (y * dx, x * y * dx),
                                 settings)
        out.extend(float(v) for v in vals)
    return tuple(out)


def _stencil(h, step, settings):
    return [curve_generators(h + k * step, settings) for k in (-1, 0, 1)]


def pf_residual(h: float, step: float = 1e-5, settings: QuadratureSettings = DEFAULT_SETTINGS):
    """Residuals of ``V = (B1 h + C1) V' +- W(u)`` for the plus/minus pairs.

    Returns two 2-vectors; derivatives are central differences.
    """
    pf = pf_data()
    lo, mid, hi = _stencil(h, step, settings)
    u = solve_u(h)
    w = (pf.W[0](u), pf.W[1](u))
    M = [[float(x) for x in row] for row in pf.matrix_at(Fraction(h))]
    res = []
    for off, sgn in ((0, 1), (2, -1)):
        v = mid[off:off + 2]
        dv = [(hi[off + k] - lo[off + k]) / (2 * step) for k in range(2)]
        res.append(tuple(v[r] - (M[r][0] * dv[0] + M[r][1] * dv[1]) - sgn * w[r] for r in range(2)))
    return tuple(res)


def coupled_system_residual(h: float, step: float = 1e-5,
                            settings: QuadratureSettings = DEFAULT_SETTINGS):
    """Residuals of the coupled first- and second-order systems for ``J0, J1``.

    Returns ``(r1, r2, r3, r4)``: ``J0' - (k00 J0 + k01 J1)/D``,
    ``J1' - (k10 J0 + k11 J1)/D``, ``J0'' + 5/(6D) J0`` and
    ``J1'' - (-J0 + 7/6 J1)/D``.
    """
    pf = pf_data()
    vals = [(g[0] + g[2], g[1] + g[3]) for g in _stencil(h, step, settings)]
    (a0, a1), (b0, b1), (c0, c1) = vals
    d0, d1 = (c0 - a0) / (2 * step), (c1 - a1) / (2 * step)
    e0, e1 = (c0 - 2 * b0 + a0) / step ** 2, (c1 - 2 * b1 + a1) / step ** 2
    Dh = D(h)
    k = [p.evaluate(h) for p in (pf.k00, pf.k01, pf.k10, pf.k11)]
    return (d0 - (k[0] * b0 + k[1] * b1) / Dh,
            d1 - (k[2] * b0 + k[3] * b1) / Dh,
            e0 + 5 / (6 * Dh) * b0,
            e1 - (-b0 + 7 / 6 * b1) / Dh)


# --------------------------------------------------------------- operators

@dataclass(frozen=True)
class DiffOperator:
    """``L = P2 D d^2/dh^2 + P1 D d/dh + P0`` with ``D = h(6h - 1)``."""

    P2: RationalPoly
    P1: RationalPoly
    P0: RationalPoly

    def is_zero(self) -> bool:
        return not (self.P2 or self.P1 or self.P0)

    def apply_values(self, h: float, f: float, df: float, d2f: float) -> float:
        return (self.P2.evaluate(h) * D(h) * d2f + self.P1.evaluate(h) * D(h) * df
                + self.P0.evaluate(h) * f)

    def apply_fd(self, func, h: float, step: float, points: int = 3) -> float:
        """Apply to a callable by central differences on 3 or 5 points."""
        return self.apply_values(h, *central_differences(func, h, step, points))

    def to_json(self) -> dict:
        return {"P2": self.P2.to_json(), "P1": self.P1.to_json(), "P0": self.P0.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "DiffOperator":
        return cls(*(RationalPoly.from_json(data[k], "h") for k in ("P2", "P1", "P0")))


def central_differences(func, h: float, step: float, points: int = 3):
    """``(f, f', f'')`` at ``h`` from a 3-point (second order) or 5-point
    (fourth order) central stencil."""
    if points == 3:
        lo, mid, hi = func(h - step), func(h), func(h + step)
        return mid, (hi - lo) / (2 * step), (hi - 2 * mid + lo) / step ** 2
    if points == 5:
        m2, m1, mid, p1, p2 = (func(h + k * step) for k in (-2, -1, 0, 1, 2))
        d1 = (m2 - 8 * m1 + 8 * p1 - p2) / (12 * step)
        d2 = (-m2 + 16 * m1 - 30 * mid + 16 * p1 - p2) / (12 * step ** 2)
        return mid, d1, d2
    raise ValueError("points must be 3 or 5")


def _first_second(a: RationalPoly, b: RationalPoly):
    """Homogeneous coefficients of ``J0, J1`` in ``D phi'`` and ``D phi''``
    for ``phi = a J0 + b J1``."""
    pf = pf_data()
    da, db = a.derivative(), b.derivative()
    first = (D_H * da + a * pf.k00 + b * pf.k10, D_H * db + a * pf.k01 + b * pf.k11)
    second = (D_H * da.derivative() + 2 * da * pf.k00 + 2 * db * pf.k10
              - a * Fraction(5, 6) - b,
              D_H * db.derivative() + 2 * da * pf.k01 + 2 * db * pf.k11 + b * Fraction(7, 6))
    return first, second


def expand(L: DiffOperator, a: RationalPoly, b: RationalPoly):
    """``(X, Y)`` with ``L(a J0 + b J1) = X J0 + Y J1``."""
    first, second = _first_second(a, b)
    return tuple(L.P2 * second[r] + L.P1 * first[r] + L.P0 * (a, b)[r] for r in range(2))


def _nullspace_vector(rows: list, ncols: int):
    """First kernel vector of the reduced echelon form, or None."""
    m = [list(r) for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(m)) if m[k][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c] != 0:
                f = m[k][c]
                m[k] = [x - f * y for x, y in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    f0 = free[0]
    vec = [Fraction(0)] * ncols
    vec[f0] = Fraction(1)
    for row, c in zip(m, pivots):
        vec[c] = -row[f0]
    return vec


def build_annihilator(alpha: RationalPoly, beta: RationalPoly, budget: int) -> DiffOperator:
    """Operator of degree budget ``(budget, budget-1, budget-2)`` killing
    ``alpha J0 + beta J1`` identically.

    The kernel vector is the first free column of the reduced echelon form,
    scaled to coprime integers with positive leading ``P2`` coefficient.
    """
    if not alpha and not beta:
        raise ValueError("alpha and beta are both zero")
    sizes = (budget + 1, budget, max(budget - 1, 0))
    columns = []
    first, second = _first_second(alpha, beta)
    for slot, size in enumerate(sizes):
        for k in range(size):
            mono = RationalPoly.monomial(k)
            src = (second, first, (alpha, beta))[slot]
            columns.append((mono * src[0], mono * src[1]))
    deg = max(max(x.degree, y.degree) for x, y in columns)
    rows = []
    for r in range(2):
        for d in range(deg + 1):
            rows.append([col[r][d] for col in columns])
    vec = _nullspace_vector(rows, len(columns))
    if vec is None:
        raise InfeasibleError(f"no annihilating operator with budget {budget}")
    lcm = _fold(lambda x, y: x * y // math.gcd(x, y), (v.denominator for v in vec), 1)
    ints = [int(v * lcm) for v in vec]
    g = _fold(math.gcd, ints)
    ints = [v // g for v in ints]
    split = (ints[:sizes[0]], ints[sizes[0]:sizes[0] + sizes[1]], ints[sizes[0] + sizes[1]:])
    lead = next((v for part in split for v in reversed(part) if v), 1)
    sgn = 1 if lead > 0 else -1
    L = DiffOperator(*(RationalPoly([sgn * v for v in part]) for part in split))
    X, Y = expand(L, alpha, beta)
    if X or Y:
        raise ReductionError("kernel vector does not annihilate")
    return L


def _remainder(L: DiffOperator, da: RationalPoly, db: RationalPoly, phi: SigmaForm) -> SigmaForm:
    """Part of ``L M`` free of generators, given ``da = alpha - gamma`` and
    ``db = beta - eta`` and the u-part ``phi`` of ``M``."""
    pf = pf_data()
    Du = to_u(D_H)
    phi_h = phi.dh()
    phi1 = phi_h * Du + pf.w1 * da + pf.w2 * db
    phi2 = (phi_h.dh() * Du + pf.w1 * (2 * da.derivative()) + pf.w2 * (2 * db.derivative())
            + pf.w1star * da + pf.w2star * db)
    return phi2 * L.P2 + phi1 * L.P1 + phi * L.P0


def apply_operator(L: DiffOperator, form: MelnikovForm):
    """``L M = gamma_t I01 + eta_t I11 + phi_t(u)``.

    Returns ``(gamma_t, eta_t, phi_t)`` with ``phi_t`` a :class:`SigmaForm`.
    """
    X, Y = expand(L, form.alpha, form.beta)
    if X or Y:
        raise ValueError("operator does not annihilate the plus-side part of the form")
    gamma_t, eta_t = expand(L, form.gamma, form.eta)
    phi_t = _remainder(L, form.alpha - form.gamma, form.beta - form.eta, SigmaForm.poly(form.phi))
    return gamma_t, eta_t, phi_t


def second_stage(gamma_t: RationalPoly, eta_t: RationalPoly, phi_t: SigmaForm, budget: int):
    """Kill the remaining ``I``-part; returns ``(L2, phi_hat)``."""
    L2 = build_annihilator(gamma_t, eta_t, budget)
    phi_hat = _remainder(L2, -gamma_t, -eta_t, phi_t)
    return L2, phi_hat


def structure_of(form: SigmaForm, k: int, d: int):
    """Numerator of ``form`` written over ``sigma^k / u^d``; None if impossible."""
    try:
        return form.lifted(k, d)
    except ValueError:
        return None


@dataclass(frozen=True)
class RiccatiData:
    """``D beta F' = -k01 F^2 + N1 F + N2`` for ``F = alpha + beta J1/J0``."""

    N1: RationalPoly
    N2: RationalPoly
    k01: Fraction

    def residual(self, h, alpha, beta, F, dF) -> float:
        b = beta.evaluate(h)
        return (D(h) * b * dF + float(self.k01) * F * F
                - self.N1.evaluate(h) * F - self.N2.evaluate(h))


def riccati_coeffs(alpha: RationalPoly, beta: RationalPoly) -> RiccatiData:
    if not beta:
        raise ValueError("beta is identically zero; count zeros of alpha J0 directly")
    pf = pf_data()
    dk = pf.k11 - pf.k00
    k01 = pf.k01
    N1 = D_H * beta.derivative() + beta * dk + 2 * k01 * alpha
    N2 = (D_H * beta * alpha.derivative() - D_H * beta.derivative() * alpha + beta * beta * pf.k10
          - dk * alpha * beta - k01 * alpha * alpha)
    return RiccatiData(N1, N2, k01[0])


def riccati_degree_bounds(n: int):
    """Degree bounds of ``N1, N2`` implied by the form's degree bounds."""
    A, B = _floors(n)
    return max(A, B), max(A + B, 2 * A, 2 * B - 1)


def zero_bound(n: int, m: int = 1) -> dict:
    """Zero-count bounds for degree ``n`` and switching exponent ``m``."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    A, B = _floors(n)
    statement = 50 * n + 52 if m == 1 else (39 * m + 36) * n + 77 * m + 21
    return {"n": n, "m": m, "statement": statement,
            "proof_count": 51 * A + 48 * B + 111 if m == 1 else None,
            "m1_count": 42 * A + 39 * B + 94 if m == 1 else None}


def count_sigma_zeros(form: SigmaForm, points: int = 2048, dps: int = 60) -> int:
    """Sign changes of ``form`` on ``(0, u_star)`` over a uniform grid.

    ``sigma`` and ``u^d`` are positive there, so only the numerator matters;
    it is evaluated in multiprecision to survive the huge coefficients.
    """
    import mpmath

    if form.is_zero():
        return 0
    mp = mpmath.mp.clone()
    mp.dps = dps
    top = mp.mpf(u_star(1))
    signs = []
    for k in range(1, points):
        v = form.num.evaluate_mp(top * k / points, mp)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def full_reduction(rho: RhoCoeffs, n: int) -> dict:
    """Run both operator stages and collect the pieces."""
    form = reduce_representation(rho, n)
    out = {"form": form}
    if form.alpha or form.beta:
        L = build_annihilator(form.alpha, form.beta, n1_budget(n))
        gamma_t, eta_t, phi_t = apply_operator(L, form)
        out.update(L=L, gamma_t=gamma_t, eta_t=eta_t, phi_t=phi_t)
        if gamma_t or eta_t:
            L2, phi_hat = second_stage(gamma_t, eta_t, phi_t, n2_budget(n))
            out.update(L2=L2, phi_hat=phi_hat)
    return out
