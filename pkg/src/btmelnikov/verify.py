"""Verification suites shared by the command line and the test-suite.

Each suite returns a :class:`SuiteResult`: a list of named checks, each a
measured value against a tolerance (or a boolean condition).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arcgen import DEFAULT_SETTINGS, QuadratureSettings, identity_residuals, monomials
from .core import D, Curve, solve_u
from .localseries import COLUMNS, generator_series, series_checks
from .melnikov import CurveCoeffs, aggregated_generators, melnikov_eval, rho_map
from .reduce import (apply_operator, build_annihilator, coupled_system_residual, curve_generators,
                     central_differences, expand, k1_degree, k2_degree, n1_budget, n2_budget, pf_residual,
                     reduce_representation, second_stage, structure_of)

GREEN_KEYS = ("green_plus", "green_minus")
IDENTITY_LEVELS = (0.03, 0.08, 0.13)


@dataclass
class Check:
    name: str
    value: float | None
    tolerance: float | None
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance,
                "passed": self.passed, "detail": self.detail}


@dataclass
class SuiteResult:
    name: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def measure(self, name: str, value: float, tolerance: float, detail: str = ""):
        value = float(value)
        self.checks.append(Check(name, value, tolerance, value <= tolerance, detail))

    def require(self, name: str, condition: bool, detail: str = ""):
        self.checks.append(Check(name, None, None, bool(condition), detail))

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"suite": self.name, "passed": self.passed,
                "checks": [c.to_json() for c in self.checks]}


def random_rational(rng: random.Random, denominator: int = 1000) -> Fraction:
    """Uniform on the grid ``{-1, ..., 1}`` with the given spacing."""
    return Fraction(rng.randint(-denominator, denominator), denominator)


def random_curve_coeffs(n: int, rng: random.Random) -> CurveCoeffs:
    """Every coefficient of a degree-``n`` curve perturbation drawn at random."""
    draw = lambda: {(i, j): random_rational(rng) for i, j in monomials(n)}
    return CurveCoeffs(n, draw(), draw(), draw(), draw())


# ---------------------------------------------------------------- suites

def verify_green(levels=IDENTITY_LEVELS, max_degree: int = 6, tolerance: float = 1e-8,
                 settings: QuadratureSettings = DEFAULT_SETTINGS) -> SuiteResult:
    out = SuiteResult("green")
    for h in levels:
        res = identity_residuals(h, max_degree, 1, settings)
        for key in GREEN_KEYS:
            out.measure(f"{key} h={h}", res[key], tolerance)
    return out


def verify_recurrences(levels=IDENTITY_LEVELS, max_degree: int = 6, tolerance: float = 1e-8,
                       settings: QuadratureSettings = DEFAULT_SETTINGS) -> SuiteResult:
    out = SuiteResult("recurrences")
    for h in levels:
        res = identity_residuals(h, max_degree, 1, settings)
        for key, val in res.items():
            if key not in GREEN_KEYS:
                out.measure(f"{key} h={h}", val, tolerance)
    return out


def pf_levels(count: int = 10):
    return tuple(float(h) for h in np.linspace(0.02, 0.15, count))


def verify_pf(levels=None, step: float = 1e-5, tolerance: float = 1e-6) -> SuiteResult:
    """Picard-Fuchs residuals of the plus and minus generator pairs."""
    out = SuiteResult("picard-fuchs")
    for h in levels or pf_levels():
        plus, minus = pf_residual(h, step)
        out.measure(f"plus h={h:.4g}", np.linalg.norm(plus), tolerance)
        out.measure(f"minus h={h:.4g}", np.linalg.norm(minus), tolerance)
    return out


def verify_system(levels=None, step: float = 1e-5, first_tol: float = 1e-6,
                  second_tol: float = 1e-5) -> SuiteResult:
    """First-order system and second-order relations for ``J0, J1``."""
    out = SuiteResult("coupled-system")
    for h in levels or pf_levels():
        r = coupled_system_residual(h, step)
        out.measure(f"first-order J0 h={h:.4g}", abs(r[0]), first_tol)
        out.measure(f"first-order J1 h={h:.4g}", abs(r[1]), first_tol)
        out.measure(f"second-order J0 h={h:.4g}", abs(r[2]), second_tol)
        out.measure(f"second-order J1 h={h:.4g}", abs(r[3]), second_tol)
    return out


def verify_reduction(degrees=(1, 2, 3, 4), samples: int = 50, levels=(0.02, 0.08, 0.14),
                     seed: int = 0, tolerance: float = 1e-8) -> SuiteResult:
    """Reduced form against direct quadrature, plus exact degree bounds."""
    out = SuiteResult("reduction")
    rng = random.Random(seed)
    gens = {h: curve_generators(h) for h in levels}
    for n in degrees:
        worst, violations = 0.0, []
        for _ in range(samples):
            coeffs = random_curve_coeffs(n, rng)
            form = reduce_representation(rho_map(coeffs), n)
            violations.extend(v for v in form.degree_violations(n) if v not in violations)
            for h in levels:
                direct = melnikov_eval(h, coeffs, Curve(1)).value
                reduced = form.evaluate(h, *gens[h])
                worst = max(worst, abs(direct - reduced) / max(1.0, abs(direct)))
        out.measure(f"n={n} form vs quadrature", worst, tolerance)
        out.require(f"n={n} degree bounds", not violations, "; ".join(violations))
    return out


def _operator_scale(L, func, h, step, points=3):
    mid, d1, d2 = central_differences(func, h, step, points)
    return (abs(L.P2.evaluate(h) * D(h) * d2) + abs(L.P1.evaluate(h) * D(h) * d1)
            + abs(L.P0.evaluate(h) * mid))


def _closed_orbit(h):
    J01, J11, I01, I11 = curve_generators(h)
    return J01 + I01, J11 + I11, I01, I11


def verify_operator(degrees=(2, 3), seed: int = 0, levels=(0.04, 0.09, 0.14),
                    step: float = 1e-4, tolerance: float = 1e-6, stage1_rel: float = 1e-4,
                    stage2_rel: float = 1e-3) -> SuiteResult:
    """Both annihilation stages for a random perturbation of each degree.

    Exact checks: nontrivial operators, symbolic annihilation and the
    sigma-power structure of the remainders.  Numeric checks apply the
    operators by central differences to quadrature values: ``L`` kills
    ``alpha J0 + beta J1`` (``J0, J1`` the closed-orbit integrals), ``L M``
    matches the stage-one form and ``L2 L M`` the stage-two remainder.
    """
    out = SuiteResult("operator")
    rng = random.Random(seed)
    for n in degrees:
        coeffs = random_curve_coeffs(n, rng)
        form = reduce_representation(rho_map(coeffs), n)
        L = build_annihilator(form.alpha, form.beta, n1_budget(n))
        out.require(f"n={n} stage-1 operator nontrivial", not L.is_zero())
        X, Y = expand(L, form.alpha, form.beta)
        out.require(f"n={n} stage-1 exact annihilation", not X and not Y)

        def phi1(h):
            J0, J1, _, _ = _closed_orbit(h)
            return form.alpha.evaluate(h) * J0 + form.beta.evaluate(h) * J1

        # fourth-order stencil: the second-order one is truncation-limited near 1/6
        for h in levels:
            val = L.apply_fd(phi1, h, 5 * step, points=5)
            out.measure(f"n={n} |L phi1| / scale h={h}",
                        abs(val) / _operator_scale(L, phi1, h, 5 * step, 5), tolerance)

        gamma_t, eta_t, phi_t = apply_operator(L, form)

        def m1(h):
            _, _, I01, I11 = _closed_orbit(h)
            return gamma_t.evaluate(h) * I01 + eta_t.evaluate(h) * I11 + phi_t(solve_u(h))

        melnikov = lambda h: melnikov_eval(h, coeffs, Curve(1)).value
        for h in levels:
            fd = L.apply_fd(melnikov, h, step)
            out.measure(f"n={n} stage-1 form vs finite differences h={h}",
                        abs(m1(h) - fd) / _operator_scale(L, melnikov, h, step), stage1_rel)

        tilde = structure_of(phi_t, 3, 1)
        out.require(f"n={n} stage-1 remainder over sigma^3/u", tilde is not None)
        if tilde is not None:
            out.require(f"n={n} stage-1 numerator even", tilde.is_even())
            out.measure(f"n={n} stage-1 numerator degree", tilde.degree, 2 * k1_degree(n))
        L2, phi_hat = second_stage(gamma_t, eta_t, phi_t, n2_budget(n))
        out.require(f"n={n} stage-2 operator nontrivial", not L2.is_zero())
        X2, Y2 = expand(L2, gamma_t, eta_t)
        out.require(f"n={n} stage-2 exact annihilation", not X2 and not Y2)
        for h in levels:
            fd = L2.apply_fd(m1, h, step)
            out.measure(f"n={n} stage-2 remainder vs finite differences h={h}",
                        abs(phi_hat(solve_u(h)) - fd) / _operator_scale(L2, m1, h, step),
                        stage2_rel)
        hat = structure_of(phi_hat, 7, 3)
        out.require(f"n={n} stage-2 remainder over sigma^7/u^3", hat is not None)
        if hat is not None:
            out.require(f"n={n} stage-2 numerator even", hat.is_even())
            out.measure(f"n={n} stage-2 numerator degree", hat.degree, 2 * k2_degree(n))
    return out


def verify_series(h: float = 1e-3, tolerance: float = 1e-6,
                  names=("phi", "x_right", "x_left", "moment_right", "moment_left")) -> SuiteResult:
    """Quoted expansions reproduced in magnitude; truncations match quadrature.

    Orientation conventions differ between sources, so a coefficient that
    agrees up to sign counts as reproduced.
    """
    out = SuiteResult("series")
    checks = series_checks()
    for name in names:
        bad = [c for c in checks[name] if c.status == "mismatch"]
        out.require(f"{name} coefficient magnitudes exact", not bad,
                    ", ".join(f"k={c.index}: derived {c.derived}, quoted {c.quoted}" for c in bad))
    gens, _ = aggregated_generators(h, DEFAULT_SETTINGS)
    s = h ** 0.5
    for col in COLUMNS:
        exact = gens[(col[0], int(col[1]), int(col[2]))]
        approx = generator_series(col).evaluate(s)
        out.measure(f"{col} series vs quadrature", abs(approx - exact) / abs(exact), tolerance)
    return out
