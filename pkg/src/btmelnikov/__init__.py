"""Melnikov functions of a piecewise smooth Bogdanov-Takens normal form.

The unperturbed system has Hamiltonian ``H = x^2/2 + y^2/2 - x^3/3`` with a
period annulus for ``0 < h < 1/6``.  Perturbations are piecewise polynomial,
switching either on the curve ``x = y^(2m)`` or on the coordinate axes.
"""

from .arcgen import (ArcSpec, GeneratorTable, QuadratureSettings, generator_dx, generator_dy,
                     generator_table, identity_residuals, line_integrals)
from .core import (Curve, DomainError, Quadrants, branch_x, hamiltonian, parse_switching, pf_data,
                   solve_u)
from .cycles import (DesignError, DesignResult, ZeroReport, bound_check, count_zeros,
                     design_collocation, design_eleven)
from .exact import ExactScalar, QSqrt2, Series
from .localseries import (branch_series, delta_forms, delta_jacobian_det, generator_series,
                          mseries_eval, phi_series)
from .melnikov import (AggregatedCoeffs, CurveCoeffs, MelnikovSample, QuadrantCoeffs, RhoCoeffs,
                       aggregate, melnikov_eval, melnikov_eval_aggregated, melnikov_grid, rho_map,
                       section)
from .polys import RationalPoly, SigmaForm
from .reduce import (DiffOperator, MelnikovForm, apply_operator, build_annihilator,
                     coupled_system_residual, pf_residual, reduce_representation, riccati_coeffs,
                     second_stage, zero_bound)

__all__ = [
    "AggregatedCoeffs", "ArcSpec", "Curve", "CurveCoeffs", "DesignError", "DesignResult",
    "DiffOperator", "DomainError", "ExactScalar", "GeneratorTable", "MelnikovForm",
    "MelnikovSample", "QSqrt2", "QuadrantCoeffs", "Quadrants", "QuadratureSettings",
    "RationalPoly", "RhoCoeffs", "Series", "SigmaForm", "ZeroReport", "aggregate",
    "apply_operator", "bound_check", "branch_series", "branch_x", "build_annihilator",
    "count_zeros", "coupled_system_residual", "delta_forms", "delta_jacobian_det",
    "design_collocation", "design_eleven", "generator_dx", "generator_dy", "generator_series",
    "generator_table", "hamiltonian", "identity_residuals", "line_integrals", "melnikov_eval",
    "melnikov_eval_aggregated", "melnikov_grid", "mseries_eval", "parse_switching",
    "pf_data", "pf_residual", "phi_series", "reduce_representation", "rho_map",
    "riccati_coeffs", "second_stage", "section", "solve_u", "zero_bound",
]
