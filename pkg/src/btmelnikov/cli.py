"""Command-line front end.

Exit codes: 0 success, 1 verification or construction failure, 2 usage
error.  Every subcommand accepts ``--report PATH`` to write a JSON run report.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from .arcgen import QuadratureSettings
from .core import Curve, Quadrants, parse_switching
from .melnikov import QUADRANT_FIELDS, CurveCoeffs, QuadrantCoeffs, melnikov_grid, rho_map

SCHEMA_VERSION = 1
CURVE_FIELDS = ("a_plus", "a_minus", "b_plus", "b_minus")


class UsageError(ValueError):
    pass


# ------------------------------------------------------------------ config

def parse_grid(text: str):
    """``"lo:hi:count"`` with ``0 < lo < hi < 1/6`` and ``count >= 2``."""
    try:
        lo_s, hi_s, count_s = text.split(":")
        lo, hi, count = float(lo_s), float(hi_s), int(count_s)
    except ValueError:
        raise UsageError(f"grid {text!r} is not of the form lo:hi:count") from None
    if not (0 < lo < hi and 6 * hi < 1):
        raise UsageError(f"grid needs 0 < lo < hi < 1/6, got {lo}:{hi}")
    if count < 2:
        raise UsageError("grid count must be >= 2")
    return lo, hi, count


def grid_nodes(lo: float, hi: float, count: int) -> list:
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


@dataclass
class Config:
    """Inputs of one run; ``coefficients`` is inline JSON data or a file path."""

    switching: str = "curve:1"
    coefficients: dict | str | None = None
    grid: str | None = None
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    precision: int | None = None
    outputs: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        parse_switching(self.switching)
        if self.grid is not None:
            parse_grid(self.grid)

    def settings(self) -> QuadratureSettings:
        return QuadratureSettings(abs_tol=self.abs_tol, rel_tol=self.rel_tol,
                                  precision=self.precision)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "Config":
        return cls(**data)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "Config":
        return cls.from_json(json.loads(text))


@dataclass
class RunReport:
    command: str
    inputs: dict
    residuals: list = field(default_factory=list)
    zero_report: dict | None = None
    result: dict | None = None
    exit_status: int = 0
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> dict:
        return asdict(self)


# ----------------------------------------------------------- coefficients

def coeffs_from_json(data: dict):
    """Curve or quadrant coefficients from the JSON coefficient format."""
    variant = data.get("variant")
    if variant == "curve":
        n = int(data.get("n", 1))
        return CurveCoeffs(n, *(data.get(k, {}) for k in CURVE_FIELDS)), Curve(int(data.get("m", 1)))
    if variant == "quadrants":
        return QuadrantCoeffs(**{k: data.get(k, {}) for k in QUADRANT_FIELDS}), Quadrants()
    raise UsageError(f"coefficient variant must be 'curve' or 'quadrants', got {variant!r}")


def _frac_str(v: Fraction) -> str:
    return str(Fraction(v))


def coeffs_to_json(coeffs, switching) -> dict:
    if isinstance(coeffs, CurveCoeffs):
        out = {"variant": "curve", "n": coeffs.n, "m": switching.m}
        names = CURVE_FIELDS
    else:
        out = {"variant": "quadrants", "n": 2, "m": 1}
        names = QUADRANT_FIELDS
    for name in names:
        out[name] = {f"{i},{j}": _frac_str(v) for (i, j), v in sorted(getattr(coeffs, name).items())}
    return out


def load_coeffs(source):
    if isinstance(source, dict):
        data = source
    else:
        try:
            data = json.loads(Path(source).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read coefficients from {source}: {exc}") from None
    try:
        return coeffs_from_json(data)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"bad coefficient data: {exc}") from None


# --------------------------------------------------------------- commands

def _emit(text: str, path: str | None):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _suite_report(report: RunReport, suite) -> int:
    for c in suite.checks:
        val = "" if c.value is None else f" value={c.value:.3e} tol={c.tolerance:.1e}"
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}{val}{' ' + c.detail if c.detail and not c.passed else ''}")
    report.residuals.append(suite.to_json())
    return 0 if suite.passed else 1


def cmd_eval(args, report):
    cfg = Config(switching=args.switching or "curve:1", coefficients=args.coeffs, grid=args.grid,
                 abs_tol=args.abs_tol, rel_tol=args.rel_tol, precision=args.precision,
                 outputs={"out": args.out})
    report.inputs["config"] = cfg.to_json()
    coeffs, file_switching = load_coeffs(args.coeffs)
    switching = parse_switching(args.switching) if args.switching else file_switching
    samples = melnikov_grid(grid_nodes(*parse_grid(args.grid)), coeffs, switching, cfg.settings())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["h", "M", "est_error"])
    failed = 0
    for h, s in zip(grid_nodes(*parse_grid(args.grid)), samples):
        if isinstance(s, Exception):
            failed += 1
            writer.writerow([format(h, ".17g"), "nan", "nan"])
        else:
            writer.writerow([format(float(v), ".17g") for v in (h, s.value, s.est_error)])
    _emit(buf.getvalue(), args.out)
    report.result = {"rows": len(samples), "failed_points": failed}
    return 1 if failed else 0


def cmd_verify(name):
    def run(args, report):
        from . import verify

        if name == "green":
            suite = verify.verify_green()
        elif name == "recurrences":
            suite = verify.verify_recurrences()
        elif name == "pf":
            suite = verify.verify_pf()
        elif name == "system":
            suite = verify.verify_system()
        elif name == "operator":
            suite = verify.verify_operator(tuple(args.n), args.seed)
        elif name == "series":
            suite = verify.verify_series()
        else:
            suite = verify.verify_reduction(tuple(args.n), args.samples, seed=args.seed)
        return _suite_report(report, suite)

    return run


def cmd_jacobian(args, report):
    from .cycles import DESIGN_COLUMNS
    from .localseries import COLUMNS, delta_jacobian_det

    columns = COLUMNS if args.columns == "generators" else DESIGN_COLUMNS
    if args.source == "quoted" and columns != COLUMNS:
        raise UsageError("quoted forms exist only for the generator columns")
    det = delta_jacobian_det(args.source, columns)
    print(det)
    report.result = {"determinant": str(det), "source": args.source, "columns": list(columns)}
    return 0


def cmd_reduce(args, report):
    from .reduce import reduce_representation

    coeffs, switching = load_coeffs(args.coeffs)
    if not isinstance(coeffs, CurveCoeffs) or switching.m != 1:
        raise UsageError("reduce supports the curve switching with m = 1 only")
    form = reduce_representation(rho_map(coeffs), coeffs.n)
    data = form.to_json()
    violations = form.degree_violations(coeffs.n)
    data["degree_violations"] = violations
    _emit(json.dumps(data, indent=2) + "\n", args.out)
    report.result = data
    return 0


def cmd_design(args, report):
    from .cycles import DesignError, design_collocation, design_eleven

    targets = [Fraction(t) for t in args.targets.split(",")] if args.targets else None
    try:
        if args.method == "series":
            result = design_eleven(targets, args.initial_scale, args.grid_points)
        else:
            result = design_collocation(targets, args.grid_points)
    except DesignError as exc:
        print(f"design failed: {exc}", file=sys.stderr)
        report.result = {"error": str(exc), "attempts": [a.__dict__ for a in exc.attempts]}
        return 1
    data = result.to_json()
    data["coefficients"] = coeffs_to_json(result.coeffs, Quadrants())
    _emit(json.dumps(data, indent=2) + "\n", args.out)
    report.result = {"method": result.method, "zeros": result.achieved.count}
    report.zero_report = result.achieved.to_json()
    return 0


def cmd_count_zeros(args, report):
    from .cycles import count_zeros

    coeffs, file_switching = load_coeffs(args.coeffs)
    switching = parse_switching(args.switching) if args.switching else file_switching
    settings = QuadratureSettings(precision=args.precision)
    zr = count_zeros(coeffs, switching, args.grid_points, settings, args.grid)
    report.zero_report = zr.to_json()
    _emit(json.dumps(zr.to_json(), indent=2) + "\n", args.out)
    return 0


def cmd_bound_check(args, report):
    from .cycles import BoundViolation, bound_check

    try:
        res = bound_check(args.n, args.m, args.trials, args.seed, args.grid_points)
    except BoundViolation as exc:
        print(f"bound violated: {exc}", file=sys.stderr)
        report.result = {"error": str(exc)}
        return 1
    summary = {k: v for k, v in res.items() if k != "counts"}
    print(json.dumps(summary))
    report.result = res
    return 0


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", help="write a JSON run report to this path")
    parser = argparse.ArgumentParser(prog="btmelnikov", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="sample M(h) on a grid as CSV")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--switching", help="curve:M or quadrants (default: from the file)")
    p.add_argument("--grid", required=True, help="lo:hi:count")
    p.add_argument("--out")
    p.add_argument("--abs-tol", type=float, default=1e-12)
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.add_argument("--precision", type=int)
    p.set_defaults(func=cmd_eval)

    for name, helptext in (("green", "Green conversions of dy-integrals"),
                           ("recurrences", "monomial recurrences"),
                           ("pf", "Picard-Fuchs residuals"),
                           ("system", "coupled first/second-order system"),
                           ("series", "local expansions")):
        p = sub.add_parser(f"verify-{name}", parents=[common], help=helptext)
        p.set_defaults(func=cmd_verify(name))
    p = sub.add_parser("verify-operator", parents=[common], help="annihilating operators")
    p.add_argument("--n", type=int, nargs="+", default=[2, 3])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify("operator"))
    p = sub.add_parser("verify-reduction", parents=[common], help="reduced form vs quadrature")
    p.add_argument("--n", type=int, nargs="+", default=[1, 2, 3, 4])
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify("reduction"))

    p = sub.add_parser("jacobian", parents=[common], help="exact delta Jacobian determinant")
    p.add_argument("--source", choices=("quoted", "derived"), default="quoted")
    p.add_argument("--columns", choices=("generators", "design"), default="generators")
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("reduce", parents=[common], help="reduced form of a curve perturbation")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("design-11", parents=[common], help="perturbation with 11 zeros")
    p.add_argument("--method", choices=("series", "collocation"), default="series")
    p.add_argument("--targets", help="comma-separated h-values")
    p.add_argument("--initial-scale", type=float, default=1.0)
    p.add_argument("--grid-points", type=int, default=4096)
    p.add_argument("--out")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("count-zeros", parents=[common], help="sign-change zeros of M(h)")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--switching")
    p.add_argument("--grid-points", type=int, default=4096)
    p.add_argument("--grid", choices=("uniform", "log-dense"), default="uniform")
    p.add_argument("--precision", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_count_zeros)

    p = sub.add_parser("bound-check", parents=[common], help="random trials against the bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-points", type=int, default=4096)
    p.set_defaults(func=cmd_bound_check)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    inputs = {k: v for k, v in vars(args).items() if k != "func"}
    report = RunReport(args.command, inputs)
    try:
        status = args.func(args, report)
    except ValueError as exc:  # UsageError and the library's input validation
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        status = 2
    report.exit_status = status
    if args.report:
        Path(args.report).write_text(json.dumps(report.to_json(), indent=2, default=str) + "\n")
    return status


def main() -> None:
    sys.exit(run())
