"""Eleven simple zeros of a quadrant perturbation.

Run with ``python demos/eleven_zeros.py [--method collocation|series]``.

The collocation method imposes ``M(h_k) = 0`` at ``h_k = (k/100)^2`` with
40-digit arc integrals and solves for the twelve aggregated parameters; the
series method matches the truncated expansion of ``M`` at the center to
``s prod(s - s_k)`` and usually loses the smallest roots to the neglected
higher-order terms.  Either way the result is checked by a sign-change scan.
"""

import argparse

from btmelnikov.cycles import DesignError, design_collocation, design_eleven, default_target_s

parser = argparse.ArgumentParser()
parser.add_argument("--method", choices=("collocation", "series"), default="collocation")
parser.add_argument("--grid-points", type=int, default=1024)
args = parser.parse_args()

targets = [float(s) ** 2 for s in default_target_s()]
try:
    if args.method == "collocation":
        result = design_collocation(grid_points=args.grid_points)
    else:
        result = design_eleven(grid_points=args.grid_points)
except DesignError as exc:
    print(f"design failed: {exc}")
    for a in exc.attempts:
        print(f"  scale {a.scale:<8} zeros found {a.zeros_found}")
    raise SystemExit(1)

print(f"method {result.method}: {result.achieved.count} simple zeros")
print(f"{'target h':>12} {'found h':>16} {'rel. offset':>12}")
roots = [z.root for z in result.achieved.simple]
for t, r in zip(targets, roots):
    print(f"{t:12.6g} {r:16.10g} {abs(r - t) / t:12.2e}")
print("\naggregated coefficients (J generators, I generators, edge terms):")
for name in ("p", "q", "edge"):
    print(f"  {name:4} = {[f'{float(v):+.6g}' for v in getattr(result.aggregated, name)]}")
