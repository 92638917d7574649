#!/usr/bin/env python3
"""Degree sweep of O_X -> tau_* O_Y for X = V(x^3z - xy^2z, xy^3 - xyz^2, yz^3 - x^2yz)
and the star blowup of the octant at (1,1,1).

Prints, per degree, the dimensions of X_d, of the glued sections, of the
kernel and the (persistent) cokernel.
"""
import argparse
import time

from logsheaf.charts import GradedQuotientPresentation, pushforward_sweep
from logsheaf.cones import Cone
from logsheaf.laurent import from_polynomial
from logsheaf.parsing import parse_polynomial
from logsheaf.subdivision import star_subdivision

IDEAL = ("x^3*z - x*y^2*z", "x*y^3 - x*y*z^2", "y*z^3 - x^2*y*z")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-degree", type=int, default=8)
    ap.add_argument("--radius", type=int, default=None, help="window radius (default: automatic)")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    names = ("x", "y", "z")
    gens = tuple(from_polynomial(parse_polynomial(g), names) for g in IDEAL)
    x = GradedQuotientPresentation(Cone.orthant(3), gens, (1, 1, 1), names)
    delta = star_subdivision(Cone.orthant(3), (1, 1, 1))

    t0 = time.perf_counter()
    results = pushforward_sweep(x, delta, range(args.max_degree + 1), radius=args.radius,
                                max_workers=args.workers)
    print(f"{'deg':>3} {'dim X_d':>8} {'sections':>9} {'kernel':>7} {'coker':>6} {'radius':>7} stable")
    for r in results:
        print(f"{r.degree:>3} {r.x_dimension:>8} {r.section_dimension:>9} {r.kernel_dimension:>7} "
              f"{r.cokernel_dimension:>6} {r.radius:>7} {r.stable}")
    print(f"{time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
