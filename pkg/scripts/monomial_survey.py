#!/usr/bin/env python3
"""Cokernel survey for random monomial ideals of k[x, y, z] under the star blowup.

Every monomial quotient should give cokernel 0 in every degree; a nonzero
entry is printed as a counterexample.
"""
import argparse
import random

from logsheaf.charts import GradedQuotientPresentation, pushforward
from logsheaf.cones import Cone
from logsheaf.laurent import LaurentPolynomial
from logsheaf.subdivision import star_subdivision


def random_ideal(rng, max_gens=3, max_deg=3):
    gens = set()
    while len(gens) < rng.randint(1, max_gens):
        e = tuple(rng.randint(0, max_deg) for _ in range(3))
        if any(e):
            gens.add(e)
    return sorted(gens)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--max-degree", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--center", type=int, nargs=3, default=(1, 1, 1), help="star center")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    octant = Cone.orthant(3)
    delta = star_subdivision(octant, args.center)
    bad = 0
    for i in range(args.count):
        ideal = random_ideal(rng)
        gens = tuple(LaurentPolynomial.monomial(e) for e in ideal)
        x = GradedQuotientPresentation(octant, gens, (1, 1, 1), ("x", "y", "z"))
        cok = [pushforward(x, delta, d).cokernel_dimension for d in range(args.max_degree + 1)]
        flag = "" if not any(cok) else "  <-- nonzero cokernel"
        bad += bool(any(cok))
        print(f"{i:>3} {ideal} cokernel by degree {cok}{flag}")
    print(f"{args.count - bad}/{args.count} ideals with zero cokernel")


if __name__ == "__main__":
    main()
