#!/usr/bin/env python3
"""Seeded random sweeps of the monoid and subdivision properties.

Checks, on random instances:
  saturated     predicate vs. localization at each facet
  adjoin        M + N*alpha stays saturated for saturated alpha
  root          minimal saturating root, with every proper divisor failing
  nonneg        nonnegative linear PL functions = dual cone lattice points
  pic           Pic of random subdivisions is torsion-free
"""
import argparse
import itertools
import random
import sys
import time

from logsheaf.cones import AffineMonoid, Cone, dual_cone, localize_at_face, saturate
from logsheaf.errors import FacetPairingError
from logsheaf.lattice import hermite_basis, identity
from logsheaf.saturation import (PERMISSIVE, adjoin_element, is_saturated_element,
                                 kummer_extension, minimal_saturating_root)
from logsheaf.subdivision import (hyperplane_subdivision, nonneg_pl_monoid, pic_of_subdivision,
                                  star_subdivision)


def pointed_cone(rng, k):
    while True:
        gens = [v for v in (tuple(rng.randint(-3, 3) for _ in range(k)) for _ in range(k + 2)) if sum(v) > 0]
        if len(gens) >= k:
            c = Cone.from_generators(gens, k)
            if c.is_full_dimensional:
                return c


def sharp_monoid(rng):
    k = rng.randint(1, 3)
    cone = pointed_cone(rng, k)
    if rng.random() < 0.3:
        rows = [tuple(rng.randint(1, 2) if j == i else rng.randint(0, 1) if j > i else 0
                      for j in range(k)) for i in range(k)]
        return AffineMonoid(hermite_basis(rows, k), cone)
    return AffineMonoid(identity(k), cone)


def element(rng, m):
    return m.from_coords([rng.randint(-3, 3) for _ in range(m.rank)])


def subdivision(rng, k):
    sigma = pointed_cone(rng, k)
    if rng.random() < 0.5:
        coeffs = [rng.randint(1, 3) for _ in sigma.rays]
        rho = [sum(c * r[i] for c, r in zip(coeffs, sigma.rays)) for i in range(k)]
        return star_subdivision(sigma, rho)
    return hyperplane_subdivision(sigma, tuple(rng.randint(-3, 3) for _ in range(k)))


def check_saturated(rng):
    m = sharp_monoid(rng)
    a = element(rng, m)
    imgs = [localize_at_face(m, f).project(a)[0] for f in m.facets()]
    return (is_saturated_element(m, a) == all(abs(i) == 1 for i in imgs)
            and is_saturated_element(m, a, convention=PERMISSIVE) == all(abs(i) <= 1 for i in imgs))


def check_adjoin(rng):
    m = sharp_monoid(rng)
    cands = [a for a in (m.from_coords(c) for c in itertools.product(range(-2, 3), repeat=m.rank))
             if is_saturated_element(m, a)]
    if not cands:
        return None
    gm, sat = adjoin_element(m, rng.choice(cands))
    full = saturate(gm.gens, lattice=m.lattice_basis)
    return sat and all(gm.contains(h) for h in full.hilbert_basis)


def check_root(rng):
    m = sharp_monoid(rng)
    a = element(rng, m)
    try:
        n, ext = minimal_saturating_root(m, a)
    except FacetPairingError:
        return None
    if not is_saturated_element(ext.extended_monoid, a):
        return False
    return all(not is_saturated_element(kummer_extension(m, a, d).extended_monoid, a)
               for d in range(1, n) if n % d == 0)


def check_nonneg(rng):
    k = rng.randint(1, 3)
    d = subdivision(rng, k)
    u = tuple(rng.randint(-3, 3) for _ in range(k))
    return nonneg_pl_monoid(d).contains_linear(u) == all(
        sum(a * b for a, b in zip(u, r)) >= 0 for r in d.base.rays)


def check_pic(rng):
    return all(f == 0 for f in pic_of_subdivision(subdivision(rng, rng.randint(1, 3))))


CHECKS = {"saturated": check_saturated, "adjoin": check_adjoin, "root": check_root,
          "nonneg": check_nonneg, "pic": check_pic}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("checks", nargs="*", metavar="CHECK", help=f"subset of {', '.join(CHECKS)}")
    args = ap.parse_args()
    unknown = set(args.checks) - set(CHECKS)
    if unknown:
        ap.error(f"unknown checks: {', '.join(sorted(unknown))}")

    failed = False
    for name in args.checks or CHECKS:
        rng = random.Random(f"{args.seed}:{name}")
        t0 = time.perf_counter()
        ok = fail = skipped = 0
        for _ in range(args.count):
            r = CHECKS[name](rng)
            if r is None:
                skipped += 1
            elif r:
                ok += 1
            else:
                fail += 1
        failed |= bool(fail)
        print(f"{name:<10} pass {ok:>5}  fail {fail:>3}  skipped {skipped:>4}  "
              f"({time.perf_counter() - t0:.1f}s)")
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
