"""Shared random generators and brute-force oracles for the test suite."""
from __future__ import annotations

import itertools
import os
import random

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from logsheaf.cones import AffineMonoid, Cone, localize_at_face
from logsheaf.lattice import hermite_basis, identity
from logsheaf.subdivision import hyperplane_subdivision, star_subdivision

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile(
    "thorough", max_examples=400, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def random_pointed_cone(rng: random.Random, k: int, bound: int = 3, extra: int = 2) -> Cone:
    """Full-dimensional pointed cone in Z^k: generators with positive
    coordinate sum, so the hyperplane sum = 0 meets the cone only at 0."""
    while True:
        gens = []
        while len(gens) < k + rng.randint(0, extra):
            v = tuple(rng.randint(-bound, bound) for _ in range(k))
            if sum(v) > 0:
                gens.append(v)
        c = Cone.from_generators(gens, k)
        if c.is_full_dimensional:
            return c


def random_sharp_monoid(rng: random.Random, max_rank: int = 3, sublattice: bool = True) -> AffineMonoid:
    k = rng.randint(1, max_rank)
    cone = random_pointed_cone(rng, k)
    if sublattice and rng.random() < 0.3:
        rows = []
        for i in range(k):
            row = [0] * k
            row[i] = rng.randint(1, 2)
            for j in range(i + 1, k):
                row[j] = rng.randint(0, 1)
            rows.append(tuple(row))
        return AffineMonoid(hermite_basis(rows, k), cone)
    return AffineMonoid(identity(k), cone)


def random_subdivision(rng: random.Random, k: int):
    """Star subdivision at an interior point, or a cut by a random hyperplane."""
    sigma = random_pointed_cone(rng, k)
    if rng.random() < 0.5:
        rho = [0] * k
        for r in sigma.rays:
            c = rng.randint(1, 3)
            rho = [a + c * b for a, b in zip(rho, r)]
        return star_subdivision(sigma, rho)
    alpha = tuple(rng.randint(-3, 3) for _ in range(k))
    return hyperplane_subdivision(sigma, alpha)


@st.composite
def sharp_monoids(draw, max_rank: int = 3, sublattice: bool = True):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_sharp_monoid(random.Random(seed), max_rank, sublattice)


@st.composite
def pointed_cones(draw, k: int):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_pointed_cone(random.Random(seed), k)


def group_element(rng: random.Random, m: AffineMonoid, bound: int = 4):
    c = [rng.randint(-bound, bound) for _ in range(m.rank)]
    return m.from_coords(c)


def brute_force_saturated(m: AffineMonoid, alpha, allow_zero: bool = False) -> bool:
    """Does the image of alpha generate M^gp / F^gp at every facet F?
    Computed through the sharpened localization, not the facet pairing."""
    for f in m.facets():
        loc = localize_at_face(m, f)
        (img,) = loc.project(alpha)
        if abs(img) != 1 and not (allow_zero and img == 0):
            return False
    return True


def bounded_points(m: AffineMonoid, bound: int):
    """Monoid points whose lattice coordinates are bounded by ``bound``."""
    for c in itertools.product(range(-bound, bound + 1), repeat=m.rank):
        v = m.from_coords(c)
        if m.cone.contains(v):
            yield v


def decomposes(v, gens, ell) -> bool:
    """Whether v is a nonnegative integer combination of gens; ``ell`` must be
    strictly positive on every generator, which bounds the recursion."""
    gens = [tuple(g) for g in gens]
    memo = {}

    def rec(y):
        if not any(y):
            return True
        if y in memo:
            return memo[y]
        d = sum(a * b for a, b in zip(ell, y))
        ok = False
        if d > 0:
            for g in gens:
                if rec(tuple(a - b for a, b in zip(y, g))):
                    ok = True
                    break
        memo[y] = ok
        return ok

    return rec(tuple(v))


def positive_functional(cone: Cone):
    """A linear form strictly positive on the nonzero points of a pointed cone."""
    n = cone.ambient_rank
    return tuple(sum(a[i] for a in cone.facet_normals) for i in range(n))
