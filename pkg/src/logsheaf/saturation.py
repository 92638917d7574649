"""Saturated elements of a sharp monoid, adjunction, Kummer roots, fibers.

An element ``alpha`` of ``M^gp`` is saturated when, at every facet F, its image
generates the infinite cyclic group ``M^gp / F^gp``; equivalently it pairs to
±1 with every primitive facet normal.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence, Tuple

from .cones import AffineMonoid, GeneratedMonoid
from .errors import ContainmentError, FacetPairingError, NotSharpError, PreconditionError
from .lattice import IntMatrix, IntVector, hermite_basis, index

STRICT = "strict"
PERMISSIVE = "permissive"
CONVENTIONS = (STRICT, PERMISSIVE)


def _require_sharp(m: AffineMonoid) -> None:
    if not m.sharp:
        raise NotSharpError("monoid must be sharp")


def is_saturated_element(m: AffineMonoid, alpha: Sequence[int],
                         convention: str = STRICT) -> bool:
    """Whether every facet pairing of ``alpha`` is ±1.

    Under ``"permissive"`` a zero pairing is also accepted.  Facets are those
    of the monoid's cone, so non-sharp monoids are accepted as well.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    allowed = {1, -1} if convention == STRICT else {1, -1, 0}
    return all(p in allowed for p in m.pairings(alpha))


def adjoin_element(m: AffineMonoid, alpha: Sequence[int]) -> Tuple[GeneratedMonoid, bool]:
    """``M + N alpha`` and whether it is saturated."""
    alpha = tuple(alpha)
    if not m.in_group(alpha):
        raise ContainmentError(f"{alpha} is not in the monoid's group")
    if m.contains(alpha):
        gm = GeneratedMonoid(tuple(m.hilbert_basis))
        return gm, True
    gm = GeneratedMonoid(tuple(m.hilbert_basis) + (alpha,))
    return gm, gm.is_saturated()


@dataclass(frozen=True)
class KummerExtension:
    """The base monoid together with ``cone ∩ L'`` for a superlattice L' ⊇ L.

    To stay integral, ``extended_lattice_basis`` and ``extended_monoid`` are
    written in coordinates scaled by ``scale``: a true element ``x`` of L' appears
    as ``scale * x``.  ``index`` is ``[L' : L]``.
    """

    base_monoid: AffineMonoid
    extended_lattice_basis: IntMatrix
    index: int
    scale: int
    extended_monoid: AffineMonoid

    def satisfies_kummer_condition(self) -> bool:
        # scale * h is an element of the base lattice for every generator h
        return all(self.base_monoid.contains(h) for h in self.extended_monoid.hilbert_basis)


def kummer_extension(m: AffineMonoid, alpha: Sequence[int], n: int) -> KummerExtension:
    """Extension by ``L' = L + Z (alpha / n)``; ``alpha / n`` appears as ``alpha``."""
    if n < 1:
        raise PreconditionError("root order must be positive")
    alpha = tuple(alpha)
    if not m.in_group(alpha):
        raise ContainmentError(f"{alpha} is not in the monoid's group")
    scaled = [tuple(n * x for x in b) for b in m.lattice_basis]
    ext_basis = hermite_basis(scaled + [alpha], m.ambient_rank)
    idx = index(ext_basis, scaled)
    ext = AffineMonoid(ext_basis, m.cone)
    return KummerExtension(m, ext_basis, idx, n, ext)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def minimal_saturating_root(m: AffineMonoid, alpha: Sequence[int]) -> Tuple[int, KummerExtension]:
    """Least n such that ``alpha / n`` is saturated over ``L + Z (alpha / n)``.

    n is the lcm of the absolute facet pairings of ``alpha``.
    """
    _require_sharp(m)
    pairings = m.pairings(alpha)
    if any(p == 0 for p in pairings):
        raise FacetPairingError(
            "element lies in a facet hyperplane; no Kummer extension can saturate it"
        )
    n = 1
    for p in pairings:
        n = _lcm(n, abs(p))
    return n, kummer_extension(m, alpha, n)


SAME_POINT = "same_point"
EMPTY = "empty"
LINE_TOTAL_SPACE = "line_total_space"


@dataclass(frozen=True)
class FiberDescription:
    kind: str
    monoid: Optional[GeneratedMonoid]
    ideal_generator: IntVector


def fiber_trichotomy(m: AffineMonoid, alpha: Sequence[int]) -> FiberDescription:
    """Fiber over a point with characteristic monoid M of the universal fine
    scheme on which ``alpha`` becomes an element of the characteristic monoid."""
    _require_sharp(m)
    alpha = tuple(alpha)
    if not m.in_group(alpha):
        raise ContainmentError(f"{alpha} is not in the monoid's group")
    if m.contains(alpha):
        return FiberDescription(SAME_POINT, None, alpha)
    if m.contains(tuple(-x for x in alpha)):
        return FiberDescription(EMPTY, None, alpha)
    return FiberDescription(
        LINE_TOTAL_SPACE, GeneratedMonoid(tuple(m.hilbert_basis) + (alpha,)), alpha
    )
