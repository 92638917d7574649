"""Subdivisions of a cone and integral piecewise-linear functions on them."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cones import AffineMonoid, Cone
from .errors import ConfigurationError, NotAFaceError, PreconditionError, StarCenterError
from .lattice import (
    IntVector,
    coordinates,
    dot,
    identity,
    integer_kernel,
    lattice_quotient,
    primitive_vector,
)


@dataclass(frozen=True)
class Subdivision:
    """A fan with support ``base``, stored by its maximal cones."""

    base: Cone
    maximal_cones: Tuple[Cone, ...]

    @property
    def ambient_rank(self) -> int:
        return self.base.ambient_rank

    def cones(self) -> List[Cone]:
        """Every cone of the fan (faces of maximal cones), without repeats."""
        seen: Dict[Cone, None] = {}
        for c in self.maximal_cones:
            for f in c.faces():
                seen.setdefault(f, None)
        return list(seen)

    def is_cone(self, tau: Cone) -> bool:
        return any(tau.is_face_of(c) for c in self.maximal_cones)

    def cones_containing(self, tau: Cone) -> List[int]:
        """Indices of maximal cones having ``tau`` as a face."""
        return [i for i, c in enumerate(self.maximal_cones) if tau.is_face_of(c)]

    def overlaps(self) -> List[Tuple[int, int, Cone]]:
        out = []
        for i, j in itertools.combinations(range(len(self.maximal_cones)), 2):
            out.append((i, j, self.maximal_cones[i].intersect(self.maximal_cones[j])))
        return out

    def validation_errors(self, samples: int = 3) -> List[str]:
        errs = []
        for i, c in enumerate(self.maximal_cones):
            if not self.base.contains_cone(c):
                errs.append(f"maximal cone {i} is not inside the base")
            if c.dim != self.base.dim:
                errs.append(f"maximal cone {i} is not of full dimension in the base")
        for i, j, inter in self.overlaps():
            a, b = self.maximal_cones[i], self.maximal_cones[j]
            if not (inter.is_face_of(a) and inter.is_face_of(b)):
                errs.append(f"cones {i} and {j} do not meet along a common face")
        for p in _sample_points(self.base, samples):
            if not any(c.contains(p) for c in self.maximal_cones):
                errs.append(f"point {p} of the base is not covered")
                break
        return errs

    def validate(self) -> "Subdivision":
        errs = self.validation_errors()
        if errs:
            raise ConfigurationError("invalid subdivision: " + "; ".join(errs))
        return self

    def is_refined_by(self, other: "Subdivision") -> bool:
        return all(any(c.contains_cone(d) for c in self.maximal_cones) for d in other.maximal_cones)


def _sample_points(base: Cone, samples: int):
    gens = list(base.generators)
    for coeffs in itertools.product(range(samples), repeat=len(gens)):
        yield tuple(sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(base.ambient_rank))


def trivial_subdivision(sigma: Cone) -> Subdivision:
    return Subdivision(sigma, (sigma,))


def hyperplane_subdivision(sigma: Cone, alpha: Sequence[int]) -> Subdivision:
    """Cut ``sigma`` by the hyperplane ``alpha = 0``."""
    alpha = tuple(alpha)
    n = sigma.ambient_rank
    neg = tuple(-x for x in alpha)
    pieces = []
    for form in (alpha, neg):
        piece = Cone.from_inequalities(sigma.facet_normals + (form,), n, equations=sigma.equations)
        if piece.dim == sigma.dim:
            pieces.append(piece)
    if len(pieces) < 2:
        return trivial_subdivision(sigma)
    return Subdivision(sigma, tuple(pieces))


def refine_by_hyperplanes(delta: Subdivision, alphas: Sequence[Sequence[int]]) -> Subdivision:
    """Cut every maximal cone by each hyperplane in turn."""
    cones = list(delta.maximal_cones)
    for alpha in alphas:
        cones = [piece for c in cones for piece in hyperplane_subdivision(c, alpha).maximal_cones]
    return Subdivision(delta.base, tuple(cones))


def star_subdivision(sigma: Cone, rho: Sequence[int]) -> Subdivision:
    """Cones over the facets of ``sigma`` from the interior ray ``rho``."""
    rho = tuple(rho)
    if not sigma.in_relative_interior(rho) or not any(rho):
        raise StarCenterError("star center must be interior")
    rho = primitive_vector(rho)
    pieces = []
    for a in sigma.facet_normals:
        facet = sigma.face([a])
        pieces.append(
            Cone.from_generators(facet.rays + (rho,), sigma.ambient_rank, lineality=sigma.lineality)
        )
    return Subdivision(sigma, tuple(pieces))


def star_subdivision_of_cone(fan: Subdivision, tau: Cone, rho: Sequence[int]) -> Subdivision:
    """Star subdivision of a fan at a ray through the relative interior of its
    cone ``tau``: every maximal cone containing ``tau`` is replaced by the cones
    over its faces not containing ``tau``."""
    rho = primitive_vector(tuple(rho))
    if not tau.in_relative_interior(rho):
        raise StarCenterError("star center must be interior")
    if not fan.is_cone(tau):
        raise NotAFaceError("tau is not a cone of the fan")
    out = []
    for c in fan.maximal_cones:
        if not tau.is_face_of(c):
            out.append(c)
            continue
        for a in c.facet_normals:
            facet = c.face([a])
            if tau.is_face_of(facet):
                continue
            out.append(Cone.from_generators(facet.rays + (rho,), c.ambient_rank, lineality=c.lineality))
    return Subdivision(fan.base, tuple(out))


def product_subdivision(a: Subdivision, b: Subdivision) -> Subdivision:
    """Product fan in the direct sum of the two ambient spaces."""
    na, nb = a.ambient_rank, b.ambient_rank

    def prod(c: Cone, d: Cone) -> Cone:
        gens = [r + (0,) * nb for r in c.rays] + [(0,) * na + r for r in d.rays]
        lin = [r + (0,) * nb for r in c.lineality] + [(0,) * na + r for r in d.lineality]
        return Cone.from_generators(gens, na + nb, lineality=lin)

    return Subdivision(
        prod(a.base, b.base),
        tuple(prod(c, d) for c in a.maximal_cones for d in b.maximal_cones),
    )


# -- piecewise linear functions --------------------------------------------


@dataclass(frozen=True)
class PLFunction:
    """One integral linear form per maximal cone.  Not validated on
    construction; see :meth:`is_consistent`."""

    subdivision: Subdivision
    linear_parts: Tuple[IntVector, ...]

    def is_consistent(self) -> bool:
        cones = self.subdivision.maximal_cones
        for i, j, inter in self.subdivision.overlaps():
            d = tuple(x - y for x, y in zip(self.linear_parts[i], self.linear_parts[j]))
            if any(dot(d, g) for g in inter.generators):
                return False
        return True

    def evaluate(self, point: Sequence) -> Fraction:
        for c, part in zip(self.subdivision.maximal_cones, self.linear_parts):
            if c.contains(point):
                return Fraction(dot(part, point))
        raise PreconditionError(f"{tuple(point)} is outside the support")

    def is_linear(self) -> bool:
        return len(set(self.linear_parts)) <= 1

    def coefficients(self) -> IntVector:
        return tuple(x for part in self.linear_parts for x in part)


def linear_function(delta: Subdivision, u: Sequence[int]) -> PLFunction:
    return PLFunction(delta, tuple(tuple(u) for _ in delta.maximal_cones))


def _require_full(delta: Subdivision) -> None:
    if not delta.base.is_full_dimensional:
        raise PreconditionError("base cone must be full-dimensional")


def _agreement_matrix(delta: Subdivision) -> List[IntVector]:
    n = delta.ambient_rank
    m = len(delta.maximal_cones)
    rows = []
    for i, j, inter in delta.overlaps():
        for g in inter.rays + inter.lineality:
            row = [0] * (n * m)
            for k in range(n):
                row[i * n + k] += g[k]
                row[j * n + k] -= g[k]
            rows.append(tuple(row))
    return rows


def pl_sections(delta: Subdivision) -> List[PLFunction]:
    """A basis of the group of integral PL functions on ``delta``."""
    _require_full(delta)
    n = delta.ambient_rank
    m = len(delta.maximal_cones)
    basis = integer_kernel(_agreement_matrix(delta), n * m)
    return [
        PLFunction(delta, tuple(tuple(v[i * n:(i + 1) * n]) for i in range(m))) for v in basis
    ]


def pl_coordinates(basis: Sequence[PLFunction], f: PLFunction) -> IntVector:
    """Integer coordinates of ``f`` in a basis returned by :func:`pl_sections`."""
    return coordinates([b.coefficients() for b in basis], f.coefficients())


@dataclass(frozen=True)
class NonnegativePL:
    basis: Tuple[PLFunction, ...]
    monoid: AffineMonoid  # in pl_sections coordinates
    linear_slice: AffineMonoid  # linear forms nonnegative on every maximal cone

    def contains(self, f: PLFunction) -> bool:
        return self.monoid.contains(pl_coordinates(self.basis, f))

    def contains_linear(self, u: Sequence[int]) -> bool:
        return self.contains(linear_function(self.basis[0].subdivision, u))


def nonneg_pl_monoid(delta: Subdivision) -> NonnegativePL:
    _require_full(delta)
    basis = pl_sections(delta)
    ineqs, eqs = [], []
    for i, c in enumerate(delta.maximal_cones):
        for r in c.rays:
            ineqs.append(tuple(dot(b.linear_parts[i], r) for b in basis))
        for l in c.lineality:
            eqs.append(tuple(dot(b.linear_parts[i], l) for b in basis))
    p = len(basis)
    cone = Cone.from_inequalities(ineqs, p, equations=eqs)
    n = delta.ambient_rank
    lin_ineqs = [r for c in delta.maximal_cones for r in c.rays]
    lin_eqs = [l for c in delta.maximal_cones for l in c.lineality]
    slice_cone = Cone.from_inequalities(lin_ineqs, n, equations=lin_eqs)
    if not cone.is_full_dimensional:
        raise PreconditionError("nonnegative PL cone is not full-dimensional")
    return NonnegativePL(
        tuple(basis), AffineMonoid(identity(p), cone), AffineMonoid.standard(slice_cone)
    )


def pic_of_subdivision(delta: Subdivision) -> Tuple[int, ...]:
    """Invariant factors of PL(delta) / (global linear forms)."""
    _require_full(delta)
    basis = pl_sections(delta)
    n = delta.ambient_rank
    p = len(basis)
    linear = [pl_coordinates(basis, linear_function(delta, e)) for e in identity(n)]
    return lattice_quotient(identity(p), linear)


def character_compatibility(f: PLFunction, tau1: Cone, tau2: Cone) -> bool:
    """Whether the characters of ``f`` on ``tau1`` and its face ``tau2`` agree
    on the span of ``tau2``."""
    delta = f.subdivision
    if not delta.is_cone(tau1) or not delta.is_cone(tau2):
        raise NotAFaceError("cones are not in the subdivision")
    if not tau2.is_face_of(tau1):
        raise NotAFaceError("second cone is not a face of the first")
    parts1 = [f.linear_parts[i] for i in delta.cones_containing(tau1)]
    parts2 = [f.linear_parts[i] for i in delta.cones_containing(tau2)]
    for a in parts1:
        for b in parts2:
            d = tuple(x - y for x, y in zip(a, b))
            if any(dot(d, g) for g in tau2.generators):
                return False
    return True


def restrict_to_refinement(f: PLFunction, finer: Subdivision) -> PLFunction:
    parts = []
    for d in finer.maximal_cones:
        for c, part in zip(f.subdivision.maximal_cones, f.linear_parts):
            if c.contains_cone(d):
                parts.append(part)
                break
        else:
            raise ConfigurationError("not a refinement")
    return PLFunction(finer, tuple(parts))
