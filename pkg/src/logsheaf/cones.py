"""Rational polyhedral cones and fine saturated affine monoids.

A :class:`Cone` keeps both halves of its double description: generators
(extreme rays plus a lineality basis) and inequalities (facet normals plus a
basis of the equations cutting out its span).  Duality swaps the two halves.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from math import floor
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import ContainmentError, NotAFaceError, NotSharpError, PreconditionError
from .lattice import (
    IntMatrix,
    IntVector,
    coordinates,
    dot,
    hermite_basis,
    identity,
    invariant_factors,
    lattice_quotient,
    matvec,
    primitive_vector,
    project_off,
    rational_coordinates,
    saturated_basis,
    transpose,
    _snf,
)
from .linalg import integer_scale, rank


def _canonical_rays(rays, lineality):
    out = set()
    for r in project_off(rays, lineality):
        out.add(primitive_vector(r))
    return tuple(sorted(out))


def _h_to_v(ineqs: Sequence[IntVector], n: int):
    """Double description: generators of ``{y : <a, y> >= 0 for a in ineqs}``.

    Returns (lineality basis, extreme rays modulo lineality).  Inequalities are
    processed one at a time; after each step, candidate rays that are not
    extreme for the inequalities processed so far are pruned by the rank test.
    """
    lin: List[IntVector] = list(identity(n))
    rays: List[IntVector] = []
    done: List[IntVector] = []
    for a in ineqs:
        if not any(a):
            continue
        vals = [dot(a, l) for l in lin]
        pick = next((i for i, x in enumerate(vals) if x), None)
        if pick is not None:
            l0 = lin[pick]
            c0 = vals[pick]
            if c0 < 0:
                l0, c0 = tuple(-x for x in l0), -c0
            new_lin = []
            for i, l in enumerate(lin):
                if i == pick:
                    continue
                w = tuple(c0 * x - dot(a, l) * y for x, y in zip(l, l0))
                if any(w):
                    new_lin.append(primitive_vector(w))
            new_rays = []
            for r in rays:
                w = tuple(c0 * x - dot(a, r) * y for x, y in zip(r, l0))
                new_rays.append(w)
            new_rays.append(l0)
            lin = new_lin
            done.append(tuple(a))
            rays = _prune(new_rays, lin, done, n)
            continue
        pos, neg, zero = [], [], []
        for r in rays:
            v = dot(a, r)
            (pos if v > 0 else neg if v < 0 else zero).append((r, v))
        cand = [r for r, _ in pos] + [r for r, _ in zero]
        for (p, vp), (q, vq) in itertools.product(pos, neg):
            cand.append(tuple(vp * x - vq * y for x, y in zip(q, p)))
        done.append(tuple(a))
        rays = _prune(cand, lin, done, n)
    return saturated_basis(lin, n) if lin else (), _canonical_rays(rays, lin)


def _prune(cand, lin, done, n):
    target = n - len(lin) - 1
    seen = set()
    out = []
    for r in _canonical_rays([c for c in cand if any(c)], lin):
        if r in seen:
            continue
        seen.add(r)
        tight = [a for a in done if dot(a, r) == 0]
        if target == 0 or (tight and rank(tight) == target):
            out.append(r)
    return out


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone in R^n in double description.

    ``rays`` are primitive extreme rays of the cone modulo its lineality space,
    projected orthogonally off that space; ``lineality`` is a canonical lattice
    basis of ``C ∩ -C``.  ``facet_normals`` are primitive inward normals (projected
    off the span's orthogonal complement) and ``equations`` a canonical basis of
    that complement.
    """

    ambient_rank: int
    rays: Tuple[IntVector, ...]
    lineality: Tuple[IntVector, ...]
    facet_normals: Tuple[IntVector, ...]
    equations: Tuple[IntVector, ...]

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], n: Optional[int] = None,
                        lineality: Iterable[Sequence[int]] = ()) -> "Cone":
        gens = [tuple(int(x) for x in g) for g in gens]
        lineality = [tuple(int(x) for x in g) for g in lineality]
        if n is None:
            n = len((gens + lineality)[0])
        all_gens = gens + lineality + [tuple(-x for x in l) for l in lineality]
        eqs, normals = _h_to_v(all_gens, n)
        return cls._from_inequality_side(n, normals, eqs)

    @classmethod
    def from_inequalities(cls, ineqs: Iterable[Sequence[int]], n: Optional[int] = None,
                          equations: Iterable[Sequence[int]] = ()) -> "Cone":
        ineqs = [tuple(int(x) for x in g) for g in ineqs]
        equations = [tuple(int(x) for x in g) for g in equations]
        if n is None:
            n = len((ineqs + equations)[0])
        all_ineqs = ineqs + equations + [tuple(-x for x in e) for e in equations]
        lin, rays = _h_to_v(all_ineqs, n)
        eqs, normals = _h_to_v(list(rays) + list(lin) + [tuple(-x for x in l) for l in lin], n)
        return cls(n, rays, lin, normals, eqs)

    @classmethod
    def _from_inequality_side(cls, n, normals, eqs):
        all_ineqs = list(normals) + list(eqs) + [tuple(-x for x in e) for e in eqs]
        lin, rays = _h_to_v(all_ineqs, n)
        return cls(n, rays, lin, normals, eqs)

    @classmethod
    def orthant(cls, n: int) -> "Cone":
        return cls.from_generators(identity(n), n)

    # -- basic queries ------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.ambient_rank - len(self.equations)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    @property
    def generators(self) -> Tuple[IntVector, ...]:
        """Generators as a cone: rays and both signs of the lineality basis."""
        return self.rays + self.lineality + tuple(tuple(-x for x in l) for l in self.lineality)

    def contains(self, v: Sequence) -> bool:
        return all(dot(e, v) == 0 for e in self.equations) and all(
            dot(a, v) >= 0 for a in self.facet_normals
        )

    def in_relative_interior(self, v: Sequence) -> bool:
        return all(dot(e, v) == 0 for e in self.equations) and all(
            dot(a, v) > 0 for a in self.facet_normals
        )

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(g) for g in other.generators)

    def dual(self) -> "Cone":
        return dual_cone(self)

    def intersect(self, other: "Cone") -> "Cone":
        return Cone.from_inequalities(
            self.facet_normals + other.facet_normals,
            self.ambient_rank,
            equations=self.equations + other.equations,
        )

    def face(self, normals: Iterable[Sequence[int]]) -> "Cone":
        """The face cut out by the given valid inequalities (each must be
        nonnegative on the cone)."""
        normals = [tuple(a) for a in normals]
        for a in normals:
            if not all(dot(a, g) >= 0 for g in self.generators):
                raise NotAFaceError(f"{a} is not a valid inequality on the cone")
        gens = [r for r in self.rays if all(dot(a, r) == 0 for a in normals)]
        return Cone.from_generators(gens, self.ambient_rank, lineality=self.lineality)

    def is_face_of(self, other: "Cone") -> bool:
        if not other.contains_cone(self):
            return False
        tight = [a for a in other.facet_normals if all(dot(a, g) == 0 for g in self.generators)]
        return other.face(tight) == self

    def faces(self) -> List["Cone"]:
        """All faces, from the cone itself down to the minimal face."""
        seen = {}
        for k in range(len(self.facet_normals) + 1):
            for sub in itertools.combinations(self.facet_normals, k):
                f = self.face(sub)
                seen.setdefault(f, None)
        return list(seen)

    def interior_point(self) -> IntVector:
        """Sum of the rays (a point in the relative interior)."""
        n = self.ambient_rank
        return tuple(sum(r[i] for r in self.rays) for i in range(n))


def dual_cone(c: Cone) -> Cone:
    """The dual cone ``{u : <u, v> >= 0 for v in c}``; the two halves of the
    double description are exchanged."""
    return Cone(c.ambient_rank, c.facet_normals, c.equations, c.rays, c.lineality)


# -- affine monoids ----------------------------------------------------------


def _box_points(lo, hi):
    return itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))


def _simplicial_parallelepiped(rays: Sequence[IntVector]) -> List[IntVector]:
    """Lattice points ``sum t_i r_i`` with all ``t_i`` in [0, 1)."""
    from .linalg import solve

    k = len(rays)
    cols = transpose(rays)
    # rows of inv: t = inv @ x
    inv_cols = [solve(cols, [int(i == j) for i in range(k)]) for j in range(k)]
    inv = [[inv_cols[j][i] for j in range(k)] for i in range(k)]
    lo = [sum(min(0, r[i]) for r in rays) for i in range(k)]
    hi = [sum(max(0, r[i]) for r in rays) for i in range(k)]
    pts = []
    for x in _box_points(lo, hi):
        ok = True
        for row in inv:
            t = sum(c * xi for c, xi in zip(row, x) if xi)
            if t < 0 or t >= 1:
                ok = False
                break
        if ok:
            pts.append(tuple(x))
    return pts


def _triangulate(cone: Cone) -> List[Tuple[IntVector, ...]]:
    """Pulling triangulation of a pointed cone into simplicial cones spanned by
    its rays."""
    rays = list(cone.rays)
    if len(rays) == cone.dim:
        return [tuple(rays)]
    apex = rays[0]
    out = []
    for a in cone.facet_normals:
        if dot(a, apex) == 0:
            continue
        facet = cone.face([a])
        for simplex in _triangulate(facet):
            out.append((apex,) + simplex)
    return out


def _sharp_hilbert_basis(cone: Cone) -> List[IntVector]:
    """Hilbert basis of ``cone ∩ Z^k`` for a pointed full-dimensional cone."""
    cand = set(cone.rays)
    for simplex in _triangulate(cone):
        cand.update(_simplicial_parallelepiped(simplex))
    cand.discard(tuple([0] * cone.ambient_rank))
    cand = sorted(cand)
    basis = []
    for x in cand:
        reducible = any(
            y != x and cone.contains(tuple(a - b for a, b in zip(x, y))) for y in cand
        )
        if not reducible:
            basis.append(x)
    return basis


def _min_lift(v, units):
    """Shift ``v`` by the unit lattice towards small Euclidean norm."""
    v = list(v)
    for _ in range(4 * len(units) + 4):
        moved = False
        for u in units:
            uu = dot(u, u)
            t = Fraction(dot(v, u), uu)
            k = floor(t + Fraction(1, 2)) if t >= 0 else -floor(-t + Fraction(1, 2))
            if k:
                v = [a - k * b for a, b in zip(v, u)]
                moved = True
        if not moved:
            break
    return tuple(v)


@dataclass(frozen=True)
class FaceHandle:
    """A face of an affine monoid: the facet normals vanishing on it."""

    normals: Tuple[IntVector, ...]
    rank: int


@dataclass(frozen=True)
class AffineMonoid:
    """The saturated monoid ``cone ∩ lattice``.

    ``lattice_basis`` rows span the group ``M^gp`` inside Z^d; ``cone`` lives in
    R^d and spans the same subspace.  Facet normals and pairings are expressed
    in coordinates relative to ``lattice_basis``, so they are primitive for the
    monoid's own group.
    """

    lattice_basis: IntMatrix
    cone: Cone
    local_cone: Cone = field(init=False, repr=False, compare=False)
    units: Tuple[IntVector, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        basis = self.lattice_basis
        k = len(basis)
        local_gens = [integer_scale(rational_coordinates(basis, g)) for g in self.cone.generators]
        local = Cone.from_generators(local_gens, k)
        if not local.is_full_dimensional:
            raise PreconditionError("cone does not span the monoid's lattice")
        object.__setattr__(self, "local_cone", local)
        object.__setattr__(self, "units", tuple(self.from_coords(u) for u in local.lineality))

    @cached_property
    def sharp_generators(self) -> Tuple[IntVector, ...]:
        # computed on first use; the parallelepiped can be large for big indices
        return tuple(self.from_coords(h) for h in _monoid_generators(self.local_cone)[1])

    @classmethod
    def standard(cls, cone: Cone) -> "AffineMonoid":
        """``cone ∩ Z^d`` for a full-dimensional cone."""
        return cls(identity(cone.ambient_rank), cone)

    @property
    def ambient_rank(self) -> int:
        return self.cone.ambient_rank

    @property
    def rank(self) -> int:
        return len(self.lattice_basis)

    @property
    def sharp(self) -> bool:
        return self.local_cone.is_pointed

    @property
    def hilbert_basis(self) -> Tuple[IntVector, ...]:
        return hilbert_basis(self)

    def coords(self, v: Sequence[int]) -> IntVector:
        return coordinates(self.lattice_basis, v)

    def from_coords(self, c: Sequence[int]) -> IntVector:
        n = self.ambient_rank
        return tuple(sum(ci * b[j] for ci, b in zip(c, self.lattice_basis)) for j in range(n))

    def in_group(self, v: Sequence[int]) -> bool:
        try:
            self.coords(v)
        except ContainmentError:
            return False
        return True

    def contains(self, v: Sequence[int]) -> bool:
        return self.in_group(v) and self.cone.contains(v)

    def pairings(self, alpha: Sequence[int]) -> Tuple[int, ...]:
        """Pairings of ``alpha`` with the primitive facet normals."""
        c = self.coords(alpha)
        return tuple(dot(a, c) for a in self.local_cone.facet_normals)

    def facets(self) -> List[FaceHandle]:
        r = self.rank
        return [FaceHandle((a,), r - 1) for a in self.local_cone.facet_normals]

    def face(self, normals: Iterable[Sequence[int]]) -> FaceHandle:
        normals = tuple(sorted(tuple(a) for a in normals))
        for a in normals:
            if a not in self.local_cone.facet_normals:
                raise NotAFaceError(f"{a} is not a facet normal of the monoid")
        return FaceHandle(normals, self.local_cone.face(normals).dim)

    def zero_face(self) -> FaceHandle:
        return self.face(self.local_cone.facet_normals)

    def full_face(self) -> FaceHandle:
        return self.face(())


def _monoid_generators(local: Cone):
    """(unit basis, lifted sharp Hilbert basis) of ``local ∩ Z^k``."""
    k = local.ambient_rank
    units = [tuple(u) for u in local.lineality]
    if not units:
        return (), tuple(_sharp_hilbert_basis(local))
    # Complete the (saturated) unit lattice to a basis of Z^k.
    _, u, uinv, _, _ = _snf(transpose(units))
    l = len(units)
    proj = [tuple(uinv[i]) for i in range(l, k)]  # Z^k -> Z^k / units
    quotient = Cone.from_generators([matvec(proj, g) for g in local.generators], k - l)
    sharp_q = _sharp_hilbert_basis(quotient)
    lifted = []
    for h in sharp_q:
        # lift through the last k-l columns of U
        x = tuple(sum(u[row][l + j] * h[j] for j in range(k - l)) for row in range(k))
        lifted.append(_min_lift(x, units))
    return tuple(units), tuple(sorted(lifted))


def hilbert_basis(m: AffineMonoid) -> Tuple[IntVector, ...]:
    """Minimal monoid generating set: ± the unit basis, then the Hilbert basis
    of the sharp quotient lifted to small representatives."""
    units = tuple(m.units) + tuple(tuple(-x for x in u) for u in m.units)
    return units + tuple(m.sharp_generators)


def facet_normals(m: AffineMonoid) -> Tuple[IntVector, ...]:
    if not m.sharp:
        raise NotSharpError("monoid must be sharp")
    return m.local_cone.facet_normals


def saturate(gens: Sequence[Sequence[int]],
             lattice: Optional[Sequence[Sequence[int]]] = None) -> AffineMonoid:
    """cone(gens) ∩ group(gens).

    If ``lattice`` is given (generators of a lattice containing ``gens``), the
    cone is intersected with that lattice instead, e.g. ``identity(d)`` for
    saturation inside Z^d.
    """
    gens = [tuple(int(x) for x in g) for g in gens]
    if not gens:
        raise PreconditionError("saturate needs at least one generator")
    n = len(gens[0])
    basis = hermite_basis(gens, n)
    if not basis:
        raise PreconditionError("generators span the zero group")
    if lattice is not None:
        outer = hermite_basis(lattice, n)
        for g in gens:
            coordinates(outer, g)
        span = saturated_basis(basis, n)
        # the part of the outer lattice inside span(gens)
        basis = hermite_basis(_lattice_meet_span(outer, span, n), n)
    return AffineMonoid(basis, Cone.from_generators(gens, n))


def _lattice_meet_span(outer, span, n):
    """Basis of ``L ∩ span(span)`` for a lattice L with basis ``outer``."""
    from .lattice import integer_kernel, orthogonal_complement

    eqs = orthogonal_complement(span, n)
    if not eqs:
        return list(outer)
    # x = c @ outer with eqs @ x = 0
    mat = [tuple(sum(e[j] * b[j] for j in range(n)) for b in outer) for e in eqs]
    ker = integer_kernel(mat, len(outer))
    return [tuple(sum(c[i] * outer[i][j] for i in range(len(outer))) for j in range(n)) for c in ker]


@dataclass(frozen=True)
class Localization:
    """``M + (-F)`` and its sharpening ``(M + (-F)) / F^gp``."""

    monoid: AffineMonoid
    face: FaceHandle
    localized: AffineMonoid
    sharpened: AffineMonoid
    projection: IntMatrix  # lattice coordinates of M -> coordinates of M^gp / F^gp

    def project(self, v: Sequence[int]) -> IntVector:
        return matvec(self.projection, self.monoid.coords(v)) if self.projection else ()


def localize_at_face(m: AffineMonoid, f: FaceHandle) -> Localization:
    local = m.local_cone
    for a in f.normals:
        if a not in local.facet_normals:
            raise NotAFaceError(f"{a} is not a facet normal of the monoid")
    k = m.rank
    face_cone = local.face(f.normals)
    if face_cone.dim != f.rank:
        raise NotAFaceError("face rank does not match its normals")
    face_gens = face_cone.generators
    face_lattice = saturated_basis(face_gens, k) if face_gens else ()
    loc_local = Cone.from_generators(
        list(local.generators) + [tuple(-x for x in g) for g in face_gens], k
    )
    localized = AffineMonoid(m.lattice_basis, _cone_from_local(m, loc_local))
    if lattice_quotient(identity(k), face_lattice) != (0,) * (k - len(face_lattice)):
        raise PreconditionError("M^gp / F^gp has torsion")
    fl = len(face_lattice)
    if fl:
        _, _, uinv, _, _ = _snf(transpose(face_lattice))
        proj = tuple(tuple(uinv[i]) for i in range(fl, k))
    else:
        proj = identity(k)
    q = k - fl
    if q == 0:
        sharpened = None
    else:
        qcone = Cone.from_generators([matvec(proj, g) for g in loc_local.generators], q)
        sharpened = AffineMonoid(identity(q), qcone)
    return Localization(m, f, localized, sharpened, proj)


def _cone_from_local(m: AffineMonoid, local: Cone) -> Cone:
    gens = [m.from_coords(g) for g in local.rays]
    lin = [m.from_coords(g) for g in local.lineality]
    return Cone.from_generators(gens, m.ambient_rank, lineality=lin)


# -- finitely generated (possibly unsaturated) monoids ----------------------


@dataclass(frozen=True)
class GeneratedMonoid:
    """The submonoid of Z^d generated by finitely many vectors."""

    gens: Tuple[IntVector, ...]

    @property
    def ambient_rank(self) -> int:
        return len(self.gens[0])

    def saturation(self) -> AffineMonoid:
        return saturate(self.gens)

    def contains(self, x: Sequence[int]) -> bool:
        """Exact membership in ``N·gens``.

        Generators inside the lineality space W of cone(gens) generate a group;
        the rest have positive degree under the sum of facet normals, which
        bounds the search.
        """
        x = tuple(x)
        n = self.ambient_rank
        cone = Cone.from_generators(self.gens, n)
        ell = tuple(sum(a[i] for a in cone.facet_normals) for i in range(n))
        in_w = [g for g in self.gens if any(g) and dot(ell, g) == 0 and cone.contains(tuple(-c for c in g))]
        pos = [g for g in self.gens if dot(ell, g) > 0]
        group = hermite_basis(in_w, n) if in_w else ()
        if not cone.contains(x):
            return False

        seen = set()

        def rec(y):
            if y in seen:
                return False
            seen.add(y)
            d = dot(ell, y)
            if d == 0:
                if not any(y):
                    return True
                try:
                    coordinates(group, y)
                    return True
                except ContainmentError:
                    pass
            for g in pos:
                z = tuple(a - b for a, b in zip(y, g))
                if dot(ell, z) >= 0 and cone.contains(z) and rec(z):
                    return True
            return False

        return rec(x)

    def is_saturated(self) -> bool:
        sat = self.saturation()
        return all(self.contains(h) for h in sat.hilbert_basis)
