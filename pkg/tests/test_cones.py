import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import bounded_points, decomposes, pointed_cones, positive_functional, sharp_monoids
from logsheaf.cones import (
    AffineMonoid,
    Cone,
    dual_cone,
    facet_normals,
    hilbert_basis,
    localize_at_face,
    saturate,
)
from logsheaf.errors import NotAFaceError, NotSharpError
from logsheaf.lattice import dot, identity, lattice_quotient, saturated_basis


def quadrant():
    return Cone.orthant(2)


# -- dual cones ---------------------------------------------------------------


def test_dual_of_quadrant_is_quadrant():
    assert dual_cone(quadrant()) == quadrant()


def test_dual_example():
    d = dual_cone(Cone.from_generators([(1, 0), (1, 2)], 2))
    assert set(d.rays) == {(0, 1), (2, -1)}


def test_dual_of_ray_is_half_plane():
    # the ray where <alpha, w> = 3 and <beta, w> = 2
    d = dual_cone(Cone.from_generators([(3, 2)], 2))
    assert d.lineality in (((2, -3),), ((-2, 3),))
    assert d.facet_normals == ((3, 2),)
    assert d.contains((1, -1)) and not d.contains((-1, 1))


@given(st.integers(1, 3).flatmap(pointed_cones))
def test_double_description_consistency(c):
    for r in c.rays:
        assert all(dot(a, r) >= 0 for a in c.facet_normals)
    again = Cone.from_generators(c.rays, c.ambient_rank)
    assert set(again.facet_normals) == set(c.facet_normals)
    for a in c.facet_normals:
        tight = [r for r in c.rays if dot(a, r) == 0]
        assert Cone.from_generators(tight, c.ambient_rank).dim == c.dim - 1 if tight else c.dim == 1


@given(st.integers(1, 3).flatmap(pointed_cones))
def test_dual_is_involution(c):
    assert dual_cone(dual_cone(c)) == c


# -- Hilbert bases ------------------------------------------------------------


def test_hilbert_basis_free():
    assert set(hilbert_basis(AffineMonoid.standard(quadrant()))) == {(1, 0), (0, 1)}


def test_hilbert_basis_of_2a_ge_b_ge_0():
    c = Cone.from_inequalities([(2, -1), (0, 1)], 2)
    hb = set(hilbert_basis(AffineMonoid.standard(c)))
    assert hb == {(1, 0), (1, 1), (1, 2)}
    # oracle: the half-open parallelepiped of the rays (1,0), (1,2) holds (0,0), (1,1)
    pts = {(a, b) for a in range(0, 3) for b in range(0, 3)
           if 0 <= b / 2 < 1 and 0 <= a - b / 2 < 1}
    assert pts == {(0, 0), (1, 1)}


def test_hilbert_basis_half_plane():
    m = AffineMonoid.standard(Cone.from_inequalities([(3, 2)], 2))
    hb = set(hilbert_basis(m))
    assert {(2, -3), (-2, 3)} <= hb
    assert (1, -1) in hb and len(hb) == 3
    assert m.units in (((2, -3),), ((-2, 3),))
    assert m.sharp_generators == ((1, -1),)


@given(sharp_monoids(max_rank=3))
def test_hilbert_basis_generates_and_is_minimal(m):
    hb = list(hilbert_basis(m))
    ell = positive_functional(m.cone)
    for v in bounded_points(m, 2):
        assert decomposes(v, hb, ell)
    for h in hb:
        assert m.contains(h)
        assert not decomposes(h, [g for g in hb if g != h], ell)


# -- saturation ---------------------------------------------------------------


def test_saturate_numerical_semigroup():
    assert saturate([(2, 0), (3, 0)]).hilbert_basis == ((1, 0),)


def test_saturate_inside_z2():
    m = saturate([(1, 1), (1, -1)], lattice=identity(2))
    assert set(m.hilbert_basis) == {(1, 1), (1, 0), (1, -1)}


def test_saturate_uses_group_of_generators_by_default():
    # (1,0) is not in the group generated by (1,1), (1,-1)
    m = saturate([(1, 1), (1, -1)])
    assert not m.contains((1, 0))
    assert set(m.hilbert_basis) == {(1, 1), (1, -1)}


def test_saturate_idempotent_on_n2():
    m = saturate([(1, 0), (0, 1)])
    assert set(m.hilbert_basis) == {(1, 0), (0, 1)}


@given(st.integers(0, 2 ** 32 - 1))
def test_saturate_properties(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 3)
    gens = []
    while len(gens) < rng.randint(k, k + 2):
        v = tuple(rng.randint(-3, 3) for _ in range(k))
        if sum(v) > 0:
            gens.append(v)
    m = saturate(gens)
    assert all(m.contains(g) for g in gens)
    again = saturate(m.hilbert_basis)
    assert set(again.hilbert_basis) == set(m.hilbert_basis)


# -- facets and localization --------------------------------------------------


def test_facet_normals_examples():
    assert set(facet_normals(AffineMonoid.standard(quadrant()))) == {(1, 0), (0, 1)}
    c = Cone.from_inequalities([(2, -1), (0, 1)], 2)
    assert set(facet_normals(AffineMonoid.standard(c))) == {(0, 1), (2, -1)}


def test_facet_normals_not_sharp():
    m = AffineMonoid.standard(Cone.from_inequalities([(3, 2)], 2))
    with pytest.raises(NotSharpError, match="monoid must be sharp"):
        facet_normals(m)


def test_localize_n2_at_coordinate_face():
    m = AffineMonoid.standard(quadrant())
    f = m.face([(0, 1)])  # the face N(1,0)
    loc = localize_at_face(m, f)
    assert loc.sharpened.rank == 1
    assert loc.sharpened.sharp
    assert len(loc.sharpened.hilbert_basis) == 1
    assert loc.localized.contains((-1, 0))


def test_localize_at_zero_and_full_face():
    m = AffineMonoid.standard(quadrant())
    zero = localize_at_face(m, m.zero_face())
    assert set(zero.localized.hilbert_basis) == set(m.hilbert_basis)
    full = localize_at_face(m, m.full_face())
    assert full.sharpened is None
    assert full.localized.contains((-1, -1))


def test_localize_bad_face():
    m = AffineMonoid.standard(quadrant())
    with pytest.raises(NotAFaceError):
        m.face([(1, 1)])


@given(sharp_monoids(max_rank=3))
def test_facet_localizations_have_rank_one(m):
    for f in m.facets():
        loc = localize_at_face(m, f)
        assert loc.sharpened.rank == 1
        face_gens = [g for g in m.local_cone.generators if dot(f.normals[0], g) == 0]
        # F^gp is the saturation of the face's span in the monoid's lattice
        face_group = saturated_basis(face_gens, m.rank) if face_gens else ()
        assert lattice_quotient(identity(m.rank), face_group) == (0,)
