"""Acceptance criteria 1-12.

Each test records a PASS/FAIL verdict with its runtime; the verdicts are
printed as one line per criterion when the module finishes.
"""
import itertools
import random
import time
from contextlib import contextmanager

import pytest

from conftest import brute_force_saturated, group_element, random_sharp_monoid, random_subdivision
from logsheaf import cli
from logsheaf.charts import (
    GradedQuotientPresentation,
    chart_monoid,
    equal_in_quotient,
    fiber_ring,
    nilpotency_order,
    pushforward,
)
from logsheaf.cones import AffineMonoid, Cone, dual_cone, saturate
from logsheaf.errors import FacetPairingError
from logsheaf.laurent import LaurentPolynomial, from_polynomial
from logsheaf.linalg import solve
from logsheaf.parsing import parse_polynomial
from logsheaf.saturation import (
    PERMISSIVE,
    STRICT,
    adjoin_element,
    is_saturated_element,
    kummer_extension,
    minimal_saturating_root,
)
from logsheaf.subdivision import (
    hyperplane_subdivision,
    nonneg_pl_monoid,
    pic_of_subdivision,
    pl_sections,
    product_subdivision,
    star_subdivision,
    trivial_subdivision,
)

M = LaurentPolynomial.monomial
QUAD = Cone.orthant(2)
OCT = Cone.orthant(3)
XYZ = ("x", "y", "z")
RANDOM_INSTANCES = 200

_verdicts = {}


@pytest.fixture(scope="module", autouse=True)
def acceptance_summary(request):
    yield
    tr = request.config.pluginmanager.get_plugin("terminalreporter")
    lines = [f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  ({dt:.2f}s) {title}"
             for n, (ok, dt, title) in sorted(_verdicts.items())]
    if tr is not None:
        tr.write_line("")
        for line in lines:
            tr.write_line(line)
    else:
        print("\n".join(lines))


@contextmanager
def criterion(n, title, limit=None):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        dt = time.perf_counter() - t0
        if ok and limit is not None and dt >= limit:
            ok = False
            title += f" [over the {limit}s limit]"
        _verdicts[n] = (ok, dt, title)
    assert dt < (limit or float("inf")), f"criterion {n} took {dt:.2f}s, limit {limit}s"


def ring(cone, gens, names=XYZ, weights=None):
    polys = tuple(from_polynomial(parse_polynomial(g), names) for g in gens)
    return GradedQuotientPresentation(cone, polys, weights or (1,) * len(names), tuple(names))


def poly(text, names=XYZ):
    return from_polynomial(parse_polynomial(text), names)


def chart_containing(delta, point):
    (c,) = [c for c in delta.maximal_cones if c.in_relative_interior(point)]
    return c


# -- 1 ------------------------------------------------------------------------


def test_criterion_01_kernel_of_xy():
    with criterion(1, "xy vanishes on the blowup of V(x^2, y^2)", limit=1.0):
        x = ring(QUAD, ("x^2", "y^2"), ("x", "y"))
        res = pushforward(x, star_subdivision(QUAD, (1, 1)), 2)
        # the degree-2 part of X is spanned by xy alone
        assert res.x_dimension == 1
        assert res.kernel_basis == [M((1, 1))]
        assert res.kernel_dimension == 1


# -- 2 ------------------------------------------------------------------------


def test_criterion_02_nilpotent_fiber():
    with criterion(2, "fiber of the 2a = 3b chart is Gm x k[e]/(e^2)", limit=1.0):
        delta = hyperplane_subdivision(QUAD, (2, -3))
        chart = chart_monoid(delta, Cone.from_generators([(3, 2)], 2))
        fr = fiber_ring(chart, [(1, 0), (0, 1)])
        assert fr.unit_rank == 1
        assert fr.nilpotent_generators == (((1, -1), 2),)
        assert not fr.empty and fr.free_generators == ()


# -- 3 ------------------------------------------------------------------------


def test_criterion_03_product_example():
    with criterion(3, "product chart: e1, e2 of order 2 and e1*e2 in the kernel", limit=5.0):
        cut = hyperplane_subdivision(QUAD, (2, -3))
        tau = Cone.from_generators([(3, 2, 0, 0), (0, 0, 3, 2)], 4)
        chart = chart_monoid(product_subdivision(cut, cut), tau)
        fr = fiber_ring(chart, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
        assert fr.unit_rank == 2
        assert set(fr.nilpotent_generators) == {((1, -1, 0, 0), 2), ((0, 0, 1, -1), 2)}

        names = ("a1", "b1", "a2", "b2")
        x = ring(tau, names, names, weights=(3, 2, 3, 2))
        res = pushforward(x, star_subdivision(tau, (3, 2, 3, 2)), 2)
        e1e2 = M((1, -1, 1, -1))
        assert res.kernel_generators == [e1e2]
        assert res.in_kernel(e1e2) and res.stable


# -- 4 ------------------------------------------------------------------------

EVEN = ("x^4", "x^2*y^2", "x^2*z^2", "y^4", "y^2*z^2", "z^4")
QUARTIC_IDEAL = ("x^3*z - x*y^2*z", "x*y^3 - x*y*z^2", "y*z^3 - x^2*y*z")


def _cycle(text):
    # x -> y -> z -> x preserves the ideal and sends the x-chart to the y-chart
    return text.replace("x", "X").replace("z", "x").replace("y", "z").replace("X", "y")


def _canonical(mono):
    """Sorted-variable spelling of a monomial, e.g. z^2*x^2 -> x^2*z^2."""
    return str(parse_polynomial(mono))


def _classes_on(r):
    """Partition of the six even quartics by equality in the chart ring."""
    out = []
    for m in EVEN:
        for cls in out:
            if equal_in_quotient(poly(m), poly(cls[0]), r):
                cls.append(m)
                break
        else:
            out.append([m])
    return sorted(sorted(c) for c in out)


def test_criterion_04_non_surjectivity():
    with criterion(4, "(x^4, y^4, z^4) glues but has no preimage in degree 4", limit=10.0):
        x = ring(OCT, QUARTIC_IDEAL)
        delta = star_subdivision(OCT, (1, 1, 1))
        u = chart_containing(delta, (1, 2, 2))  # Spec k[x, y/x, z/x]
        v = chart_containing(delta, (2, 1, 2))
        w = chart_containing(delta, (2, 2, 1))

        # x^4 = x^2 y^2 = y^4 on U n V, and the symmetric identities
        uv = x.with_support(u.intersect(v))
        assert equal_in_quotient(poly("x^4"), poly("x^2*y^2"), uv)
        assert equal_in_quotient(poly("x^2*y^2"), poly("y^4"), uv)
        assert equal_in_quotient(poly("x^4"), poly("z^4"), x.with_support(u.intersect(w)))
        assert equal_in_quotient(poly("y^4"), poly("z^4"), x.with_support(v.intersect(w)))
        # the displayed combination expands to x^4 - x^2 z^2, which also lies in the ideal there
        combo = poly("x^3*y^(-3)*(x*y^3 - x*y*z^2) + x*y^(-2)*z*(x^3*z - x*y^2*z)")
        assert combo == poly("x^4 - x^2*z^2")
        assert equal_in_quotient(poly("x^4 - x^2*y^2"), combo, uv)

        # even quartics on U: {x^4}, {x^2 y^2}, {x^2 z^2, y^4, y^2 z^2, z^4}; cyclic images on V, W
        expected_u = [["x^2*y^2"], ["x^2*z^2", "y^2*z^2", "y^4", "z^4"], ["x^4"]]
        expected = {}
        classes = expected_u
        for name, chart in (("U", u), ("V", v), ("W", w)):
            expected[name] = sorted(sorted(c) for c in classes)
            assert _classes_on(x.with_support(chart)) == expected[name], name
            classes = [[_canonical(_cycle(m)) for m in c] for c in classes]

        # g = a x^4 + b x^2y^2 + c x^2z^2 + d y^4 + e y^2z^2 + f z^4 restricted to each chart
        targets = {"U": "x^4", "V": "y^4", "W": "z^4"}
        systems = {}
        for name in ("U", "V", "W"):
            rows, rhs = [], []
            for cls in expected[name]:
                rows.append([1 if m in cls else 0 for m in EVEN])
                rhs.append(1 if targets[name] in cls else 0)
            systems[name] = (rows, rhs)
        rows_u, rhs_u = systems["U"]
        # a = 1, b = 0, c + d + e + f = 0
        assert sorted(zip(map(tuple, rows_u), rhs_u)) == sorted([
            ((1, 0, 0, 0, 0, 0), 1), ((0, 1, 0, 0, 0, 0), 0), ((0, 0, 1, 1, 1, 1), 0)])
        assert solve(rows_u, rhs_u) is not None
        all_rows = [r for s in systems.values() for r in s[0]]
        all_rhs = [b for s in systems.values() for b in s[1]]
        assert solve(all_rows, all_rhs) is None

        res = pushforward(x, delta, 4)
        comps = [None] * 3
        for c, t in ((u, "x^4"), (v, "y^4"), (w, "z^4")):
            comps[delta.maximal_cones.index(c)] = poly(t)
        assert res.glue_test(comps)
        assert res.preimage(comps) is None
        assert res.cokernel_dimension >= 1 and res.stable


# -- 5 ------------------------------------------------------------------------

MONOMIAL_CORPUS = [
    ("x^2", "y^2"),
    ("x*y",),
    ("x*y*z",),
    ("x^3", "y^2*z", "x*z^2"),
    ("x*y", "y*z", "x*z"),
    ("x^2", "x*y", "z^3"),
]


def test_criterion_05_monomial_surjectivity():
    with criterion(5, "monomial quotients of the octant: cokernel 0 in degrees 0-6", limit=60.0):
        delta = star_subdivision(OCT, (1, 1, 1))
        for gens in MONOMIAL_CORPUS:
            x = ring(OCT, gens)
            for d in range(7):
                res = pushforward(x, delta, d)
                assert res.cokernel_dimension == 0, (gens, d)


# -- 6 ------------------------------------------------------------------------


def _kernels_of_criteria_1_3_5():
    x = ring(QUAD, ("x^2", "y^2"), ("x", "y"))
    yield x, pushforward(x, star_subdivision(QUAD, (1, 1)), 2).kernel_basis
    tau = Cone.from_generators([(3, 2, 0, 0), (0, 0, 3, 2)], 4)
    names = ("a1", "b1", "a2", "b2")
    x = ring(tau, names, names, weights=(3, 2, 3, 2))
    yield x, pushforward(x, star_subdivision(tau, (3, 2, 3, 2)), 2).kernel_basis
    delta = star_subdivision(OCT, (1, 1, 1))
    for gens in MONOMIAL_CORPUS:
        x = ring(OCT, gens)
        for d in range(7):
            yield x, pushforward(x, delta, d).kernel_basis


def test_criterion_06_kernel_is_nil():
    with criterion(6, "every kernel element found in 1, 3, 5 is nilpotent"):
        found = 0
        for x, basis in _kernels_of_criteria_1_3_5():
            for f in basis:
                assert nilpotency_order(f, x) is not None, f
                found += 1
        assert found >= 2


# -- 7 ------------------------------------------------------------------------


def test_criterion_07_saturated_oracle():
    with criterion(7, f"saturated predicate = localization oracle on {RANDOM_INSTANCES} monoids", limit=60.0):
        rng = random.Random(7)
        for _ in range(RANDOM_INSTANCES):
            m = random_sharp_monoid(rng)
            for _ in range(3):
                a = group_element(rng, m, 3)
                assert is_saturated_element(m, a, convention=STRICT) == brute_force_saturated(m, a)
                assert is_saturated_element(m, a, convention=PERMISSIVE) == brute_force_saturated(m, a, True)


# -- 8 ------------------------------------------------------------------------


def _saturated_candidates(m, bound=2):
    out = []
    for c in itertools.product(range(-bound, bound + 1), repeat=m.rank):
        a = m.from_coords(c)
        if is_saturated_element(m, a):
            out.append(a)
    return out


def test_criterion_08_adjoin_stays_saturated():
    with criterion(8, f"adjoining a saturated element on {RANDOM_INSTANCES} instances", limit=60.0):
        rng = random.Random(8)
        done = 0
        while done < RANDOM_INSTANCES:
            m = random_sharp_monoid(rng)
            cands = _saturated_candidates(m)
            if not cands:
                continue
            alpha = rng.choice(cands)
            gm, sat = adjoin_element(m, alpha)
            assert sat
            full = saturate(gm.gens, lattice=m.lattice_basis)
            assert all(gm.contains(h) for h in full.hilbert_basis)
            done += 1


# -- 9 ------------------------------------------------------------------------


def _divisors(n):
    return [d for d in range(1, n) if n % d == 0]


def test_criterion_09_root_order():
    with criterion(9, "minimal saturating root: 6 for (2,3), proper divisors fail"):
        n2 = AffineMonoid.standard(QUAD)
        n, ext = minimal_saturating_root(n2, (2, 3))
        assert n == 6 and is_saturated_element(ext.extended_monoid, (2, 3))
        for k in range(1, 6):
            assert not is_saturated_element(kummer_extension(n2, (2, 3), k).extended_monoid, (2, 3))

        rng = random.Random(9)
        done = 0
        while done < 60:
            m = random_sharp_monoid(rng)
            alpha = group_element(rng, m, 3)
            if 0 in m.pairings(alpha):
                with pytest.raises(FacetPairingError):
                    minimal_saturating_root(m, alpha)
                continue
            n, ext = minimal_saturating_root(m, alpha)
            assert is_saturated_element(ext.extended_monoid, alpha)
            for d in _divisors(n):
                assert not is_saturated_element(kummer_extension(m, alpha, d).extended_monoid, alpha)
            done += 1


# -- 10 -----------------------------------------------------------------------


def test_criterion_10_pl_nonnegativity():
    with criterion(10, f"nonnegative linear PL = dual monoid on {RANDOM_INSTANCES} triples", limit=60.0):
        rng = random.Random(10)
        for _ in range(RANDOM_INSTANCES):
            k = rng.randint(1, 3)
            d = random_subdivision(rng, k)
            nn = nonneg_pl_monoid(d)
            u = tuple(rng.randint(-3, 3) for _ in range(k))
            on_rays = all(sum(a * b for a, b in zip(u, r)) >= 0 for r in d.base.rays)
            assert nn.contains_linear(u) == on_rays
            assert AffineMonoid.standard(dual_cone(d.base)).contains(u) == on_rays


# -- 11 -----------------------------------------------------------------------


def test_criterion_11_picard():
    with criterion(11, "Pic: 0 for trivial, Z for the splits, torsion-free at random"):
        assert pic_of_subdivision(trivial_subdivision(QUAD)) == ()
        assert pic_of_subdivision(trivial_subdivision(OCT)) == ()
        assert pic_of_subdivision(hyperplane_subdivision(QUAD, (1, -1))) == (0,)
        assert pic_of_subdivision(star_subdivision(OCT, (1, 1, 1))) == (0,)
        rng = random.Random(11)
        for _ in range(RANDOM_INSTANCES):
            d = random_subdivision(rng, rng.randint(1, 3))
            factors = pic_of_subdivision(d)
            assert all(f == 0 for f in factors)
            assert len(factors) == len(pl_sections(d)) - d.ambient_rank


# -- 12 -----------------------------------------------------------------------


def test_criterion_12_verify_paper(capsys):
    with criterion(12, "verify-paper runs the built-in scenarios and exits 0"):
        code = cli.main(["verify-paper"])
        out = capsys.readouterr().out
        assert code == 0, out
        assert "FAIL" not in out and "SKIP" not in out
        for crit in "12345":
            assert f"[{crit}]" in out
