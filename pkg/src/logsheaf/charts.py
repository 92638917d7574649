"""Chart rings of a subdivision and graded global sections over a modification.

All rings here are quotients ``k[S] / I k[S]`` where ``S = tau^dual ∩ Z^n`` for
a cone ``tau`` and ``I`` is generated by fixed Laurent polynomials, homogeneous
for an integer weight vector.  Different charts share one exponent lattice, so
restriction to an overlap is the identity on exponents.

A graded piece of such a ring is usually infinite-dimensional (e.g. the degree
4 piece of ``k[x, y/x, z/x]`` contains ``x^4 (y/x)^k`` for all k).  Linear
algebra is therefore done on the finite window of exponents with
``|e_i| <= radius``; the ideal is spanned there by the multiples ``m * g`` whose
terms all stay inside the window.  Graded pieces are the colimit of these
windows as the radius grows, and equalizers commute with that colimit, so
kernels only grow with the radius and cokernel classes are counted when they
persist from one radius to a larger one.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .cones import AffineMonoid, Cone, dual_cone
from .errors import ConfigurationError, ContainmentError, NotAFaceError, PreconditionError
from .laurent import LaurentPolynomial
from .lattice import IntVector, dot, identity, saturated_basis
from .linalg import Echelon, kernel, rank_sparse
from .subdivision import Subdivision

DEFAULT_DEGREE_BOUND = 8
RADIUS_PAD = 2


def _monoid_of_dual(tau: Cone) -> AffineMonoid:
    dual = dual_cone(tau)
    if dual.is_full_dimensional:
        return AffineMonoid.standard(dual)
    return AffineMonoid(saturated_basis(dual.generators, dual.ambient_rank), dual)


@dataclass(frozen=True)
class ChartMonoid:
    """``tau^dual ∩ Z^n`` split into a unit lattice and a sharp part."""

    cone: Cone
    monoid: AffineMonoid

    @property
    def unit_lattice(self) -> Tuple[IntVector, ...]:
        return self.monoid.units

    @property
    def sharp_part(self) -> Tuple[IntVector, ...]:
        return self.monoid.sharp_generators

    def contains(self, m: Sequence[int]) -> bool:
        return self.monoid.contains(m)


def chart_monoid(delta: Subdivision, tau: Cone) -> ChartMonoid:
    if not delta.is_cone(tau):
        raise NotAFaceError("tau is not a cone of the subdivision")
    return ChartMonoid(tau, _monoid_of_dual(tau))


def monomial_ideal_member(chart: ChartMonoid, gens: Sequence[Sequence[int]],
                          m: Sequence[int]) -> bool:
    """Whether the monomial ``m`` lies in the ideal of the chart ring generated
    by the monomials ``gens``."""
    n = chart.cone.ambient_rank
    for v in list(gens) + [m]:
        if len(v) != n:
            raise ContainmentError(f"{tuple(v)} does not live in the chart's lattice")
    return any(
        chart.contains(tuple(a - b for a, b in zip(m, g))) for g in gens
    )


@dataclass(frozen=True)
class FiberRing:
    """``k[units] ⊗ k[sharp generators]`` modulo a monomial ideal, summarized.

    ``nilpotent_generators`` pairs each sharp generator outside the ideal with
    the least power that lands in it; ``free_generators`` have no such power.
    """

    unit_rank: int
    nilpotent_generators: Tuple[Tuple[IntVector, int], ...]
    free_generators: Tuple[IntVector, ...] = ()
    empty: bool = False


def fiber_ring(chart: ChartMonoid, origin_gens: Sequence[Sequence[int]],
               max_power: int = DEFAULT_DEGREE_BOUND) -> FiberRing:
    """Fiber of the chart over the point cut out by ``origin_gens``."""
    origin_gens = [tuple(g) for g in origin_gens]
    if any(chart.contains(tuple(-x for x in g)) for g in origin_gens):
        return FiberRing(0, (), (), True)
    nil, free = [], []
    for h in chart.sharp_part:
        if monomial_ideal_member(chart, origin_gens, h):
            continue
        for k in range(2, max_power + 1):
            if monomial_ideal_member(chart, origin_gens, tuple(k * x for x in h)):
                nil.append((h, k))
                break
        else:
            free.append(h)
    return FiberRing(len(chart.unit_lattice), tuple(nil), tuple(free))


# -- graded quotient rings ---------------------------------------------------


@dataclass(frozen=True)
class GradedQuotientPresentation:
    """``k[support^dual ∩ Z^n] / (generators)`` graded by ``weights``.

    ``variables`` optionally names the ambient exponent coordinates.
    """

    support: Cone
    generators: Tuple[LaurentPolynomial, ...]
    weights: IntVector
    variables: Tuple[str, ...] = ()

    def __post_init__(self):
        n = self.support.ambient_rank
        if len(self.weights) != n:
            raise ConfigurationError("weights do not match the lattice rank")
        for g in self.generators:
            if g.rank != n:
                raise ConfigurationError("generator rank does not match the lattice")
            if g and not g.is_homogeneous(self.weights):
                raise PreconditionError(f"generator {g.to_string(self.variables or None)} is not homogeneous")
            for e in g.exponents():
                if not self.contains_monomial(e):
                    raise ConfigurationError(f"generator exponent {e} is outside the ring")

    @property
    def rank(self) -> int:
        return self.support.ambient_rank

    def contains_monomial(self, e: Sequence[int]) -> bool:
        s = self.support
        return all(dot(e, l) == 0 for l in s.lineality) and all(dot(e, r) >= 0 for r in s.rays)

    def with_support(self, tau: Cone) -> "GradedQuotientPresentation":
        return GradedQuotientPresentation(tau, self.generators, self.weights, self.variables)

    def max_abs_exponent(self) -> int:
        return max((g.max_abs_exponent() for g in self.generators), default=0)

    def name(self, p: LaurentPolynomial) -> str:
        return p.to_string(self.variables or None)


def _window(ring: GradedQuotientPresentation, d: int, radius: int) -> List[IntVector]:
    n = ring.rank
    w = ring.weights
    nz = [i for i in range(n) if w[i]]
    out = []
    rng = range(-radius, radius + 1)
    if not nz:
        if d != 0:
            return []
        for e in itertools.product(rng, repeat=n):
            if ring.contains_monomial(e):
                out.append(e)
        return out
    j = nz[-1]
    others = [i for i in range(n) if i != j]
    for vals in itertools.product(rng, repeat=n - 1):
        rest = d - sum(w[i] * v for i, v in zip(others, vals))
        if rest % w[j]:
            continue
        ej = rest // w[j]
        if abs(ej) > radius:
            continue
        e = [0] * n
        for i, v in zip(others, vals):
            e[i] = v
        e[j] = ej
        e = tuple(e)
        if ring.contains_monomial(e):
            out.append(e)
    return out


class GradedPiece:
    """Degree-``d`` piece of a ring on the window of the given radius."""

    def __init__(self, ring: GradedQuotientPresentation, d: int, radius: int):
        self.ring, self.degree, self.radius = ring, d, radius
        self.monomials = _window(ring, d, radius)
        mono_set = set(self.monomials)
        self.ideal = Echelon()
        for g in ring.generators:
            if not g:
                continue
            terms = g.terms
            seen = set()
            for e in self.monomials:
                for t in terms:
                    m = tuple(a - b for a, b in zip(e, t))
                    if m in seen:
                        continue
                    seen.add(m)
                    if not ring.contains_monomial(m):
                        continue
                    vec = {}
                    for t2, c in terms.items():
                        e2 = tuple(a + b for a, b in zip(m, t2))
                        if e2 not in mono_set:
                            vec = None
                            break
                        vec[e2] = c
                    if vec:
                        self.ideal.add(vec)
        self.basis = [e for e in self.monomials if e not in self.ideal.rows]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def covers(self, p: LaurentPolynomial) -> bool:
        return all(abs(x) <= self.radius for e in p.exponents() for x in e)

    def normal_form(self, vec) -> Dict[IntVector, Fraction]:
        return self.ideal.reduce(vec)


def _check_element(ring: GradedQuotientPresentation, p: LaurentPolynomial, d: Optional[int]):
    if p.rank != ring.rank:
        raise PreconditionError("polynomial rank does not match the ring")
    if p and not p.is_homogeneous(ring.weights):
        raise PreconditionError(f"{ring.name(p)} is not homogeneous")
    if p and d is not None and p.degree(ring.weights) != d:
        raise PreconditionError(f"{ring.name(p)} does not have degree {d}")
    for e in p.exponents():
        if not ring.contains_monomial(e):
            raise ContainmentError(f"monomial {e} is not in the ring")


def default_radius(ring: GradedQuotientPresentation, d: int, polys=()) -> int:
    m = max([ring.max_abs_exponent(), abs(d)] + [p.max_abs_exponent() for p in polys])
    return m + RADIUS_PAD


def equal_in_quotient(p: LaurentPolynomial, q: LaurentPolynomial,
                      ring: GradedQuotientPresentation, radius: Optional[int] = None) -> bool:
    """Whether ``p - q`` lies in the ideal, certified on a finite window.

    A True answer is exact; a False answer means no certificate exists with all
    multiplier terms inside the window of the given radius.
    """
    diff = p - q
    if not diff:
        for x in (p, q):
            _check_element(ring, x, None)
        return True
    _check_element(ring, p, None)
    _check_element(ring, q, None)
    d = diff.degree(ring.weights)
    for x in (p, q):
        if x and x.degree(ring.weights) != d:
            raise PreconditionError("inputs have different degrees")
    if radius is None:
        radius = default_radius(ring, d, (p, q))
    piece = GradedPiece(ring, d, radius)
    return not piece.normal_form(diff.terms)


def ideal_certificate_span(p: LaurentPolynomial, ring: GradedQuotientPresentation,
                           radius: Optional[int] = None) -> bool:
    """Whether ``p`` is zero in the ring (window-certified)."""
    return equal_in_quotient(p, LaurentPolynomial.zero(ring.rank), ring, radius)


# -- global sections ---------------------------------------------------------


def blowup_configuration(x_ring: GradedQuotientPresentation, delta: Subdivision):
    """Charts and pairwise overlaps of the total transform of ``x_ring``."""
    if delta.base != x_ring.support:
        raise ConfigurationError("subdivision base differs from the ring's cone")
    charts = [x_ring.with_support(c) for c in delta.maximal_cones]
    overlaps = [((i, j), x_ring.with_support(inter)) for i, j, inter in delta.overlaps()]
    return charts, overlaps


def _check_configuration(x_ring, charts, overlaps):
    for c in charts:
        if c.generators != x_ring.generators or c.weights != x_ring.weights:
            raise ConfigurationError("charts must carry the total transform of X's ideal")
        if not x_ring.support.contains_cone(c.support):
            raise ConfigurationError("chart ring does not contain X's ring")
    for (i, j), o in overlaps:
        if not (0 <= i < len(charts) and 0 <= j < len(charts)) or i == j:
            raise ConfigurationError(f"bad overlap index pair {(i, j)}")
        if o.generators != x_ring.generators or o.weights != x_ring.weights:
            raise ConfigurationError("overlaps must carry the total transform of X's ideal")
        for k in (i, j):
            if not charts[k].support.contains_cone(o.support):
                raise ConfigurationError(f"restriction from chart {k} to overlap {(i, j)} is undefined")


class _Level:
    """All graded pieces and the equalizer at one radius."""

    def __init__(self, x_ring, charts, overlaps, d, radius):
        self.x = GradedPiece(x_ring, d, radius)
        self.charts = [GradedPiece(c, d, radius) for c in charts]
        self.overlaps = [(ij, GradedPiece(o, d, radius)) for ij, o in overlaps]
        self.unknowns = [(k, b) for k, piece in enumerate(self.charts) for b in piece.basis]
        columns = []
        for k, b in self.unknowns:
            col = {}
            for oi, ((i, j), piece) in enumerate(self.overlaps):
                if k not in (i, j):
                    continue
                sign = 1 if k == i else -1
                for e, c in piece.normal_form({b: 1}).items():
                    key = (oi, e)
                    col[key] = col.get(key, 0) + sign * c
            columns.append({key: c for key, c in col.items() if c})
        index = {u: n for n, u in enumerate(self.unknowns)}
        self.sections = [
            {self.unknowns[n]: c for n, c in v.items()} for v in kernel(columns)
        ]
        self.image_columns = [self.restrict_tuple_of({b: Fraction(1)}) for b in self.x.basis]

    def restrict_tuple_of(self, vec) -> Dict[Tuple[int, IntVector], Fraction]:
        """Image of an element of X (as exponent -> coefficient) in the chart
        quotient coordinates."""
        out = {}
        for k, piece in enumerate(self.charts):
            for e, c in piece.normal_form(vec).items():
                out[(k, e)] = c
        return out

    def tuple_coordinates(self, components: Sequence[LaurentPolynomial]):
        out = {}
        for k, (piece, p) in enumerate(zip(self.charts, components)):
            for e, c in piece.normal_form(p.terms).items():
                out[(k, e)] = c
        return out

    def section_vector(self, sec) -> Dict[Tuple[int, IntVector], Fraction]:
        """Re-express a section given on another level's chart bases in this
        level's coordinates."""
        per_chart: Dict[int, Dict[IntVector, Fraction]] = {}
        for (k, e), c in sec.items():
            per_chart.setdefault(k, {})[e] = c
        out = {}
        for k, vec in per_chart.items():
            for e, c in self.charts[k].normal_form(vec).items():
                out[(k, e)] = c
        return out


@dataclass
class SectionsResult:
    """Degree-``degree`` part of ``O_X -> Γ(Y, O_Y)``."""

    degree: int
    radius: int
    x_dimension: int
    section_dimension: int
    kernel_basis: List[LaurentPolynomial]
    kernel_generators: List[LaurentPolynomial]
    unit_rank: int
    image_basis: List[Tuple[LaurentPolynomial, ...]]
    cokernel_dimension: int
    cokernel_by_radius: Tuple[int, int]
    stable: bool
    glue_test: Callable[[Sequence[LaurentPolynomial]], bool] = field(repr=False)
    preimage: Callable[[Sequence[LaurentPolynomial]], Optional[LaurentPolynomial]] = field(repr=False)
    in_kernel: Callable[[LaurentPolynomial], bool] = field(repr=False)

    @property
    def kernel_dimension(self) -> int:
        return len(self.kernel_basis)


def _unit_generators(kernel_basis, units, radius) -> List[LaurentPolynomial]:
    """Elements whose translates by the unit lattice span ``kernel_basis``
    inside the window."""
    if not units:
        return list(kernel_basis)
    span = Echelon()
    kept = []
    coeff_range = range(-2 * radius, 2 * radius + 1)
    shifts = []
    for cs in itertools.product(coeff_range, repeat=len(units)):
        u = tuple(sum(c * b[i] for c, b in zip(cs, units)) for i in range(len(units[0])))
        if all(abs(x) <= 2 * radius for x in u):
            shifts.append(u)
    for p in sorted(kernel_basis, key=lambda q: (q.max_abs_exponent(), q.exponents())):
        if span.contains(p.terms):
            continue
        kept.append(p)
        for u in shifts:
            q = p.shift(u)
            if q.max_abs_exponent() <= radius:
                span.add(q.terms)
    return kept


def global_sections_map(x_ring: GradedQuotientPresentation,
                        charts: Sequence[GradedQuotientPresentation],
                        overlaps: Sequence[Tuple[Tuple[int, int], GradedQuotientPresentation]],
                        d: int, radius: Optional[int] = None,
                        radius_step: int = 2) -> SectionsResult:
    """Kernel and cokernel of the degree-``d`` map from X to the equalizer of
    the chart rings over their overlaps."""
    _check_configuration(x_ring, charts, overlaps)
    if radius is None:
        radius = default_radius(x_ring, d)
    outer = radius + radius_step
    lo = _Level(x_ring, charts, overlaps, d, radius)
    hi = _Level(x_ring, charts, overlaps, d, outer)
    n = x_ring.rank

    ker_hi = kernel(hi.image_columns)
    kernel_basis = [
        LaurentPolynomial(n, {hi.x.basis[i]: c for i, c in v.items()}) for v in ker_hi
    ]
    units = dual_cone(x_ring.support).lineality
    kernel_generators = _unit_generators(kernel_basis, units, outer)
    ker_lo = kernel(lo.image_columns)
    lo_generators = _unit_generators(
        [LaurentPolynomial(n, {lo.x.basis[i]: c for i, c in v.items()}) for v in ker_lo], units, radius
    )
    img_rank_hi = len(hi.x.basis) - len(ker_hi)
    img_rank_lo = len(lo.x.basis) - len(ker_lo)
    raw_lo = len(lo.sections) - img_rank_lo
    raw_hi = len(hi.sections) - img_rank_hi
    carried = [hi.section_vector(s) for s in lo.sections]
    persistent = rank_sparse(list(hi.image_columns) + carried) - img_rank_hi

    image_basis = []
    ech = Echelon()
    for b, col in zip(hi.x.basis, hi.image_columns):
        if ech.add(col):
            image_basis.append(
                tuple(LaurentPolynomial(n, hi.charts[k].normal_form({b: 1})) for k in range(len(charts)))
            )

    def level_for(polys) -> _Level:
        need = max([p.max_abs_exponent() for p in polys] + [0])
        if need <= outer:
            return hi
        return _Level(x_ring, charts, overlaps, d, need + RADIUS_PAD)

    def glue_test(components: Sequence[LaurentPolynomial]) -> bool:
        if len(components) != len(charts):
            raise PreconditionError("one component per chart is required")
        for ring, p in zip(charts, components):
            _check_element(ring, p, d)
        for (i, j), o in overlaps:
            if not equal_in_quotient(components[i], components[j], o,
                                     radius=max(outer, default_radius(o, d, components))):
                return False
        return True

    def preimage(components: Sequence[LaurentPolynomial]) -> Optional[LaurentPolynomial]:
        for ring, p in zip(charts, components):
            _check_element(ring, p, d)
        lev = level_for(components)
        target = lev.tuple_coordinates(components)
        cols = list(lev.image_columns) + [{k: -c for k, c in target.items()}]
        for v in kernel(cols):
            t = v.get(len(lev.image_columns))
            if t:
                return LaurentPolynomial(
                    n, {lev.x.basis[i]: c / t for i, c in v.items() if i < len(lev.image_columns)}
                )
        return None

    def in_kernel(p: LaurentPolynomial) -> bool:
        _check_element(x_ring, p, d)
        lev = level_for([p])
        return not lev.restrict_tuple_of(p.terms)

    return SectionsResult(
        degree=d,
        radius=radius,
        x_dimension=len(hi.x.basis),
        section_dimension=len(hi.sections),
        kernel_basis=kernel_basis,
        kernel_generators=kernel_generators,
        unit_rank=len(units),
        image_basis=image_basis,
        cokernel_dimension=persistent,
        cokernel_by_radius=(raw_lo, raw_hi),
        stable=(raw_lo == persistent == raw_hi) and len(lo_generators) == len(kernel_generators),
        glue_test=glue_test,
        preimage=preimage,
        in_kernel=in_kernel,
    )


def pushforward(x_ring: GradedQuotientPresentation, delta: Subdivision, d: int,
                radius: Optional[int] = None) -> SectionsResult:
    charts, overlaps = blowup_configuration(x_ring, delta)
    return global_sections_map(x_ring, charts, overlaps, d, radius=radius)


def pushforward_sweep(x_ring, delta, degrees, radius=None, max_workers: int = 1):
    """``pushforward`` over several degrees; pieces are independent, so they
    may be evaluated concurrently.  Results come back in input order."""
    degrees = list(degrees)
    if max_workers == 1:
        return [pushforward(x_ring, delta, d, radius) for d in degrees]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(lambda d: pushforward(x_ring, delta, d, radius), degrees))


def nilpotency_order(f: LaurentPolynomial, ring: GradedQuotientPresentation,
                     max_power: int = DEFAULT_DEGREE_BOUND) -> Optional[int]:
    """Least k <= max_power with f^k = 0 in the ring, or None."""
    power = f
    for k in range(1, max_power + 1):
        if not power or ideal_certificate_span(power, ring):
            return k
        power = power * f
    return None
