"""Laurent polynomials with rational coefficients over an exponent lattice."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .errors import PreconditionError
from .lattice import IntVector, dot


class LaurentPolynomial:
    """Finite map from exponent vectors to nonzero rationals.

    Immutable by convention; arithmetic returns new objects.
    """

    __slots__ = ("rank", "_terms")

    def __init__(self, rank: int, terms: Optional[Mapping[Sequence[int], object]] = None):
        self.rank = rank
        t: Dict[IntVector, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != rank:
                raise PreconditionError(f"exponent {e} does not have rank {rank}")
            c = Fraction(c)
            if c:
                t[e] = t.get(e, 0) + c
                if not t[e]:
                    del t[e]
        self._terms = t

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff=1) -> "LaurentPolynomial":
        return cls(len(exponent), {tuple(exponent): coeff})

    @classmethod
    def zero(cls, rank: int) -> "LaurentPolynomial":
        return cls(rank)

    @property
    def terms(self) -> Dict[IntVector, Fraction]:
        return dict(self._terms)

    def exponents(self):
        return sorted(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPolynomial):
            return self.rank == other.rank and self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash((self.rank, frozenset(self._terms.items())))

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        t = dict(self._terms)
        for e, c in other._terms.items():
            t[e] = t.get(e, 0) + c
        return LaurentPolynomial(self.rank, t)

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial(self.rank, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPolynomial":
        if not isinstance(other, LaurentPolynomial):
            return LaurentPolynomial(self.rank, {e: c * other for e, c in self._terms.items()})
        t: Dict[IntVector, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return LaurentPolynomial(self.rank, t)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPolynomial":
        if k < 0:
            if len(self._terms) != 1:
                raise PreconditionError("only monomials have negative powers")
            (e, c), = self._terms.items()
            return LaurentPolynomial(self.rank, {tuple(k * x for x in e): Fraction(1) / c ** (-k)})
        out = LaurentPolynomial.monomial((0,) * self.rank)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, exponent: Sequence[int]) -> "LaurentPolynomial":
        """Multiply by the monomial with the given exponent."""
        return LaurentPolynomial(
            self.rank, {tuple(a + b for a, b in zip(e, exponent)): c for e, c in self._terms.items()}
        )

    def degrees(self, weights: Sequence[int]) -> set:
        return {dot(weights, e) for e in self._terms}

    def is_homogeneous(self, weights: Sequence[int]) -> bool:
        return len(self.degrees(weights)) <= 1

    def degree(self, weights: Sequence[int]) -> int:
        ds = self.degrees(weights)
        if len(ds) != 1:
            raise PreconditionError("polynomial is not homogeneous (or is zero)")
        return ds.pop()

    def max_abs_exponent(self) -> int:
        return max((abs(x) for e in self._terms for x in e), default=0)

    def to_string(self, names: Optional[Sequence[str]] = None) -> str:
        if not self._terms:
            return "0"
        names = names or [f"u{i}" for i in range(self.rank)]
        parts = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            mono = "*".join(
                n if x == 1 else f"{n}^{x}" if x > 0 else f"{n}^({x})"
                for n, x in zip(names, e) if x
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self.to_string()})"


def from_polynomial(poly, variables: Sequence[str]) -> LaurentPolynomial:
    """Convert a parsed polynomial (see :mod:`logsheaf.parsing`) using the given
    variable order."""
    index = {v: i for i, v in enumerate(variables)}
    terms = {}
    for mono, c in poly.terms.items():
        e = [0] * len(variables)
        for name, k in mono:
            if name not in index:
                raise PreconditionError(f"unknown variable {name!r}")
            e[index[name]] += k
        terms[tuple(e)] = terms.get(tuple(e), 0) + c
    return LaurentPolynomial(len(variables), terms)


def substitute_monomial_map(poly, mapping: Mapping[str, Sequence[int]]) -> LaurentPolynomial:
    """Send each variable to a Laurent monomial (given by its exponent vector)."""
    ranks = {len(v) for v in mapping.values()}
    if len(ranks) != 1:
        raise PreconditionError("image exponents must have a common rank")
    rank = ranks.pop()
    terms: Dict[IntVector, Fraction] = {}
    for mono, c in poly.terms.items():
        e = [0] * rank
        for name, k in mono:
            if name not in mapping:
                raise PreconditionError(f"variable {name!r} has no image")
            for i, x in enumerate(mapping[name]):
                e[i] += k * x
        terms[tuple(e)] = terms.get(tuple(e), 0) + Fraction(c)
    return LaurentPolynomial(rank, terms)
