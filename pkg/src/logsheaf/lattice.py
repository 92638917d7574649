"""Integer lattices: Smith and Hermite normal forms, kernels, quotients.

Vectors are tuples of Python ints; matrices are tuples of row tuples.
"""
from __future__ import annotations

from math import gcd
from typing import List, Sequence, Tuple

from .errors import ContainmentError, PreconditionError
from .linalg import integer_scale, nullspace, solve

IntVector = Tuple[int, ...]
IntMatrix = Tuple[IntVector, ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    if not a:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*a))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> IntVector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def dot(u: Sequence[int], v: Sequence[int]):
    return sum(x * y for x, y in zip(u, v))


def primitive_vector(v: Sequence[int]) -> IntVector:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise PreconditionError("no primitive direction: zero vector")
    return tuple(x // g for x in v)


def _snf(a: Sequence[Sequence[int]]):
    """Smith form with transforms and their inverses.

    Returns (S, U, Uinv, V, Vinv) with A = U S V.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    s = [list(r) for r in a]
    u = [list(r) for r in identity(m)]
    uinv = [list(r) for r in identity(m)]
    v = [list(r) for r in identity(n)]
    vinv = [list(r) for r in identity(n)]

    # Row op on S (S <- E S) updates U <- U E^-1 and Uinv <- E Uinv; column op
    # on S (S <- S F) updates V <- F^-1 V and Vinv <- Vinv F.
    def row_add(i, j, c):  # row i += c * row j
        s[i] = [x + c * y for x, y in zip(s[i], s[j])]
        uinv[i] = [x + c * y for x, y in zip(uinv[i], uinv[j])]
        for r in u:  # column j of U -= c * column i
            r[j] -= c * r[i]

    def row_swap(i, j):
        s[i], s[j] = s[j], s[i]
        uinv[i], uinv[j] = uinv[j], uinv[i]
        for r in u:
            r[i], r[j] = r[j], r[i]

    def row_neg(i):
        s[i] = [-x for x in s[i]]
        uinv[i] = [-x for x in uinv[i]]
        for r in u:
            r[i] = -r[i]

    def col_add(i, j, c):  # column i += c * column j
        for r in s:
            r[i] += c * r[j]
        for r in vinv:
            r[i] += c * r[j]
        v[j] = [x - c * y for x, y in zip(v[j], v[i])]

    def col_swap(i, j):
        for r in s:
            r[i], r[j] = r[j], r[i]
        for r in vinv:
            r[i], r[j] = r[j], r[i]
        v[i], v[j] = v[j], v[i]

    for t in range(min(m, n)):
        while True:
            cells = [(abs(s[i][j]), i, j) for i in range(t, m) for j in range(t, n) if s[i][j]]
            if not cells:
                return s, u, uinv, v, vinv
            _, pi, pj = min(cells)
            if pi != t:
                row_swap(t, pi)
            if pj != t:
                col_swap(t, pj)
            dirty = False
            for i in range(t + 1, m):
                if s[i][t]:
                    row_add(i, t, -(s[i][t] // s[t][t]))
                    dirty = dirty or s[i][t] != 0
            for j in range(t + 1, n):
                if s[t][j]:
                    col_add(j, t, -(s[t][j] // s[t][t]))
                    dirty = dirty or s[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if s[i][j] % s[t][t]),
                None,
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if s[t][t] < 0:
            row_neg(t)
    return s, u, uinv, v, vinv


def smith_normal_form(a: Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, S, V) with ``A = U S V``, U and V unimodular, S diagonal with
    nonnegative entries d1 | d2 | ..."""
    s, u, _, v, _ = _snf(a)
    return as_matrix(u), as_matrix(s), as_matrix(v)


def invariant_factors(a: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero diagonal entries of the Smith form."""
    if not a or not a[0]:
        return []
    s = _snf(a)[0]
    return [s[i][i] for i in range(min(len(s), len(s[0]))) if s[i][i]]


def hermite_basis(gens: Sequence[Sequence[int]], n: int | None = None) -> IntMatrix:
    """Canonical (row Hermite normal form) basis of the lattice generated by
    the rows of ``gens``."""
    rows = [list(r) for r in gens if any(r)]
    if not rows:
        return ()
    n = len(rows[0]) if n is None else n
    out = []
    col = 0
    while rows and col < n:
        nz = [r for r in rows if r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            for r in nz[1:]:
                q = r[col] // p[col]
                for k in range(n):
                    r[k] -= q * p[k]
            nz = [r for r in nz if r[col]]
        p = nz[0]
        if p[col] < 0:
            p[:] = [-x for x in p]
        rows = [r for r in rows if r is not p and any(r)]
        out.append(p)
        col += 1
    # reduce entries above pivots into [0, pivot)
    for i, r in enumerate(out):
        c = next(k for k in range(n) if r[k])
        for prev in out[:i]:
            q = prev[c] // r[c]
            if q:
                for k in range(n):
                    prev[k] -= q * r[k]
    return as_matrix(out)


def integer_kernel(a: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """Basis (canonical rows) of ``{x in Z^n : A x = 0}``."""
    if not a:
        return identity(n)
    s, _, _, _, vinv = _snf(a)
    r = sum(1 for i in range(min(len(s), n)) if s[i][i])
    # A x = 0  <=>  (V x)_i = 0 for i < r  <=>  x in span of columns r.. of Vinv
    cols = [tuple(vinv[k][j] for k in range(n)) for j in range(r, n)]
    return hermite_basis(cols, n)


def orthogonal_complement(rows: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """Canonical integer basis of the saturated lattice orthogonal to ``rows``."""
    return integer_kernel([tuple(r) for r in rows if any(r)], n)


def saturated_basis(rows: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """Canonical basis of ``span_Q(rows) ∩ Z^n``."""
    if not any(any(r) for r in rows):
        return ()
    return orthogonal_complement(orthogonal_complement(rows, n), n)


def coordinates(basis: Sequence[Sequence[int]], v: Sequence[int]) -> IntVector:
    """Integer coordinates of ``v`` in the lattice spanned by the (independent)
    rows of ``basis``; raises ContainmentError if ``v`` is not in it."""
    if not basis:
        if any(v):
            raise ContainmentError(f"{tuple(v)} is not in the zero lattice")
        return ()
    cols = transpose(basis)
    sol = solve(cols, v)
    if sol is None or any(x.denominator != 1 for x in sol):
        raise ContainmentError(f"{tuple(v)} is not in the lattice")
    return tuple(int(x) for x in sol)


def rational_coordinates(basis: Sequence[Sequence[int]], v: Sequence[int]):
    sol = solve(transpose(basis), v) if basis else []
    if sol is None:
        raise ContainmentError(f"{tuple(v)} is not in the span of the lattice")
    return sol


def lattice_quotient(lattice_gens: Sequence[Sequence[int]],
                     sub_gens: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    """Invariant factors of L / S.

    ``lattice_gens`` generate L and ``sub_gens`` generate S ⊆ L (each a
    sequence of vectors).  Returns the nontrivial cyclic factors: d > 1 for
    Z/d and 0 for a copy of Z, so ``()`` is the trivial group.
    """
    basis = hermite_basis(lattice_gens)
    k = len(basis)
    coords = [coordinates(basis, s) for s in sub_gens if any(s)]
    if not coords:
        return (0,) * k
    factors = invariant_factors(transpose(coords))
    out = [d for d in factors if d != 1]
    return tuple(out) + (0,) * (k - len(factors))


def index(lattice_gens, sub_gens) -> int:
    """[L : S], or 0 when infinite."""
    out = 1
    for d in lattice_quotient(lattice_gens, sub_gens):
        out *= d
    return out


def project_off(vectors: Sequence[Sequence[int]], basis: Sequence[Sequence[int]]):
    """Orthogonal projections of ``vectors`` onto the complement of
    ``span(basis)``, rescaled to primitive integers (zero vectors dropped)."""
    if not basis:
        return [primitive_vector(v) for v in vectors if any(v)]
    n = len(basis[0])
    gram = [[dot(a, b) for b in basis] for a in basis]
    out = []
    for v in vectors:
        c = solve(gram, [dot(v, b) for b in basis])
        w = [v[i] - sum(c[j] * basis[j][i] for j in range(len(basis))) for i in range(n)]
        if any(w):
            out.append(integer_scale(w))
    return out


def rational_orthogonal_basis(rows, n):
    return [integer_scale(v) for v in nullspace(rows, n)]
