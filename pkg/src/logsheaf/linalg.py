"""Exact linear algebra over the rationals.

Vectors are sparse: a ``dict`` from an arbitrary orderable key to a nonzero
``Fraction``.  Dense helpers at the bottom wrap the sparse routines with
integer column indices.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

SparseVec = Dict[Hashable, Fraction]


def _axpy(target: SparseVec, coeff: Fraction, source: SparseVec) -> None:
    """target += coeff * source, dropping zeros."""
    for k, v in source.items():
        nv = target.get(k, 0) + coeff * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


def clean(vec) -> SparseVec:
    return {k: Fraction(v) for k, v in vec.items() if v}


class Echelon:
    """Reduced row echelon basis of a subspace, grown one vector at a time.

    Every stored row has coefficient 1 at its pivot and 0 at every other pivot,
    so ``reduce`` returns a canonical representative of a vector modulo the
    subspace, supported on non-pivot keys.  The pivot of a new row is its
    largest key.
    """

    def __init__(self) -> None:
        self.rows: Dict[Hashable, SparseVec] = {}

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def pivots(self):
        return self.rows.keys()

    def reduce(self, vec) -> SparseVec:
        v = clean(vec)
        for p in [k for k in v if k in self.rows]:
            c = v.get(p)
            if c:
                _axpy(v, -c, self.rows[p])
        return v

    def add(self, vec) -> bool:
        """Insert ``vec``; return False when it already lies in the span."""
        v = self.reduce(vec)
        if not v:
            return False
        p = max(v)
        inv = 1 / v[p]
        v = {k: c * inv for k, c in v.items()}
        for row in self.rows.values():
            c = row.get(p)
            if c:
                _axpy(row, -c, v)
        self.rows[p] = v
        return True

    def contains(self, vec) -> bool:
        return not self.reduce(vec)


def kernel(columns: Sequence[SparseVec]) -> List[Dict[int, Fraction]]:
    """Basis of ``{c : sum_i c[i] * columns[i] == 0}`` as sparse vectors over
    column indices."""
    rows: Dict[Hashable, Tuple[SparseVec, SparseVec]] = {}
    basis: List[Dict[int, Fraction]] = []
    for i, col in enumerate(columns):
        img = clean(col)
        tag: SparseVec = {i: Fraction(1)}
        while True:
            hits = [k for k in img if k in rows]
            if not hits:
                break
            p = max(hits)
            c = img[p]
            r_img, r_tag = rows[p]
            _axpy(img, -c, r_img)
            _axpy(tag, -c, r_tag)
        if not img:
            basis.append(tag)
            continue
        p = max(img)
        inv = 1 / img[p]
        rows[p] = ({k: c * inv for k, c in img.items()},
                   {k: c * inv for k, c in tag.items()})
    return basis


def rank_sparse(vectors: Iterable[SparseVec]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return len(e)


# -- dense wrappers ---------------------------------------------------------

def _to_sparse(row: Sequence) -> SparseVec:
    return {j: Fraction(x) for j, x in enumerate(row) if x}


def rank(rows: Sequence[Sequence]) -> int:
    return rank_sparse(_to_sparse(r) for r in rows)


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[List[Fraction]]:
    """Basis of the right nullspace ``{x : A x = 0}`` of a dense matrix."""
    columns = [
        {i: Fraction(r[j]) for i, r in enumerate(rows) if r[j]} for j in range(ncols)
    ]
    out = []
    for vec in kernel(columns):
        out.append([vec.get(j, Fraction(0)) for j in range(ncols)])
    return out


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Optional[List[Fraction]]:
    """One rational solution of ``A x = b`` or None."""
    ncols = len(rows[0]) if rows else 0
    columns = [
        {i: Fraction(r[j]) for i, r in enumerate(rows) if r[j]} for j in range(ncols)
    ]
    columns.append({i: -Fraction(b) for i, b in enumerate(rhs) if b})
    for vec in kernel(columns):
        t = vec.get(ncols)
        if t:
            return [vec.get(j, Fraction(0)) / t for j in range(ncols)]
    if not any(rhs):
        return [Fraction(0)] * ncols
    return None


def integer_scale(vec: Sequence[Fraction]) -> Tuple[int, ...]:
    """Smallest integer multiple of a rational vector with coprime entries
    (sign preserved)."""
    from math import gcd

    den = 1
    for x in vec:
        x = Fraction(x)
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(Fraction(x) * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)
