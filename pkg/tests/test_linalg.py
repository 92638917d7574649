from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from logsheaf.linalg import Echelon, kernel, nullspace, rank, solve

rows = st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=4)


def test_rank_and_nullspace():
    m = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert rank(m) == 2
    ns = nullspace(m, 3)
    assert len(ns) == 1
    for r in m:
        assert sum(Fraction(a) * b for a, b in zip(r, ns[0])) == 0


def test_solve_inconsistent():
    assert solve([[1, 1], [1, 1]], [1, 2]) is None
    assert solve([[1, 1], [1, -1]], [2, 0]) == [1, 1]


@given(rows)
def test_rank_nullity(m):
    assert rank(m) + len(nullspace(m, 3)) == 3


@given(rows, st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_echelon_normal_form_is_canonical(m, v):
    e = Echelon()
    for r in m:
        e.add({i: x for i, x in enumerate(r) if x})
    vec = {i: x for i, x in enumerate(v) if x}
    nf = e.reduce(vec)
    assert not (set(nf) & set(e.pivots))
    # adding an element of the span does not change the normal form
    shifted = dict(vec)
    for i, x in enumerate(m[0]):
        shifted[i] = shifted.get(i, 0) + 3 * x
    assert e.reduce({k: c for k, c in shifted.items() if c}) == nf


def test_kernel_of_columns():
    cols = [{0: 1}, {0: 1}, {1: 1}]
    ker = kernel(cols)
    assert len(ker) == 1
    (v,) = ker
    assert set(v) == {0, 1} and v[0] == -v[1]
