from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hochcalc.errors import InputError, NotAComplexError
from hochcalc.exactlin import (
    GradedDims,
    Homology,
    SparseMatrix,
    homology_dims,
    rank,
    rank_kernel,
    solve,
)

small = st.integers(-3, 3)


@st.composite
def matrices(draw, max_dim=5):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    rows = [[draw(small) for _ in range(c)] for _ in range(r)]
    return SparseMatrix.from_dense(rows) if r else SparseMatrix(0, c)


def test_rank_kernel_of_proportional_rows():
    r, ker = rank_kernel(SparseMatrix.from_dense([[1, 2], [2, 4]]))
    assert r == 1
    assert ker == [{0: Fraction(-2), 1: Fraction(1)}]


def test_identity_and_zero():
    assert rank_kernel(SparseMatrix.identity(3)) == (3, [])
    r, ker = rank_kernel(SparseMatrix.zero(2, 3))
    assert r == 0 and len(ker) == 3


def test_zero_entries_are_not_stored():
    m = SparseMatrix.from_dense([[0, 1], [0, 0]])
    assert m.entries == {(0, 1): Fraction(1)}


def test_solve_examples():
    b = {0: Fraction(2), 2: Fraction(-1)}
    assert solve(SparseMatrix.identity(3), b) == b
    m = SparseMatrix.from_dense([[1, 1]])
    x = solve(m, {0: 1})
    assert m.matvec(x) == {0: 1}
    assert solve(SparseMatrix.from_dense([[0]]), {0: 1}) is None


def test_solve_rejects_wrong_length():
    with pytest.raises(InputError):
        solve(SparseMatrix.identity(2), {5: 1})


def test_homology_dims_examples():
    z = SparseMatrix.zero(3, 3)
    assert homology_dims(z, z) == 3
    assert homology_dims(SparseMatrix.identity(3), SparseMatrix.zero(3, 3)) == 0


def test_not_a_complex_names_a_witness():
    i = SparseMatrix.identity(2)
    with pytest.raises(NotAComplexError) as err:
        homology_dims(i, i)
    assert err.value.witness == 0


def test_de_rham_segment_of_polynomials():
    # d: span(1, x, x^2) -> span(dx, x dx), coefficient degree <= 2
    d = SparseMatrix.from_dense([[0, 1, 0], [0, 0, 2]])
    h0 = homology_dims(d, SparseMatrix(3, 0))
    h1 = homology_dims(SparseMatrix(0, 2), d)
    import sympy

    dense = sympy.Matrix([[0, 1, 0], [0, 0, 2]])
    assert (h0, h1) == (3 - dense.rank(), 2 - dense.rank()) == (1, 0)


@given(matrices())
def test_rank_equals_transpose_rank(m):
    assert rank(m) == rank(m.transpose())


@given(matrices())
def test_kernel_vectors_are_killed_and_counted(m):
    r, ker = rank_kernel(m)
    assert r + len(ker) == m.cols
    assert all(not m.matvec(v) for v in ker)
    assert rank_kernel(m) == (r, ker)


@given(matrices())
def test_rank_agrees_with_dense_oracle(m):
    import sympy

    dense = sympy.Matrix(m.rows, m.cols, lambda i, j: m.column(j).get(i, 0))
    assert rank(m) == dense.rank()


@given(matrices())
def test_homology_plus_rank_is_domain_dimension(m):
    assert homology_dims(m, SparseMatrix(m.cols, 0)) + rank(m) == m.cols


@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_finds_preimages_of_images(m, xs):
    x = {j: Fraction(v) for j, v in enumerate(xs[: m.cols]) if v}
    b = m.matvec(x)
    y = solve(m, b)
    assert y is not None and m.matvec(y) == b


def test_homology_representatives_and_witness():
    d_in = SparseMatrix.from_dense([[1], [0]])
    d_out = SparseMatrix.zero(1, 2)
    h = Homology(d_out, d_in)
    assert h.dim == 1
    assert h.witness({0: 3}) == {0: Fraction(3)}
    assert h.witness({1: 1}) is None


def test_graded_dims_rejects_negative_and_drops_zero():
    with pytest.raises(InputError):
        GradedDims({0: -1})
    g = GradedDims({0: 1, 1: 0, -2: 3})
    assert g.dims == {-2: 3, 0: 1}
    assert (g + g)[0] == 2
    assert g.tensor(GradedDims({1: 2}))[-1] == 6
