import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors as sympy_invariant_factors

from shapelab.exactla import (
    IntMatrix,
    block_diag,
    column_lattice_basis,
    determinantal_divisors,
    hstack,
    kernel_basis,
    rank,
    smith_normal_form,
    solve_linear,
    vstack,
)


def M(rows, cols=None):
    return IntMatrix.from_rows(rows, cols)


def diagonal_entries(D):
    return [D[i, i] for i in range(min(D.rows, D.cols))]


def assert_valid_snf(A):
    snf = smith_normal_form(A)
    D = snf.D
    assert snf.U @ A @ snf.V == D
    assert all(D[i, j] == 0 for i in range(D.rows) for j in range(D.cols) if i != j)
    diag = diagonal_entries(D)
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert diag[: len(nz)] == nz, "nonzero entries come first"
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert abs(snf.U.determinant()) == 1
    assert abs(snf.V.determinant()) == 1
    assert snf.U @ snf.U_inv == IntMatrix.identity(A.rows)
    assert snf.V @ snf.V_inv == IntMatrix.identity(A.cols)
    return snf


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r).map(
            lambda rows: IntMatrix.from_rows(rows, c)
        )
    )
)

unimodular_ops = st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(-3, 3)), max_size=6)


def unimodular(n, ops):
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for i, j, q in ops:
        i, j = i % n, j % n
        if i != j:
            rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
    return IntMatrix.from_rows(rows, n)


# -- worked examples-------------------------------------------------------------------


def test_snf_identity():
    snf = assert_valid_snf(IntMatrix.identity(2))
    assert snf.D == IntMatrix.identity(2)
    assert snf.U == IntMatrix.identity(2)
    assert snf.V == IntMatrix.identity(2)


def test_snf_diag_2_3():
    snf = assert_valid_snf(M([[2, 0], [0, 3]]))
    assert diagonal_entries(snf.D) == [1, 6]


def test_snf_2_4_6_8():
    snf = assert_valid_snf(M([[2, 4], [6, 8]]))
    assert diagonal_entries(snf.D) == [2, 4]


def test_snf_empty_matrices():
    for r, c in [(0, 3), (3, 0), (0, 0)]:
        snf = smith_normal_form(IntMatrix.zeros(r, c))
        assert snf.U == IntMatrix.identity(r)
        assert snf.V == IntMatrix.identity(c)
        assert snf.D.shape == (r, c)
        assert snf.rank == 0


def test_kernel_examples():
    assert kernel_basis(IntMatrix.identity(2)).cols == 0
    K = kernel_basis(M([[2, -2]]))
    assert K.cols == 1
    assert set([K.col(0), tuple(-x for x in K.col(0))]) == {(1, 1), (-1, -1)}
    Z = kernel_basis(IntMatrix.zeros(1, 3))
    assert Z.cols == 3
    assert abs(Z.determinant()) == 1


def test_solve_examples():
    assert solve_linear(M([[2]]), (4,)) == (2,)
    assert solve_linear(M([[2]]), (3,)) is None
    x = solve_linear(M([[1, 1]]), (5,))
    assert x is not None and x[0] + x[1] == 5


def test_solve_rejects_wrong_length():
    with pytest.raises(ValueError):
        solve_linear(M([[1, 0], [0, 1]]), (1,))


def test_large_entries_stay_exact():
    big = 10**40 + 7
    A = M([[big, 2 * big + 1], [3, 5]])
    snf = assert_valid_snf(A)
    assert snf.D[0, 0] * snf.D[1, 1] == abs(A.determinant())


def test_pivot_rule_is_deterministic():
    A = M([[4, 6, 2], [6, 9, 3], [2, 3, 1]])
    assert smith_normal_form(A) == smith_normal_form(IntMatrix.from_rows(A.to_rows(), 3))


def test_block_helpers():
    A, B = M([[1, 2]]), M([[3]])
    assert hstack(A, B) == M([[1, 2, 3]])
    assert vstack(M([[1]]), M([[2]])) == M([[1], [2]])
    assert block_diag(A, B) == M([[1, 2, 0], [0, 0, 3]])


# -- oracles and properties ---------------------------------------------------------


@given(matrices)
def test_snf_invariants(A):
    assert_valid_snf(A)


@given(matrices)
def test_invariant_factors_match_sympy(A):
    ours = list(smith_normal_form(A).invariant_factors)
    theirs = [abs(int(x)) for x in sympy_invariant_factors(Matrix(A.to_rows()), domain=ZZ)]
    theirs = [x for x in theirs if x]
    assert ours == theirs


@given(matrices)
def test_invariant_factors_match_determinantal_divisors(A):
    # d_k = D_k / D_{k-1} where D_k is the gcd of k x k minors
    divs = [d for d in determinantal_divisors(A) if d]
    expected = [divs[0]] + [b // a for a, b in zip(divs, divs[1:])] if divs else []
    assert list(smith_normal_form(A).invariant_factors) == expected


@given(matrices, unimodular_ops, unimodular_ops)
def test_invariant_factors_unchanged_by_unimodular_change(A, ops_p, ops_q):
    P, Q = unimodular(A.rows, ops_p), unimodular(A.cols, ops_q)
    assert smith_normal_form(P @ A @ Q).invariant_factors == smith_normal_form(A).invariant_factors


@given(matrices)
def test_kernel_basis_properties(A):
    K = kernel_basis(A)
    assert K.cols == A.cols - rank(A)
    assert (A @ K).is_zero()
    # saturated: a basis of the kernel lattice extends to det +-1 in V
    snf = smith_normal_form(A)
    assert K == snf.V.select_cols(range(snf.rank, A.cols))


@given(matrices, st.lists(st.integers(-5, 5), min_size=5, max_size=5))
def test_solve_finds_solutions_of_consistent_systems(A, x):
    x = x[: A.cols]
    b = A.apply(x)
    y = solve_linear(A, b)
    assert y is not None
    assert A.apply(y) == b


@given(matrices, st.lists(st.integers(-20, 20), min_size=5, max_size=5))
def test_solve_result_is_exact_or_none(A, b):
    b = tuple(b[: A.rows])
    y = solve_linear(A, b)
    if y is not None:
        assert A.apply(y) == b


@given(matrices)
def test_column_lattice_basis_spans_same_lattice(A):
    B = column_lattice_basis(A)
    assert B.cols == rank(A)
    for j in range(A.cols):
        assert solve_linear(B, A.col(j)) is not None
    for j in range(B.cols):
        assert solve_linear(A, B.col(j)) is not None


def test_matrix_shape_validation():
    with pytest.raises(ValueError):
        IntMatrix(2, 2, (1, 2, 3))
    with pytest.raises(ValueError):
        M([[1]]) @ M([[1, 2], [3, 4]])
