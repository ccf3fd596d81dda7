from __future__ import annotations

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from fanopic.exactmat import (
    IntMatrix,
    NotUnimodular,
    hermite_normal_form,
    integer_kernel,
    is_unimodular,
    rank,
    smith_divisors,
    smith_normal_form,
    solve_integer,
    unimodular_inverse,
)
from strategies import int_matrices, unimodular_matrices


def _sympy_divisors(M: IntMatrix) -> list[int]:
    S = sympy_snf(sympy.Matrix(M.to_rows()), domain=sympy.ZZ)
    return sorted(abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0)


def test_hnf_positive_pivot_example():
    H, U = hermite_normal_form([[2, 4], [6, 8]])
    assert H.to_rows() == [[2, 0], [0, 4]]
    assert U @ IntMatrix.from_rows([[2, 4], [6, 8]]) == H


def test_snf_small_examples():
    S, _, _ = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert [S[i, i] for i in range(3)] == [2, 6, 12]
    assert smith_divisors([[0, 0], [0, 0]]) == []


def test_unimodular_inverse_rejects_det_2():
    with pytest.raises(NotUnimodular):
        unimodular_inverse([[2, 0], [0, 1]])


@given(int_matrices())
def test_snf_factorization(M):
    S, U, V = smith_normal_form(M)
    assert is_unimodular(U) and is_unimodular(V)
    assert U @ M @ V == S
    d = [S[i, i] for i in range(min(S.shape))]
    assert all(S[i, j] == 0 for i in range(S.nrows) for j in range(S.ncols) if i != j)
    assert all(x >= 0 for x in d)
    nz = [x for x in d if x]
    assert d[: len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@given(int_matrices())
def test_snf_matches_sympy(M):
    assert sorted(smith_divisors(M)) == _sympy_divisors(M)


@given(int_matrices(), st.data())
def test_snf_invariant_under_unimodular_change(M, data):
    P = data.draw(unimodular_matrices(M.nrows))
    Q = data.draw(unimodular_matrices(M.ncols))
    assert smith_divisors(P @ M @ Q) == smith_divisors(M)


@given(int_matrices())
def test_hnf_factorization(M):
    H, U = hermite_normal_form(M)
    assert is_unimodular(U)
    assert U @ M == H
    lead_col = -1
    for i in range(H.nrows):
        row = H.row(i)
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            assert all(not any(H.row(k)) for k in range(i, H.nrows))
            break
        p = nz[0]
        assert p > lead_col and row[p] > 0
        assert all(0 <= H[k, p] < row[p] for k in range(i))
        lead_col = p


@given(int_matrices(), st.data())
def test_hnf_is_canonical_on_row_space(M, data):
    P = data.draw(unimodular_matrices(M.nrows))
    assert hermite_normal_form(P @ M)[0] == hermite_normal_form(M)[0]


@given(int_matrices())
def test_rank_and_determinant_match_sympy(M):
    S = sympy.Matrix(M.to_rows())
    assert rank(M) == S.rank()
    if M.is_square():
        assert M.det() == S.det()


@given(int_matrices())
def test_integer_kernel_is_saturated_basis(M):
    K = integer_kernel(M)
    assert len(K) == M.ncols - rank(M)
    for v in K:
        assert not any(M @ v)
    if K:
        # A saturated sublattice has all Smith divisors equal to 1.
        assert set(smith_divisors(IntMatrix.from_rows(K, M.ncols))) <= {1}


@given(int_matrices(), st.lists(st.integers(-5, 5), min_size=5, max_size=5))
def test_solve_integer_round_trip(M, x):
    x = tuple(x[: M.ncols])
    b = M @ x
    y = solve_integer(M, b)
    assert y is not None and M @ y == b


def test_solve_integer_detects_no_solution():
    assert solve_integer([[2, 0], [0, 2]], [1, 0]) is None


@given(st.integers(1, 5).flatmap(unimodular_matrices))
def test_unimodular_inverse(U):
    assert U @ unimodular_inverse(U) == IntMatrix.identity(U.nrows)
