"""
线性代数测试
"""
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from app.core.exceptions import (
    DimensionMismatchError,
    IndexRangeError,
    NotSkewSymmetricError,
    NotSquareError,
    SingularMatrixError,
)
from app.utils.linalg import (
    as_matrix,
    as_skew,
    block_inverse,
    close,
    det,
    identity,
    inverse,
    is_exact,
    is_skew,
    pfaffian,
    principal_minor,
    subset_index,
    submatrix,
    to_exact,
    to_float,
    zeros,
)

F = Fraction

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def exact_matrices(n: int):
    return st.lists(st.lists(fractions, min_size=n, max_size=n), min_size=n, max_size=n).map(as_matrix)


def skew_from(values, n: int) -> np.ndarray:
    A = zeros(n, n)
    it = iter(values)
    for i in range(n):
        for j in range(i + 1, n):
            x = next(it)
            A[i, j], A[j, i] = x, -x
    return A


def leibniz_det(A: np.ndarray) -> Fraction:
    n = A.shape[0]
    total = F(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = F(-1) ** inversions
        for i, p in enumerate(perm):
            term *= A[i, p]
        total += term
    return total


class TestConstruction:
    def test_integer_input_is_exact(self):
        A = as_matrix([[1, 2], [3, 4]])
        assert is_exact(A)
        assert A[1, 0] == F(3)

    def test_float_input_is_float(self):
        A = as_matrix([[1.5, 0], [0, 1]])
        assert A.dtype == float

    def test_complex_input(self):
        A = as_matrix([[1j, 0], [0, 1]])
        assert np.iscomplexobj(A)

    def test_ragged_rows_rejected(self):
        with pytest.raises(DimensionMismatchError):
            as_matrix([[1, 2], [3]], "L")

    def test_as_skew_rejects_symmetric(self):
        with pytest.raises(NotSkewSymmetricError):
            as_skew([[0, 1], [1, 0]])

    def test_backend_conversion(self):
        A = as_matrix([[F(1, 2), 0], [0, 1]])
        B = to_float(A)
        assert B.dtype == float and B[0, 0] == 0.5
        assert to_exact(B)[0, 0] == F(1, 2)

    def test_subset_index_checks(self):
        assert subset_index([0, 2], 3) == (0, 2)
        with pytest.raises(IndexRangeError):
            subset_index([2, 1], 3)
        with pytest.raises(IndexRangeError):
            subset_index([3], 3)


class TestDeterminant:
    def test_empty_determinant_is_one(self):
        assert det(zeros(0, 0)) == 1

    def test_non_square(self):
        with pytest.raises(NotSquareError):
            det(as_matrix([[1, 2, 3], [4, 5, 6]]))

    def test_needs_row_swap(self):
        assert det(as_matrix([[0, 1], [1, 0]])) == -1

    @hsettings(max_examples=40, deadline=None)
    @given(exact_matrices(4))
    def test_matches_leibniz(self, A):
        assert det(A) == leibniz_det(A)

    def test_float_backend(self):
        assert close(det(as_matrix([[2.0, 1.0], [1.0, 3.0]])), 5.0, 1e-12)


class TestInverse:
    @hsettings(max_examples=30, deadline=None)
    @given(exact_matrices(3))
    def test_exact_inverse(self, A):
        if det(A) == 0:
            with pytest.raises(SingularMatrixError):
                inverse(A)
            return
        assert (A @ inverse(A) == identity(3)).all()

    def test_singular_carries_name(self):
        with pytest.raises(SingularMatrixError) as info:
            inverse(as_matrix([[1, 2], [2, 4]]), "I + L")
        assert info.value.name == "I + L"

    def test_float_singular(self):
        with pytest.raises(SingularMatrixError):
            inverse(as_matrix([[1.0, 2.0], [2.0, 4.0]]))

    def test_block_inverse_matches_inverse(self):
        A = as_matrix([[0, 0], [0, 0]])
        B = as_matrix([[1, 2], [0, 1]])
        C = as_matrix([[1, 0], [3, 1]])
        D = as_matrix([[2, 1], [1, 1]])
        blocks, schur = block_inverse(A, B, C, D)
        full = inverse(np.block([[A, B], [C, D]]).astype(object))
        assert (blocks.top_left == full[:2, :2]).all()
        assert (blocks.top_right == full[:2, 2:]).all()
        assert (blocks.bottom_left == full[2:, :2]).all()
        assert (blocks.bottom_right == full[2:, 2:]).all()
        assert (schur == B @ inverse(D) @ C - A).all()


class TestPfaffian:
    def test_two_by_two(self):
        assert pfaffian(as_matrix([[0, F(3, 2)], [F(-3, 2), 0]])) == F(3, 2)

    def test_four_by_four_closed_form(self):
        a, b, c, d, e, f = (F(k) for k in (1, 2, 3, 4, 5, 6))
        A = skew_from([a, b, c, d, e, f], 4)
        assert pfaffian(A) == a * f - b * e + c * d

    def test_odd_dimension_is_zero(self):
        assert pfaffian(skew_from([1, 2, 3], 3)) == 0

    def test_zero_first_row_entry_pivots(self):
        A = skew_from([0, 1, 0, 0, 1, 0], 4)
        assert pfaffian(A) == -1

    def test_rejects_non_skew(self):
        with pytest.raises(NotSkewSymmetricError):
            pfaffian(as_matrix([[0, 1], [2, 0]]))

    @hsettings(max_examples=40, deadline=None)
    @given(st.lists(fractions, min_size=15, max_size=15))
    def test_square_is_determinant(self, values):
        A = skew_from(values, 6)
        assert pfaffian(A) ** 2 == det(A)

    @hsettings(max_examples=25, deadline=None)
    @given(st.lists(fractions, min_size=6, max_size=6), exact_matrices(4))
    def test_congruence(self, values, B):
        A = skew_from(values, 4)
        assert pfaffian(B @ A @ B.T) == det(B) * pfaffian(A)

    def test_float_matches_exact(self):
        A = skew_from([F(1, 3), 2, F(-1, 2), 1, 4, F(2, 7)], 4)
        assert close(pfaffian(to_float(A)), float(pfaffian(A)), 1e-12)


class TestMinors:
    def test_principal_minor_determinant(self):
        A = as_matrix([[1, 2, 3], [4, 5, 6], [7, 8, 10]])
        assert principal_minor(A, [0, 2]) == 1 * 10 - 3 * 7
        assert principal_minor(A, []) == 1

    def test_principal_minor_pfaffian(self):
        A = skew_from([1, 2, 3, 4, 5, 6], 4)
        assert principal_minor(A, [1, 3], pfaffian_mode=True) == A[1, 3]

    def test_submatrix_keeps_order(self):
        A = as_matrix([[1, 2], [3, 4]])
        assert (submatrix(A, [1, 0], [1, 0]) == as_matrix([[4, 3], [2, 1]])).all()

    def test_is_skew_float_tolerance(self):
        A = np.array([[0.0, 1.0], [-1.0 + 1e-12, 0.0]])
        assert is_skew(A)
        assert not is_skew(A, tol=1e-15)
