"""
抽象点与显式核测试
"""
from fractions import Fraction

import numpy as np
import pytest

from app.core.exceptions import (
    DimensionMismatchError,
    IndexRangeError,
    InputError,
    SingularActionError,
    SupportFormError,
    ZeroPointError,
)
from app.services.abstract_points import (
    P13,
    P14,
    P23,
    P24,
    P1234,
    KernelWitness,
    TensorPoint,
    act_on_witness,
    correlation_transform,
    flip_kernel,
    four_factor_candidates,
    four_factor_kernel,
    gl2_act,
    normalized,
    permute,
    permute_witness,
    point_from_kernel,
    projectively_equal,
    tensor_point_from_table,
)
from app.services.point_process import Config, brute_force_correlations
from app.utils.linalg import as_matrix
from app.utils.random_instances import random_four_factor_point, random_table, random_witness

F = Fraction


def four_factor_point(p1234) -> TensorPoint:
    return TensorPoint.from_dict(
        4, {0: F(1), P13: F(1), P14: F(1), P23: F(1), P24: F(1), P1234: p1234}
    )


class TestTensorPoint:
    def test_zero_point(self):
        with pytest.raises(ZeroPointError):
            TensorPoint(1, (F(0), F(0)))

    def test_coefficient_count(self):
        with pytest.raises(DimensionMismatchError):
            TensorPoint(2, (F(1), F(2)))

    def test_point_from_kernel(self):
        w = KernelWitness(2, 0, as_matrix([[1, 2], [3, 4]]))
        assert point_from_kernel(w).coeffs == (1, 1, 4, -2)

    def test_virtual_points_always_included(self):
        w = KernelWitness(1, 1, as_matrix([[2, 1], [1, 3]]))
        assert point_from_kernel(w).coeffs == (3, 5)

    def test_pfaffian_witness(self):
        K = as_matrix([[0, 2, 0, 1], [-2, 0, 1, 0], [0, -1, 0, 3], [-1, 0, -3, 0]])
        p = point_from_kernel(KernelWitness(1, 1, K, pfaffian_mode=True))
        assert p.coeffs == (3, 2 * 3 - 0 * 0 + 1 * 1)

    def test_witness_size_checked(self):
        with pytest.raises(DimensionMismatchError):
            KernelWitness(2, 0, as_matrix([[1, 0], [0, 1]]), pfaffian_mode=True)

    def test_projective_equality(self):
        p = TensorPoint(1, (F(2), F(4)))
        assert normalized(p).coeffs == (1, 2)
        assert projectively_equal(p, TensorPoint(1, (F(-1), F(-2))))
        assert not projectively_equal(p, TensorPoint(1, (F(1), F(3))))
        assert projectively_equal(p, TensorPoint(1, (1.0, 2.0 + 1e-14)))


class TestGroupAction:
    def test_gl2_act(self):
        p = TensorPoint(1, (F(1), F(2)))
        assert gl2_act(1, [[1, 1], [0, 1]], p).coeffs == (3, 2)

    def test_singular_action(self):
        with pytest.raises(SingularActionError):
            gl2_act(1, [[1, 2], [2, 4]], TensorPoint(1, (F(1), F(2))))

    def test_factor_range(self):
        with pytest.raises(IndexRangeError):
            gl2_act(3, [[1, 0], [0, 1]], TensorPoint(2, (F(1),) * 4))

    def test_correlation_transform(self, rng):
        table = random_table(rng, 3)
        rho = brute_force_correlations(table)
        p = correlation_transform(tensor_point_from_table(table))
        for mask in range(8):
            assert p.coeff(mask) == rho[Config(mask, 3)]

    def test_permute(self):
        p = TensorPoint(2, (F(1), F(2), F(3), F(4)))
        assert permute([2, 1], p).coeffs == (1, 3, 2, 4)
        with pytest.raises(IndexRangeError):
            permute([1, 1], p)

    @pytest.mark.parametrize("seed", range(4))
    def test_permute_witness(self, seed):
        w = random_witness(np.random.default_rng(seed), 3, 1)
        sigma = [3, 1, 2]
        assert point_from_kernel(permute_witness(sigma, w)) == permute(sigma, point_from_kernel(w))

    def test_flip_kernel_scalar(self):
        w = KernelWitness(1, 0, as_matrix([[F(5, 7)]]))
        flipped = flip_kernel(w)
        assert flipped.m == 1
        assert point_from_kernel(flipped).coeffs == (F(5, 7), 1)

    @pytest.mark.parametrize("seed", range(4))
    def test_flip_kernel(self, seed):
        w = random_witness(np.random.default_rng(seed), 3, 1)
        expected = gl2_act(1, [[0, 1], [1, 0]], point_from_kernel(w))
        assert projectively_equal(point_from_kernel(flip_kernel(w)), expected)

    @pytest.mark.parametrize("seed", range(6))
    def test_act_on_witness(self, seed):
        rng = np.random.default_rng(seed)
        w = random_witness(rng, 3, int(rng.integers(0, 2)))
        for g in ([[2, 0], [1, 3]], [[1, 2], [3, -1]], [[0, 1], [1, 0]]):
            j = int(rng.integers(1, 4))
            expected = gl2_act(j, g, point_from_kernel(w))
            assert projectively_equal(point_from_kernel(act_on_witness(j, g, w)), expected)

    def test_pfaffian_witness_action_unsupported(self):
        K = as_matrix([[0, 1], [-1, 0]])
        with pytest.raises(InputError):
            act_on_witness(1, [[1, 0], [0, 1]], KernelWitness(1, 0, K, pfaffian_mode=True))


class TestFourFactorKernel:
    def test_rational_roots(self):
        p = four_factor_point(F(-1, 2))
        candidates = four_factor_candidates(p)
        assert [c.x for c in candidates] == [2, F(1, 2)]
        assert all(c.reproduces for c in candidates)
        assert point_from_kernel(four_factor_kernel(p)) == p

    def test_scaled_input(self):
        p = four_factor_point(F(-1, 2))
        scaled = TensorPoint(4, tuple(3 * c for c in p.coeffs))
        assert point_from_kernel(four_factor_kernel(scaled)) == p

    def test_complex_roots(self):
        p = four_factor_point(F(1))
        K = four_factor_kernel(p).K
        assert projectively_equal(point_from_kernel(KernelWitness(4, 0, K)), p, tol=1e-10)

    @pytest.mark.parametrize("seed", range(5))
    def test_random_points(self, seed):
        rng = np.random.default_rng(seed)
        for complex_values in (False, True):
            p = random_four_factor_point(rng, complex_values)
            image = point_from_kernel(four_factor_kernel(p))
            assert projectively_equal(image, p, tol=1e-9)

    def test_support_checked(self):
        p = TensorPoint.from_dict(4, {0: F(1), 0b0011: F(1)})
        with pytest.raises(SupportFormError):
            four_factor_kernel(p)

    def test_empty_coordinate_required(self):
        p = TensorPoint.from_dict(4, {P13: F(1)})
        with pytest.raises(SupportFormError):
            four_factor_kernel(p)

    def test_factor_count(self):
        with pytest.raises(SupportFormError):
            four_factor_kernel(TensorPoint(2, (F(1),) * 4))
