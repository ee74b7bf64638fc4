"""
围道积分工具测试
"""
import warnings

import numpy as np
import pytest

from app.core.config import settings
from app.core.exceptions import ContourError, ConvergenceError
from app.utils.contour import (
    ContourConfig,
    circle_nodes,
    coefficient_by_rows,
    coefficient_from_grid,
    contour_integrate,
    laurent_coefficient,
    laurent_grid,
    max_quad_points,
)

UNIT = ContourConfig(1.0, 1.0)


def coefficient(F, contours, p, q, tol=None) -> complex:
    return laurent_coefficient(F, contours, p, q, tol).value


class TestContourConfig:
    def test_radius_must_be_positive(self):
        with pytest.raises(ContourError):
            ContourConfig(0.0, 1.0)

    def test_points_power_of_two(self):
        with pytest.raises(ContourError):
            ContourConfig(1.0, 1.0, quad_points=24)

    def test_pole_margin(self):
        with pytest.raises(ContourError):
            UNIT.check_poles(z_poles=[1.01])
        UNIT.check_poles(z_poles=[1.5], w_poles=[0.5])

    def test_nodes_on_circle(self):
        nodes = circle_nodes(2.0, 8)
        assert np.allclose(np.abs(nodes), 2.0)
        assert nodes[0] == 2.0


class TestIntegrate:
    def test_reciprocal(self):
        assert abs(contour_integrate(lambda z, w: 1 / (z * w), UNIT).value - 1) < 1e-12

    def test_analytic_integrand_vanishes(self):
        assert abs(contour_integrate(lambda z, w: np.exp(z + w), UNIT).value) < 1e-12

    def test_geometric_series(self):
        value = contour_integrate(lambda z, w: 1 / (z * w * (1 - z * w / 4)), UNIT).value
        assert abs(value - 1) < 1e-10


class TestLaurentCoefficient:
    def test_positive_powers(self):
        def F(z, w):
            return 1 / ((1 - z / 2) * (1 - w / 3))

        assert abs(coefficient(F, UNIT, 2, 1) - 1 / 12) < 1e-10

    def test_negative_powers(self):
        def F(z, w):
            return 1 / (1 - 1 / (2 * z)) + 0 * w

        assert abs(coefficient(F, UNIT, -2, 0) - 0.25) < 1e-10
        assert abs(coefficient(F, UNIT, 2, 0)) < 1e-10

    def test_radius_selects_expansion(self):
        def F(z, w):
            return 1 / (z * w - 1)

        outer, inner = ContourConfig(2.0, 2.0), ContourConfig(0.5, 0.5)
        assert abs(coefficient(F, outer, -1, -1) - 1) < 1e-10
        assert abs(coefficient(F, outer, 0, 0)) < 1e-10
        assert abs(coefficient(F, inner, 0, 0) + 1) < 1e-10
        assert abs(coefficient(F, inner, -1, -1)) < 1e-10

    def test_large_power_not_aliased(self):
        def F(z, w):
            return 1 / ((1 - z / 2) * (1 - w / 2))

        assert abs(coefficient(F, UNIT, 40, 0) - 0.5**40) < 1e-12

    def test_grid_is_read_only(self):
        grid = laurent_grid(lambda z, w: z * w, UNIT, 8)
        with pytest.raises(ValueError):
            grid[0, 0] = 1

    def test_pole_on_contour(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            with pytest.raises(ContourError):
                laurent_grid(lambda z, w: 1 / (z - 1) + 0 * w, UNIT, 8)

    def test_no_convergence_within_cap(self, monkeypatch):
        monkeypatch.setattr(settings, "quad_max_points", 256)

        def F(z, w):
            return 1 / (1 - 0.9999 * z) + 0 * w

        with pytest.raises(ConvergenceError):
            coefficient(F, UNIT, 0, 0, tol=1e-12)

    def test_cap_follows_doublings(self, monkeypatch):
        assert max_quad_points(32) == 65536
        monkeypatch.setattr(settings, "quad_max_doublings", 3)
        assert max_quad_points(32) == 256

    def test_row_blocks_match_grid(self):
        def F(z, w):
            return 1 / ((1 - z / 2) * (1 - 1 / (3 * w)))

        contours = ContourConfig(1.0, 1.0)
        by_grid = coefficient_from_grid(laurent_grid(F, contours, 64), contours, 3, -2)
        assert abs(coefficient_by_rows(F, contours, 64, 3, -2) - by_grid) < 1e-14
        assert abs(by_grid - 0.5**3 / 9) < 1e-12

    @pytest.mark.slow
    def test_refines_beyond_grid_points(self):
        # 混叠误差 0.99^n：需要数千个采样点才收敛
        result = contour_integrate(lambda z, w: 1 / (z * w * (1 - 0.99 * z)), UNIT)
        assert result.points > 2048
        assert abs(result.value - 1) < 1e-9
