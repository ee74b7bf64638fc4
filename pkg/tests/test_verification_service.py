"""
验证服务测试
"""
from fractions import Fraction

import numpy as np
import pytest

from app.core.exceptions import InputError
from app.services.verification_service import (
    Tally,
    VerificationService,
    complementary_pfaffian_deviation,
    deviation,
    verification_service,
)
from app.utils.linalg import as_matrix
from app.utils.random_instances import random_invertible_skew

F = Fraction


class TestTally:
    def test_exact_check(self):
        tally = Tally("demo", 0.0)
        assert tally.check("equal", F(1, 3), F(1, 3))
        assert not tally.check("different", F(1, 3), F(1, 4))
        report = tally.report()
        assert not report.passed
        assert report.failures and "different" in report.failures[0]

    def test_tail_widens_tolerance(self):
        tally = Tally("demo", 1e-8)
        assert tally.check("within tail", 1.0, 1.001, tail=0.01)
        assert tally.report().passed

    def test_deviation(self):
        assert deviation(F(1, 2), F(1, 2)) == 0
        assert deviation(1 + 1j, 1.0) == pytest.approx(1.0)


class TestService:
    def test_suite_names(self):
        assert set(verification_service.suites) == {
            "lensemble",
            "pf-lensemble",
            "eynard-mehta",
            "pf-eynard-mehta",
            "symfunc",
            "partition-functions",
            "schur-kernel",
            "pf-schur-kernel",
            "contour",
            "abstract-points",
            "em-bridge",
        }

    def test_unknown_suite(self):
        with pytest.raises(InputError):
            verification_service.run("nonsense")

    @pytest.mark.parametrize("name", ["lensemble", "pf-lensemble", "eynard-mehta", "pf-eynard-mehta"])
    def test_exact_finite_suites(self, name):
        report = verification_service.run(name, None, seed=1)
        assert report.passed, report.failures
        assert report.cases > 0
        assert report.max_deviation == 0

    def test_symfunc_suites(self):
        for name in ("symfunc", "partition-functions", "abstract-points"):
            report = verification_service.run(name, None, seed=2)
            assert report.passed, report.failures

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["schur-kernel", "pf-schur-kernel", "contour", "em-bridge"])
    def test_numeric_suites(self, name):
        report = verification_service.run(name, None, seed=0)
        assert report.passed, report.failures

    @pytest.mark.slow
    def test_em_bridge_window(self):
        # 窗口 [−8, 4]，两层内部点 u ∈ [−3, 2]，共两组参数
        report = verification_service.verify_em_bridge(None, seed=3)
        assert report.passed, report.failures
        assert report.cases == 2 * 12

    def test_engine_errors_become_failures(self, monkeypatch):
        service = VerificationService()

        def broken(tol, seed):
            raise InputError("broken suite")

        monkeypatch.setitem(service.suites, "lensemble", broken)
        report = service.run("lensemble")
        assert not report.passed
        assert "broken suite" in report.failures[0]


class TestComplementaryPfaffian:
    def test_random_invertible(self):
        A = random_invertible_skew(np.random.default_rng(4), 4)
        assert complementary_pfaffian_deviation(A) == 0

    def test_two_by_two(self):
        assert complementary_pfaffian_deviation(as_matrix([[0, 3], [-3, 0]])) == 0
