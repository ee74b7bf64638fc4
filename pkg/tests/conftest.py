"""
测试共用夹具
"""
import json
from fractions import Fraction

import numpy as np
import pytest

from app.core.logging import configure_logging
from app.services.schur_process import SchurSpec
from app.utils.cache_manager import cache_manager

F = Fraction


@pytest.fixture(autouse=True, scope="session")
def quiet_logging():
    configure_logging("WARNING")


@pytest.fixture(autouse=True)
def clear_cache():
    yield
    cache_manager.clear()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def one_row_spec() -> SchurSpec:
    """T = 1，ρ₀⁺ = (1/2)，ρ₁⁻ = (1/2)"""
    return SchurSpec.build([[F(1, 2)]], [[F(1, 2)]])


@pytest.fixture
def two_level_spec() -> SchurSpec:
    return SchurSpec.build([[F(1, 3)], [F(1, 4)]], [[F(1, 5)], [F(1, 2)]])


@pytest.fixture
def write_json(tmp_path):
    """把载荷写成临时 JSON 文件并返回路径字符串"""

    def write(name: str, payload) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    return write
