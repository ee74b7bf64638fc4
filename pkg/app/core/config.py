"""
应用配置模块
"""
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class AppSettings(BaseSettings):
    """应用设置"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # 基本配置
    app_name: str = "行列式与Pfaffian点过程计算引擎"
    version: str = "1.0.0"
    debug: bool = False

    # 日志配置
    log_level: str = "WARNING"
    log_format: str = "json"

    # 线性代数配置
    singular_threshold: float = 1e-12
    float_tolerance: float = 1e-9

    # 枚举上限（基础集大小，即 2^n 个构型）
    dpp_max_enum: int = 20

    # 特殊化与级数配置
    rho_max: float = 0.9
    rho_floor: float = 0.25
    pole_margin: float = 0.02
    symbol_tolerance: float = 1e-15  # Toeplitz符号系数的截断余项上界
    symbol_max_terms: int = 4096

    # 围道积分配置
    quad_points: int = 32
    quad_max_doublings: int = 16
    quad_max_points: int = 65536
    quad_grid_points: int = 1024  # 不超过此点数时构建并缓存整张FFT网格
    quad_tolerance: float = 1e-10

    # 缓存配置
    cache_max_entries: int = 4096

    # 命令行默认值
    default_tolerance: float = 1e-8
    default_cutoff: int = 12
    default_seed: int = 0

    @field_validator(
        "singular_threshold",
        "float_tolerance",
        "quad_tolerance",
        "symbol_tolerance",
        "default_tolerance",
    )
    @classmethod
    def check_positive_tolerance(cls, v: float) -> float:
        """容差必须为正数"""
        if v <= 0:
            raise ValueError("容差必须为正数")
        return v

    @field_validator("rho_max", "rho_floor")
    @classmethod
    def check_unit_interval(cls, v: float) -> float:
        """变量模长上限必须位于 (0, 1)"""
        if not 0 < v < 1:
            raise ValueError("模长上限必须位于 (0, 1) 区间")
        return v

    @field_validator("quad_points", "quad_max_points", "quad_grid_points")
    @classmethod
    def check_power_of_two(cls, v: int) -> int:
        """采样点数必须为2的幂"""
        if v < 1 or v & (v - 1):
            raise ValueError("采样点数必须为2的幂")
        return v

    @field_validator("dpp_max_enum")
    @classmethod
    def check_enum_cap(cls, v: int) -> int:
        if v < 0:
            raise ValueError("枚举上限不能为负")
        return v


# 创建全局设置实例
settings = AppSettings()


def get_settings() -> AppSettings:
    """获取应用设置"""
    return settings
