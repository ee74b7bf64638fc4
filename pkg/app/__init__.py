"""
行列式与Pfaffian点过程计算引擎
"""

__version__ = "1.0.0"
__author__ = "Development Team"
__description__ = "行列式与Pfaffian点过程计算引擎"
