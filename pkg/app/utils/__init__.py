"""
工具类模块
"""
