"""
Lefschetz 分解演算 - 正 Dehn 扭转分解的精确同调计算
"""

__version__ = "1.0.0"
