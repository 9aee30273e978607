"""
精确有理线性代数
对称有理矩阵的符号差（合同对角化）、有理线性方程组、有理零空间
"""
from fractions import Fraction
from typing import List, Optional, Sequence

from sympy import Matrix, QQ
from sympy.polys.matrices import DomainMatrix

from lefschetz.core.exceptions import DimensionError, NotSymmetricError


def to_fraction(value) -> Fraction:
    """int / Fraction / sympy Rational / 域元素 → Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    return Fraction(value)


def _rows_of(m) -> List[List[Fraction]]:
    if hasattr(m, "tolist"):
        rows = m.tolist()
    else:
        rows = [list(row) for row in m]
    return [[to_fraction(x) for x in row] for row in rows]


def signature_of_symmetric(m) -> int:
    """
    对称有理矩阵的符号差：精确合同对角化后 (#正 − #负)

    Args:
        m: 嵌套列表、numpy 数组或 sympy Matrix

    Returns:
        整数符号差

    Raises:
        NotSymmetricError: 输入不对称
    """
    a = _rows_of(m)
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionError("Signature needs a square matrix")
    for i in range(n):
        for j in range(i + 1, n):
            if a[i][j] != a[j][i]:
                raise NotSymmetricError(f"Entry ({i},{j}) differs from ({j},{i})")

    active = list(range(n))
    signature = 0
    while active:
        pivot = next((i for i in active if a[i][i] != 0), None)
        if pivot is None:
            pair = next(((i, j) for i in active for j in active if i < j and a[i][j] != 0), None)
            if pair is None:
                break
            # 对角全零时把第 j 行/列加到第 i 行/列，新对角元 2·a[i][j] ≠ 0
            i, j = pair
            for k in active:
                a[i][k] += a[j][k]
            for k in active:
                a[k][i] += a[k][j]
            pivot = i

        d = a[pivot][pivot]
        signature += 1 if d > 0 else -1
        active.remove(pivot)
        for k in active:
            factor = a[k][pivot] / d
            if factor == 0:
                continue
            for l in active:
                a[k][l] -= factor * a[pivot][l]
    return signature


# ==================== 有理方程组 ====================

def solve_rational(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> Optional[List[Fraction]]:
    """
    求 A x = b 的一个有理解（自由变量取 0），无解返回 None
    """
    n_rows = len(rows)
    n_cols = len(rows[0]) if n_rows else 0
    augmented = DomainMatrix(
        [[QQ(int(x)) for x in row] + [QQ(int(b))] for row, b in zip(rows, rhs)],
        (n_rows, n_cols + 1),
        QQ,
    )
    reduced, pivots = augmented.rref()
    if n_cols in pivots:
        return None
    dense = reduced.to_Matrix()
    solution = [Fraction(0)] * n_cols
    for row, col in enumerate(pivots):
        solution[col] = to_fraction(dense[row, n_cols])
    return solution


def rational_nullspace(rows: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    """有理零空间的一组基（每个元素是一个列向量的坐标列表）"""
    basis = Matrix([[int(x) for x in row] for row in rows]).nullspace()
    return [[to_fraction(x) for x in vector] for vector in basis]
