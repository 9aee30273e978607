"""
辛格运算
相交配对、横截变换（Dehn 扭转在同调上的作用）、辛矩阵工具、格的 Smith 标准形检验

整数矩阵统一使用 dtype=object 的 numpy 数组，元素为 Python int，保证任意精度。
"""
from typing import Iterable, Sequence, Tuple

import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_form

from lefschetz.core.exceptions import DimensionError, NonSymplecticError
from .base import Curve, HomologyClass


# ==================== 矩阵构造 ====================

def int_matrix(rows: Iterable[Iterable[int]]) -> np.ndarray:
    """把嵌套列表转成任意精度整数矩阵"""
    return np.array([[int(x) for x in row] for row in rows], dtype=object)


def identity_matrix(rank: int) -> np.ndarray:
    return int_matrix([[1 if i == j else 0 for j in range(rank)] for i in range(rank)])


def symplectic_form(genus: int) -> np.ndarray:
    """标准辛矩阵 J（2×2 块 [[0,1],[-1,0]]）"""
    rank = 2 * genus
    rows = [[0] * rank for _ in range(rank)]
    for i in range(genus):
        rows[2 * i][2 * i + 1] = 1
        rows[2 * i + 1][2 * i] = -1
    return int_matrix(rows)


def matrix_key(m: np.ndarray) -> Tuple[int, ...]:
    """可哈希的矩阵表示，用于缓存"""
    return (m.shape[0],) + tuple(int(x) for x in m.flat)


def matrices_equal(m1: np.ndarray, m2: np.ndarray) -> bool:
    return m1.shape == m2.shape and bool(np.array_equal(m1, m2))


def is_identity(m: np.ndarray) -> bool:
    return matrices_equal(m, identity_matrix(m.shape[0]))


# ==================== 相交配对与横截变换 ====================

def _dual(coords: Sequence[int]) -> np.ndarray:
    """J c，满足 (J c)ᵀ x = ⟨x, c⟩"""
    dual = []
    for k in range(0, len(coords), 2):
        dual.extend((coords[k + 1], -coords[k]))
    return np.array(dual, dtype=object)


def intersection(x: HomologyClass, y: HomologyClass) -> int:
    """
    ⟨x, y⟩ = xᵀ J y

    Raises:
        DimensionError: 秩不一致
    """
    if x.rank != y.rank:
        raise DimensionError(f"Cannot pair classes of rank {x.rank} and {y.rank}")
    xs, ys = x.coords, y.coords
    return sum(xs[k] * ys[k + 1] - xs[k + 1] * ys[k] for k in range(0, len(xs), 2))


def transvection_apply(c: Curve, x: HomologyClass, power: int = 1) -> HomologyClass:
    """
    T_c^power(x) = x + power·⟨x, c⟩·c

    分离曲线（类为 0）上恒等；结果与 c 的符号规范化无关。
    """
    if c.cls.rank != x.rank:
        raise DimensionError(f"Curve of rank {c.cls.rank} cannot act on a class of rank {x.rank}")
    if c.is_separating:
        return x
    return x + c.cls.scaled(power * intersection(x, c.cls))


def transvection_matrix(c: Curve, power: int = 1) -> np.ndarray:
    """
    T_c^power 的矩阵：I + power · c (J c)ᵀ
    """
    rank = c.cls.rank
    if c.is_separating or power == 0:
        return identity_matrix(rank)
    vector = np.array(c.cls.coords, dtype=object)
    dual = _dual(c.cls.coords)
    return identity_matrix(rank) + power * np.outer(vector, dual)


def apply_matrix(m: np.ndarray, x: HomologyClass) -> HomologyClass:
    if m.shape[0] != x.rank:
        raise DimensionError(f"Matrix of size {m.shape[0]} cannot act on a class of rank {x.rank}")
    return HomologyClass(tuple(int(v) for v in m.dot(np.array(x.coords, dtype=object))))


def right_multiply_transvection(m: np.ndarray, c: Curve, power: int = 1) -> np.ndarray:
    """
    m · T_c^power，按秩一更新计算：m + power · (m c)(J c)ᵀ
    """
    if c.is_separating:
        return m
    vector = np.array(c.cls.coords, dtype=object)
    dual = _dual(c.cls.coords)
    return m + power * np.outer(m.dot(vector), dual)


# ==================== 辛矩阵 ====================

def as_square_matrix(m) -> np.ndarray:
    """接受嵌套列表或数组，检查为偶数阶方阵"""
    matrix = m if isinstance(m, np.ndarray) and m.dtype == object else int_matrix(np.asarray(m).tolist())
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
        raise DimensionError(f"Expected an even square matrix, got shape {matrix.shape}")
    return matrix


def is_symplectic(m) -> bool:
    matrix = as_square_matrix(m)
    j = symplectic_form(matrix.shape[0] // 2)
    return matrices_equal(matrix.T.dot(j).dot(matrix), j)


def require_symplectic(m) -> np.ndarray:
    matrix = as_square_matrix(m)
    if not is_symplectic(matrix):
        raise NonSymplecticError("Matrix does not satisfy Mᵀ J M = J")
    return matrix


def symplectic_inverse(m: np.ndarray) -> np.ndarray:
    """辛矩阵的逆：A⁻¹ = -J Aᵀ J"""
    j = symplectic_form(m.shape[0] // 2)
    return -j.dot(m.T).dot(j)


# ==================== Smith 标准形 ====================

def lattice_invariant_factors(classes: Sequence[HomologyClass], rank: int) -> Tuple[int, ...]:
    """
    以 classes 为行的整数矩阵的 Smith 标准形对角元（取绝对值，长度 rank，不足补 0）
    """
    rows = sorted({c.coords for c in classes if not c.is_zero()})
    if not rows:
        return (0,) * rank
    for row in rows:
        if len(row) != rank:
            raise DimensionError(f"Class of rank {len(row)} in a rank-{rank} lattice")
    snf = smith_normal_form(DomainMatrix([[ZZ(x) for x in row] for row in rows], (len(rows), rank), ZZ))
    snf_rows = snf.to_Matrix()
    diagonal = [abs(int(snf_rows[k, k])) for k in range(min(len(rows), rank))]
    return tuple(diagonal + [0] * (rank - len(diagonal)))


def spans_lattice(classes: Sequence[HomologyClass], rank: int) -> bool:
    """classes 是否在整数上张成整个 H_1"""
    present = {c.normalized().coords for c in classes}
    if all(tuple(1 if k == i else 0 for k in range(rank)) in present for i in range(rank)):
        return True
    return all(d == 1 for d in lattice_invariant_factors(classes, rank))
