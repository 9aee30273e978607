"""
F2 上的二次型与线性代数
自旋结构（二次加细）的取值、Arf 不变量、扭转作用，以及 GF(2) 仿射方程组求解
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from lefschetz.core.exceptions import DimensionError
from .base import Curve, HomologyClass, QuadraticForm
from .lattice import intersection


def kappa(bits: Sequence[int]) -> int:
    """
    κ(v) = Σ_{k<l} v_k v_l ⟨e_k, e_l⟩ mod 2

    标准基中只有 (a_i, b_i) 配对非零，因此 κ(v) = Σ v_{a_i} v_{b_i}。
    """
    return sum(bits[k] & bits[k + 1] for k in range(0, len(bits), 2)) & 1


def q_eval(q: QuadraticForm, x: HomologyClass) -> int:
    """
    计算 q(x)

    Args:
        q: 二次型
        x: 同调类（按 mod 2 约化后取值）

    Returns:
        0 或 1

    Raises:
        DimensionError: 秩不一致
    """
    if len(q.basis_values) != x.rank:
        raise DimensionError(f"Quadratic form of rank {len(q.basis_values)} cannot evaluate a class of rank {x.rank}")
    bits = x.mod2()
    linear = sum(b & v for b, v in zip(bits, q.basis_values))
    return (linear + kappa(bits)) & 1


def arf(q: QuadraticForm) -> int:
    """Arf(q) = Σ q(a_i) q(b_i) mod 2"""
    values = q.basis_values
    return sum(values[k] & values[k + 1] for k in range(0, len(values), 2)) & 1


def twist_qform(q: QuadraticForm, c: Curve) -> QuadraticForm:
    """
    单个扭转 t_c（或其逆）作用后的二次型 q∘T_c⁻¹

    逐基向量使用 q(T_c x) = q(x) + ⟨x,c⟩·(q(c)+1)；mod 2 下 T_c 与 T_c⁻¹ 相同。
    """
    if c.is_separating:
        return q
    shift = q_eval(q, c.cls) ^ 1
    if not shift:
        return q
    rank = len(q.basis_values)
    values = []
    for k, value in enumerate(q.basis_values):
        e_k = HomologyClass(tuple(1 if j == k else 0 for j in range(rank)))
        values.append(value ^ (intersection(e_k, c.cls) & 1))
    return QuadraticForm(tuple(values))


# ==================== GF(2) 线性代数 ====================

@dataclass(frozen=True)
class RowReduction:
    """GF(2) 行约化结果"""
    matrix: np.ndarray
    rank: int
    pivots: Tuple[int, ...]


def gf2_row_reduce(matrix: np.ndarray) -> RowReduction:
    """GF(2) 上化为最简行阶梯形"""
    mat = (np.asarray(matrix) & 1).astype(np.uint8, copy=True)
    m, n = mat.shape
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        candidates = np.where(mat[row:, col] == 1)[0]
        if candidates.size == 0:
            continue
        pivot = row + int(candidates[0])
        if pivot != row:
            mat[[row, pivot], :] = mat[[pivot, row], :]
        ones = np.where(mat[:, col] == 1)[0]
        ones = ones[ones != row]
        if ones.size:
            mat[ones, :] ^= mat[row, :]
        pivots.append(col)
        row += 1
    return RowReduction(matrix=mat, rank=len(pivots), pivots=tuple(pivots))


@dataclass(frozen=True)
class AffineSolution:
    """
    GF(2) 仿射方程组 A x = b 的解集
    particular 为一个特解（无解时为 None），kernel 的行是齐次解空间的基
    """
    particular: Optional[Tuple[int, ...]]
    kernel: Tuple[Tuple[int, ...], ...]
    rank: int

    @property
    def feasible(self) -> bool:
        return self.particular is not None

    @property
    def dimension(self) -> int:
        return len(self.kernel) if self.feasible else -1

    def contains(self, x: Sequence[int]) -> bool:
        """x 是否为解：x - particular 落在核空间中"""
        if not self.feasible:
            return False
        diff = np.array([(a ^ b) & 1 for a, b in zip(x, self.particular)], dtype=np.uint8)
        if not diff.any():
            return True
        if not self.kernel:
            return False
        stacked = np.vstack([np.array(self.kernel, dtype=np.uint8), diff])
        return gf2_row_reduce(stacked).rank == len(self.kernel)


def solve_gf2_affine(a: np.ndarray, b: Sequence[int], n_vars: int) -> AffineSolution:
    """
    求解 GF(2) 上的 A x = b

    Args:
        a: m × n 的 0/1 矩阵（m 可以为 0）
        b: 长度 m 的右端
        n_vars: 未知数个数 n

    Returns:
        AffineSolution
    """
    a = np.asarray(a, dtype=np.uint8).reshape(-1, n_vars)
    rhs = np.asarray(b, dtype=np.uint8).reshape(-1, 1)
    reduced = gf2_row_reduce(np.concatenate([a, rhs], axis=1))
    mat = reduced.matrix

    # 出现 0 = 1 的行则无解
    if n_vars in reduced.pivots:
        return AffineSolution(particular=None, kernel=(), rank=reduced.rank - 1)

    particular = [0] * n_vars
    for row, col in enumerate(reduced.pivots):
        particular[col] = int(mat[row, n_vars])

    free_cols = [c for c in range(n_vars) if c not in reduced.pivots]
    kernel = []
    for free in free_cols:
        vec = [0] * n_vars
        vec[free] = 1
        for row, col in enumerate(reduced.pivots):
            if mat[row, free] == 1:
                vec[col] = 1
        kernel.append(tuple(vec))

    return AffineSolution(particular=tuple(particular), kernel=tuple(kernel), rank=reduced.rank)
