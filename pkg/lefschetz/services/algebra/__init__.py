"""
代数基础库 - 统一导出
辛格、F2 二次型与精确有理线性代数
"""

# 基础类型
from .base import (
    Surface,
    HomologyClass,
    Curve,
    QuadraticForm,
    standard_label,
    standard_index,
)

# 辛格
from .lattice import (
    int_matrix,
    identity_matrix,
    symplectic_form,
    matrix_key,
    matrices_equal,
    is_identity,
    intersection,
    transvection_apply,
    transvection_matrix,
    apply_matrix,
    right_multiply_transvection,
    as_square_matrix,
    is_symplectic,
    require_symplectic,
    symplectic_inverse,
    lattice_invariant_factors,
    spans_lattice,
)

# 二次型与 GF(2)
from .quadratic import (
    kappa,
    q_eval,
    arf,
    twist_qform,
    gf2_row_reduce,
    solve_gf2_affine,
    AffineSolution,
)

# 精确符号差
from .exact import (
    to_fraction,
    signature_of_symmetric,
    solve_rational,
    rational_nullspace,
)

__all__ = [
    # 基础类型
    'Surface',
    'HomologyClass',
    'Curve',
    'QuadraticForm',
    'standard_label',
    'standard_index',
    # 辛格
    'int_matrix',
    'identity_matrix',
    'symplectic_form',
    'matrix_key',
    'matrices_equal',
    'is_identity',
    'intersection',
    'transvection_apply',
    'transvection_matrix',
    'apply_matrix',
    'right_multiply_transvection',
    'as_square_matrix',
    'is_symplectic',
    'require_symplectic',
    'symplectic_inverse',
    'lattice_invariant_factors',
    'spans_lattice',
    # 二次型与 GF(2)
    'kappa',
    'q_eval',
    'arf',
    'twist_qform',
    'gf2_row_reduce',
    'solve_gf2_affine',
    'AffineSolution',
    # 精确符号差
    'to_fraction',
    'signature_of_symmetric',
    'solve_rational',
    'rational_nullspace',
]
