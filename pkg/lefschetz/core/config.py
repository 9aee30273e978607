"""
应用配置
"""
from pathlib import Path

# 项目根目录
BASE_DIR = Path(__file__).resolve().parent.parent.parent

# 数据目录（外部种子分解文件）
DATA_DIR = BASE_DIR / "data"

# CLI 中引用内置分解的前缀，如 "fixture:g1-chain"
FIXTURE_PREFIX = "fixture:"

# 默认输出格式
DEFAULT_FORMAT = "json"
OUTPUT_FORMATS = ("json", "text")

# ==================== 退出码 ====================

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_ABSENT = 2          # 结果不存在/前置条件不满足
EXIT_IO_ERROR = 3        # 读写或格式错误

# ==================== 代数约定 ====================

# 分离消没圈的局部符号差修正 λ(separating)
# 由 g=2 的校准分解（6 条非分离 + 2 条分离）锁定
SEPARATING_LOCAL_SIGNATURE = -1

# Rokhlin 定理：闭自旋 4 流形的符号差被 16 整除
ROKHLIN_MODULUS = 16

# ==================== 标签 ====================

# Hurwitz 改写生成的派生标签最多记录的历史层数，超出后截断为哈希
LABEL_MAX_DEPTH = 4
LABEL_HASH_LENGTH = 10

# ==================== 外部种子 ====================

# 亏格 9 自旋种子纤维化（48 个扭转），仅在提供数据文件时加载
EXTERNAL_SEED_GENUS = 9
EXTERNAL_SEED_LENGTH = 48
EXTERNAL_SEED_FILENAME = "g9_spin_seed.json"

# ==================== 证书引用 ====================

CITATIONS = {
    "dual_handles": (
        "Handle cancellation: a 1-handle of D^2 x F cancels against the "
        "Lefschetz 2-handle attached along a geometrically dual curve"
    ),
    "freedman": "Freedman: simply connected closed 4-manifolds are classified by their intersection form",
    "fiber_sum_minimality": (
        "Usher: fiber sums of relatively minimal, non-trivial Lefschetz "
        "fibrations are minimal symplectic 4-manifolds"
    ),
    "minimal_irreducible": (
        "Hamilton-Kotschick: minimal symplectic 4-manifolds with residually "
        "finite fundamental group are irreducible"
    ),
    "rokhlin": "Rokhlin: the signature of a closed smooth spin 4-manifold is divisible by 16",
    "novikov": "Novikov additivity of the signature under fiber sums",
}
