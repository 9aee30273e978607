"""
内置分解库 - 统一导出
已知关系（链关系、分离校准关系）与自旋替身种子
"""

# 基础类
from .base import (
    FixtureMetadata,
    FixtureEntry,
)

# 链关系
from .chains import (
    chain_classes,
    chain_power,
    chain_relation,
    chain_spin_structure,
    standin_spin_seed,
)

# 分离校准
from .calibration import (
    matsumoto_relation,
)

# 注册表
from .registry import (
    FIXTURE_REGISTRY,
    get_fixture,
    get_fixture_metadata,
    list_fixtures,
    fixture_exists,
)

__all__ = [
    # 基础类
    'FixtureMetadata',
    'FixtureEntry',
    # 链关系
    'chain_classes',
    'chain_power',
    'chain_relation',
    'chain_spin_structure',
    'standin_spin_seed',
    # 分离校准
    'matsumoto_relation',
    # 注册表
    'FIXTURE_REGISTRY',
    'get_fixture',
    'get_fixture_metadata',
    'list_fixtures',
    'fixture_exists',
]
