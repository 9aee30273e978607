"""
内置分解注册表
CLI 通过 "fixture:<id>" 引用这里的分解
"""
from typing import Dict, List, Optional

from lefschetz.services.factorization_service import PositiveFactorization
from .base import FixtureEntry, FixtureMetadata
from .calibration import G2_MATSUMOTO
from .chains import G1_CHAIN, G1_CHAIN3, G2_CHAIN4, G2_CHAIN5, G3_CHAIN7, G9_CHAIN19, G9_STANDIN


# ==================== 分解注册表 ====================

FIXTURE_REGISTRY: Dict[str, FixtureEntry] = {
    entry.metadata.id: entry
    for entry in (G1_CHAIN, G1_CHAIN3, G2_CHAIN5, G2_CHAIN4, G2_MATSUMOTO, G3_CHAIN7, G9_CHAIN19, G9_STANDIN)
}


# ==================== 工具函数 ====================

def get_fixture(fixture_id: str) -> PositiveFactorization:
    """
    构造内置分解

    Args:
        fixture_id: 分解名（如 "g1-chain"）

    Returns:
        PositiveFactorization

    Raises:
        KeyError: 名字未注册
    """
    entry = FIXTURE_REGISTRY.get(fixture_id)
    if entry is None:
        raise KeyError(f"Unknown fixture '{fixture_id}'. Available: {', '.join(FIXTURE_REGISTRY)}")
    return entry.builder()


def get_fixture_metadata(fixture_id: str) -> Optional[FixtureMetadata]:
    entry = FIXTURE_REGISTRY.get(fixture_id)
    return entry.metadata if entry else None


def list_fixtures() -> List[FixtureMetadata]:
    return [entry.metadata for entry in FIXTURE_REGISTRY.values()]


def fixture_exists(fixture_id: str) -> bool:
    return fixture_id in FIXTURE_REGISTRY
