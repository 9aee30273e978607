"""
内置分解库 - 基础类定义
"""
from dataclasses import dataclass
from typing import Callable, Optional

from pydantic import BaseModel, ConfigDict, Field

from lefschetz.services.factorization_service import PositiveFactorization


class FixtureMetadata(BaseModel):
    """
    内置分解的元数据
    CLI 的 fixtures 命令据此列出可用名字
    """
    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "id": "g1-chain",
                "genus": 1,
                "length": 12,
                "description": "(t_a1 t_b1)^6",
                "hyperelliptic": True,
                "endo_signature": -8,
            }
        }
    )

    id: str = Field(..., description="分解名，CLI 中写作 fixture:<id>")
    genus: int = Field(..., description="纤维亏格")
    length: int = Field(..., description="扭转个数")
    description: str = Field(..., description="关系的写法")
    hyperelliptic: bool = Field(True, description="是否为超椭圆关系（Endo 公式适用）")
    endo_signature: Optional[int] = Field(None, description="Endo 公式给出的符号差")


@dataclass(frozen=True)
class FixtureEntry:
    """注册表条目：元数据 + 构造函数"""
    metadata: FixtureMetadata
    builder: Callable[[], PositiveFactorization]
