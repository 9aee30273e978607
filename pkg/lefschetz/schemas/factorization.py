"""
Pydantic 模型 - 分解文件格式
"""
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class TwistRecord(BaseModel):
    """一个正扭转（消没圈）"""
    model_config = ConfigDict(extra="forbid")

    coords: List[int] = Field(..., description="同调类坐标，顺序 (a1, b1, ..., ag, bg)")
    sep_genus: Optional[int] = Field(None, description="分离曲线较小一侧的亏格；非分离曲线为 null")
    label: Optional[str] = Field(None, description="曲线标签，如 a1 或派生标签")
    dual: bool = Field(False, description="是否为已认证的对偶前缀曲线")


class SpinRecord(BaseModel):
    """声明的自旋结构（二次型在标准基上的取值）"""
    model_config = ConfigDict(extra="forbid")

    q_basis: List[int] = Field(..., description="q(a1), q(b1), ..., q(ag), q(bg)，每项为 0 或 1")

    @field_validator("q_basis")
    @classmethod
    def check_bits(cls, values: List[int]) -> List[int]:
        if any(v not in (0, 1) for v in values):
            raise ValueError("q_basis entries must be 0 or 1")
        return values


class ProvenanceEntry(BaseModel):
    """构造记录"""
    model_config = ConfigDict(extra="forbid")

    kind: str = Field(..., description="记录类型，如 seed / fiber_sum / hurwitz")
    data: Dict[str, Any] = Field(default_factory=dict, description="记录内容")


class FactorizationFile(BaseModel):
    """分解文件（JSON, UTF-8）"""
    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "genus": 1,
                "boundary": "closed",
                "twists": [
                    {"coords": [1, 0], "sep_genus": None, "label": "a1", "dual": False},
                    {"coords": [0, 1], "sep_genus": None, "label": "b1", "dual": False},
                ],
                "spin": None,
                "provenance": [{"kind": "seed", "data": {"name": "g1-chain", "relatively_minimal": True}}],
            }
        },
    )

    genus: int = Field(..., ge=1, description="纤维亏格 g")
    boundary: Literal["closed", "relative"] = Field(..., description="closed: 覆盖 S²；relative: 覆盖 D²")
    twists: List[TwistRecord] = Field(default_factory=list, description="按顺序排列的正扭转")
    spin: Optional[SpinRecord] = Field(None, description="自旋声明")
    provenance: List[ProvenanceEntry] = Field(default_factory=list, description="构造记录")
