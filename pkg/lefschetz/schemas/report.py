"""
Pydantic 模型 - 不变量报告与证书
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class SpinVerdictModel(BaseModel):
    """自旋判定"""
    model_config = ConfigDict(extra="forbid")

    verdict: str = Field(..., description="Spin / NotSpin / Inconclusive")
    reasons: List[str] = Field(default_factory=list, description="判定理由")


class HomeoTypeModel(BaseModel):
    """同胚类型描述"""
    model_config = ConfigDict(extra="forbid")

    family: str = Field(..., description="族名，如 S2xS2")
    params: Dict[str, int] = Field(default_factory=dict, description="族参数，如 {'m': 271}")
    text: str = Field(..., description="可读形式，如 #_271(S²×S²)")


class CertificateModel(BaseModel):
    """证书"""
    model_config = ConfigDict(extra="forbid")

    kind: str = Field(..., description="SimplyConnected / PerfectMorse / IrreducibilityProvenance")
    evidence: Dict[str, Any] = Field(default_factory=dict, description="证据")
    citations: List[str] = Field(default_factory=list, description="引用的定理")


class InvariantReportModel(BaseModel):
    """不变量报告"""
    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "e": 12,
                "sigma": -8,
                "b_plus": 1,
                "b_minus": 9,
                "spin": {"verdict": "NotSpin", "reasons": ["Rokhlin"]},
                "arf": None,
                "homeo_type": {"family": "CP2/-CP2", "params": {"b_plus": 1, "b_minus": 9},
                               "text": "#_1 CP² #_9 CP̄²"},
                "certificates": [],
            }
        },
    )

    e: int = Field(..., description="Euler 示性数")
    sigma: int = Field(..., description="符号差")
    b_plus: Optional[int] = Field(None, description="b2+（有单连通证书时给出）")
    b_minus: Optional[int] = Field(None, description="b2-（有单连通证书时给出）")
    spin: SpinVerdictModel
    arf: Optional[int] = Field(None, description="声明（或唯一）自旋结构的 Arf 不变量")
    homeo_type: Optional[HomeoTypeModel] = None
    certificates: List[CertificateModel] = Field(default_factory=list)
    absent_certificates: Dict[str, str] = Field(default_factory=dict, description="未签发的证书及原因")
    generated_at: Optional[str] = Field(None, description="生成时间（--reproducible 时省略）")
