"""
分离消没圈的校准分解（亏格 2）

(t_{B0} t_{B1} t_{B2} t_C)^2 = 1，其中
B0 = a1 + a2，B1 = b1 + b2，B2 = a1 − b1 + a2 − b2，C 为分离曲线（两侧亏格 1）。
B0、B1、B2 张成指数 2 的子格上的一个秩 2 块，三个横截变换之积为 −I。
"""
from lefschetz.services.algebra import Curve
from lefschetz.services.factorization_service import Boundary, PositiveFactorization, ProvenanceRecord
from .base import FixtureEntry, FixtureMetadata


def matsumoto_relation() -> PositiveFactorization:
    """6 条非分离 + 2 条分离消没圈"""
    b0 = Curve.from_coords((1, 0, 1, 0), label="B0")
    b1 = Curve.from_coords((0, 1, 0, 1), label="B1")
    b2 = Curve.from_coords((1, -1, 1, -1), label="B2")
    c = Curve.separating(2, 1, label="C")
    record = ProvenanceRecord("seed", {
        "name": "g2-matsumoto",
        "relation": "matsumoto",
        "relatively_minimal": True,
        "hyperelliptic": True,
    })
    return PositiveFactorization(2, (b0, b1, b2, c) * 2, Boundary.CLOSED, None, (record,))


G2_MATSUMOTO = FixtureEntry(
    FixtureMetadata(
        id="g2-matsumoto",
        genus=2,
        length=8,
        description="(t_B0 t_B1 t_B2 t_C)^2 with one separating cycle C",
        hyperelliptic=True,
        endo_signature=-4,
    ),
    matsumoto_relation,
)
