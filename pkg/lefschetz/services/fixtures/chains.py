"""
链关系

同调模型：c1 = a1，c_{2i} = b_i，c_{2i+1} = a_i + a_{i+1}，c_{2g+1} = a_g。
相邻两条配对为 ±1，不相邻为 0。

- 奇链 (t_{c1} ··· t_{c_{2g+1}})^{2g+2} = 1（超椭圆关系）
- 偶链 (t_{c1} ··· t_{c_{2g}})^{4g+2} = 1
"""
from typing import List, Optional

from lefschetz.core.exceptions import DimensionError, PreconditionError
from lefschetz.services.algebra import Curve, QuadraticForm, Surface, standard_label
from lefschetz.services.factorization_service import (
    Boundary,
    FactorizationService,
    PositiveFactorization,
    ProvenanceRecord,
)
from lefschetz.services.mapping_class_service import MappingClassService
from .base import FixtureEntry, FixtureMetadata


def chain_classes(genus: int, length: Optional[int] = None) -> List[Curve]:
    """
    链 c1, ..., c_length 的曲线（length ≤ 2g+1）

    标准基曲线贴标准标签并置对偶标记，其余标为 c{j}。
    """
    surface = Surface(genus)
    length = 2 * genus + 1 if length is None else length
    if not 1 <= length <= 2 * genus + 1:
        raise DimensionError(f"Chain length must lie in 1..{2 * genus + 1}, got {length}")
    classes = []
    for j in range(1, length + 1):
        if j == 1:
            cls = surface.a(1)
        elif j == 2 * genus + 1:
            cls = surface.a(genus)
        elif j % 2 == 0:
            cls = surface.b(j // 2)
        else:
            i = (j - 1) // 2
            cls = surface.a(i) + surface.a(i + 1)
        classes.append(cls)

    curves = []
    for j, cls in enumerate(classes, start=1):
        index = cls.standard_index()
        if index is not None:
            curves.append(Curve(cls, label=standard_label(index), dual_flag=True))
        else:
            curves.append(Curve(cls, label=f"c{j}"))
    return curves


def chain_power(genus: int, length: int) -> int:
    """链关系的幂次：奇链 2g+2，偶链 4g+2"""
    if length == 2 * genus + 1:
        return 2 * genus + 2
    if length == 2 * genus:
        return 4 * genus + 2
    raise DimensionError(f"No chain relation of length {length} at genus {genus}")


def chain_relation(genus: int, length: int, power: Optional[int] = None,
                   name: Optional[str] = None) -> PositiveFactorization:
    """
    (t_{c1} ··· t_{c_length})^power，闭分解
    """
    power = chain_power(genus, length) if power is None else power
    curves = chain_classes(genus, length)
    record = ProvenanceRecord("seed", {
        "name": name or f"chain(g={genus},len={length})^{power}",
        "relation": "chain",
        "relatively_minimal": True,
        "hyperelliptic": True,
    })
    return PositiveFactorization(genus, tuple(curves) * power, Boundary.CLOSED, None, (record,))


def chain_spin_structure(genus: int) -> QuadraticForm:
    """奇亏格奇链的唯一纤维方向自旋结构：q(a_i) = i mod 2，q(b_i) = 1"""
    values = []
    for i in range(1, genus + 1):
        values.extend((i % 2, 1))
    return QuadraticForm(tuple(values))


def standin_spin_seed(genus: int) -> PositiveFactorization:
    """
    声明自旋的替身种子

    奇链关系（奇亏格 g ≥ 3）带上唯一的自旋结构，再用 t(a_g + b_{g-1}) 共轭，
    使 q(a_g) = 1 而 q(b_g) = 0，这样把 a_g 送到 b_g 的 φ 不保持自旋声明。
    """
    if genus < 3 or genus % 2 == 0:
        raise PreconditionError(f"Spin stand-in needs an odd genus >= 3, got {genus}")
    surface = Surface(genus)
    seed = chain_relation(genus, 2 * genus + 1, name=f"g{genus}-standin")
    seed = FactorizationService.declare_spin(seed, chain_spin_structure(genus))
    shift = Curve(surface.a(genus) + surface.b(genus - 1))
    phi = MappingClassService.from_word(genus, [(shift, 1)], name=f"t(a{genus}+b{genus - 1})")
    conjugated = FactorizationService.conjugate(seed, phi)
    return conjugated.with_record(ProvenanceRecord("seed", {
        "name": f"g{genus}-standin",
        "relatively_minimal": True,
        "hyperelliptic": True,
    }))


# ==================== 注册 ====================

def _chain_entry(fixture_id: str, genus: int, length: int, endo: int, description: str) -> FixtureEntry:
    power = chain_power(genus, length)
    metadata = FixtureMetadata(
        id=fixture_id,
        genus=genus,
        length=length * power,
        description=description,
        hyperelliptic=True,
        endo_signature=endo,
    )
    return FixtureEntry(metadata, lambda: chain_relation(genus, length, power, name=fixture_id))


G1_CHAIN = _chain_entry("g1-chain", 1, 2, -8, "(t_a1 t_b1)^6")
G1_CHAIN3 = _chain_entry("g1-chain3", 1, 3, -8, "(t_c1 t_c2 t_c3)^4 with c1 = c3 = a1, c2 = b1")
G2_CHAIN5 = _chain_entry("g2-chain5", 2, 5, -18, "(t_c1 ... t_c5)^6, hyperelliptic relation")
G2_CHAIN4 = _chain_entry("g2-chain4", 2, 4, -24, "(t_c1 ... t_c4)^10")
G3_CHAIN7 = _chain_entry("g3-chain7", 3, 7, -32, "(t_c1 ... t_c7)^8, synthetic recipe seed")
G9_CHAIN19 = _chain_entry("g9-chain19", 9, 19, -200, "(t_c1 ... t_c19)^20, genus-9 stand-in")

G9_STANDIN = FixtureEntry(
    FixtureMetadata(
        id="g9-standin",
        genus=9,
        length=380,
        description="g9-chain19 declared spin, conjugated by t(a9+b8) so that q(a9) != q(b9)",
        hyperelliptic=True,
        endo_signature=-200,
    ),
    lambda: standin_spin_seed(9),
)
