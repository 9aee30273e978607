"""
分解服务 - 正分解、Hurwitz 移动、共轭、纤维和、校验与序列化
"""
import hashlib
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from lefschetz.core.config import LABEL_HASH_LENGTH, LABEL_MAX_DEPTH
from lefschetz.core.exceptions import (
    BoundaryError,
    DimensionError,
    FactorizationFormatError,
    HurwitzIndexError,
    LefschetzError,
    PreconditionError,
    RelationCheckError,
    SpinDeclarationError,
)
from lefschetz.schemas.factorization import (
    FactorizationFile,
    ProvenanceEntry,
    SpinRecord,
    TwistRecord,
)
from lefschetz.services.algebra import (
    Curve,
    HomologyClass,
    QuadraticForm,
    Surface,
    arf,
    identity_matrix,
    is_identity,
    q_eval,
    right_multiply_transvection,
    standard_label,
    transvection_apply,
)
from lefschetz.services.mapping_class_service import MappingClassRep, MappingClassService

logger = logging.getLogger(__name__)


class Boundary(str, Enum):
    """分解的底"""
    CLOSED = "closed"        # 覆盖 S²，乘积必须平凡
    RELATIVE = "relative"    # 覆盖 D²，乘积任意


class Direction(str, Enum):
    """Hurwitz 移动方向"""
    RIGHT = "R"
    LEFT = "L"
    CYCLE = "C"


@dataclass(frozen=True)
class HurwitzStep:
    """调度中的一步；index 从 1 开始，循环移位没有下标"""
    direction: Direction
    index: Optional[int] = None

    def __str__(self) -> str:
        if self.direction == Direction.CYCLE:
            return "C"
        return f"{self.direction.value}{self.index}"


def format_schedule(schedule: Sequence[HurwitzStep]) -> str:
    return ",".join(str(step) for step in schedule)


@dataclass(frozen=True)
class ProvenanceRecord:
    """构造记录"""
    kind: str
    data: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "data": self.data}


@dataclass(frozen=True)
class PositiveFactorization:
    """
    正 Dehn 扭转分解

    相等比较只看亏格、扭转（同调类与 sep_genus）、底和自旋声明；
    标签、对偶标记与构造记录不参与比较。
    """
    genus: int
    twists: Tuple[Curve, ...] = ()
    boundary: Boundary = Boundary.CLOSED
    spin_decl: Optional[QuadraticForm] = None
    provenance: Tuple[ProvenanceRecord, ...] = field(default=(), compare=False)

    def __post_init__(self):
        Surface(self.genus)
        object.__setattr__(self, "twists", tuple(self.twists))
        object.__setattr__(self, "provenance", tuple(self.provenance))
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        for position, curve in enumerate(self.twists, start=1):
            if curve.genus != self.genus:
                raise DimensionError(f"Twist {position} has genus {curve.genus}, expected {self.genus}")
        if self.spin_decl is not None and self.spin_decl.genus != self.genus:
            raise DimensionError(f"Spin declaration has genus {self.spin_decl.genus}, expected {self.genus}")

    @property
    def surface(self) -> Surface:
        return Surface(self.genus)

    @property
    def length(self) -> int:
        return len(self.twists)

    @property
    def is_closed(self) -> bool:
        return self.boundary == Boundary.CLOSED

    @property
    def name(self) -> str:
        """最近一条带名字的构造记录"""
        for record in reversed(self.provenance):
            if record.data.get("name"):
                return str(record.data["name"])
        return "f"

    @property
    def relatively_minimal(self) -> bool:
        """构造记录中是否断言了相对极小性"""
        return any(record.data.get("relatively_minimal") is True for record in self.provenance)

    @cached_property
    def product_matrix(self) -> np.ndarray:
        """M_{c1} ··· M_{cn}"""
        product = identity_matrix(2 * self.genus)
        for curve in self.twists:
            product = right_multiply_transvection(product, curve)
        return product

    def separating_counts(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for curve in self.twists:
            if curve.is_separating:
                counts[curve.sep_genus] = counts.get(curve.sep_genus, 0) + 1
        return counts

    def with_twists(self, twists: Sequence[Curve], *records: ProvenanceRecord) -> "PositiveFactorization":
        return PositiveFactorization(
            self.genus, tuple(twists), self.boundary, self.spin_decl, self.provenance + tuple(records)
        )

    def with_record(self, *records: ProvenanceRecord) -> "PositiveFactorization":
        return self.with_twists(self.twists, *records)


@dataclass
class ValidationReport:
    """校验结果，failures 为空即通过"""
    genus: int
    length: int
    boundary: str
    product_is_identity: bool
    relatively_minimal_asserted: bool
    failures: List[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return {
            "valid": self.valid,
            "genus": self.genus,
            "length": self.length,
            "boundary": self.boundary,
            "product_is_identity": self.product_is_identity,
            "relatively_minimal_asserted": self.relatively_minimal_asserted,
            "failures": list(self.failures),
        }


# ==================== 派生标签 ====================

def _bounded(label: str) -> str:
    if label.count("|") > LABEL_MAX_DEPTH:
        return "h:" + hashlib.sha1(label.encode("utf-8")).hexdigest()[:LABEL_HASH_LENGTH]
    return label


def rewritten_label(name: str, by: str, sign: int) -> str:
    """
    曲线被 T_by^sign 改写后的标签

    历史用 "|+x" / "|-x" 追加；与最后一步互逆时直接撤销。
    """
    token = f"{'+' if sign > 0 else '-'}{by}"
    inverse = f"|{'-' if sign > 0 else '+'}{by}"
    if name.endswith(inverse):
        return name[: -len(inverse)]
    return _bounded(f"{name}|{token}")


def _rewrite(curve: Curve, by: Curve, sign: int) -> Curve:
    """
    T_by^sign(curve)

    同调类不变时原样返回；否则记派生标签。对偶标记随曲线沿袭，
    证书只认标签为字面标准名的曲线，所以只有撤销回原曲线时标记才重新生效。
    """
    if curve.is_separating:
        return curve
    image = transvection_apply(by, curve.cls, sign).normalized()
    if image == curve.cls:
        return curve
    return Curve(image, label=rewritten_label(curve.name, by.name, sign), dual_flag=curve.dual_flag)


# ==================== JSON 定位 ====================

_JSON_WHITESPACE = " \t\n\r"
_JSON_DECODER = json.JSONDecoder()


def format_loc(loc: Sequence[Any]) -> str:
    """("twists", 0, "coords") → twists[0].coords"""
    text = ""
    for part in loc:
        if isinstance(part, int):
            text += f"[{part}]"
        else:
            text += f".{part}" if text else str(part)
    return text or "<root>"


def _skip_whitespace(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in _JSON_WHITESPACE:
        pos += 1
    return pos


def _member_position(text: str, pos: int, key: str) -> Optional[int]:
    """对象（pos 指向 '{'）中 key 对应值的起始位置"""
    pos = _skip_whitespace(text, pos + 1)
    if text[pos] == "}":
        return None
    while True:
        name, pos = _JSON_DECODER.raw_decode(text, pos)
        pos = _skip_whitespace(text, _skip_whitespace(text, pos) + 1)
        if name == key:
            return pos
        _, pos = _JSON_DECODER.raw_decode(text, pos)
        pos = _skip_whitespace(text, pos)
        if text[pos] != ",":
            return None
        pos = _skip_whitespace(text, pos + 1)


def _item_position(text: str, pos: int, index: int) -> Optional[int]:
    """数组（pos 指向 '['）中第 index 项的起始位置"""
    pos = _skip_whitespace(text, pos + 1)
    if text[pos] == "]":
        return None
    for _ in range(index):
        _, pos = _JSON_DECODER.raw_decode(text, pos)
        pos = _skip_whitespace(text, pos)
        if text[pos] != ",":
            return None
        pos = _skip_whitespace(text, pos + 1)
    return pos


def locate_json_line(text: str, loc: Sequence[Any]) -> Optional[int]:
    """
    字段路径 loc 在合法 JSON 文本中的行号（1 起始）

    沿路径逐层定位；某一层找不到（如缺失字段）时返回最近一层容器所在的行。
    文本不是合法 JSON 时返回 None。
    """
    try:
        pos = _skip_whitespace(text, 0)
        for part in loc:
            opener = text[pos]
            if opener == "{" and isinstance(part, str):
                found = _member_position(text, pos, part)
            elif opener == "[" and isinstance(part, int):
                found = _item_position(text, pos, part)
            else:
                found = None
            if found is None:
                break
            pos = found
    except (ValueError, IndexError):
        return None
    return text.count("\n", 0, pos) + 1


class FactorizationService:
    """分解运算"""

    # ==================== 校验 ====================

    @staticmethod
    def validate(f: PositiveFactorization) -> ValidationReport:
        """
        检查分解的所有不变量，失败项记入报告而不抛异常
        """
        # 零类的非分离曲线在 Curve 构造时已被拒绝
        failures = []
        product_ok = is_identity(f.product_matrix)
        if f.is_closed and not product_ok:
            failures.append("relation check failed: product matrix is not the identity")
        if f.spin_decl is not None:
            for position, curve in enumerate(f.twists, start=1):
                if q_eval(f.spin_decl, curve.cls) != 1:
                    failures.append(f"spin declaration: q({curve.name}) = 0 at twist {position}")
                    break
        report = ValidationReport(
            genus=f.genus,
            length=f.length,
            boundary=f.boundary.value,
            product_is_identity=product_ok,
            relatively_minimal_asserted=f.relatively_minimal,
            failures=failures,
        )
        logger.debug("Validated %s: %d twists, %d failures", f.name, f.length, len(failures))
        return report

    # ==================== Hurwitz 移动 ====================

    @staticmethod
    def _move(f: PositiveFactorization, index: int, direction: Direction, step: Optional[int] = None) -> Tuple[Curve, ...]:
        if not 1 <= index < f.length:
            raise HurwitzIndexError(
                f"Hurwitz index {index} out of range for {f.length} twists (need 1 <= i < {f.length})", step=step
            )
        twists = list(f.twists)
        c, d = twists[index - 1], twists[index]
        if direction == Direction.RIGHT:
            twists[index - 1], twists[index] = d, _rewrite(c, d, -1)
        elif direction == Direction.LEFT:
            twists[index - 1], twists[index] = _rewrite(d, c, 1), c
        else:
            raise ValueError(f"Not an elementary move: {direction}")
        return tuple(twists)

    @classmethod
    def hurwitz_move(cls, f: PositiveFactorization, index: int, direction: Direction) -> PositiveFactorization:
        """
        在位置 index（1 起始）做一次基本 Hurwitz 移动

        - 右移 R：(t_c, t_d) → (t_d, t_{T_d⁻¹(c)})
        - 左移 L：(t_c, t_d) → (t_{T_c(d)}, t_c)

        Raises:
            HurwitzIndexError: 下标越界
        """
        direction = Direction(direction)
        twists = cls._move(f, index, direction)
        return f.with_twists(twists, ProvenanceRecord("hurwitz", {"schedule": f"{direction.value}{index}"}))

    @classmethod
    def replay(cls, f: PositiveFactorization, schedule: Sequence[HurwitzStep]) -> PositiveFactorization:
        """
        依次执行调度但不追加构造记录；某一步失败时异常携带步号（1 起始）
        """
        current = f
        for number, step in enumerate(schedule, start=1):
            if step.direction == Direction.CYCLE:
                current = cls._rotate(current)
            else:
                current = PositiveFactorization(
                    current.genus, cls._move(current, step.index, step.direction, step=number),
                    current.boundary, current.spin_decl, current.provenance,
                )
        return current

    @classmethod
    def apply_schedule(cls, f: PositiveFactorization, schedule: Sequence[HurwitzStep]) -> PositiveFactorization:
        """
        执行调度并记入构造记录
        """
        if not schedule:
            return f
        current = cls.replay(f, schedule)
        logger.debug("Applied a %d-step schedule to %s", len(schedule), f.name)
        return current.with_record(ProvenanceRecord("hurwitz", {"schedule": format_schedule(schedule)}))

    @classmethod
    def _rotate(cls, f: PositiveFactorization) -> PositiveFactorization:
        if f.length < 2:
            return f
        first = f.twists[0]
        current = f
        for index in range(1, f.length):
            current = PositiveFactorization(
                current.genus, cls._move(current, index, Direction.RIGHT),
                current.boundary, current.spin_decl, current.provenance,
            )
        moved = current.twists[-1]
        if moved == first:
            current = PositiveFactorization(
                current.genus, current.twists[:-1] + (first,),
                current.boundary, current.spin_decl, current.provenance,
            )
        return current

    @classmethod
    def cyclic_rotation(cls, f: PositiveFactorization) -> PositiveFactorization:
        """
        把第一个因子移到末尾，实现为调度 R1, ..., R(n-1)
        """
        return cls.apply_schedule(f, [HurwitzStep(Direction.CYCLE)])

    @staticmethod
    def rotation_schedule(length: int) -> List[HurwitzStep]:
        return [HurwitzStep(Direction.RIGHT, i) for i in range(1, length)]

    # ==================== 共轭与纤维和 ====================

    @staticmethod
    def conjugate(f: PositiveFactorization, phi: MappingClassRep) -> PositiveFactorization:
        """
        P^φ：每个消没圈替换为 φ(c)，自旋声明随之变换

        Raises:
            DimensionError: 亏格不同
        """
        if phi.genus != f.genus:
            raise DimensionError(f"Cannot conjugate a genus-{f.genus} factorization by a genus-{phi.genus} class")
        twists = tuple(MappingClassService.act_on_curve(phi, c) for c in f.twists)
        spin = MappingClassService.act_on_qform(phi, f.spin_decl) if f.spin_decl is not None else None
        record = ProvenanceRecord("conjugate", {"phi": phi.label, "word": str(phi), "name": f"{f.name}^{phi.label}"})
        return PositiveFactorization(f.genus, twists, f.boundary, spin, f.provenance + (record,))

    @staticmethod
    def _part_summary(f: PositiveFactorization) -> Dict[str, Any]:
        return {
            "name": f.name,
            "length": f.length,
            "closed": f.is_closed,
            "relatively_minimal": f.relatively_minimal,
            "spin_declared": f.spin_decl is not None,
        }

    @classmethod
    def _concatenate(cls, f1: PositiveFactorization, f2: PositiveFactorization, kind: str,
                     spin: Optional[QuadraticForm], extra: Dict[str, Any]) -> PositiveFactorization:
        if f1.genus != f2.genus:
            raise DimensionError(f"Cannot sum genus {f1.genus} with genus {f2.genus}")
        for part in (f1, f2):
            if not part.is_closed:
                raise BoundaryError(f"Fiber sum needs closed factorizations, '{part.name}' is relative")
        parts = [cls._part_summary(f1), cls._part_summary(f2)]
        data = {
            "name": f"({f1.name})#({f2.name})",
            "parts": parts,
            "relatively_minimal": all(p["relatively_minimal"] and p["length"] > 0 for p in parts),
            "spin_matched": spin is not None,
        }
        data.update(extra)
        return PositiveFactorization(
            f1.genus, f1.twists + f2.twists, Boundary.CLOSED, spin, f1.provenance + (ProvenanceRecord(kind, data),)
        )

    @classmethod
    def fiber_sum(cls, f1: PositiveFactorization, f2: PositiveFactorization) -> PositiveFactorization:
        """
        纤维和：扭转拼接；两边自旋声明都存在且相同时保留

        Raises:
            DimensionError: 亏格不同
            BoundaryError: 输入不是闭分解
        """
        spin = f1.spin_decl if f1.spin_decl is not None and f1.spin_decl == f2.spin_decl else None
        return cls._concatenate(f1, f2, "fiber_sum", spin, {})

    @classmethod
    def twisted_fiber_sum(cls, f1: PositiveFactorization, f2: PositiveFactorization,
                          phi: MappingClassRep) -> PositiveFactorization:
        """
        扭纤维和 f1 #_φ f2 = f1 · f2^φ；φ 必须保持自旋声明才保留它
        """
        conjugated = cls.conjugate(f2, phi)
        spin = None
        if f1.spin_decl is not None and f1.spin_decl == f2.spin_decl:
            if MappingClassService.preserves_qform(phi, f1.spin_decl):
                spin = f1.spin_decl
        extra = {"phi": phi.label, "word": str(phi), "spin_preserved": spin is not None}
        result = cls._concatenate(f1, conjugated, "twisted_fiber_sum", spin, extra)
        if f1.spin_decl is not None and spin is None:
            logger.info("Twisted sum by %s drops the spin declaration", phi.label)
        return result

    # ==================== 自旋声明与对偶前缀 ====================

    @staticmethod
    def declare_spin(f: PositiveFactorization, q: QuadraticForm) -> PositiveFactorization:
        """
        附加自旋声明；要求每个消没圈 q(c) = 1

        Raises:
            SpinDeclarationError: 第一个不满足的扭转
        """
        if q.genus != f.genus:
            raise DimensionError(f"Spin declaration of genus {q.genus} on a genus-{f.genus} factorization")
        for position, curve in enumerate(f.twists, start=1):
            if q_eval(q, curve.cls) != 1:
                raise SpinDeclarationError(f"q({curve.name}) = 0 at twist {position}; twist does not preserve q")
        record = ProvenanceRecord("declare_spin", {"q": str(q), "arf": arf(q)})
        return PositiveFactorization(f.genus, f.twists, f.boundary, q, f.provenance + (record,))

    @staticmethod
    def certify_dual_prefix(f: PositiveFactorization) -> PositiveFactorization:
        """
        前 2g 个扭转的类恰为标准基时，贴上 a1, b1, ... 标签并置对偶标记

        Raises:
            PreconditionError: 某个位置不是对应的标准曲线
        """
        surface = f.surface
        if f.length < surface.rank:
            raise PreconditionError(f"Dual prefix needs {surface.rank} twists, factorization has {f.length}")
        prefix = []
        for k in range(surface.rank):
            curve = f.twists[k]
            label = standard_label(k)
            if not curve.is_standard(label):
                raise PreconditionError(f"Twist {k + 1} is {curve.name}, expected {label}")
            prefix.append(curve.relabeled(label, dual_flag=True))
        return PositiveFactorization(
            f.genus, tuple(prefix) + f.twists[surface.rank:], f.boundary, f.spin_decl, f.provenance
        )

    # ==================== 序列化 ====================

    @staticmethod
    def to_file_model(f: PositiveFactorization) -> FactorizationFile:
        twists = [
            TwistRecord(coords=list(c.cls.coords), sep_genus=c.sep_genus, label=c.label, dual=c.dual_flag)
            for c in f.twists
        ]
        spin = SpinRecord(q_basis=list(f.spin_decl.basis_values)) if f.spin_decl is not None else None
        provenance = [ProvenanceEntry(kind=r.kind, data=r.data) for r in f.provenance]
        return FactorizationFile(genus=f.genus, boundary=f.boundary.value, twists=twists, spin=spin,
                                 provenance=provenance)

    @classmethod
    def serialize(cls, f: PositiveFactorization) -> str:
        return cls.to_file_model(f).model_dump_json(indent=2)

    @classmethod
    def deserialize(cls, text: str, check_relation: bool = True) -> PositiveFactorization:
        """
        从 JSON 文本加载

        Args:
            text: 文件内容
            check_relation: 是否拒绝乘积非单位的闭分解与不成立的自旋声明

        Raises:
            FactorizationFormatError: JSON 或字段不合法（带行号/字段定位）
            RelationCheckError: 闭分解的乘积不是单位矩阵
            SpinDeclarationError: 自旋声明不成立
        """
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise FactorizationFormatError(f"Invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}")
        try:
            model = FactorizationFile.model_validate(raw)
        except ValidationError as e:
            errors = e.errors()
            details = "; ".join(
                f"{format_loc(err['loc'])} (line {locate_json_line(text, err['loc'])}): {err['msg']}"
                for err in errors
            )
            loc = tuple(errors[0]["loc"]) if errors else None
            raise FactorizationFormatError(f"Schema violation: {details}", loc=loc)
        try:
            return cls.from_file_model(model, check_relation=check_relation)
        except FactorizationFormatError as e:
            if e.loc is None:
                raise
            raise FactorizationFormatError(f"{e} (line {locate_json_line(text, e.loc)})", loc=e.loc) from e

    @staticmethod
    def from_file_model(model: FactorizationFile, check_relation: bool = True) -> PositiveFactorization:
        rank = 2 * model.genus
        twists = []
        for position, record in enumerate(model.twists):
            if len(record.coords) != rank:
                raise FactorizationFormatError(
                    f"twists[{position}].coords: expected {rank} entries, got {len(record.coords)}",
                    loc=("twists", position, "coords"),
                )
            try:
                twists.append(Curve(HomologyClass(tuple(record.coords)), record.sep_genus,
                                    label=record.label, dual_flag=record.dual))
            except LefschetzError as e:
                raise FactorizationFormatError(f"twists[{position}]: {e}", loc=("twists", position))

        spin = None
        if model.spin is not None:
            if len(model.spin.q_basis) != rank:
                raise FactorizationFormatError(
                    f"spin.q_basis: expected {rank} entries, got {len(model.spin.q_basis)}",
                    loc=("spin", "q_basis"),
                )
            spin = QuadraticForm(tuple(model.spin.q_basis))

        f = PositiveFactorization(
            model.genus, tuple(twists), Boundary(model.boundary), spin,
            tuple(ProvenanceRecord(p.kind, dict(p.data)) for p in model.provenance),
        )
        if check_relation:
            if f.is_closed and not is_identity(f.product_matrix):
                raise RelationCheckError("relation check failed: product of twists is not the identity")
            if spin is not None:
                for position, curve in enumerate(f.twists, start=1):
                    if q_eval(spin, curve.cls) != 1:
                        raise SpinDeclarationError(f"q({curve.name}) = 0 at twist {position}")
        return f
