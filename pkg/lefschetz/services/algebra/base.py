"""
代数基础类型
曲面、同调类、曲线与二次型

约定：
- 标准基顺序 (a1, b1, a2, b2, ..., ag, bg)
- 相交形式 J 为 2×2 块 [[0, 1], [-1, 0]] 的块对角矩阵
- 所有运算均为精确整数运算，不出现浮点数
"""
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional, Tuple
import re

from lefschetz.core.exceptions import DimensionError, InvalidCurveError


_STANDARD_LABEL = re.compile(r"^([ab])(\d+)$")


def standard_label(index: int) -> str:
    """标准基向量 e_index 的名字：偶数下标为 a，奇数下标为 b"""
    return f"{'a' if index % 2 == 0 else 'b'}{index // 2 + 1}"


def standard_index(label: str, genus: int) -> int:
    """
    标准曲线名 → 坐标下标

    Args:
        label: 如 "a1", "b9"
        genus: 曲面亏格

    Returns:
        0 起始的坐标下标

    Raises:
        DimensionError: 名字不合法或超出亏格
    """
    match = _STANDARD_LABEL.match(label.strip())
    if not match:
        raise DimensionError(f"Not a standard curve name: '{label}'")
    kind, number = match.group(1), int(match.group(2))
    if not 1 <= number <= genus:
        raise DimensionError(f"Curve '{label}' does not exist on a genus-{genus} surface")
    return 2 * (number - 1) + (0 if kind == "a" else 1)


@dataclass(frozen=True)
class Surface:
    """
    闭曲面 Σg
    决定格的秩 2g 和标准基顺序
    """
    genus: int

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 1:
            raise DimensionError(f"Surface genus must be a positive integer, got {self.genus!r}")

    @property
    def rank(self) -> int:
        return 2 * self.genus

    def zero(self) -> "HomologyClass":
        return HomologyClass((0,) * self.rank)

    def basis_vector(self, index: int) -> "HomologyClass":
        if not 0 <= index < self.rank:
            raise DimensionError(f"Basis index {index} out of range for rank {self.rank}")
        return HomologyClass(tuple(1 if k == index else 0 for k in range(self.rank)))

    def standard_class(self, label: str) -> "HomologyClass":
        """按名字取标准基向量，如 surface.standard_class("b2")"""
        return self.basis_vector(standard_index(label, self.genus))

    def a(self, i: int) -> "HomologyClass":
        return self.standard_class(f"a{i}")

    def b(self, i: int) -> "HomologyClass":
        return self.standard_class(f"b{i}")

    def standard_curve(self, label: str, dual_flag: bool = False) -> "Curve":
        return Curve(self.standard_class(label), label=label, dual_flag=dual_flag)

    def standard_labels(self) -> Tuple[str, ...]:
        return tuple(standard_label(k) for k in range(self.rank))


@dataclass(frozen=True)
class HomologyClass:
    """
    H_1(Σg; Z) 中的整系数向量
    """
    coords: Tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(v) for v in self.coords)
        if len(coords) < 2 or len(coords) % 2:
            raise DimensionError(f"Homology class needs an even positive length, got {len(coords)}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, values: Iterable[int]) -> "HomologyClass":
        return cls(tuple(values))

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def genus(self) -> int:
        return len(self.coords) // 2

    def _check_rank(self, other: "HomologyClass"):
        if self.rank != other.rank:
            raise DimensionError(f"Rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        self._check_rank(other)
        return HomologyClass(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: "HomologyClass") -> "HomologyClass":
        self._check_rank(other)
        return HomologyClass(tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> "HomologyClass":
        return HomologyClass(tuple(-x for x in self.coords))

    def scaled(self, k: int) -> "HomologyClass":
        return HomologyClass(tuple(k * x for x in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def content(self) -> int:
        """坐标的最大公约数（零向量为 0）"""
        value = 0
        for x in self.coords:
            value = gcd(value, x)
        return value

    def is_primitive(self) -> bool:
        return self.content() == 1

    def normalized(self) -> "HomologyClass":
        """符号规范化：第一个非零坐标为正"""
        for x in self.coords:
            if x != 0:
                return -self if x < 0 else self
        return self

    def mod2(self) -> Tuple[int, ...]:
        return tuple(x & 1 for x in self.coords)

    def standard_index(self) -> Optional[int]:
        """若规范化后等于某个标准基向量，返回其下标"""
        normalized = self.normalized()
        nonzero = [k for k, x in enumerate(normalized.coords) if x != 0]
        if len(nonzero) == 1 and normalized.coords[nonzero[0]] == 1:
            return nonzero[0]
        return None

    def __str__(self) -> str:
        return "[" + ",".join(str(x) for x in self.coords) + "]"


@dataclass(frozen=True)
class Curve:
    """
    无定向简单闭曲线的同调模型

    - 非分离曲线：cls 为本原向量，按符号规范化存储
    - 分离曲线：cls 为零向量，sep_genus 记录较小一侧的亏格

    label 与 dual_flag 是附加信息，不参与相等比较。
    """
    cls: HomologyClass
    sep_genus: Optional[int] = None
    label: Optional[str] = field(default=None, compare=False)
    dual_flag: bool = field(default=False, compare=False)

    def __post_init__(self):
        cls = self.cls if isinstance(self.cls, HomologyClass) else HomologyClass(tuple(self.cls))
        genus = cls.genus
        if self.sep_genus is None:
            if not cls.is_primitive():
                raise InvalidCurveError(
                    f"Non-separating curve needs a primitive class, got {cls} (content {cls.content()})"
                )
            cls = cls.normalized()
        else:
            if not cls.is_zero():
                raise InvalidCurveError(f"Separating curve must have zero class, got {cls}")
            if not 1 <= self.sep_genus <= genus // 2:
                raise InvalidCurveError(
                    f"sep_genus must lie in 1..{genus // 2} on a genus-{genus} surface, got {self.sep_genus}"
                )
        object.__setattr__(self, "cls", cls)

    @classmethod
    def from_coords(cls, coords: Iterable[int], label: Optional[str] = None, dual_flag: bool = False) -> "Curve":
        return cls(HomologyClass(tuple(coords)), label=label, dual_flag=dual_flag)

    @classmethod
    def separating(cls, genus: int, sep_genus: int, label: Optional[str] = None) -> "Curve":
        return cls(Surface(genus).zero(), sep_genus=sep_genus, label=label)

    @property
    def genus(self) -> int:
        return self.cls.genus

    @property
    def is_separating(self) -> bool:
        return self.sep_genus is not None

    @property
    def name(self) -> str:
        """显示名：有标签用标签，否则用坐标"""
        if self.label:
            return self.label
        if self.is_separating:
            return f"sep{self.sep_genus}"
        return str(self.cls)

    def is_standard(self, label: str) -> bool:
        """类等于名为 label 的标准基向量"""
        index = self.cls.standard_index()
        return not self.is_separating and index is not None and standard_label(index) == label

    def relabeled(self, label: Optional[str], dual_flag: bool = False) -> "Curve":
        return Curve(self.cls, self.sep_genus, label=label, dual_flag=dual_flag)


@dataclass(frozen=True)
class QuadraticForm:
    """
    相交形式的 mod 2 二次加细（曲面上的自旋结构）
    basis_values[k] = q(e_k)
    """
    basis_values: Tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(v) & 1 for v in self.basis_values)
        if len(values) < 2 or len(values) % 2:
            raise DimensionError(f"Quadratic form needs an even positive length, got {len(values)}")
        object.__setattr__(self, "basis_values", values)

    @classmethod
    def zero(cls, genus: int) -> "QuadraticForm":
        return cls((0,) * (2 * genus))

    @property
    def genus(self) -> int:
        return len(self.basis_values) // 2

    def __str__(self) -> str:
        return "".join(str(v) for v in self.basis_values)
