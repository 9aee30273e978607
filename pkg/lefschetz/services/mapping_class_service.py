"""
映射类服务 - 带符号的 Dehn 扭转词及其辛表示

约定：复合从最右侧因子开始作用（函数复合），
词 [(c1, s1), ..., (cn, sn)] 的矩阵为 M_{c1}^{s1} ··· M_{cn}^{sn}。
"""
import hashlib
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from lefschetz.core.config import LABEL_HASH_LENGTH, LABEL_MAX_DEPTH
from lefschetz.core.exceptions import DimensionError, SpinMismatchError, UnsupportedOperationError
from lefschetz.services.algebra import (
    Curve,
    HomologyClass,
    QuadraticForm,
    Surface,
    apply_matrix,
    arf,
    identity_matrix,
    intersection,
    matrices_equal,
    require_symplectic,
    right_multiply_transvection,
    standard_label,
    transvection_matrix,
    twist_qform,
)

logger = logging.getLogger(__name__)

TwistLetter = Tuple[Curve, int]


# ==================== 标签 ====================

def derived_label(inner: str, operator: str) -> str:
    """
    派生标签 operator(inner)，嵌套层数超过上限后截断为哈希
    """
    label = f"{operator}({inner})"
    if label.count("(") > LABEL_MAX_DEPTH:
        digest = hashlib.sha1(label.encode("utf-8")).hexdigest()[:LABEL_HASH_LENGTH]
        return f"h:{digest}"
    return label


def letter_text(curve: Curve) -> str:
    """扭转词中一个字母的曲线写法：标准曲线用名字，其余用坐标"""
    if curve.label and curve.is_standard(curve.label):
        return curve.label
    index = curve.cls.standard_index()
    if index is not None:
        return standard_label(index)
    return str(curve.cls)


@dataclass(frozen=True)
class MappingClassRep:
    """
    映射类：带符号扭转词 + 缓存的整数辛矩阵
    """
    genus: int
    word: Tuple[TwistLetter, ...] = ()
    name: Optional[str] = field(default=None, compare=False)
    matrix: np.ndarray = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        word = tuple((curve, int(sign)) for curve, sign in self.word)
        product = identity_matrix(2 * self.genus)
        for curve, sign in word:
            if sign not in (1, -1):
                raise ValueError(f"Twist sign must be +1 or -1, got {sign}")
            if curve.genus != self.genus:
                raise DimensionError(f"Curve of genus {curve.genus} in a genus-{self.genus} word")
            product = right_multiply_transvection(product, curve, sign)
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "matrix", product)

    @property
    def surface(self) -> Surface:
        return Surface(self.genus)

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def label(self) -> str:
        return self.name or "f"

    def inverse(self) -> "MappingClassRep":
        word = tuple((curve, -sign) for curve, sign in reversed(self.word))
        name = f"{self.name}^-1" if self.name else None
        return MappingClassRep(self.genus, word, name=name)

    def __str__(self) -> str:
        if not self.word:
            return "id"
        return "*".join(f"{'~' if sign < 0 else ''}t({letter_text(curve)})" for curve, sign in self.word)


class MappingClassService:
    """映射类运算"""

    # ==================== 构造 ====================

    @staticmethod
    def identity(genus: int) -> MappingClassRep:
        return MappingClassRep(genus, (), name="id")

    @staticmethod
    def twist(curve: Curve, sign: int = 1) -> MappingClassRep:
        return MappingClassRep(curve.genus, ((curve, sign),))

    @staticmethod
    def from_word(genus: int, word: Sequence[TwistLetter], name: Optional[str] = None) -> MappingClassRep:
        return MappingClassRep(genus, tuple(word), name=name)

    # ==================== 复合与作用 ====================

    @staticmethod
    def compose(f: MappingClassRep, h: MappingClassRep) -> MappingClassRep:
        """
        f ∘ h（先作用 h）

        Raises:
            DimensionError: 亏格不同
        """
        if f.genus != h.genus:
            raise DimensionError(f"Cannot compose genus {f.genus} with genus {h.genus}")
        name = None
        if f.name and h.name:
            name = f"{f.name}*{h.name}"
        return MappingClassRep(f.genus, f.word + h.word, name=name)

    @staticmethod
    def act_on_class(f: MappingClassRep, x: HomologyClass) -> HomologyClass:
        return apply_matrix(f.matrix, x)

    @staticmethod
    def act_on_curve(f: MappingClassRep, c: Curve) -> Curve:
        """
        像曲线 f(c)

        像等于标准基向量时贴标准标签，否则记派生标签 "f(c)"；dual_flag 清除。
        """
        if f.genus != c.genus:
            raise DimensionError(f"Mapping class of genus {f.genus} cannot act on a genus-{c.genus} curve")
        if c.is_separating:
            return Curve(c.cls, c.sep_genus, label=derived_label(c.name, f.label))
        image = apply_matrix(f.matrix, c.cls).normalized()
        index = image.standard_index()
        label = standard_label(index) if index is not None else derived_label(c.name, f.label)
        return Curve(image, label=label)

    @staticmethod
    def act_on_qform(f: MappingClassRep, q: QuadraticForm) -> QuadraticForm:
        """
        q′ = q ∘ M_f⁻¹，逐个扭转更新（最右侧先作用）
        """
        if f.genus != q.genus:
            raise DimensionError(f"Mapping class of genus {f.genus} cannot act on a genus-{q.genus} form")
        for curve, _ in reversed(f.word):
            q = twist_qform(q, curve)
        return q

    @classmethod
    def preserves_qform(cls, f: MappingClassRep, q: QuadraticForm) -> bool:
        return cls.act_on_qform(f, q) == q

    # ==================== 自旋结构轨道 ====================

    @classmethod
    def spin_conjugator(cls, q: QuadraticForm, target: QuadraticForm,
                        fixing: Optional[int] = None) -> MappingClassRep:
        """
        构造映射类 φ，使 q ∘ M_φ⁻¹ = target

        两个二次型各自化到同一个标准形再复合。Arf 不变量是唯一的轨道不变量；
        给出 fixing 时只用与 e_fixing 正交的曲线，φ 精确固定 e_fixing，
        此时 q 与 target 在 e_fixing 上的取值也必须相同。

        Args:
            q: 起点自旋结构
            target: 目标自旋结构
            fixing: 要固定的标准基下标（0 起始），None 表示不固定

        Raises:
            DimensionError: 亏格不同
            SpinMismatchError: Arf 不变量不同，或在 e_fixing 上取值不同
            UnsupportedOperationError: 固定 e_fixing 后两者不在同一轨道（只在低亏格出现）
        """
        if q.genus != target.genus:
            raise DimensionError(f"Cannot match a genus-{q.genus} spin structure with genus {target.genus}")
        if arf(q) != arf(target):
            raise SpinMismatchError(
                f"Arf invariants differ: Arf({q}) = {arf(q)}, Arf({target}) = {arf(target)}"
            )
        if fixing is not None and q.basis_values[fixing] != target.basis_values[fixing]:
            raise SpinMismatchError(
                f"Spin structures {q} and {target} differ on the fixed class {standard_label(fixing)}"
            )
        to_normal = cls._spin_normal_form(q, fixing)
        from_normal = cls._spin_normal_form(target, fixing).inverse()
        phi = MappingClassRep(q.genus, from_normal.word + to_normal.word, name="spin")
        if cls.act_on_qform(phi, q) != target:
            fixed = f" fixing {standard_label(fixing)}" if fixing is not None else ""
            raise UnsupportedOperationError(f"No conjugator{fixed} sends {q} to {target}")
        logger.debug("Spin conjugator %s -> %s: %d twists", q, target, phi.length)
        return phi

    @staticmethod
    def _spin_normal_form(q: QuadraticForm, fixing: Optional[int]) -> MappingClassRep:
        """
        把 q 化为标准形的扭转词

        固定块（e_fixing 所在块）化为 (q(e), 1)，其余块化为 (1,1)，
        块数奇偶由 Arf 决定时把剩下的一个 (0,0) 块放在第一个其余块上。
        用到的扭转 t_c 满足 q(c) = 0，它把与 c 奇配对的基向量取值翻转。
        """
        surface = Surface(q.genus)
        vector = surface.basis_vector
        current = q
        letters: List[Curve] = []

        def value(index: int) -> int:
            return current.basis_values[index]

        def twist(cls_: HomologyClass):
            nonlocal current
            curve = Curve(cls_)
            current = twist_qform(current, curve)
            letters.append(curve)

        def is_hyperbolic(block: int) -> bool:
            return value(2 * block) == 1 and value(2 * block + 1) == 1

        if fixing is None:
            # 先让 q(a1) = 1，再固定 a1
            if value(0) == 0:
                if value(1) == 1:
                    twist(vector(0))
                twist(vector(1))
            fixing = 0

        home = fixing // 2
        others = [j for j in range(surface.genus) if j != home]
        e, o = fixing, fixing ^ 1

        if value(o) == 0 and others:
            if value(e) == 0 and len(others) >= 2 and all(is_hyperbolic(j) for j in others):
                # (1,1)(1,1) → (1,0)(1,0)
                twist(vector(2 * others[0]) + vector(2 * others[1]))
            j = next((j for j in others if value(e) == 1 or not is_hyperbolic(j)), None)
            if j is not None:
                s = 2 * j + e % 2
                t = s ^ 1
                if value(s) != value(e):
                    if value(t) == 0:
                        twist(vector(t))
                    else:
                        twist(vector(s))
                        twist(vector(t))
                # q(e + s) = 0，翻转 o 与 t
                twist(vector(e) + vector(s))

        for j in others:
            a, b = 2 * j, 2 * j + 1
            if value(a) == 0 and value(b) == 1:
                twist(vector(a))
            elif value(a) == 1 and value(b) == 0:
                twist(vector(b))

        zeros = [j for j in others if value(2 * j) == 0]
        while len(zeros) >= 2:
            l, j = zeros.pop(), zeros.pop()
            twist(vector(2 * j + 1))
            twist(vector(2 * l + 1))
            twist(vector(2 * j) + vector(2 * l))
        if zeros and zeros[0] != others[0]:
            j, first = zeros[0], others[0]
            twist(vector(2 * j))
            twist(vector(2 * first + 1) + vector(2 * j + 1))
            twist(vector(2 * first))

        return MappingClassRep(q.genus, tuple((curve, 1) for curve in reversed(letters)))

    # ==================== 曲线传输 ====================

    @classmethod
    def curve_transport(cls, c: Curve, d: Curve) -> MappingClassRep:
        """
        构造把 [c] 送到 ±[d] 的映射类

        策略：
        1. c = d：恒等
        2. |⟨c,d⟩| = 1：两扭转词 t_c t_d
        3. 候选辅助类 e ∈ {a_k, b_k, a_k+b_k, b_j+b_k}（固定顺序）：四扭转词
        4. 以上都不行时，把 c、d 分别约化到 a1 再复合

        Raises:
            UnsupportedOperationError: 分离曲线
            DimensionError: 亏格不同
        """
        if c.is_separating or d.is_separating:
            raise UnsupportedOperationError("Curve transport needs non-separating curves")
        if c.genus != d.genus:
            raise DimensionError(f"Cannot transport a genus-{c.genus} curve to genus {d.genus}")
        genus = c.genus
        name = f"T[{c.name}->{d.name}]"

        if c.cls == d.cls:
            f = MappingClassRep(genus, (), name=name)
        elif abs(intersection(c.cls, d.cls)) == 1:
            f = MappingClassRep(genus, ((c, 1), (d, 1)), name=name)
        else:
            e = cls._auxiliary_curve(c, d)
            if e is not None:
                f = MappingClassRep(genus, ((e, 1), (d, 1), (c, 1), (e, 1)), name=name)
            else:
                logger.debug("No auxiliary class for %s -> %s, using lattice reduction", c.name, d.name)
                to_c = cls._reduction_word(c.cls, 0)
                to_d = cls._reduction_word(d.cls, 0)
                word = tuple((curve, -sign) for curve, sign in to_d) + tuple(reversed(to_c))
                f = MappingClassRep(genus, word, name=name)

        image = apply_matrix(f.matrix, c.cls).normalized()
        if image != d.cls:
            raise UnsupportedOperationError(f"Transport {c.name} -> {d.name} failed verification")
        return f

    @staticmethod
    def _auxiliary_curve(c: Curve, d: Curve) -> Optional[Curve]:
        """在固定候选集中找 |⟨c,e⟩| = |⟨e,d⟩| = 1 的 e"""
        surface = Surface(c.genus)
        candidates: List[HomologyClass] = []
        for k in range(1, surface.genus + 1):
            candidates.extend((surface.a(k), surface.b(k), surface.a(k) + surface.b(k)))
        for j in range(1, surface.genus + 1):
            for k in range(j + 1, surface.genus + 1):
                candidates.append(surface.b(j) + surface.b(k))
        for e in candidates:
            if abs(intersection(c.cls, e)) == 1 and abs(intersection(e, d.cls)) == 1:
                return Curve(e)
        return None

    # ==================== 扭转幂 ====================

    @classmethod
    def twist_power(cls, curve: Curve, power: int) -> List[TwistLetter]:
        """
        T_c^power 的短扭转词

        找到与 u = [c] 正交、且 span{u, e} 饱和的标准基向量 e 时，
        T_{αu+βe} 两两交换，作用按 (α², αβ, β²) 相加。于是
        T_{ku+e} T_{ku-e} T_e⁻² = T_u^{2k²}，把 |power| 的一半拆成平方和，
        词长随 |power| 对数增长。亏格 1 没有这样的 e，只能逐个写出。

        Returns:
            带符号字母列表（字母两两交换，顺序无关）
        """
        if power == 0:
            return []
        sign = 1 if power > 0 else -1
        linear = [(curve, sign)] * abs(power)
        partner = None if curve.is_separating else cls._isotropic_partner(curve.cls)
        if partner is None:
            return linear

        u = curve.cls
        half, odd = divmod(abs(power), 2)
        letters: List[TwistLetter] = []
        squares = 0
        while half:
            k = math.isqrt(half)
            letters.append((Curve(u.scaled(k) + partner), sign))
            letters.append((Curve(u.scaled(k) - partner), sign))
            half -= k * k
            squares += 1
        letters.extend([(Curve(partner), -sign)] * (2 * squares))
        letters.extend([(curve, sign)] * odd)
        return letters if len(letters) < len(linear) else linear

    @staticmethod
    def _isotropic_partner(u: HomologyClass) -> Optional[HomologyClass]:
        """⟨u, e_j⟩ = 0 且其余坐标互素的标准基向量 e_j"""
        coords = u.coords
        for j in range(len(coords)):
            if coords[j ^ 1] != 0:
                continue
            if math.gcd(*(x for k, x in enumerate(coords) if k != j)) == 1:
                return HomologyClass(tuple(1 if k == j else 0 for k in range(len(coords))))
        return None

    # ==================== 格约化 ====================

    @classmethod
    def _reduction_word(cls, v: HomologyClass, lead: int) -> List[TwistLetter]:
        """
        把本原向量 v（只在第 lead 块及之后的块上有分量）精确送到 a_{lead+1} 的扭转序列

        返回按作用顺序排列的 (曲线, 符号) 列表。
        块内用 T_a、T_b 做辗转相除；跨块用
        T_{a_L+a_k} T_{a_L}⁻¹ T_{a_k}⁻¹ 与 T_{b_L+b_k} T_{b_L}⁻¹ T_{b_k}⁻¹。
        """
        surface = Surface(v.genus)
        x = list(v.coords)
        steps: List[TwistLetter] = []

        def apply(u: HomologyClass, power: int):
            if power == 0:
                return
            # T_u^p x = x + p⟨x,u⟩u
            pairing = intersection(HomologyClass(tuple(x)), u)
            for k, value in enumerate(u.coords):
                x[k] += power * pairing * value
            steps.extend(cls.twist_power(Curve(u), power))

        def block_to_a(k: int):
            # 第 k 块化为 (r, 0)
            a, b = surface.a(k + 1), surface.b(k + 1)
            while x[2 * k + 1] != 0:
                p, q = x[2 * k], x[2 * k + 1]
                if p == 0:
                    apply(a, 1)
                    continue
                apply(b, -(q // p))
                p, q = x[2 * k], x[2 * k + 1]
                if q == 0:
                    break
                apply(a, p // q)

        a_lead, b_lead = surface.a(lead + 1), surface.b(lead + 1)
        block_to_a(lead)
        for k in range(lead + 1, surface.genus):
            if x[2 * k] == 0 and x[2 * k + 1] == 0:
                continue
            a_k, b_k = surface.a(k + 1), surface.b(k + 1)
            block_to_a(k)
            # (r, 0) → (0, r)
            apply(b_k, 1)
            apply(a_k, 1)

            def cross_a(m: int):
                # p_lead -= m * q_k
                apply(a_lead + a_k, m)
                apply(a_lead, -m)
                apply(a_k, -m)

            def cross_b(m: int):
                # q_k += m * p_lead
                apply(b_lead + b_k, m)
                apply(b_lead, -m)
                apply(b_k, -m)

            while x[2 * k + 1] != 0:
                p, s = x[2 * lead], x[2 * k + 1]
                if p == 0:
                    cross_a(-1)
                    continue
                cross_b(-(s // p))
                p, s = x[2 * lead], x[2 * k + 1]
                if s == 0:
                    break
                cross_a(p // s)

        if x[2 * lead] == -1:
            # (T_a T_b)^3 = -I
            for _ in range(3):
                apply(b_lead, 1)
                apply(a_lead, 1)
        return steps

    # ==================== 辛矩阵分解 ====================

    @classmethod
    def transvection_factorization(cls, m) -> MappingClassRep:
        """
        把整数辛矩阵写成带符号的扭转词

        逐块把 C·a_i、C·b_i 送回 a_i、b_i，最后 C = I，原矩阵是所用扭转逆序取逆。

        Raises:
            NonSymplecticError: 输入不是辛矩阵
        """
        matrix = require_symplectic(m)
        rank = matrix.shape[0]
        genus = rank // 2
        surface = Surface(genus)

        single = cls._single_twist(matrix)
        if single is not None:
            return single

        current = matrix.copy()
        applied: List[TwistLetter] = []

        def left_apply(letters: Sequence[TwistLetter]):
            nonlocal current
            for curve, sign in letters:
                current = transvection_matrix(curve, sign).dot(current)
                applied.append((curve, sign))

        for i in range(genus):
            a_i, b_i = surface.a(i + 1), surface.b(i + 1)
            column = HomologyClass(tuple(int(v) for v in current[:, 2 * i]))
            left_apply(cls._reduction_word(column, i))

            w = [int(v) for v in current[:, 2 * i + 1]]
            shift = w[2 * i]
            if shift:
                left_apply(cls.twist_power(Curve(a_i), shift))
            rest = HomologyClass(tuple(int(v) for v in current[:, 2 * i + 1])) - b_i
            if not rest.is_zero():
                left_apply([(Curve(a_i + rest), 1), (Curve(a_i), -1)])

        if not matrices_equal(current, identity_matrix(rank)):
            raise UnsupportedOperationError("Transvection factorization did not reach the identity")

        word = tuple((curve, -sign) for curve, sign in applied)
        result = MappingClassRep(genus, word)
        if not matrices_equal(result.matrix, matrix):
            raise UnsupportedOperationError("Transvection factorization failed verification")
        logger.debug("Factored a rank-%d symplectic matrix into %d twists", rank, len(word))
        return result

    @staticmethod
    def _single_twist(matrix: np.ndarray) -> Optional[MappingClassRep]:
        """单位矩阵 → 空词；单个横截变换 T_c^{±1} → 单字母词"""
        rank = matrix.shape[0]
        genus = rank // 2
        delta = matrix - identity_matrix(rank)
        if not any(delta.flat):
            return MappingClassRep(genus, ())
        column = next(j for j in range(rank) if any(delta[:, j]))
        candidate = HomologyClass(tuple(int(v) for v in delta[:, column]))
        content = candidate.content()
        curve = Curve(HomologyClass(tuple(v // content for v in candidate.coords)))
        for sign in (1, -1):
            word = ((curve, sign),)
            if matrices_equal(MappingClassRep(genus, word).matrix, matrix):
                return MappingClassRep(genus, word)
        return None
