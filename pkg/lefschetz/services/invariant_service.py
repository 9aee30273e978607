"""
不变量服务 - Euler 示性数、符号差、自旋判定、证书与同胚类型
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np

from lefschetz.core.config import CITATIONS, ROKHLIN_MODULUS, SEPARATING_LOCAL_SIGNATURE
from lefschetz.core.exceptions import (
    BoundaryError,
    DimensionError,
    InconsistentInvariantsError,
    MissingCertificateError,
    NonIntegralSignatureError,
)
from lefschetz.services.algebra import (
    AffineSolution,
    QuadraticForm,
    arf,
    identity_matrix,
    int_matrix,
    kappa,
    lattice_invariant_factors,
    matrix_key,
    rational_nullspace,
    require_symplectic,
    right_multiply_transvection,
    signature_of_symmetric,
    solve_gf2_affine,
    solve_rational,
    spans_lattice,
    standard_label,
    symplectic_form,
    symplectic_inverse,
)
from lefschetz.services.factorization_service import FactorizationService, PositiveFactorization

logger = logging.getLogger(__name__)


class SpinType(str, Enum):
    SPIN = "Spin"
    NOT_SPIN = "NotSpin"
    INCONCLUSIVE = "Inconclusive"


class CertificateKind(str, Enum):
    SIMPLY_CONNECTED = "SimplyConnected"
    PERFECT_MORSE = "PerfectMorse"
    IRREDUCIBILITY = "IrreducibilityProvenance"


# 判定理由
REASON_INFEASIBLE = "no fiberwise spin structure"
REASON_ROKHLIN = "Rokhlin"
REASON_DECLARED = "spin declaration carried through every construction step"
REASON_UNCERTIFIED = "fiberwise spin structure exists but no compositional certificate"
REASON_NOT_SPANNED = "homology not spanned"

# 不改变总空间的构造记录
PROVENANCE_TRANSPARENT = frozenset({"hurwitz", "normalize", "conjugate", "declare_spin", "build"})


@dataclass(frozen=True)
class SpinVerdict:
    verdict: SpinType
    reasons: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {"verdict": self.verdict.value, "reasons": list(self.reasons)}


@dataclass(frozen=True)
class Certificate:
    kind: CertificateKind
    evidence: Dict[str, Any]
    citations: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "evidence": self.evidence, "citations": list(self.citations)}


@dataclass(frozen=True)
class CertificateAttempt:
    """证书签发结果：certificate 为 None 时 reason 说明原因"""
    kind: CertificateKind
    certificate: Optional[Certificate] = None
    reason: Optional[str] = None

    @property
    def issued(self) -> bool:
        return self.certificate is not None


@dataclass(frozen=True)
class HomeoType:
    family: str
    params: Dict[str, int]
    text: str

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, "params": dict(self.params), "text": self.text}


@dataclass
class InvariantReport:
    e: int
    sigma: int
    spin: SpinVerdict
    b_plus: Optional[int] = None
    b_minus: Optional[int] = None
    arf: Optional[int] = None
    homeo_type: Optional[HomeoType] = None
    certificates: List[Certificate] = field(default_factory=list)
    absent_certificates: Dict[str, str] = field(default_factory=dict)

    def certificate(self, kind: CertificateKind) -> Optional[Certificate]:
        return next((c for c in self.certificates if c.kind == kind), None)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "e": self.e,
            "sigma": self.sigma,
            "b_plus": self.b_plus,
            "b_minus": self.b_minus,
            "spin": self.spin.to_dict(),
            "arf": self.arf,
            "homeo_type": self.homeo_type.to_dict() if self.homeo_type else None,
            "certificates": [c.to_dict() for c in self.certificates],
            "absent_certificates": dict(self.absent_certificates),
        }


# ==================== Meyer 上闭链 ====================

def _pairing(x, c) -> Fraction:
    """⟨x, c⟩，x 可以是有理向量"""
    return sum(x[k] * c[k + 1] - x[k + 1] * c[k] for k in range(0, len(c), 2))


@lru_cache(maxsize=65536)
def _transvection_term(key: Tuple[int, ...], c: Tuple[int, ...]) -> int:
    """
    τ(A, T_c) 的快速计算

    V 上的型只有一个方向非零：若 (A⁻¹ − I)x = −c 有解，τ = sign(1 + ⟨x, c⟩)，否则 τ = 0。
    """
    rank = key[0]
    a = int_matrix(np.array(key[1:], dtype=object).reshape(rank, rank).tolist())
    shifted = symplectic_inverse(a) - identity_matrix(rank)
    solution = solve_rational(shifted.tolist(), [-v for v in c])
    if solution is None:
        return 0
    value = 1 + _pairing(solution, c)
    return (value > 0) - (value < 0)


class InvariantService:
    """不变量计算"""

    # ==================== Euler 示性数 ====================

    @staticmethod
    def _require_closed(f: PositiveFactorization, what: str):
        if not f.is_closed:
            raise BoundaryError(f"{what} needs a closed factorization over S², got a relative one")

    @classmethod
    def euler_characteristic(cls, f: PositiveFactorization) -> int:
        """e = 4 − 4g + n"""
        cls._require_closed(f, "Euler characteristic")
        return 4 - 4 * f.genus + f.length

    # ==================== 符号差 ====================

    @staticmethod
    def meyer_cocycle(a, b) -> int:
        """
        Meyer 符号差上闭链 τ(A, B)

        V = {(x, y) : (A⁻¹ − I)x + (B − I)y = 0}，
        配对 (x1 + y1)ᵀ Jᵀ (I − B) y2 对称化后限制到 V，取符号差。

        Raises:
            NonSymplecticError: 输入不是辛矩阵
            DimensionError: 阶数不同
        """
        a = require_symplectic(a)
        b = require_symplectic(b)
        if a.shape != b.shape:
            raise DimensionError(f"Cocycle arguments of sizes {a.shape[0]} and {b.shape[0]}")
        rank = a.shape[0]
        identity = identity_matrix(rank)
        rows = np.hstack([symplectic_inverse(a) - identity, b - identity])
        basis = rational_nullspace(rows.tolist())
        if not basis:
            return 0

        w = symplectic_form(rank // 2).T.dot(identity - b)
        sums = [np.array([v[k] + v[rank + k] for k in range(rank)], dtype=object) for v in basis]
        images = [w.dot(np.array(v[rank:], dtype=object)) for v in basis]
        size = len(basis)
        gram = [[Fraction(0)] * size for _ in range(size)]
        for i in range(size):
            for j in range(size):
                gram[i][j] = (Fraction(sums[i].dot(images[j])) + Fraction(sums[j].dot(images[i]))) / 2
        return signature_of_symmetric(gram)

    @staticmethod
    def transvection_cocycle(a, c) -> int:
        """τ(A, T_c)，按 (A, c) 缓存"""
        if c.is_separating:
            return 0
        return _transvection_term(matrix_key(a), c.cls.coords)

    @classmethod
    def signature(cls, f: PositiveFactorization) -> int:
        """
        σ = −Σ τ(P_{i−1}, T_{c_i}) + Σ λ(c_i)

        P_i 为前缀乘积；λ 对非分离曲线为 0，对分离曲线为 SEPARATING_LOCAL_SIGNATURE。
        """
        cls._require_closed(f, "Signature")
        prefix = identity_matrix(2 * f.genus)
        total = 0
        corrections = 0
        for curve in f.twists:
            if curve.is_separating:
                corrections += SEPARATING_LOCAL_SIGNATURE
            else:
                total += cls.transvection_cocycle(prefix, curve)
                prefix = right_multiply_transvection(prefix, curve)
        sigma = -total + corrections
        logger.debug("Signature of %s: cocycle sum %d, corrections %d", f.name, total, corrections)
        return sigma

    @staticmethod
    def endo_signature(genus: int, n0: int, separating: Optional[Mapping[int, int]] = None) -> int:
        """
        超椭圆纤维化的 Endo 符号差公式

        σ = −(g+1)/(2g+1)·n0 + Σ_h (4h(g−h)/(2g+1) − 1)·n_h

        Raises:
            NonIntegralSignatureError: 结果不是整数（输入不适用）
        """
        if genus < 1 or n0 < 0:
            raise ValueError(f"Invalid Endo input: genus={genus}, n0={n0}")
        counts = dict(separating or {})
        value = Fraction(-(genus + 1) * n0, 2 * genus + 1)
        for h, n_h in counts.items():
            if n_h < 0 or not 1 <= h <= genus // 2:
                raise ValueError(f"Invalid separating count n_{h} = {n_h} at genus {genus}")
            value += (Fraction(4 * h * (genus - h), 2 * genus + 1) - 1) * n_h
        if value.denominator != 1:
            raise NonIntegralSignatureError(f"Endo formula gives {value}, not an integer")
        return int(value)

    @classmethod
    def endo_signature_of(cls, f: PositiveFactorization) -> int:
        n0 = sum(1 for c in f.twists if not c.is_separating)
        return cls.endo_signature(f.genus, n0, f.separating_counts())

    # ==================== 自旋 ====================

    @staticmethod
    def spin_feasibility(f: PositiveFactorization) -> AffineSolution:
        """
        F2 仿射方程组：对每个消没圈 v，Σ v_k q(e_k) = 1 + κ(v)

        分离曲线给出 0 = 1，方程组无解。
        """
        rank = 2 * f.genus
        rows = sorted({c.cls.mod2() for c in f.twists})
        if not rows:
            return solve_gf2_affine(np.zeros((0, rank), dtype=np.uint8), [], rank)
        a = np.array(rows, dtype=np.uint8)
        b = [(1 + kappa(row)) & 1 for row in rows]
        return solve_gf2_affine(a, b, rank)

    @classmethod
    def unique_spin_structure(cls, f: PositiveFactorization) -> Optional[QuadraticForm]:
        """方程组恰有一个解时返回它"""
        solution = cls.spin_feasibility(f)
        if solution.feasible and solution.dimension == 0:
            return QuadraticForm(solution.particular)
        return None

    @classmethod
    def spin_verdict(cls, f: PositiveFactorization, sigma: Optional[int] = None,
                     simply_connected: Optional[bool] = None) -> SpinVerdict:
        """
        三值自旋判定

        1. 纤维方向自旋结构不存在 → NotSpin
        2. σ 不被 16 整除 → 有单连通证书时 NotSpin，否则 Inconclusive
        3. 自旋声明由种子一路保持下来 → Spin
        4. 其余 → Inconclusive
        """
        cls._require_closed(f, "Spin verdict")
        if not cls.spin_feasibility(f).feasible:
            return SpinVerdict(SpinType.NOT_SPIN, (REASON_INFEASIBLE,))
        if sigma is None:
            sigma = cls.signature(f)
        if sigma % ROKHLIN_MODULUS != 0:
            if simply_connected is None:
                simply_connected = cls.simply_connected_certificate(f).issued
            verdict = SpinType.NOT_SPIN if simply_connected else SpinType.INCONCLUSIVE
            return SpinVerdict(verdict, (REASON_ROKHLIN,))
        declared = any(record.kind == "declare_spin" for record in f.provenance)
        if f.spin_decl is not None and declared:
            return SpinVerdict(SpinType.SPIN, (REASON_DECLARED,))
        return SpinVerdict(SpinType.INCONCLUSIVE, (REASON_UNCERTIFIED,))

    # ==================== 证书 ====================

    @classmethod
    def simply_connected_certificate(cls, f: PositiveFactorization) -> CertificateAttempt:
        """
        单连通证书：同调类张成整个格，且前 2g 个扭转恰为已认证的标准曲线 a1, b1, ..., ag, bg
        """
        kind = CertificateKind.SIMPLY_CONNECTED
        cls._require_closed(f, "Simply connected certificate")
        if not FactorizationService.validate(f).valid:
            return CertificateAttempt(kind, reason="validation failed")

        rank = 2 * f.genus
        classes = [c.cls for c in f.twists if not c.is_separating]
        if not spans_lattice(classes, rank):
            return CertificateAttempt(kind, reason=REASON_NOT_SPANNED)
        if f.length < rank:
            return CertificateAttempt(kind, reason=f"fewer than {rank} twists")
        for k in range(rank):
            curve = f.twists[k]
            label = standard_label(k)
            if curve.label != label or not curve.dual_flag or not curve.is_standard(label):
                return CertificateAttempt(kind, reason=f"twist {k + 1} is not the dual curve {label}")

        evidence = {
            "prefix_positions": list(range(1, rank + 1)),
            "prefix_labels": [standard_label(k) for k in range(rank)],
            "invariant_factors": list(lattice_invariant_factors(classes, rank)),
        }
        return CertificateAttempt(kind, Certificate(kind, evidence, (CITATIONS["dual_handles"],)))

    @staticmethod
    def dual_prefix_starts(f: PositiveFactorization) -> List[int]:
        """所有已认证对偶前缀的起点（1 起始）"""
        rank = 2 * f.genus
        starts = []
        position = 0
        while position + rank <= f.length:
            window = f.twists[position:position + rank]
            if all(c.dual_flag and c.label == standard_label(k) and c.is_standard(c.label)
                   for k, c in enumerate(window)):
                starts.append(position + 1)
                position += rank
            else:
                position += 1
        return starts

    @classmethod
    def perfect_morse_certificate(cls, f: PositiveFactorization,
                                  simply_connected: Optional[CertificateAttempt] = None) -> CertificateAttempt:
        """
        完美 Morse 证书：柄数 (1, 0, e−2, 0, 1)

        Raises:
            MissingCertificateError: 没有单连通证书
        """
        if simply_connected is None:
            simply_connected = cls.simply_connected_certificate(f)
        if not simply_connected.issued:
            raise MissingCertificateError(
                f"Perfect Morse certificate needs the simply connected certificate ({simply_connected.reason})"
            )
        e = cls.euler_characteristic(f)
        rank = 2 * f.genus
        counts = [1, 0, e - 2, 0, 1]
        evidence = {
            "handle_counts": counts,
            "total": sum(counts),
            "dual_prefix_starts": cls.dual_prefix_starts(f),
            "cancelled_1_2_pairs": rank,
            "cancelled_2_3_pairs": rank,
            "note": (
                "fiber 2-handle included: Y minus a fiber neighbourhood carries one 0-handle and "
                "l0 + 1 2-handles; counts follow e"
            ),
        }
        kind = CertificateKind.PERFECT_MORSE
        return CertificateAttempt(kind, Certificate(kind, evidence, (CITATIONS["dual_handles"],)))

    @staticmethod
    def irreducibility_provenance(f: PositiveFactorization) -> CertificateAttempt:
        """
        不可约性证书：最近一次纤维和记录显示 f 是至少两个非空、闭、相对极小分解的纤维和

        只越过不改变总空间的记录（Hurwitz、规范化、共轭、自旋声明、构造标记）；
        遇到其他记录即停止，更早的纤维和不再作数。
        """
        kind = CertificateKind.IRREDUCIBILITY
        if not FactorizationService.validate(f).valid:
            return CertificateAttempt(kind, reason="validation failed")
        for record in reversed(f.provenance):
            if record.kind in PROVENANCE_TRANSPARENT:
                continue
            if record.kind not in ("fiber_sum", "twisted_fiber_sum"):
                break
            parts = record.data.get("parts", [])
            good = [p for p in parts if p.get("length", 0) > 0 and p.get("closed") and p.get("relatively_minimal")]
            if len(parts) >= 2 and len(good) == len(parts):
                evidence = {"record": record.kind, "summands": [p.get("name") for p in parts]}
                citations = (CITATIONS["fiber_sum_minimality"], CITATIONS["minimal_irreducible"])
                return CertificateAttempt(kind, Certificate(kind, evidence, citations))
            return CertificateAttempt(kind, reason="last fiber sum has a summand that is not relatively minimal")
        return CertificateAttempt(kind, reason="no fiber sum of relatively minimal summands in provenance")

    # ==================== 同胚类型 ====================

    @staticmethod
    def betti_numbers(e: int, sigma: int) -> Tuple[int, int]:
        """
        b± = (e − 2 ± σ)/2

        Raises:
            InconsistentInvariantsError: 非整数或为负
        """
        b2 = e - 2
        if (b2 + sigma) % 2:
            raise InconsistentInvariantsError(f"e = {e} and sigma = {sigma} have different parity")
        b_plus, b_minus = (b2 + sigma) // 2, (b2 - sigma) // 2
        if b_plus < 0 or b_minus < 0:
            raise InconsistentInvariantsError(f"e = {e}, sigma = {sigma} give b+ = {b_plus}, b- = {b_minus}")
        return b_plus, b_minus

    @classmethod
    def homeomorphism_type(cls, e: int, sigma: int, spin: SpinType, simply_connected: bool) -> Optional[HomeoType]:
        """
        Freedman 分类下的同胚类型；无单连通证书或自旋不确定时为 None
        """
        if not simply_connected or spin == SpinType.INCONCLUSIVE:
            return None
        b_plus, b_minus = cls.betti_numbers(e, sigma)
        b2 = b_plus + b_minus
        if b2 == 0:
            return HomeoType("S4", {}, "S⁴")
        if sigma == 0:
            m = b2 // 2
            if spin == SpinType.SPIN:
                return HomeoType("S2xS2", {"m": m}, f"#_{m}(S²×S²)")
            return HomeoType("CP2#-CP2", {"n": m}, f"#_{m}(CP²#CP̄²)")
        if spin == SpinType.NOT_SPIN:
            return HomeoType("CP2/-CP2", {"b_plus": b_plus, "b_minus": b_minus},
                             f"#_{b_plus} CP² #_{b_minus} CP̄²")
        if sigma % ROKHLIN_MODULUS != 0:
            return None
        e8, h = sigma // 8, (b2 - abs(sigma)) // 2
        return HomeoType("even", {"e8": e8, "h": h}, f"{e8}·E8 ⊕ {h}·H")

    # ==================== 完整报告 ====================

    @classmethod
    def report(cls, f: PositiveFactorization, certify: bool = False) -> InvariantReport:
        """
        完整不变量报告；certify 为真时附带证书内容
        """
        e = cls.euler_characteristic(f)
        sigma = cls.signature(f)
        sc = cls.simply_connected_certificate(f)
        spin = cls.spin_verdict(f, sigma=sigma, simply_connected=sc.issued)

        report = InvariantReport(e=e, sigma=sigma, spin=spin)
        if sc.issued:
            report.b_plus, report.b_minus = cls.betti_numbers(e, sigma)
            report.homeo_type = cls.homeomorphism_type(e, sigma, spin.verdict, True)
        q = f.spin_decl if f.spin_decl is not None else cls.unique_spin_structure(f)
        report.arf = arf(q) if q is not None else None

        if certify:
            attempts = [sc]
            if sc.issued:
                attempts.append(cls.perfect_morse_certificate(f, sc))
            else:
                attempts.append(CertificateAttempt(CertificateKind.PERFECT_MORSE,
                                                   reason="requires SimplyConnected"))
            attempts.append(cls.irreducibility_provenance(f))
            for attempt in attempts:
                if attempt.issued:
                    report.certificates.append(attempt.certificate)
                else:
                    report.absent_certificates[attempt.kind.value] = attempt.reason
        logger.debug("Report for %s: e=%d sigma=%d spin=%s", f.name, e, sigma, spin.verdict.value)
        return report
