"""
构造服务 - 共轭叠加、对偶前缀规范化、纤维和构造与增长
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from lefschetz.core.exceptions import PreconditionError, SpinMismatchError
from lefschetz.services.algebra import Curve, QuadraticForm, Surface, arf, standard_label
from lefschetz.services.factorization_service import (
    Direction,
    FactorizationService,
    HurwitzStep,
    PositiveFactorization,
    ProvenanceRecord,
    format_schedule,
)
from lefschetz.services.invariant_service import InvariantService
from lefschetz.services.mapping_class_service import MappingClassRep, MappingClassService

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RecipeConfig:
    """
    配方参数

    Attributes:
        seed: 闭种子分解
        distinguished_cycle: 非分离消没圈 c1 的位置（1 起始）
        copies: 共轭个数；None 表示 2g 个（φ_i, ψ_i 交替），否则按覆盖标准基贪心选择
        assert_sigma_zero: 声明 σ(seed) = 0，此时要求 g ≥ 3
        match_spin: 把每个共轭的自旋声明对齐到对偶前缀要求的二次型，叠加保留自旋声明
    """
    seed: PositiveFactorization
    distinguished_cycle: int = 1
    copies: Optional[int] = None
    assert_sigma_zero: bool = False
    match_spin: bool = False

    def __post_init__(self):
        if not self.seed.is_closed:
            raise PreconditionError("Recipe seed must be a closed factorization")
        if not 1 <= self.distinguished_cycle <= self.seed.length:
            raise PreconditionError(
                f"Distinguished cycle {self.distinguished_cycle} out of range for {self.seed.length} twists"
            )
        if self.cycle.is_separating:
            raise PreconditionError(
                f"Distinguished cycle {self.distinguished_cycle} is separating; a non-separating cycle is required"
            )
        if self.copies is not None and self.copies < 1:
            raise PreconditionError(f"copies must be positive, got {self.copies}")
        if self.assert_sigma_zero and self.seed.genus < 3:
            raise PreconditionError(f"sigma = 0 needs genus >= 3, seed has genus {self.seed.genus}")

    @property
    def cycle(self) -> Curve:
        return self.seed.twists[self.distinguished_cycle - 1]


@dataclass(frozen=True)
class RecipeProjection:
    """配方的算术预测"""
    genus: int
    seed_length: int
    copies: int
    n_y: int
    e_y: int
    sigma_y: int
    suffix_length: int
    n_z: int
    e_z: int
    sigma_z: int
    b2_z: int
    growth_e: Tuple[int, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "genus": self.genus,
            "seed_length": self.seed_length,
            "copies": self.copies,
            "n_Y": self.n_y,
            "e_Y": self.e_y,
            "sigma_Y": self.sigma_y,
            "suffix_length": self.suffix_length,
            "n_Z": self.n_z,
            "e_Z": self.e_z,
            "sigma_Z": self.sigma_z,
            "b2_Z": self.b2_z,
            "growth_e": list(self.growth_e),
        }


class ConstructionService:
    """配方流水线"""

    # ==================== 共轭叠加 ====================

    @staticmethod
    def dual_prefix_spin_structure(genus: int) -> QuadraticForm:
        """对偶前缀 t_{a1} t_{b1} ··· t_{ag} t_{bg} 要求的自旋结构：每个标准基类取值 1，Arf = g mod 2"""
        return QuadraticForm((1,) * (2 * genus))

    @classmethod
    def spin_target(cls, seed: PositiveFactorization) -> QuadraticForm:
        """
        叠加保持自旋声明时的目标二次型

        Raises:
            PreconditionError: 种子没有自旋声明，或 Arf 不变量与对偶前缀要求的不同
        """
        q = seed.spin_decl
        if q is None:
            raise PreconditionError(f"Spin-matched stack needs a declared spin structure on {seed.name}")
        target = cls.dual_prefix_spin_structure(seed.genus)
        if arf(q) != arf(target):
            raise PreconditionError(
                f"Arf invariant mismatch: {seed.name} declares q = {q} with Arf {arf(q)}, "
                f"but the dual prefix at genus {seed.genus} needs Arf {arf(target)}; "
                f"no conjugate of the seed carries a matching spin structure"
            )
        return target

    @staticmethod
    def _transports(cycle: Curve, spin: Optional[QuadraticForm] = None,
                    target: Optional[QuadraticForm] = None) -> List[Tuple[str, MappingClassRep]]:
        """
        φ_i: c1 → a_i，ψ_i: c1 → b_i，按 a1, b1, ..., ag, bg 排列

        给出 spin 与 target 时，每个传输再复合一个固定目标基向量的自旋共轭，
        使 spin 被送到 target。
        """
        surface = Surface(cycle.genus)
        result = []
        for k in range(surface.rank):
            label = standard_label(k)
            target_curve = surface.standard_curve(label)
            phi = MappingClassService.curve_transport(cycle, target_curve)
            if spin is not None and target is not None:
                moved = MappingClassService.act_on_qform(phi, spin)
                fix = MappingClassService.spin_conjugator(moved, target, fixing=k)
                phi = MappingClassService.compose(fix, phi)
            name = f"{'phi' if k % 2 == 0 else 'psi'}{k // 2 + 1}"
            result.append((label, MappingClassRep(phi.genus, phi.word, name=name)))
        return result

    @classmethod
    def build_conjugate_stack(cls, cfg: RecipeConfig) -> PositiveFactorization:
        """
        P^{φ1} P^{ψ1} ··· P^{φg} P^{ψg}

        copies 为 None 时使用全部 2g 个共轭；否则按顺序只取还没被覆盖的标准基对应的共轭，
        不足 copies 个时用剩余共轭补齐。

        Raises:
            PreconditionError: copies 个共轭覆盖不了全部标准基；match_spin 时 Arf 不变量不匹配
        """
        seed = cfg.seed
        if cfg.assert_sigma_zero:
            sigma = InvariantService.signature(seed)
            if sigma != 0:
                raise PreconditionError(f"Seed was asserted to have sigma = 0 but sigma = {sigma}")
        target = cls.spin_target(seed) if cfg.match_spin else None
        transports = cls._transports(cfg.cycle, seed.spin_decl, target)
        rank = 2 * seed.genus

        if cfg.copies is None:
            chosen = transports
        else:
            chosen, covered = [], set()
            for index, (label, phi) in enumerate(transports):
                if index in covered:
                    continue
                chosen.append((label, phi))
                covered |= cls._covered_indices(FactorizationService.conjugate(seed, phi))
                if len(covered) == rank:
                    break
            if len(chosen) > cfg.copies or len(covered) < rank:
                raise PreconditionError(
                    f"{cfg.copies} conjugates do not cover the standard basis (need {len(chosen)})"
                )
            for item in transports:
                if len(chosen) >= cfg.copies:
                    break
                if item not in chosen:
                    chosen.append(item)

        conjugates = [FactorizationService.conjugate(seed, phi) for _, phi in chosen]
        twists = tuple(c for part in conjugates for c in part.twists)
        spin = conjugates[0].spin_decl if conjugates else None
        if spin is not None and any(part.spin_decl != spin for part in conjugates):
            spin = None
        if cfg.match_spin and spin is None:
            raise SpinMismatchError(f"Spin-matched conjugates of {seed.name} disagree on the spin structure")
        parts = [{
            "name": f"{seed.name}^{phi.name}",
            "length": seed.length,
            "closed": True,
            "relatively_minimal": seed.relatively_minimal,
            "spin_declared": part.spin_decl is not None,
        } for (_, phi), part in zip(chosen, conjugates)]
        record = ProvenanceRecord("fiber_sum", {
            "name": "Y",
            "construction": "conjugate_stack",
            "distinguished_cycle": cfg.distinguished_cycle,
            "conjugators": {phi.name: str(phi) for _, phi in chosen},
            "parts": parts,
            "relatively_minimal": seed.relatively_minimal,
            "spin_matched": spin is not None,
            "spin_target": str(target) if target is not None else None,
        })
        stack = PositiveFactorization(seed.genus, twists, seed.boundary, spin, seed.provenance + (record,))
        logger.info("Conjugate stack: %d conjugates of %d twists -> %d twists",
                    len(chosen), seed.length, stack.length)
        return stack

    @staticmethod
    def _covered_indices(f: PositiveFactorization) -> set:
        return {c.cls.standard_index() for c in f.twists
                if not c.is_separating and c.cls.standard_index() is not None}

    # ==================== 对偶前缀 ====================

    @staticmethod
    def normalize_to_dual_prefix(f: PositiveFactorization) -> Tuple[PositiveFactorization, List[HurwitzStep]]:
        """
        Hurwitz 改写为 t_{a1} t_{b1} ··· t_{ag} t_{bg} P0

        对每个 k，取位置 ≥ k 的最左一个类为 e_k 的扭转，用右移 R_p, R_{p−1}, ..., R_{k+1}
        把它拉到位置 k：被拉的曲线不变，经过的因子被共轭。

        Returns:
            (改写并认证前缀后的分解, 调度)

        Raises:
            PreconditionError: 某个标准基类找不到
        """
        surface = f.surface
        current = f
        schedule: List[HurwitzStep] = []
        for k in range(surface.rank):
            target = surface.basis_vector(k)
            position = next(
                (p for p in range(k, current.length)
                 if not current.twists[p].is_separating and current.twists[p].cls == target),
                None,
            )
            if position is None:
                raise PreconditionError(
                    f"No twist with class {standard_label(k)} = {target} at position >= {k + 1}"
                )
            steps = [HurwitzStep(Direction.RIGHT, j) for j in range(position, k, -1)]
            current = FactorizationService.replay(current, steps)
            schedule.extend(steps)

        current = current.with_record(ProvenanceRecord("normalize", {
            "schedule": format_schedule(schedule),
            "moves": len(schedule),
            "suffix_length": current.length - surface.rank,
        }))
        logger.info("Dual prefix normalization of %s: %d moves, suffix length %d",
                    f.name, len(schedule), current.length - surface.rank)
        return FactorizationService.certify_dual_prefix(current), schedule

    @staticmethod
    def has_basis_classes(f: PositiveFactorization) -> bool:
        present = {c.cls for c in f.twists if not c.is_separating}
        return all(f.surface.basis_vector(k) in present for k in range(f.surface.rank))

    # ==================== 构造 ====================

    @classmethod
    def build_Z(cls, y: PositiveFactorization) -> PositiveFactorization:
        """
        Z = Y #_F Y，Y 先规范到对偶前缀

        e(Z) = 2e(Y) + 4g − 4，σ(Z) = 2σ(Y)
        """
        normalized, _ = cls.normalize_to_dual_prefix(y)
        z = FactorizationService.fiber_sum(normalized, normalized)
        z = z.with_record(ProvenanceRecord("build", {"name": "Z", "recipe": "Z"}))
        cls._log_certificates(z)
        return z

    @classmethod
    def build_Z_prime(cls, y: PositiveFactorization, x_prime: PositiveFactorization,
                      require_spin: bool = False) -> PositiveFactorization:
        """
        Z′ = (Y #_F X′) #_F Y，P′ 插在两段对偶前缀之间

        Raises:
            SpinMismatchError: require_spin 时三部分的自旋声明不一致
        """
        if require_spin and (y.spin_decl is None or y.spin_decl != x_prime.spin_decl):
            raise SpinMismatchError("Z' with spin output needs matching spin declarations on Y and X'")
        normalized, _ = cls.normalize_to_dual_prefix(y)
        inner = FactorizationService.fiber_sum(normalized, x_prime)
        z = FactorizationService.fiber_sum(inner, normalized)
        z = z.with_record(ProvenanceRecord("build", {"name": "Z'", "recipe": "Z_prime"}))
        cls._log_certificates(z)
        return z

    @classmethod
    def build_twisted_Z(cls, y: PositiveFactorization, phi: MappingClassRep) -> PositiveFactorization:
        """
        Y #_φ Y；Y 含全部标准基类时先规范到对偶前缀
        """
        if cls.has_basis_classes(y):
            y, _ = cls.normalize_to_dual_prefix(y)
        else:
            logger.info("%s lacks some standard basis classes; twisted sum built without a dual prefix", y.name)
        z = FactorizationService.twisted_fiber_sum(y, y, phi)
        z = z.with_record(ProvenanceRecord("build", {"name": "Z_phi", "recipe": "twisted"}))
        cls._log_certificates(z)
        return z

    @classmethod
    def grow(cls, z: PositiveFactorization, y: PositiveFactorization, k: int) -> PositiveFactorization:
        """
        与 k 个 Y 依次做纤维和
        """
        if k < 0:
            raise ValueError(f"k must be non-negative, got {k}")
        result = z
        for _ in range(k):
            result = FactorizationService.fiber_sum(result, y)
        if k:
            result = result.with_record(ProvenanceRecord("build", {"name": f"Z+{k}Y", "recipe": "grow", "k": k}))
            cls._log_certificates(result)
        return result

    @staticmethod
    def _log_certificates(f: PositiveFactorization):
        sc = InvariantService.simply_connected_certificate(f)
        irreducible = InvariantService.irreducibility_provenance(f)
        marks = {True: "✅", False: "❌"}
        logger.info("%s: %d twists, SimplyConnected %s, Irreducibility %s",
                    f.name, f.length, marks[sc.issued], marks[irreducible.issued])

    # ==================== 算术预测 ====================

    @staticmethod
    def recipe_projection(genus: int, seed_length: int, copies: Optional[int] = None,
                          seed_sigma: int = 0, k: int = 3) -> RecipeProjection:
        """
        只用 e = 4 − 4g + n 与 Novikov 可加性预测各阶段的 n、e、σ、b2

        Args:
            genus: 纤维亏格
            seed_length: 种子扭转数 ℓ
            copies: 共轭个数（默认 2g）
            seed_sigma: 种子符号差
            k: 预测 Z 之后再加 1..k 个 Y 的 Euler 示性数
        """
        copies = 2 * genus if copies is None else copies
        n_y = copies * seed_length
        e_y = 4 - 4 * genus + n_y
        sigma_y = copies * seed_sigma
        e_z = 2 * e_y + 4 * genus - 4
        growth = tuple(e_z + j * (e_y + 4 * genus - 4) for j in range(1, k + 1))
        return RecipeProjection(
            genus=genus,
            seed_length=seed_length,
            copies=copies,
            n_y=n_y,
            e_y=e_y,
            sigma_y=sigma_y,
            suffix_length=n_y - 2 * genus,
            n_z=2 * n_y,
            e_z=e_z,
            sigma_z=2 * sigma_y,
            b2_z=e_z - 2,
            growth_e=growth,
        )
