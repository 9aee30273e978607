"""
build 命令 - 配方流水线

子命令：
- stack: 共轭叠加 Y
- normalize: 规范到对偶前缀
- z: Z = Y #_F Y
- zprime: Z′ = (Y #_F X′) #_F Y
- twisted: Y #_φ Y
- grow: Z 再与 k 个 Y 做纤维和
"""
import argparse
import logging
from typing import Any, Dict, List, Optional

from lefschetz.cli.common import (
    CommandOutcome,
    add_input_arguments,
    add_output_arguments,
    load_input,
    timestamp,
    write_output,
)
from lefschetz.core.dependencies import (
    get_construction_service,
    get_data_service,
    get_factorization_service,
    get_invariant_service,
)
from lefschetz.core.exceptions import PreconditionError
from lefschetz.services.construction_service import RecipeConfig
from lefschetz.services.factorization_service import HurwitzStep, PositiveFactorization, format_schedule
from lefschetz.services.word_parser import TwistWordParser

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("stack", "normalize", "z", "zprime", "twisted", "grow")
CERTIFIED_SUBCOMMANDS = ("z", "zprime", "twisted")


def register(subparsers):
    parser = subparsers.add_parser("build", help="配方流水线：stack / normalize / z / zprime / twisted / grow")
    parser.add_argument("subcommand", choices=SUBCOMMANDS, help="构造步骤")
    add_input_arguments(parser, required=False)
    add_output_arguments(parser)
    parser.add_argument("-o", "--output", help="输出分解文件；省略时把分解放进 stdout 的结果里")
    parser.add_argument("--seed-file", help="外部亏格 9 种子文件（48 个扭转）")
    parser.add_argument("--cycle", type=int, default=1, help="区分消没圈的位置（1 起始）")
    parser.add_argument("--copies", type=int, default=None, help="共轭个数，默认 2g")
    parser.add_argument("--x-prime", help="zprime 的中间分解 X′（路径或 fixture:<id>）")
    parser.add_argument("--phi", help="twisted 的映射类，如 \"t(a9)*t(b9)\"")
    parser.add_argument("--y", help="grow 使用的 Y（路径或 fixture:<id>），默认与输入相同")
    parser.add_argument("-k", type=int, default=1, help="grow 的次数")
    parser.add_argument("--declare-spin", action="store_true", help="给种子附加唯一的纤维方向自旋结构")
    parser.add_argument("--match-spin", action="store_true",
                        help="stack 时把各共轭的自旋声明对齐到对偶前缀要求的二次型（Arf 不符时报错）")
    parser.add_argument("--certify", action="store_true", help="附带证书内容（z / zprime / twisted 总是附带）")
    parser.set_defaults(handler=run)


def _load_seed(args: argparse.Namespace) -> PositiveFactorization:
    if args.seed_file:
        seed = get_data_service().load_external_seed(args.seed_file)
    else:
        seed = load_input(args)
    if args.declare_spin:
        q = get_invariant_service().unique_spin_structure(seed)
        if q is None:
            raise PreconditionError(f"{seed.name} has no unique fiberwise spin structure to declare")
        seed = get_factorization_service().declare_spin(seed, q)
    return seed


def _load_other(source: Optional[str], option: str) -> PositiveFactorization:
    if not source:
        raise PreconditionError(f"{option} is required for this build step")
    return get_data_service().load_factorization(source)


def run(args: argparse.Namespace) -> CommandOutcome:
    constructions = get_construction_service()
    seed = _load_seed(args)
    schedule: List[HurwitzStep] = []

    if args.subcommand == "stack":
        result = constructions.build_conjugate_stack(
            RecipeConfig(seed=seed, distinguished_cycle=args.cycle, copies=args.copies,
                         match_spin=args.match_spin)
        )
    elif args.subcommand == "normalize":
        result, schedule = constructions.normalize_to_dual_prefix(seed)
    elif args.subcommand == "z":
        result = constructions.build_Z(seed)
    elif args.subcommand == "zprime":
        x_prime = _load_other(args.x_prime, "--x-prime")
        result = constructions.build_Z_prime(seed, x_prime, require_spin=args.declare_spin)
    elif args.subcommand == "twisted":
        if not args.phi:
            raise PreconditionError("--phi is required for the twisted build")
        phi = TwistWordParser.parse(args.phi, seed.genus)
        result = constructions.build_twisted_Z(seed, phi)
    else:
        y = _load_other(args.y, "--y") if args.y else seed
        result = constructions.grow(seed, y, args.k)

    return CommandOutcome(payload=_summary(args, result, schedule))


def _summary(args: argparse.Namespace, f: PositiveFactorization, schedule: List[HurwitzStep]) -> Dict[str, Any]:
    invariants = get_invariant_service()
    summary: Dict[str, Any] = {
        "step": args.subcommand,
        "name": f.name,
        "genus": f.genus,
        "length": f.length,
        "e": invariants.euler_characteristic(f),
        "spin_declared": f.spin_decl is not None,
        "provenance": [record.to_dict() for record in f.provenance],
    }
    if schedule:
        summary["schedule"] = format_schedule(schedule)
    if args.certify or args.subcommand in CERTIFIED_SUBCOMMANDS:
        report = invariants.report(f, certify=True)
        summary["sigma"] = report.sigma
        summary["spin"] = report.spin.to_dict()
        summary["certificates"] = [c.to_dict() for c in report.certificates]
        summary["absent_certificates"] = report.absent_certificates

    output = write_output(f, args.output)
    if output:
        summary["output"] = output
    else:
        summary["factorization"] = get_factorization_service().to_file_model(f).model_dump(mode="json")
    generated_at = timestamp(args)
    if generated_at:
        summary["generated_at"] = generated_at
    return summary
