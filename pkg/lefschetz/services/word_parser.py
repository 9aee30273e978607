"""
扭转词与 Hurwitz 调度解析器
解析 CLI 中的 --phi 与 hurwitz 调度表达式
"""
import re
from typing import List

from lefschetz.core.exceptions import LefschetzError, WordSyntaxError
from lefschetz.services.algebra import Curve, HomologyClass, Surface
from lefschetz.services.factorization_service import Direction, HurwitzStep
from lefschetz.services.mapping_class_service import MappingClassRep, MappingClassService

_LETTER = re.compile(r"^(~?)t\((.+)\)$")
_MOVE = re.compile(r"^([RL])(\d+)$")


class TwistWordParser:
    """
    扭转词解析器

    支持的格式：
    - 标准曲线：t(a1), t(b9)
    - 坐标：t([0,1,-1,0])，负号也可写作 "−"
    - 逆扭转：~t(...)
    - 复合：t(a9)*t(b9)，最右侧先作用
    - 恒等：id

    示例：
        "t(b9)*t(a9)", "~t([1,1,0,0])*t(a2)"
    """

    @staticmethod
    def parse(text: str, genus: int) -> MappingClassRep:
        """
        解析扭转词

        Args:
            text: 表达式
            genus: 曲面亏格

        Returns:
            MappingClassRep，name 为原表达式

        Raises:
            WordSyntaxError: 语法错误或曲线不合法
        """
        if text is None or not text.strip():
            raise WordSyntaxError("Empty twist word; use 'id' for the identity")
        source = text.strip()
        if source == "id":
            return MappingClassService.identity(genus)

        word = []
        for part in source.replace(" ", "").split("*"):
            match = _LETTER.match(part)
            if not match:
                raise WordSyntaxError(f"Invalid twist '{part}'. Expected format: 't(a1)', '~t(b2)' or 't([..])'")
            sign = -1 if match.group(1) else 1
            try:
                curve = TwistWordParser._parse_curve(match.group(2), genus)
            except LefschetzError as e:
                raise WordSyntaxError(f"Failed to parse curve in '{part}': {str(e)}")
            word.append((curve, sign))
        return MappingClassService.from_word(genus, word, name=source)

    @staticmethod
    def _parse_curve(body: str, genus: int) -> Curve:
        """
        解析曲线:
        - "a1" → 标准曲线 a1
        - "[1,0,-1,0]" → 坐标给出的非分离曲线
        """
        body = body.replace("−", "-")
        if body.startswith("["):
            if not body.endswith("]"):
                raise WordSyntaxError(f"Unclosed coordinate list: '{body}'")
            try:
                coords = [int(x) for x in body[1:-1].split(",")]
            except ValueError:
                raise WordSyntaxError(f"Coordinates must be integers: '{body}'")
            if len(coords) != 2 * genus:
                raise WordSyntaxError(f"Expected {2 * genus} coordinates, got {len(coords)}")
            return Curve(HomologyClass(tuple(coords)))
        return Surface(genus).standard_curve(body)


class ScheduleParser:
    """
    Hurwitz 调度解析器

    格式：逗号分隔的 "R<i>" / "L<i>" / "C"（i 从 1 开始）

    示例：
        "R1,L1", "R3,R2,R1,C"
    """

    @staticmethod
    def parse(text: str) -> List[HurwitzStep]:
        """
        Raises:
            WordSyntaxError: 某一步格式错误
        """
        if not text or text.strip() == "":
            return []
        steps = []
        for number, part in enumerate(text.split(","), start=1):
            part = part.strip().upper()
            if part == "C":
                steps.append(HurwitzStep(Direction.CYCLE))
                continue
            match = _MOVE.match(part)
            if not match:
                raise WordSyntaxError(f"Invalid move '{part}' at step {number}. Expected 'R<i>', 'L<i>' or 'C'")
            index = int(match.group(2))
            if index < 1:
                raise WordSyntaxError(f"Move indices start at 1, got '{part}' at step {number}")
            steps.append(HurwitzStep(Direction(match.group(1)), index))
        return steps
