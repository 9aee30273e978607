import pytest

from lefschetz.core.exceptions import WordSyntaxError
from lefschetz.services.algebra import Curve, HomologyClass, Surface, is_identity
from lefschetz.services.factorization_service import Direction, HurwitzStep, format_schedule
from lefschetz.services.mapping_class_service import MappingClassService
from lefschetz.services.word_parser import ScheduleParser, TwistWordParser


# ==================== 扭转词 ====================

def test_parse_standard_letters():
    surface = Surface(9)
    phi = TwistWordParser.parse("t(a9)*t(b9)", 9)
    assert phi.word == ((surface.standard_curve("a9"), 1), (surface.standard_curve("b9"), 1))
    assert phi.name == "t(a9)*t(b9)"
    assert MappingClassService.act_on_class(phi, surface.a(9)) == surface.b(9)


def test_parse_inverse_and_coordinates():
    phi = TwistWordParser.parse("~t([1,0,−1,0]) * t(a2)", 2)
    assert phi.word[0] == (Curve(HomologyClass((1, 0, -1, 0))), -1)
    assert phi.word[1][1] == 1
    assert str(phi) == "~t([1,0,-1,0])*t(a2)"


def test_parse_identity():
    assert is_identity(TwistWordParser.parse("id", 3).matrix)
    inverse_pair = TwistWordParser.parse("t(b1)*~t(b1)", 1)
    assert is_identity(inverse_pair.matrix)


@pytest.mark.parametrize("text", [
    "",
    "t(a10)",
    "x(a1)",
    "t(a1)**t(b1)",
    "t([1,0,0])",
    "t([2,0])",
    "t([1,x])",
    "t([1,0)",
])
def test_parse_errors(text):
    genus = 9 if text == "t(a10)" else 1
    with pytest.raises(WordSyntaxError):
        TwistWordParser.parse(text, genus)


# ==================== Hurwitz 调度 ====================

def test_parse_schedule():
    steps = ScheduleParser.parse("R1, L1,c")
    assert steps == [HurwitzStep(Direction.RIGHT, 1), HurwitzStep(Direction.LEFT, 1), HurwitzStep(Direction.CYCLE)]
    assert format_schedule(steps) == "R1,L1,C"
    assert ScheduleParser.parse("") == []


@pytest.mark.parametrize("text, step", [("R0", 1), ("R1,X2", 2), ("R1,L1,R", 3)])
def test_schedule_errors_name_the_step(text, step):
    with pytest.raises(WordSyntaxError, match=f"step {step}"):
        ScheduleParser.parse(text)
