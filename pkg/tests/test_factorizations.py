import json

import pytest

from lefschetz.core.config import LABEL_MAX_DEPTH
from lefschetz.core.exceptions import (
    BoundaryError,
    DimensionError,
    FactorizationFormatError,
    HurwitzIndexError,
    PreconditionError,
    RelationCheckError,
    SpinDeclarationError,
)
from lefschetz.services.algebra import QuadraticForm, Surface, intersection, matrices_equal
from lefschetz.services.factorization_service import (
    Boundary,
    Direction,
    FactorizationService,
    HurwitzStep,
    PositiveFactorization,
    rewritten_label,
)
from lefschetz.services.fixtures import chain_classes, chain_relation, get_fixture, list_fixtures
from lefschetz.services.invariant_service import InvariantService
from lefschetz.services.mapping_class_service import MappingClassService

from .helpers import random_mapping_class


def assert_identical(f: PositiveFactorization, g: PositiveFactorization):
    """同调数据、标签、对偶标记与构造记录全部一致"""
    assert f == g
    assert [(c.label, c.dual_flag) for c in f.twists] == [(c.label, c.dual_flag) for c in g.twists]
    assert f.provenance == g.provenance


# ==================== 校验 ====================

def test_fixtures_validate():
    for metadata in list_fixtures():
        if metadata.genus > 3:
            continue
        f = get_fixture(metadata.id)
        assert f.length == metadata.length
        assert FactorizationService.validate(f).valid, metadata.id


def test_validate_reports_failures(torus):
    broken = PositiveFactorization(1, (torus.standard_curve("a1"),))
    report = FactorizationService.validate(broken)
    assert not report.valid
    assert report.failures[0].startswith("relation check failed")

    relative = PositiveFactorization(1, (torus.standard_curve("a1"),), Boundary.RELATIVE)
    assert FactorizationService.validate(relative).valid


def test_validate_checks_spin_declaration(g1_chain):
    declared = PositiveFactorization(1, g1_chain.twists, spin_decl=QuadraticForm((0, 1)))
    report = FactorizationService.validate(declared)
    assert any(failure.startswith("spin declaration") for failure in report.failures)


def test_mixed_genus_is_rejected(torus):
    with pytest.raises(DimensionError):
        PositiveFactorization(2, (torus.standard_curve("a1"),))


def test_chain_classes_pair_adjacent_curves():
    curves = chain_classes(2)
    assert [c.label for c in curves] == ["a1", "b1", "c3", "b2", "a2"]
    assert [c.dual_flag for c in curves] == [True, True, False, True, True]
    for i, first in enumerate(curves):
        for j, second in enumerate(curves):
            expected = 1 if abs(i - j) == 1 else 0
            assert abs(intersection(first.cls, second.cls)) == expected
    with pytest.raises(DimensionError):
        chain_classes(2, 6)


@pytest.mark.parametrize("genus, length, count", [(1, 2, 12), (1, 3, 12), (2, 4, 40), (2, 5, 30)])
def test_chain_relations_hold(genus, length, count):
    f = chain_relation(genus, length)
    assert f.length == count
    assert FactorizationService.validate(f).valid


def test_chain_relation_needs_the_right_power():
    assert not FactorizationService.validate(chain_relation(1, 2, power=1)).valid
    with pytest.raises(DimensionError):
        chain_relation(2, 3)


# ==================== Hurwitz 移动 ====================

def test_right_then_left_restores_labels(g1_chain):
    moved = FactorizationService.hurwitz_move(g1_chain, 1, Direction.RIGHT)
    assert moved.twists[0].label == "b1"
    assert moved.twists[1].label == "a1|-b1"
    assert moved.twists[1].dual_flag

    restored = FactorizationService.hurwitz_move(moved, 1, Direction.LEFT)
    assert restored == g1_chain
    assert [(c.label, c.dual_flag) for c in restored.twists] == [(c.label, c.dual_flag) for c in g1_chain.twists]
    assert [r.kind for r in restored.provenance][-2:] == ["hurwitz", "hurwitz"]


def test_hurwitz_index_errors_carry_step(g1_chain):
    with pytest.raises(HurwitzIndexError):
        FactorizationService.hurwitz_move(g1_chain, 12, Direction.RIGHT)
    with pytest.raises(HurwitzIndexError) as info:
        FactorizationService.replay(g1_chain, [HurwitzStep(Direction.RIGHT, 1), HurwitzStep(Direction.LEFT, 0)])
    assert info.value.step == 2


def test_apply_schedule_records_the_schedule(g1_chain):
    steps = [HurwitzStep(Direction.RIGHT, 3), HurwitzStep(Direction.LEFT, 3)]
    applied = FactorizationService.apply_schedule(g1_chain, steps)
    assert applied.twists == g1_chain.twists
    assert applied.provenance[-1].kind == "hurwitz"
    assert applied.provenance[-1].data == {"schedule": "R3,L3"}
    assert FactorizationService.replay(g1_chain, steps).provenance == g1_chain.provenance
    assert FactorizationService.apply_schedule(g1_chain, []) is g1_chain


def test_rewritten_labels_are_bounded():
    assert rewritten_label("a1", "b1", -1) == "a1|-b1"
    assert rewritten_label("a1|-b1", "b1", 1) == "a1"
    label = "c"
    for k in range(LABEL_MAX_DEPTH + 1):
        label = rewritten_label(label, f"x{k}", 1)
    assert label.startswith("h:")


def test_cyclic_rotation_moves_first_factor(g1_chain, g2_matsumoto):
    rotated = FactorizationService.cyclic_rotation(g1_chain)
    assert rotated.twists == g1_chain.twists[1:] + g1_chain.twists[:1]
    assert rotated.twists[-1].label == "a1" and rotated.twists[-1].dual_flag
    assert rotated.is_closed

    rotated = FactorizationService.cyclic_rotation(g2_matsumoto)
    assert FactorizationService.validate(rotated).valid
    assert rotated.separating_counts() == {1: 2}
    assert len(FactorizationService.rotation_schedule(8)) == 7


def test_random_moves_preserve_invariants(rng):
    """20 段随机游走，每段 50 步，共 1000 次基本移动，每步都核对不变量"""
    names = ["g1-chain", "g1-chain3", "g2-chain5", "g2-matsumoto"]
    for walk in range(20):
        f = get_fixture(names[walk % len(names)])
        product = f.product_matrix
        e = InvariantService.euler_characteristic(f)
        sigma = InvariantService.signature(f)
        feasible = InvariantService.spin_feasibility(f).feasible
        separating = f.separating_counts()
        current = f
        for _ in range(50):
            index = rng.randint(1, f.length - 1)
            direction = rng.choice((Direction.RIGHT, Direction.LEFT))
            current = FactorizationService.hurwitz_move(current, index, direction)
            assert matrices_equal(current.product_matrix, product)
            assert InvariantService.euler_characteristic(current) == e
            assert InvariantService.signature(current) == sigma
            assert current.separating_counts() == separating
            assert InvariantService.spin_feasibility(current).feasible == feasible


# ==================== 共轭与纤维和 ====================

def test_conjugate_keeps_relation_and_spin(g1_chain, torus):
    declared = FactorizationService.declare_spin(g1_chain, QuadraticForm((1, 1)))
    phi = MappingClassService.from_word(1, [(torus.standard_curve("a1"), 1), (torus.standard_curve("b1"), 1)],
                                        name="phi")
    conjugated = FactorizationService.conjugate(declared, phi)
    assert FactorizationService.validate(conjugated).valid
    assert conjugated.spin_decl is not None
    assert conjugated.provenance[-1].kind == "conjugate"
    assert conjugated.name == "g1-chain^phi"


def test_conjugate_random_classes(rng):
    f = get_fixture("g2-chain5")
    for _ in range(10):
        phi = random_mapping_class(rng, 2, rng.randint(1, 4))
        conjugated = FactorizationService.conjugate(f, phi)
        assert FactorizationService.validate(conjugated).valid


def test_fiber_sum(g1_chain):
    other = get_fixture("g1-chain3")
    total = FactorizationService.fiber_sum(g1_chain, other)
    assert total.length == 24
    assert total.twists == g1_chain.twists + other.twists
    assert total.relatively_minimal
    assert total.spin_decl is None
    assert total.name == "(g1-chain)#(g1-chain3)"

    q = QuadraticForm((1, 1))
    spun = FactorizationService.fiber_sum(
        FactorizationService.declare_spin(g1_chain, q), FactorizationService.declare_spin(other, q)
    )
    assert spun.spin_decl == q
    assert spun.provenance[-1].data["spin_matched"]


def test_fiber_sum_errors(g1_chain, g2_matsumoto, torus):
    with pytest.raises(DimensionError):
        FactorizationService.fiber_sum(g1_chain, g2_matsumoto)
    relative = PositiveFactorization(1, (torus.standard_curve("a1"),), Boundary.RELATIVE)
    with pytest.raises(BoundaryError):
        FactorizationService.fiber_sum(g1_chain, relative)


def test_twisted_fiber_sum_records_phi(g1_chain, torus):
    phi = MappingClassService.from_word(1, [(torus.standard_curve("b1"), 1)], name="t(b1)")
    total = FactorizationService.twisted_fiber_sum(g1_chain, g1_chain, phi)
    assert total.length == 24
    record = total.provenance[-1]
    assert record.kind == "twisted_fiber_sum"
    assert record.data["phi"] == "t(b1)"
    assert record.data["spin_preserved"] is False
    assert FactorizationService.validate(total).valid


# ==================== 自旋声明与对偶前缀 ====================

def test_declare_spin(g1_chain):
    declared = FactorizationService.declare_spin(g1_chain, QuadraticForm((1, 1)))
    assert declared.provenance[-1].kind == "declare_spin"
    assert declared.provenance[-1].data == {"q": "11", "arf": 1}
    with pytest.raises(SpinDeclarationError):
        FactorizationService.declare_spin(g1_chain, QuadraticForm((1, 0)))


def test_certify_dual_prefix(g1_chain, g2_matsumoto):
    plain = PositiveFactorization(1, tuple(c.relabeled(None) for c in g1_chain.twists))
    certified = FactorizationService.certify_dual_prefix(plain)
    assert [(c.label, c.dual_flag) for c in certified.twists[:2]] == [("a1", True), ("b1", True)]
    assert certified.twists[2].label is None
    with pytest.raises(PreconditionError):
        FactorizationService.certify_dual_prefix(g2_matsumoto)


# ==================== 序列化 ====================

def test_serialization_is_lossless(g1_chain, g2_matsumoto, torus):
    phi = MappingClassService.from_word(1, [(torus.standard_curve("a1"), -1)], name="phi")
    constructed = [
        g1_chain,
        g2_matsumoto,
        FactorizationService.declare_spin(g1_chain, QuadraticForm((1, 1))),
        FactorizationService.conjugate(g1_chain, phi),
        FactorizationService.fiber_sum(g1_chain, get_fixture("g1-chain3")),
        FactorizationService.hurwitz_move(g2_matsumoto, 3, Direction.LEFT),
        PositiveFactorization(1, (torus.standard_curve("a1"),), Boundary.RELATIVE),
    ]
    for f in constructed:
        text = FactorizationService.serialize(f)
        assert_identical(FactorizationService.deserialize(text), f)


def test_deserialize_rejects_bad_json():
    with pytest.raises(FactorizationFormatError, match="line 2"):
        FactorizationService.deserialize('{\n  "genus": }')


@pytest.mark.parametrize("payload, fragment", [
    ({"genus": 1, "boundary": "closed", "twists": [], "extra": 1}, "extra"),
    ({"genus": 0, "boundary": "closed"}, "genus"),
    ({"genus": 1, "boundary": "sphere"}, "boundary"),
    ({"genus": 1, "boundary": "closed", "twists": [{"coords": [1, 0, 0, 0]}]}, "twists[0].coords"),
    ({"genus": 1, "boundary": "closed", "twists": [{"coords": [2, 0]}]}, "twists[0]"),
    ({"genus": 1, "boundary": "closed", "spin": {"q_basis": [2, 0]}}, "spin"),
])
def test_deserialize_schema_errors(payload, fragment):
    with pytest.raises(FactorizationFormatError) as info:
        FactorizationService.deserialize(json.dumps(payload))
    assert fragment in str(info.value)


MULTILINE_FILE = """{
  "genus": 1,
  "boundary": "closed",
  "twists": [
    {"coords": [1, 0]},

    %s
  ]
}"""


@pytest.mark.parametrize("second, pattern", [
    ('{"coords": "a1"}', r"Schema violation: twists\[1\]\.coords \(line 7\)"),
    ('{"coords": [0, 1], "weight": 2}', r"twists\[1\]\.weight \(line 7\)"),
    ('{"coords": [1, 0, 0, 0]}', r"twists\[1\]\.coords: expected 2 entries, got 4 \(line 7\)"),
    ('{"coords": [2, 0]}', r"twists\[1\]: .* \(line 7\)"),
])
def test_schema_errors_name_the_line(second, pattern):
    with pytest.raises(FactorizationFormatError, match=pattern) as info:
        FactorizationService.deserialize(MULTILINE_FILE % second)
    assert info.value.loc[:2] == ("twists", 1)


def test_missing_field_points_at_the_enclosing_object():
    with pytest.raises(FactorizationFormatError, match=r"genus \(line 1\)"):
        FactorizationService.deserialize('{\n  "boundary": "closed"\n}')


def test_deserialize_checks_relation(torus):
    text = FactorizationService.serialize(PositiveFactorization(1, (torus.standard_curve("a1"),)))
    with pytest.raises(RelationCheckError, match="relation check failed"):
        FactorizationService.deserialize(text)
    loaded = FactorizationService.deserialize(text, check_relation=False)
    assert loaded.length == 1


def test_deserialize_checks_spin(g1_chain):
    model = FactorizationService.to_file_model(g1_chain).model_dump()
    model["spin"] = {"q_basis": [0, 1]}
    with pytest.raises(SpinDeclarationError):
        FactorizationService.deserialize(json.dumps(model))


def test_surface_property(g1_chain):
    assert g1_chain.surface == Surface(1)
    assert g1_chain.is_closed
