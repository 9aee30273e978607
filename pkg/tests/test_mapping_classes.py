import pytest

from lefschetz.core.config import LABEL_MAX_DEPTH
from lefschetz.core.exceptions import (
    DimensionError,
    NonSymplecticError,
    SpinMismatchError,
    UnsupportedOperationError,
)
from lefschetz.services.algebra import (
    Curve,
    QuadraticForm,
    Surface,
    apply_matrix,
    arf,
    identity_matrix,
    is_identity,
    matrices_equal,
    q_eval,
    transvection_matrix,
)
from lefschetz.services.mapping_class_service import MappingClassRep, MappingClassService, derived_label

from .helpers import random_curve, random_mapping_class


def test_word_matrix_is_rightmost_first(torus):
    a1, b1 = torus.standard_curve("a1"), torus.standard_curve("b1")
    f = MappingClassService.from_word(1, [(a1, 1), (b1, 1)])
    assert matrices_equal(f.matrix, transvection_matrix(a1).dot(transvection_matrix(b1)))
    # t(a1)*t(b1) 先作用 t(b1)
    assert MappingClassService.act_on_class(f, torus.a(1)) == torus.b(1)


def test_compose_and_inverse(rng):
    f = random_mapping_class(rng, 2, 5)
    h = random_mapping_class(rng, 2, 3)
    composed = MappingClassService.compose(f, h)
    assert composed.length == 8
    assert matrices_equal(composed.matrix, f.matrix.dot(h.matrix))
    assert is_identity(MappingClassService.compose(f, f.inverse()).matrix)
    with pytest.raises(DimensionError):
        MappingClassService.compose(f, MappingClassService.identity(3))


def test_word_rejects_bad_signs(torus):
    with pytest.raises(ValueError):
        MappingClassRep(1, ((torus.standard_curve("a1"), 2),))


def test_str_round_trips_through_names(torus):
    a1, b1 = torus.standard_curve("a1"), torus.standard_curve("b1")
    f = MappingClassService.from_word(1, [(a1, 1), (b1, -1)])
    assert str(f) == "t(a1)*~t(b1)"
    assert str(MappingClassService.identity(1)) == "id"


def test_act_on_curve_labels(genus2):
    phi = MappingClassService.from_word(
        2, [(genus2.standard_curve("a2"), 1), (genus2.standard_curve("b2"), 1)], name="phi"
    )
    image = MappingClassService.act_on_curve(phi, genus2.standard_curve("a2", dual_flag=True))
    assert image.cls == genus2.b(2)
    assert image.label == "b2"
    assert not image.dual_flag

    other = MappingClassService.act_on_curve(phi, Curve(genus2.a(1) + genus2.a(2), label="c3"))
    assert other.label == "phi(c3)"


def test_derived_labels_are_bounded():
    label = "c"
    for _ in range(LABEL_MAX_DEPTH + 1):
        label = derived_label(label, "f")
    assert label.startswith("h:")


def test_act_on_qform_and_preservation(torus):
    a1, b1 = torus.standard_curve("a1"), torus.standard_curve("b1")
    q = QuadraticForm((1, 1))
    f = MappingClassService.from_word(1, [(a1, 1), (b1, -1)])
    # q(a1) = q(b1) = 1，两个扭转都保持 q
    assert MappingClassService.preserves_qform(f, q)

    p = QuadraticForm((1, 0))
    g = MappingClassService.twist(b1)
    moved = MappingClassService.act_on_qform(g, p)
    assert moved != p
    # q′(f(x)) = q(x)
    for x in (torus.a(1), torus.b(1), torus.a(1) + torus.b(1)):
        assert q_eval(moved, MappingClassService.act_on_class(g, x)) == q_eval(p, x)


# ==================== 曲线传输 ====================

def test_transport_cases(genus2):
    a1, b1, a2 = (genus2.standard_curve(name) for name in ("a1", "b1", "a2"))
    assert MappingClassService.curve_transport(a1, a1).length == 0
    assert MappingClassService.curve_transport(a1, b1).length == 2
    assert MappingClassService.curve_transport(a1, a2).length == 4


def test_transport_random_pairs(rng):
    for trial in range(100):
        genus = 1 + trial % 3
        c, d = random_curve(rng, genus), random_curve(rng, genus)
        f = MappingClassService.curve_transport(c, d)
        assert apply_matrix(f.matrix, c.cls).normalized() == d.cls


def test_transport_rejects_separating(genus2):
    with pytest.raises(UnsupportedOperationError):
        MappingClassService.curve_transport(Curve.separating(2, 1), genus2.standard_curve("a1"))


# ==================== 辛矩阵分解 ====================

def test_factorization_of_identity_and_single_twist(genus2):
    assert MappingClassService.transvection_factorization(identity_matrix(4)).length == 0
    c = Curve(genus2.a(1) + genus2.b(2))
    word = MappingClassService.transvection_factorization(transvection_matrix(c, -1))
    assert word.word == ((c, -1),)


def test_factorization_reconstructs_random_products(rng):
    for trial in range(100):
        genus = 1 + trial % 4
        product = random_mapping_class(rng, genus, rng.randint(1, 20))
        result = MappingClassService.transvection_factorization(product.matrix)
        assert matrices_equal(result.matrix, product.matrix)


def test_factorization_rejects_non_symplectic():
    with pytest.raises(NonSymplecticError):
        MappingClassService.transvection_factorization([[1, 1], [1, 1]])


def test_minus_identity_factors(torus):
    minus = -identity_matrix(2)
    result = MappingClassService.transvection_factorization(minus)
    assert matrices_equal(result.matrix, minus)
    assert result.surface == Surface(1)


# ==================== 大指数 ====================

@pytest.mark.parametrize("power", [5001, -5001, 2, 3, 4, 123456789])
def test_twist_power_matches_the_transvection(genus2, power):
    c = Curve(genus2.a(1) + genus2.b(2))
    letters = MappingClassService.twist_power(c, power)
    f = MappingClassService.from_word(2, letters)
    assert matrices_equal(f.matrix, transvection_matrix(c, power))
    assert len(letters) <= max(abs(power), 60)


def test_twist_power_zero_and_torus(torus):
    a1 = torus.standard_curve("a1")
    assert MappingClassService.twist_power(a1, 0) == []
    # 亏格 1 没有正交伙伴，只能逐个写出
    assert MappingClassService.twist_power(a1, -7) == [(a1, -1)] * 7


def test_factorization_of_large_twist_power_stays_short(genus2):
    a1, b1 = genus2.standard_curve("a1"), genus2.standard_curve("b1")
    matrix = transvection_matrix(a1).dot(transvection_matrix(b1, 5001))
    result = MappingClassService.transvection_factorization(matrix)
    assert matrices_equal(result.matrix, matrix)
    assert result.length <= 80


def test_factorization_of_large_entries_in_genus3():
    surface = Surface(3)
    c = Curve(surface.a(1) + surface.a(3) + surface.b(2))
    d = Curve(surface.b(1) - surface.b(3))
    matrix = transvection_matrix(c, 1785401).dot(transvection_matrix(d, -90001))
    result = MappingClassService.transvection_factorization(matrix)
    assert matrices_equal(result.matrix, matrix)
    assert result.length <= 5000


def test_genus1_twist_power_factors_exactly(torus):
    b1 = torus.standard_curve("b1")
    matrix = transvection_matrix(torus.standard_curve("a1")).dot(transvection_matrix(b1, 301))
    result = MappingClassService.transvection_factorization(matrix)
    assert matrices_equal(result.matrix, matrix)


# ==================== 自旋结构轨道 ====================

def all_forms(genus):
    return [QuadraticForm(tuple((bits >> k) & 1 for k in range(2 * genus))) for bits in range(4 ** genus)]


@pytest.mark.parametrize("genus", [1, 2])
def test_spin_conjugator_connects_every_pair_with_equal_arf(genus):
    forms = all_forms(genus)
    for q in forms:
        for target in forms:
            if arf(q) != arf(target):
                continue
            phi = MappingClassService.spin_conjugator(q, target)
            assert MappingClassService.act_on_qform(phi, q) == target


def test_spin_conjugator_genus3(rng):
    forms = all_forms(3)
    for _ in range(200):
        q, target = rng.choice(forms), rng.choice(forms)
        if arf(q) != arf(target):
            with pytest.raises(SpinMismatchError, match="Arf"):
                MappingClassService.spin_conjugator(q, target)
            continue
        phi = MappingClassService.spin_conjugator(q, target)
        assert MappingClassService.act_on_qform(phi, q) == target


def test_spin_conjugator_fixing_a_basis_class(rng):
    surface = Surface(3)
    forms = all_forms(3)
    checked = 0
    while checked < 120:
        q, target = rng.choice(forms), rng.choice(forms)
        k = rng.randrange(surface.rank)
        if arf(q) != arf(target) or q.basis_values[k] != target.basis_values[k]:
            continue
        phi = MappingClassService.spin_conjugator(q, target, fixing=k)
        assert MappingClassService.act_on_qform(phi, q) == target
        assert MappingClassService.act_on_class(phi, surface.basis_vector(k)) == surface.basis_vector(k)
        checked += 1


def test_spin_conjugator_rejects_different_values_on_fixed_class():
    q = QuadraticForm((1, 1, 0, 0, 0, 0))
    target = QuadraticForm((0, 0, 1, 1, 0, 0))
    assert arf(q) == arf(target)
    with pytest.raises(SpinMismatchError, match="a1"):
        MappingClassService.spin_conjugator(q, target, fixing=0)
    with pytest.raises(DimensionError):
        MappingClassService.spin_conjugator(q, QuadraticForm((1, 1)))
