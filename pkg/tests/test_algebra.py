from fractions import Fraction

import numpy as np
import pytest

from lefschetz.core.exceptions import DimensionError, InvalidCurveError, NonSymplecticError, NotSymmetricError
from lefschetz.services.algebra import (
    Curve,
    HomologyClass,
    QuadraticForm,
    Surface,
    arf,
    identity_matrix,
    int_matrix,
    intersection,
    is_identity,
    is_symplectic,
    lattice_invariant_factors,
    matrices_equal,
    q_eval,
    rational_nullspace,
    require_symplectic,
    right_multiply_transvection,
    signature_of_symmetric,
    solve_gf2_affine,
    solve_rational,
    spans_lattice,
    standard_index,
    standard_label,
    symplectic_inverse,
    transvection_apply,
    transvection_matrix,
    twist_qform,
)

from .helpers import charpoly_signature, random_curve, random_symmetric


# ==================== 基础类型 ====================

def test_standard_labels_follow_basis_order():
    assert Surface(2).standard_labels() == ("a1", "b1", "a2", "b2")
    assert standard_index("b9", 9) == 17
    assert standard_label(17) == "b9"
    with pytest.raises(DimensionError):
        standard_index("a3", 2)


def test_curve_is_sign_normalized(torus):
    assert Curve.from_coords((-1, 0)) == torus.standard_curve("a1")
    assert Curve.from_coords((0, -1, 1, 0)).cls.coords == (0, 1, -1, 0)


def test_curve_rejects_bad_classes():
    with pytest.raises(InvalidCurveError):
        Curve.from_coords((2, 0))
    with pytest.raises(InvalidCurveError):
        Curve.from_coords((0, 0))
    with pytest.raises(InvalidCurveError):
        Curve(HomologyClass((1, 0, 0, 0)), sep_genus=1)
    with pytest.raises(InvalidCurveError):
        Curve.separating(1, 1)
    with pytest.raises(DimensionError):
        HomologyClass((1, 0, 0))


def test_labels_do_not_affect_equality(torus):
    assert torus.standard_curve("a1", dual_flag=True) == Curve.from_coords((1, 0), label="x")


# ==================== 辛格 ====================

def test_intersection_is_antisymmetric(torus):
    a, b = torus.a(1), torus.b(1)
    assert intersection(a, b) == 1
    assert intersection(b, a) == -1
    assert intersection(a, a) == 0
    with pytest.raises(DimensionError):
        intersection(a, Surface(2).a(1))


def test_transvection_on_basis(torus):
    a1 = torus.standard_curve("a1")
    assert transvection_apply(a1, torus.b(1)) == HomologyClass((-1, 1))
    assert transvection_apply(a1, torus.a(1)) == torus.a(1)
    assert transvection_apply(a1, torus.b(1), -1) == HomologyClass((1, 1))


def test_transvection_matrix_matches_action(rng):
    for genus in (1, 2, 3):
        surface = Surface(genus)
        for _ in range(10):
            c = random_curve(rng, genus)
            m = transvection_matrix(c)
            assert is_symplectic(m)
            for k in range(surface.rank):
                e_k = surface.basis_vector(k)
                image = HomologyClass(tuple(int(v) for v in m[:, k]))
                assert image == transvection_apply(c, e_k)


def test_right_multiply_and_inverse(rng):
    genus = 3
    m = identity_matrix(2 * genus)
    for _ in range(8):
        c = random_curve(rng, genus)
        expected = m.dot(transvection_matrix(c, -1))
        m = right_multiply_transvection(m, c, -1)
        assert matrices_equal(m, expected)
    assert is_identity(symplectic_inverse(m).dot(m))


def test_separating_transvection_is_identity():
    sep = Curve.separating(2, 1)
    assert is_identity(transvection_matrix(sep))
    x = HomologyClass((1, 2, 3, 4))
    assert transvection_apply(sep, x) == x


def test_require_symplectic_rejects_non_symplectic():
    with pytest.raises(NonSymplecticError):
        require_symplectic([[2, 0], [0, 1]])
    with pytest.raises(DimensionError):
        require_symplectic([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_lattice_spanning(torus, genus2):
    assert spans_lattice([torus.a(1), torus.b(1)], 2)
    assert not spans_lattice([torus.a(1) + torus.b(1), torus.a(1) - torus.b(1)], 2)
    assert lattice_invariant_factors([torus.a(1).scaled(2), torus.b(1)], 2) == (1, 2)
    classes = [genus2.a(1) + genus2.a(2), genus2.a(2), genus2.b(1), genus2.b(2)]
    assert spans_lattice(classes, 4)
    assert not spans_lattice([genus2.a(1), genus2.b(1), genus2.a(2)], 4)


# ==================== 二次型 ====================

def test_quadratic_form_values():
    q = QuadraticForm((1, 0))
    surface = Surface(1)
    assert q_eval(q, surface.a(1)) == 1
    assert q_eval(q, surface.b(1)) == 0
    assert q_eval(q, surface.a(1) + surface.b(1)) == 0
    assert arf(q) == 0
    assert arf(QuadraticForm((1, 1))) == 1


def test_twist_qform_preserves_values_on_images():
    q = QuadraticForm((1, 0))
    surface = Surface(1)
    a1, b1 = surface.standard_curve("a1"), surface.standard_curve("b1")
    assert twist_qform(q, a1) == q
    moved = twist_qform(q, b1)
    assert moved == QuadraticForm((0, 0))
    for x in (surface.a(1), surface.b(1), surface.a(1) + surface.b(1)):
        assert q_eval(moved, transvection_apply(b1, x)) == q_eval(q, x)


def test_gf2_affine_solutions():
    solution = solve_gf2_affine(np.array([[1, 1], [0, 1]]), [1, 0], 2)
    assert solution.feasible
    assert solution.particular == (1, 0)
    assert solution.dimension == 0

    free = solve_gf2_affine(np.array([[1, 1]]), [1], 2)
    assert free.dimension == 1
    assert free.contains((0, 1)) and free.contains((1, 0))
    assert not free.contains((1, 1))

    infeasible = solve_gf2_affine(np.array([[1, 0], [1, 0]]), [0, 1], 2)
    assert not infeasible.feasible
    assert infeasible.dimension == -1


# ==================== 精确线性代数 ====================

def test_signature_small_cases():
    assert signature_of_symmetric([[0, 1], [1, 0]]) == 0
    assert signature_of_symmetric([[1, 0, 0], [0, -1, 0], [0, 0, -1]]) == -1
    assert signature_of_symmetric([[0, 0], [0, 0]]) == 0
    assert signature_of_symmetric(int_matrix([[2, 1], [1, 2]])) == 2
    with pytest.raises(NotSymmetricError):
        signature_of_symmetric([[1, 2], [3, 1]])


def test_signature_matches_charpoly_oracle(rng):
    for _ in range(100):
        rows = random_symmetric(rng, 6)
        assert signature_of_symmetric(rows) == charpoly_signature(rows)


def test_solve_rational():
    assert solve_rational([[1, 1], [1, -1]], [2, 0]) == [Fraction(1), Fraction(1)]
    assert solve_rational([[1, 1], [1, 1]], [0, 1]) is None
    assert solve_rational([[2, 0]], [1]) == [Fraction(1, 2), Fraction(0)]


def test_rational_nullspace():
    basis = rational_nullspace([[1, 1, 0], [0, 0, 1]])
    assert len(basis) == 1
    v = basis[0]
    assert v[0] + v[1] == 0 and v[2] == 0
    assert rational_nullspace([[1, 0], [0, 1]]) == []
