"""
测试辅助函数 - 随机曲线、随机映射类与特征多项式符号判定
"""
import random
from fractions import Fraction
from typing import List, Sequence

from sympy import Matrix, Rational

from lefschetz.services.algebra import Curve, HomologyClass
from lefschetz.services.mapping_class_service import MappingClassRep, MappingClassService


def random_primitive(rng: random.Random, genus: int, bound: int = 2) -> HomologyClass:
    while True:
        cls = HomologyClass(tuple(rng.randint(-bound, bound) for _ in range(2 * genus)))
        if cls.is_primitive():
            return cls


def random_curve(rng: random.Random, genus: int, bound: int = 2) -> Curve:
    return Curve(random_primitive(rng, genus, bound))


def random_mapping_class(rng: random.Random, genus: int, length: int, bound: int = 1) -> MappingClassRep:
    word = [(random_curve(rng, genus, bound), rng.choice((1, -1))) for _ in range(length)]
    return MappingClassService.from_word(genus, word)


def random_symmetric(rng: random.Random, size: int) -> List[List[Fraction]]:
    """随机有理对称矩阵；约三分之一是低秩的"""
    if rng.random() < 0.35:
        rows = [[Fraction(0)] * size for _ in range(size)]
        for _ in range(rng.randint(1, size - 2)):
            v = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(size)]
            sign = rng.choice((1, -1))
            for i in range(size):
                for j in range(size):
                    rows[i][j] += sign * v[i] * v[j]
        return rows
    rows = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            value = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            rows[i][j] = rows[j][i] = value
    return rows


def _sign_changes(coeffs: Sequence) -> int:
    signs = [1 if c > 0 else -1 for c in coeffs if c != 0]
    return sum(1 for x, y in zip(signs, signs[1:]) if x != y)


def charpoly_signature(rows: Sequence[Sequence[Fraction]]) -> int:
    """
    特征值符号差的独立判定

    对称矩阵的特征值全为实数，Descartes 符号法则给出正、负根的精确个数。
    """
    m = Matrix([[Rational(x.numerator, x.denominator) for x in row] for row in rows])
    coeffs = m.charpoly().all_coeffs()
    degree = len(coeffs) - 1
    positive = _sign_changes(coeffs)
    negative = _sign_changes([c * (-1) ** (degree - k) for k, c in enumerate(coeffs)])
    return positive - negative
