# Utilidades de matrices racionales exactas (tuplas de Fraction)
from fractions import Fraction
from typing import Sequence

import sympy as sp

from services.exactmath import RatPoly, Z

Matrix = tuple[tuple[Fraction, ...], ...]
Vector = tuple[Fraction, ...]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Fraction(c) for c in row) for row in rows)


def to_vector(values: Sequence) -> Vector:
    return tuple(Fraction(v) for v in values)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def _sympy_matrix(a: Matrix) -> sp.Matrix:
    return sp.Matrix([[sp.Rational(c.numerator, c.denominator) for c in row] for row in a])


def rank(a: Matrix) -> int:
    if not a:
        return 0
    return int(_sympy_matrix(a).rank())


def charpoly(a: Matrix) -> RatPoly:
    """Polinomio característico det(z*I - A)"""
    return RatPoly.from_sympy(_sympy_matrix(a).charpoly(Z))
