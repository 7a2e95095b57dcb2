"""Transformaciones sobre bucles: paso de actualización, encadenado y homogeneización."""
from fractions import Fraction
from typing import Sequence

from core.config import settings
from core.logging_config import setup_logger
from models.loop import Loop
from services.exactmath import Z, sturm_count, squarefree_factors
from utils.matrices import Matrix, Vector, charpoly, mat_mul, mat_vec, to_vector, vec_add

logger = setup_logger(__name__)


def apply_update(loop: Loop, values: Sequence) -> Vector:
    """A·v + b"""
    v = to_vector(values)
    if len(v) != loop.dimension:
        raise ValueError(f"expected {loop.dimension} values, got {len(v)}")
    return vec_add(mat_vec(loop.A, v), loop.b)


def matrix_has_negative_eigenvalue(a: Matrix) -> bool:
    p = charpoly(a)
    # sturm_count cuenta en (-inf, 0]; la raíz en 0 no es negativa
    count = sturm_count(p, hi=Fraction(0))
    if p(Fraction(0)) == 0:
        count -= 1
    return count > 0


def has_negative_eigenvalue(loop: Loop) -> bool:
    return matrix_has_negative_eigenvalue(loop.A)


def matrix_eigenvalues_real(a: Matrix) -> bool:
    return all(
        sturm_count(factor) == factor.degree
        for factor, _ in squarefree_factors(charpoly(a))
    )


def all_eigenvalues_real(loop: Loop) -> bool:
    return matrix_eigenvalues_real(loop.A)


def chain(loop: Loop) -> Loop:
    """Bucle de dos pasos: guarda φ ∧ φ[x/Ax+b], actualización A², Ab + b"""
    guard = loop.guard & loop.guard.substitute(loop.update_terms())
    A2 = mat_mul(loop.A, loop.A)
    b2 = vec_add(mat_vec(loop.A, loop.b), loop.b)
    logger.debug(f"🔗 Bucle encadenado: {len(guard.conjuncts)} conjuntos en la guarda")
    return Loop(loop.vars, A2, b2, guard)


def fresh_name(taken: Sequence[str], base: str | None = None) -> str:
    base = base or settings.HOMOGENIZING_VAR or str(Z)
    if base not in taken:
        return base
    suffix = 1
    while f"{base}{suffix}" in taken:
        suffix += 1
    return f"{base}{suffix}"


def homogenize(loop: Loop) -> Loop:
    """
    Añade una variable fija z (z := z, con z = 1) y deja la actualización lineal:
    A' = [[A, b], [0, 1]], b' = 0. La nueva variable es siempre la última.
    """
    z = fresh_name(loop.vars)
    d = loop.dimension
    A = [list(row) + [bi] for row, bi in zip(loop.A, loop.b)]
    A.append([Fraction(0)] * d + [Fraction(1)])
    return Loop(loop.vars + (z,), A, [Fraction(0)] * (d + 1), loop.guard)

