"""Satisfacibilidad exacta sobre Q de conjunciones de desigualdades > / >= (Fourier-Motzkin)."""
from dataclasses import dataclass
from typing import Iterable

from core.config import settings
from core.errors import ResourceLimitExceeded
from core.logging_config import setup_logger
from models.loop import Inequation, LinearTerm, Loop, Relation

logger = setup_logger(__name__)


@dataclass(frozen=True)
class LinSystem:
    conjuncts: tuple[Inequation, ...] = ()

    @property
    def variables(self) -> set[str]:
        return {n for ineq in self.conjuncts for n in ineq.term.variables}

    def __len__(self) -> int:
        return len(self.conjuncts)


def _ground_holds(ineq: Inequation) -> bool:
    c = ineq.term.constant
    return c > 0 if ineq.rel is Relation.GT else c >= 0


def _normalize(conjuncts: Iterable[Inequation]) -> list[Inequation] | None:
    """
    Escala cada conjunto para que su primer coeficiente valga ±1 y, por cada vector
    de coeficientes, conserva solo la cota más fuerte. None si aparece una
    contradicción sin variables.
    """
    tightest: dict[tuple, Inequation] = {}
    for ineq in conjuncts:
        term = ineq.term
        if term.is_constant:
            if not _ground_holds(ineq):
                return None
            continue
        lead = abs(term.coeffs[0][1])
        if lead != 1:
            term = term.scale(1 / lead)
            ineq = Inequation(term, ineq.rel)
        key = term.coeffs
        kept = tightest.get(key)
        if kept is None:
            tightest[key] = ineq
            continue
        # a·x + c ∼ 0: la constante menor es la más restrictiva
        if term.constant < kept.term.constant or (
            term.constant == kept.term.constant and ineq.rel is Relation.GT
        ):
            tightest[key] = ineq
    return list(tightest.values())


def _eliminate(conjuncts: list[Inequation], name: str) -> list[Inequation]:
    lower, upper, rest = [], [], []
    for ineq in conjuncts:
        a = ineq.term.coeff(name)
        if a > 0:
            lower.append(ineq)
        elif a < 0:
            upper.append(ineq)
        else:
            rest.append(ineq)
    for lo in lower:
        p1 = lo.term.coeff(name)
        for up in upper:
            p2 = up.term.coeff(name)
            term = up.term.scale(p1) + lo.term.scale(-p2)
            rest.append(Inequation(term, lo.rel.combine(up.rel)))
    return rest


def _pick_variable(conjuncts: list[Inequation]) -> str:
    counts: dict[str, list[int]] = {}
    for ineq in conjuncts:
        for name, a in ineq.term.coeffs:
            entry = counts.setdefault(name, [0, 0])
            entry[0 if a > 0 else 1] += 1
    return min(counts, key=lambda n: (counts[n][0] * counts[n][1], n))


def is_satisfiable(system: LinSystem, max_conjuncts: int | None = None) -> bool:
    limit = max_conjuncts or settings.LINSAT_MAX_CONJUNCTS
    conjuncts = _normalize(system.conjuncts)
    while conjuncts:
        name = _pick_variable(conjuncts)
        conjuncts = _eliminate(conjuncts, name)
        if len(conjuncts) > limit:
            raise ResourceLimitExceeded(
                f"linear satisfiability check exceeded {limit} conjuncts"
            )
        conjuncts = _normalize(conjuncts)
        if conjuncts is None:
            return False
    return conjuncts is not None


def iterate_images(loop: Loop):
    """Genera up^0(x), up^1(x), ... como términos lineales en x"""
    update = loop.update_terms()
    images = {v: LinearTerm.var(v) for v in loop.vars}
    while True:
        yield images
        images = {v: update[v].substitute(images) for v in loop.vars}


def unroll_system(loop: Loop, c: int) -> LinSystem:
    """φ ∧ up(φ) ∧ ... ∧ up^c(φ)"""
    if c < 0:
        raise ValueError("the unrolling depth must be non-negative")
    conjuncts: list[Inequation] = []
    for i, images in enumerate(iterate_images(loop)):
        if i > c:
            break
        conjuncts.extend(loop.guard.substitute(images).conjuncts)
    return LinSystem(tuple(conjuncts))


def first_unsat_unroll(loop: Loop, max_unroll: int) -> int | None:
    """
    Menor c <= max_unroll con φ^(0..c) insatisfacible, o None. La
    insatisfacibilidad es monótona en c, así que se busca por saltos
    exponenciales y luego bisección.
    """
    known_sat = -1
    depth = 0
    while True:
        depth = min(depth, max_unroll)
        if not is_satisfiable(unroll_system(loop, depth)):
            break
        known_sat = depth
        if depth == max_unroll:
            logger.debug(f"🔁 Satisfacible hasta {max_unroll} desenrollados")
            return None
        depth = max(1, depth * 2)
    lo, hi = known_sat, depth
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if is_satisfiable(unroll_system(loop, mid)):
            lo = mid
        else:
            hi = mid
    logger.debug(f"🔁 Primer desenrollado insatisfacible: {hi}")
    return hi
