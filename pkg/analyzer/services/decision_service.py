"""
Decisión de runtime constante para bucles lineales con autovalores reales.

Flujo: encadenar si hay autovalores negativos, forma cerrada, guarda instanciada
ψ = φ[x/cl], cota de raíces rb, sistema de puntos de muestra
π = ⋀_{j=0..rb} ψ[n/n0 + j·m], eliminación de Fourier-Motzkin con signos
eventuales y comprobación final para m grande. Si π es insatisfacible para m
grande el bucle tiene runtime constante y la cota exacta sale de desenrollar.
"""
import time
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence

from core.config import settings
from core.errors import NonRealEigenvalues, ResourceLimitExceeded, UnrollCeilingExceeded, UnsupportedLoopClass
from core.logging_config import setup_logger
from models.loop import Inequation, LinearTerm, Loop, Relation
from models.schemas import DecisionTrace, Verdict, VerdictKind
from services.closedform import ClosedForm, closed_form, spectrum
from services.linsat import LinSystem, first_unsat_unroll, is_satisfiable
from services.loop_service import all_eigenvalues_real, apply_update, chain, has_negative_eigenvalue
from services.polyexp import PolyExp, SymIneq, coeff_eval, esign, rootbound, substitute_n

logger = setup_logger(__name__)


class GroundOutcome(str, Enum):
    UNSAT_FOR_LARGE_M = "unsat_for_large_m"
    SAT_FOR_LARGE_M = "sat_for_large_m"


@dataclass(frozen=True)
class PiSystem:
    conjuncts: tuple[SymIneq, ...] = ()
    # variables eliminadas hasta ahora
    eliminated: int = 0

    @property
    def variables(self) -> set[str]:
        return {n for c in self.conjuncts for n in c.term.variables}

    @property
    def ground(self) -> tuple[SymIneq, ...]:
        return tuple(c for c in self.conjuncts if c.is_ground)

    @property
    def is_rational(self) -> bool:
        return all(
            c.constant.is_rational and all(k.is_rational for _, k in c.coeffs)
            for c in self.conjuncts
        )

    def __len__(self) -> int:
        return len(self.conjuncts)


InstantiatedGuard = list[tuple[PolyExp, Relation]]


def build_instantiated_guard(loop: Loop, cf: ClosedForm) -> InstantiatedGuard:
    """ψ := φ[x/cl]"""
    forms = cf.as_dict()
    psi = []
    for ineq in loop.guard.conjuncts:
        term = PolyExp.constant(ineq.term.constant)
        for name, c in ineq.term.coeffs:
            term = term + forms[name].scale(c)
        psi.append((term, ineq.rel))
    return psi


def guard_rootbound(psi: InstantiatedGuard) -> int:
    return sum(rootbound(t) for t, _ in psi)


def build_pi(psi: InstantiatedGuard, rb: int, n0: int) -> PiSystem:
    """π := ⋀_{j=0..rb} ψ[n/n0 + j·m]"""
    conjuncts: list[SymIneq] = []
    for j in range(rb + 1):
        for t, rel in psi:
            conjuncts.append(SymIneq(substitute_n(t, n0, j), rel, frozenset({len(conjuncts)})))
    return PiSystem(tuple(conjuncts))


def _split_bounds(pi: PiSystem, name: str):
    lower, upper, rest = [], [], []
    for c in pi.conjuncts:
        sign = esign(c.term.coeff(name))
        if sign > 0:
            lower.append(c)
        elif sign < 0:
            upper.append(c)
        else:
            rest.append(c)
    return lower, upper, rest


def fm_combinations(pi: PiSystem, name: str, max_conjuncts: int | None = None) -> Iterator[SymIneq]:
    """
    Conjuntos resultantes de eliminar `name`, uno a uno: primero los que no
    dependen de `name` y luego cada cota inferior (esign > 0) combinada con cada
    superior (esign < 0) como p1·t2 - p2·t1.

    Tras k eliminaciones una combinación que procede de más de k+1 conjuntos
    originales es redundante (regla de Chernikov) y no se genera.
    """
    limit = max_conjuncts or settings.FM_MAX_CONJUNCTS
    lower, upper, rest = _split_bounds(pi, name)
    produced = len(rest)
    if produced > limit:
        raise ResourceLimitExceeded(f"Fourier-Motzkin on {name!r} would produce more than {limit} conjuncts")
    yield from rest
    depth = pi.eliminated + 2
    for lo in lower:
        p1 = lo.term.coeff(name)
        lo_rest = lo.term.without(name)
        for up in upper:
            origins = lo.origins | up.origins
            if lo.origins and up.origins and len(origins) > depth:
                continue
            produced += 1
            if produced > limit:
                raise ResourceLimitExceeded(
                    f"Fourier-Motzkin on {name!r} would produce more than {limit} conjuncts"
                )
            # el coeficiente de `name` se anula: no se calcula
            p2 = up.term.coeff(name)
            term = up.term.without(name).mul(p1) + lo_rest.mul(-p2)
            yield SymIneq(term, lo.rel.combine(up.rel), origins)


def fm_eliminate(pi: PiSystem, name: str, max_conjuncts: int | None = None) -> PiSystem:
    """Un paso completo de Fourier-Motzkin sobre `name`"""
    return PiSystem(tuple(fm_combinations(pi, name, max_conjuncts)), pi.eliminated + 1)


def prune(pi: PiSystem) -> PiSystem:
    """
    Quita duplicados y conjuntos sin variables que son ciertos para m grande.
    De dos duplicados se queda el de historia más corta.
    """
    kept: dict[SymIneq, SymIneq] = {}
    for c in pi.conjuncts:
        if c.is_ground and esign(c.constant) > 0:
            continue
        seen = kept.get(c)
        if seen is None or len(c.origins) < len(seen.origins):
            kept[c] = c
    return PiSystem(tuple(kept.values()), pi.eliminated)


def is_eventually_false(c: SymIneq) -> bool:
    sign = esign(c.constant)
    return sign < 0 or (sign == 0 and c.rel is Relation.GT)


def choose_variable(pi: PiSystem) -> str:
    """Variable con menor |inferiores|·|superiores|; empate por nombre"""
    def cost(name: str):
        lower, upper, _ = _split_bounds(pi, name)
        return len(lower) * len(upper), name

    return min(pi.variables, key=cost)


def final_verdict(ground: PiSystem) -> GroundOutcome:
    if ground.variables:
        raise ValueError(f"variables left in the ground system: {sorted(ground.variables)}")
    if any(is_eventually_false(c) for c in ground.conjuncts):
        return GroundOutcome.UNSAT_FOR_LARGE_M
    return GroundOutcome.SAT_FOR_LARGE_M


def eliminate_all(pi: PiSystem, order: Sequence[str] | None = None) -> tuple[PiSystem, list[str], bool]:
    """
    Elimina todas las variables de π. Devuelve el sistema sin variables, el orden
    usado y si se cortó antes por un conjunto falso para m grande.
    """
    pending = list(order or [])
    used: list[str] = []
    pi = prune(pi)
    while pi.variables:
        if any(is_eventually_false(c) for c in pi.ground):
            logger.debug("⚡ Contradicción temprana: se omite el resto de la eliminación")
            return PiSystem(pi.ground), used, True
        while pending and pending[0] not in pi.variables:
            pending.pop(0)
        name = pending.pop(0) if pending else choose_variable(pi)
        used.append(name)
        combined: list[SymIneq] = []
        for c in fm_combinations(pi, name):
            if c.is_ground and is_eventually_false(c):
                logger.debug(f"⚡ Contradicción al eliminar {name}: se corta la eliminación")
                return PiSystem(tuple(g for g in combined if g.is_ground) + (c,)), used, True
            combined.append(c)
        pi = prune(PiSystem(tuple(combined), pi.eliminated + 1))
        logger.debug(f"🪓 Eliminada {name}: quedan {len(pi)} conjuntos")
    return pi, used, False


def instantiate_pi(pi: PiSystem, m: int) -> LinSystem:
    """π[m := k] como sistema lineal racional"""
    if not pi.is_rational:
        raise ValueError("only systems with rational coefficients can be instantiated")
    conjuncts = []
    for c in pi.conjuncts:
        coeffs = {name: coeff_eval(k, m).value for name, k in c.coeffs}
        conjuncts.append(Inequation(LinearTerm.of(coeffs, coeff_eval(c.constant, m).value), c.rel))
    return LinSystem(tuple(conjuncts))


def formula_bound(pi: PiSystem, n0: int, rb: int, max_m: int | None = None) -> tuple[int, int] | None:
    """
    Menor m en [1, max_m] con π[m] insatisfacible; acota el runtime por n0 + rb·m.
    Solo para bases racionales.
    """
    if not pi.is_rational:
        return None
    for m in range(1, (max_m or settings.FORMULA_BOUND_MAX_M) + 1):
        if not is_satisfiable(instantiate_pi(pi, m)):
            return n0 + rb * m, m
    return None


def compute_bound(loop: Loop, max_unroll: int | None = None) -> int:
    """Menor c con φ ∧ up(φ) ∧ ... ∧ up^c(φ) insatisfacible"""
    ceiling = max_unroll if max_unroll is not None else settings.MAX_UNROLL
    c = first_unsat_unroll(loop, ceiling)
    if c is None:
        raise UnrollCeilingExceeded(f"guard still satisfiable after unrolling {ceiling} times")
    return c


def simulate(loop: Loop, values: Sequence, max_steps: int) -> tuple[int, bool]:
    """Ejecuta el bucle desde `values`; (iteraciones, si terminó)"""
    v = tuple(Fraction(x) for x in values)
    if len(v) != loop.dimension:
        raise ValueError(f"expected {loop.dimension} values, got {len(v)}")
    for steps in range(max_steps):
        if not loop.guard.holds(loop.env(v)):
            return steps, True
        v = apply_update(loop, v)
    return max_steps, not loop.guard.holds(loop.env(v))


def decide(loop: Loop, order: Sequence[str] | None = None, max_unroll: int | None = None) -> Verdict:
    start = time.perf_counter()
    logger.info(f"🔍 Analizando bucle con variables {', '.join(loop.vars)}")
    if not all_eigenvalues_real(loop):
        raise UnsupportedLoopClass("non-real eigenvalues")

    chained = has_negative_eigenvalue(loop)
    analyzed = chain(loop) if chained else loop
    if chained:
        logger.info("🔗 Autovalores negativos: se encadena el bucle")
    try:
        eigen = spectrum(analyzed.A)
        cf = closed_form(analyzed)
    except NonRealEigenvalues as e:
        raise UnsupportedLoopClass(str(e)) from e

    psi = build_instantiated_guard(analyzed, cf)
    rb = guard_rootbound(psi)
    pi = build_pi(psi, rb, cf.n0)
    logger.info(f"📐 n0={cf.n0}, rb={rb}, |π|={len(pi)}")

    ground, used, early = eliminate_all(pi, order)
    outcome = final_verdict(ground)

    trace = DecisionTrace(
        n0=cf.n0,
        rb=rb,
        chained=chained,
        spectrum=[str(lam) if k == 1 else f"{lam} (x{k})" for lam, k in eigen.entries],
        eigenvalues_in_unit_set=spectrum(loop.A).within_unit_set(),
        closed_form=[f"{v} = {f}" for v, f in zip(cf.vars, cf.forms)],
        instantiated_guard=[f"{t} {rel.value} 0" for t, rel in psi],
        pi_size=len(pi),
        elimination_order=used,
        ground_system=[str(c) for c in ground.conjuncts],
        ground_esigns=[esign(c.constant) for c in ground.conjuncts],
        early_exit=early,
    )

    if outcome is GroundOutcome.SAT_FOR_LARGE_M:
        verdict = Verdict(kind=VerdictKind.NONCONSTANT, trace=trace)
    else:
        witness = formula_bound(pi, cf.n0, rb)
        if witness is not None:
            bound, m = witness
            # un paso del bucle encadenado son dos del original
            trace.formula_bound = 2 * bound + 1 if chained else bound
            trace.witness_m = m
        verdict = Verdict(kind=VerdictKind.CONSTANT, bound=compute_bound(loop, max_unroll), trace=trace)

    elapsed = time.perf_counter() - start
    logger.info(f"✅ Veredicto: {verdict.kind.value} (bound={verdict.bound}) en {elapsed:.3f}s")
    return verdict


def oracle_agrees(loop: Loop, verdict: Verdict, max_unroll: int) -> tuple[bool, int | None]:
    """Contrasta el veredicto con el desenrollado directo hasta max_unroll"""
    if verdict.is_constant:
        first = first_unsat_unroll(loop, max(max_unroll, verdict.bound))
        return first == verdict.bound, first
    first = first_unsat_unroll(loop, max_unroll)
    return first is None, first
