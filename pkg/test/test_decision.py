# test_decision.py
import time
from dataclasses import replace
from fractions import Fraction

import pytest
from pydantic import ValidationError

from core.config import settings
from core.errors import ResourceLimitExceeded, UnrollCeilingExceeded, UnsupportedLoopClass
from models.loop import Relation
from models.schemas import Verdict, VerdictKind
from services.closedform import closed_form
from services.decision_service import (
    GroundOutcome,
    PiSystem,
    build_instantiated_guard,
    build_pi,
    choose_variable,
    compute_bound,
    decide,
    eliminate_all,
    final_verdict,
    fm_eliminate,
    formula_bound,
    guard_rootbound,
    instantiate_pi,
    is_eventually_false,
    oracle_agrees,
    prune,
    simulate,
)
from services.exactmath import alg_sign
from services.linsat import is_satisfiable
from services.loop_parser import parse_loop
from services.loop_service import chain, has_negative_eigenvalue
from services.polyexp import Coeff, SymIneq, SymTerm, coeff_eval, esign

# autovalores -1 ± √14/2: se encadena y todo el análisis vive en Q(√14)
QUADRATIC_CHAINED = """
vars x, y
guard x - 2*y - 2 >= 0 && 2*y + 3 >= 0
update x := -3*x + 1/2*y + 1
update y := -x + y + 2
"""

RATIONAL_LOOPS = [
    "leading_example", "weak_band", "increment_forever", "halving_band", "bounded_difference",
    "converging_counters", "countdown", "damped_band", "damped_below", "doubling_band",
    "drift_by_parameter", "halving_chase", "polynomial_drift", "scaled_pair", "strict_band",
    "three_halves_affine", "three_halves_band", "mixed_spectrum_3d", "flip_and_count", "negation_step",
]


def sym(constant, rel=Relation.GE, **coeffs):
    """Desigualdad con coeficientes constantes en m"""
    return SymIneq(
        SymTerm(tuple((n, Coeff.constant(Fraction(c))) for n, c in coeffs.items()), Coeff.constant(Fraction(constant))),
        rel,
    )


def pi_of(loop):
    cf = closed_form(loop)
    psi = build_instantiated_guard(loop, cf)
    rb = guard_rootbound(psi)
    return build_pi(psi, rb, cf.n0), cf.n0, rb


def analyzed_pi(loop):
    return pi_of(chain(loop) if has_negative_eigenvalue(loop) else loop)[0]


@pytest.mark.integration
def test_ejemplo_guia(leading_loop):
    verdict = decide(leading_loop)
    assert verdict.kind is VerdictKind.CONSTANT
    assert verdict.bound == 15
    assert 12 <= verdict.bound <= 66
    trace = verdict.trace
    assert (trace.n0, trace.rb, trace.pi_size, trace.chained) == (0, 6, 14, False)
    assert -1 in trace.ground_esigns
    # empate x/y en |L|·|U| = 49: gana el nombre
    assert trace.elimination_order[0] == "x"
    assert trace.formula_bound is not None and trace.formula_bound >= verdict.bound
    assert not trace.eigenvalues_in_unit_set


@pytest.mark.integration
def test_nilpotente(corpus_loop):
    verdict = decide(corpus_loop("nilpotent_shift"))
    assert verdict.is_constant and verdict.bound == 2
    assert verdict.trace.n0 == 2


@pytest.mark.integration
def test_encadenado_por_autovalor_negativo(corpus_loop):
    verdict = decide(corpus_loop("negation_step"))
    assert verdict.is_constant and verdict.bound == 1
    assert verdict.trace.chained
    # un paso encadenado son dos del bucle original
    assert verdict.trace.formula_bound % 2 == 1
    assert verdict.trace.formula_bound >= 1


@pytest.mark.integration
@pytest.mark.parametrize("name", ["increment_forever", "countdown", "always_true", "halving_unbounded"])
def test_bucles_sin_cota(corpus_loop, name):
    verdict = decide(corpus_loop(name))
    assert verdict.kind is VerdictKind.NONCONSTANT
    assert verdict.bound is None


@pytest.mark.integration
def test_guarda_contradictoria(corpus_loop):
    verdict = decide(corpus_loop("contradictory_strict"))
    assert verdict.is_constant and verdict.bound == 0


@pytest.mark.integration
def test_autovalores_complejos(corpus_loop):
    with pytest.raises(UnsupportedLoopClass):
        decide(corpus_loop("rotation"))


@pytest.mark.integration
@pytest.mark.parametrize("name, order", [
    ("leading_example", ["y", "x"]),
    ("scaled_pair", ["y", "x"]),
    ("flip_and_count", ["y", "x"]),
    ("drift_by_parameter", ["x", "y"]),
])
def test_el_orden_de_eliminacion_no_cambia_el_veredicto(corpus_loop, name, order):
    loop = corpus_loop(name)
    forced = decide(loop, order=order)
    assert forced.trace.elimination_order[:1] in ([], order[:1])
    assert forced.kind is decide(loop).kind


@pytest.mark.integration
@pytest.mark.parametrize("name", RATIONAL_LOOPS)
def test_paso_de_eliminacion_equisatisfacible_en_m_256(corpus_loop, name):
    pi = analyzed_pi(corpus_loop(name))
    assert pi.is_rational and pi.variables
    # en m = 256 todos los coeficientes tienen ya su signo eventual
    for c in pi.conjuncts:
        for k in (c.constant, *(k for _, k in c.coeffs)):
            assert alg_sign(coeff_eval(k, 256)) == esign(k)
    step = fm_eliminate(pi, choose_variable(pi))
    assert is_satisfiable(instantiate_pi(pi, 256)) == is_satisfiable(instantiate_pi(step, 256))


@pytest.mark.integration
@pytest.mark.parametrize("name", ["leading_example", "weak_band", "increment_forever", "halving_band"])
def test_sistema_final_coincide_con_m_256(corpus_loop, name):
    pi, _, _ = pi_of(corpus_loop(name))
    ground, _, _ = eliminate_all(pi)
    instantiated = is_satisfiable(instantiate_pi(pi, 256))
    assert (final_verdict(ground) is GroundOutcome.SAT_FOR_LARGE_M) == instantiated


@pytest.mark.integration
def test_autovalores_irracionales_encadenados():
    loop = parse_loop(QUADRATIC_CHAINED)
    start = time.perf_counter()
    verdict = decide(loop)
    assert time.perf_counter() - start < 120
    assert verdict.trace.chained
    assert "root" in verdict.trace.spectrum[0]
    agrees, first = oracle_agrees(loop, verdict, settings.ORACLE_MAX_UNROLL)
    assert agrees, (verdict.kind, verdict.bound, first)

@pytest.mark.unit
def test_paso_de_fourier_motzkin():
    pi = PiSystem((sym(-1, x=1), sym(Fraction(1, 2), Relation.GT, x=-1), sym(3, y=1)))
    result = fm_eliminate(pi, "x")
    assert len(result) == 2
    combined = result.conjuncts[-1]
    assert combined.is_ground and combined.rel is Relation.GT
    assert esign(combined.constant) == -1
    assert is_eventually_false(combined)


@pytest.mark.unit
def test_limite_de_fourier_motzkin():
    pi = PiSystem((sym(0, x=1), sym(1, x=1, y=1), sym(0, x=-1), sym(2, x=-1, y=1)))
    with pytest.raises(ResourceLimitExceeded):
        fm_eliminate(pi, "x", max_conjuncts=3)


@pytest.mark.unit
def test_poda_y_veredicto_final():
    pi = PiSystem((sym(2), sym(2), sym(0), sym(0, Relation.GT), sym(1, x=1), sym(1, x=1)))
    pruned = prune(pi)
    assert len(pruned) == 3
    assert final_verdict(PiSystem((sym(0), sym(5, Relation.GT)))) is GroundOutcome.SAT_FOR_LARGE_M
    assert final_verdict(PiSystem((sym(0, Relation.GT),))) is GroundOutcome.UNSAT_FOR_LARGE_M
    assert final_verdict(PiSystem((sym(-1),))) is GroundOutcome.UNSAT_FOR_LARGE_M
    assert final_verdict(PiSystem()) is GroundOutcome.SAT_FOR_LARGE_M
    with pytest.raises(ValueError):
        final_verdict(PiSystem((sym(1, x=1),)))


@pytest.mark.unit
def test_eleccion_de_variable():
    pi = PiSystem((sym(0, x=1, y=1), sym(0, x=-1, y=1), sym(0, y=-1), sym(0, x=1)))
    # x: 2·1, y: 2·1 -> empate, gana x
    assert choose_variable(pi) == "x"
    pi = PiSystem((sym(0, x=1, y=1), sym(0, x=-1, y=1), sym(0, x=1, y=-1), sym(0, x=-1)))
    # x: 2·2, y: 2·1
    assert choose_variable(pi) == "y"


@pytest.mark.unit
def test_salida_temprana():
    pi = PiSystem((sym(-1), sym(0, x=1), sym(0, x=-1, y=1)))
    ground, used, early = eliminate_all(pi)
    assert early and used == []
    assert final_verdict(ground) is GroundOutcome.UNSAT_FOR_LARGE_M


@pytest.mark.integration
def test_cota_por_puntos_de_muestra(corpus_loop):
    loop = corpus_loop("weak_band")
    pi, n0, rb = pi_of(loop)
    bound, m = formula_bound(pi, n0, rb)
    assert bound == n0 + rb * m
    assert bound >= 4


@pytest.mark.unit
def test_techo_de_desenrollado(corpus_loop):
    with pytest.raises(UnrollCeilingExceeded):
        compute_bound(corpus_loop("increment_forever"), 10)
    assert compute_bound(corpus_loop("weak_band"), 10) == 4


@pytest.mark.unit
def test_simulacion(leading_loop, corpus_loop):
    assert simulate(leading_loop, (0, 0), 100) == (11, True)
    assert simulate(leading_loop, (Fraction(1, 1000), Fraction(-1, 1448)), 100) == (15, True)
    assert simulate(corpus_loop("increment_forever"), (0,), 5) == (5, False)
    assert simulate(corpus_loop("countdown"), (3,), 3) == (3, True)
    with pytest.raises(ValueError):
        simulate(leading_loop, (0,), 5)


@pytest.mark.integration
@pytest.mark.parametrize("name", ["leading_example", "weak_band", "negation_step", "increment_forever", "flip_countdown"])
def test_acuerdo_con_el_oraculo(corpus_loop, name):
    loop = corpus_loop(name)
    agrees, _ = oracle_agrees(loop, decide(loop), settings.ORACLE_MAX_UNROLL)
    assert agrees


@pytest.mark.unit
def test_validacion_del_veredicto():
    with pytest.raises(ValidationError):
        Verdict(kind=VerdictKind.CONSTANT)
    with pytest.raises(ValidationError):
        Verdict(kind=VerdictKind.NONCONSTANT, bound=3)
    assert Verdict(kind=VerdictKind.CONSTANT, bound=0).is_constant


@pytest.mark.unit
def test_regla_de_chernikov():
    base = [sym(0, x=1, y=1), sym(0, x=-1, y=1), sym(0, x=1, y=-1), sym(1, x=-1, y=-1)]
    pi = PiSystem(tuple(replace(c, origins=frozenset({i})) for i, c in enumerate(base)))
    step = fm_eliminate(pi, "x")
    assert step.eliminated == 1 and len(step) == 4
    assert {c.origins for c in step.conjuncts} == {
        frozenset({0, 1}), frozenset({0, 3}), frozenset({1, 2}), frozenset({2, 3}),
    }
    # 2y >= 0 y -2y + 1 >= 0 juntarían 4 conjuntos tras 2 eliminaciones: sobra
    final = fm_eliminate(step, "y")
    assert len(final) == 2 and all(c.is_ground for c in final.conjuncts)
    # sin historias no se descarta nada
    plain = fm_eliminate(fm_eliminate(PiSystem(tuple(base)), "x"), "y")
    assert len(plain) == 3


@pytest.mark.unit
def test_poda_conserva_la_historia_mas_corta():
    short = replace(sym(0, x=1), origins=frozenset({1}))
    long = replace(sym(0, x=1), origins=frozenset({2, 3}))
    pruned = prune(PiSystem((long, short), eliminated=1))
    assert len(pruned) == 1
    assert pruned.conjuncts[0].origins == frozenset({1})
    assert pruned.eliminated == 1


@pytest.mark.unit
def test_salida_temprana_durante_la_eliminacion():
    pi = PiSystem((sym(0, x=1), sym(-1, x=-1), sym(0, x=1, y=1), sym(0, x=-1, y=-1)))
    ground, used, early = eliminate_all(pi, ["x"])
    assert early and used == ["x"]
    assert len(ground) == 1
    assert esign(ground.conjuncts[0].constant) == -1
    assert final_verdict(ground) is GroundOutcome.UNSAT_FOR_LARGE_M


@pytest.mark.integration
@pytest.mark.parametrize("name", ["leading_example", "bounded_difference", "polynomial_drift", "scaled_pair"])
def test_historias_acotadas_no_cambian_el_veredicto(corpus_loop, name):
    loop = corpus_loop(name)
    pi, _, _ = pi_of(loop)
    plain = PiSystem(tuple(replace(c, origins=frozenset()) for c in pi.conjuncts))
    with_history, _, _ = eliminate_all(pi)
    without_history, _, _ = eliminate_all(plain)
    assert final_verdict(with_history) is final_verdict(without_history)
