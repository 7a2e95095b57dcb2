# test_loop_model.py
from fractions import Fraction

import pandas as pd
import pytest

from core.config import settings
from core.errors import LoopSyntaxError
from models.loop import Guard, Inequation, LinearTerm, Loop, Relation
from services.loop_parser import parse_loop, pretty_print
from services.loop_service import (
    all_eigenvalues_real,
    apply_update,
    chain,
    fresh_name,
    has_negative_eigenvalue,
    homogenize,
)

CORPUS_FILES = sorted(p.stem for p in settings.get_corpus_dir().glob("*.loop"))


@pytest.mark.unit
def test_parse_ejemplo_guia(leading_loop):
    assert leading_loop.vars == ("x", "y")
    assert leading_loop.A == ((1, 0), (0, 2))
    assert leading_loop.b == (1, 0)
    assert str(leading_loop.guard) == "x + y >= 0 && -x - y + 10 >= 0"


@pytest.mark.unit
def test_variables_inferidas_por_orden_de_aparicion():
    loop = parse_loop("guard y > 0\nupdate x := x - y")
    assert loop.vars == ("y", "x")
    assert loop.A == ((1, 0), (-1, 1))


@pytest.mark.unit
def test_igualdad_y_cadenas_de_comparacion():
    loop = parse_loop("vars x\nguard x = 0 && 1 < x <= 2\nupdate x := x + 1")
    rels = [c.rel for c in loop.guard.conjuncts]
    assert rels == [Relation.GE, Relation.GE, Relation.GT, Relation.GE]
    assert [str(c) for c in loop.guard.conjuncts][2] == "x - 1 > 0"


@pytest.mark.unit
def test_sintaxis_extendida():
    loop = parse_loop("vars x, y; guard (x + y)/2 >= 2^3  # comentario\nupdate x := 3/2*x - y")
    assert str(loop.guard) == "1/2*x + 1/2*y - 8 >= 0"
    assert loop.A[0] == (Fraction(3, 2), -1)
    # y sin update conserva su valor
    assert loop.A[1] == (0, 1) and loop.b == (0, 0)


@pytest.mark.unit
@pytest.mark.parametrize("text, fragment", [
    ("vars x, y\nupdate x := x*y", "product of variables"),
    ("vars x\nupdate x := 2/x", "division by a variable"),
    ("vars x\nupdate x := x/0", "division by zero"),
    ("vars x\nguard x^2 > 0", "variable in a power"),
    ("vars x\nguard y > 0", "unknown variable"),
    ("vars x\nupdate x := 1\nupdate x := 2", "duplicate update"),
    ("vars x, x", "declared twice"),
    ("vars x\nguard x $ 0", "unexpected character"),
    ("vars x\nguard x + 1", "expected a comparison"),
    ("vars x\nloop x := 1", "expected 'vars', 'guard' or 'update'"),
])
def test_errores_de_sintaxis(text, fragment):
    with pytest.raises(LoopSyntaxError) as info:
        parse_loop(text)
    assert fragment in str(info.value)
    assert info.value.exit_code == 3


@pytest.mark.unit
def test_posicion_del_error():
    with pytest.raises(LoopSyntaxError) as info:
        parse_loop("vars x, y\nupdate x := x*y")
    assert (info.value.line, info.value.column) == (2, 14)
    assert str(info.value).startswith("line 2, column 14:")


@pytest.mark.unit
@pytest.mark.parametrize("name", CORPUS_FILES)
def test_pretty_print_ida_y_vuelta(corpus_loop, name):
    loop = corpus_loop(name)
    assert parse_loop(pretty_print(loop)) == loop


@pytest.mark.unit
def test_validacion_del_bucle():
    with pytest.raises(ValueError):
        Loop(("x",), [[1, 0]], [0])
    with pytest.raises(ValueError):
        Loop(("x", "x"), [[1, 0], [0, 1]], [0, 0])
    with pytest.raises(ValueError):
        Loop(("x",), [[1]], [0], Guard((Inequation(LinearTerm.var("y")),)))


@pytest.mark.unit
def test_terminos_lineales():
    t = LinearTerm.of({"x": Fraction(1), "y": Fraction(-3, 2)}, Fraction(1, 2))
    assert str(t) == "x - 3/2*y + 1/2"
    assert (t - t).is_constant
    assert t.substitute({"x": LinearTerm.var("y")}) == LinearTerm.of({"y": Fraction(-1, 2)}, Fraction(1, 2))
    assert t.evaluate({"x": 1, "y": 1}) == 0


@pytest.mark.unit
def test_apply_update(leading_loop):
    assert apply_update(leading_loop, (1, -1)) == (2, -2)
    with pytest.raises(ValueError):
        apply_update(leading_loop, (1,))


@pytest.mark.unit
def test_encadenado(corpus_loop):
    chained = chain(corpus_loop("negation_step"))
    assert chained.A == ((1,),) and chained.b == (0,)
    assert [str(c) for c in chained.guard.conjuncts] == ["x >= 0", "-x - 1 >= 0"]


@pytest.mark.unit
def test_encadenado_equivale_a_dos_pasos(corpus_loop, rng):
    loop = corpus_loop("flip_and_count")
    chained = chain(loop)
    for _ in range(10):
        v = tuple(Fraction(int(k), 3) for k in rng.integers(-30, 30, size=loop.dimension))
        assert apply_update(chained, v) == apply_update(loop, apply_update(loop, v))
        env = loop.env(v)
        expected = loop.guard.holds(env) and loop.guard.holds(loop.env(apply_update(loop, v)))
        assert chained.guard.holds(env) == expected


@pytest.mark.unit
def test_homogeneizar(leading_loop, corpus_loop):
    hom = homogenize(leading_loop)
    assert hom.vars == ("x", "y", "z")
    assert hom.A == ((1, 0, 1), (0, 2, 0), (0, 0, 1))
    assert hom.b == (0, 0, 0)
    # el corpus ya usa z: se elige otro nombre
    assert homogenize(corpus_loop("nilpotent_chain3")).vars[-1] == "z1"
    assert fresh_name(("z", "z1")) == "z2"


@pytest.mark.unit
def test_autovalores(leading_loop, corpus_loop):
    assert not has_negative_eigenvalue(leading_loop)
    assert has_negative_eigenvalue(corpus_loop("negation_step"))
    assert has_negative_eigenvalue(corpus_loop("fibonacci_positive"))
    assert not has_negative_eigenvalue(corpus_loop("nilpotent_chain3"))
    assert all_eigenvalues_real(leading_loop)
    assert not all_eigenvalues_real(corpus_loop("rotation"))


@pytest.mark.unit
def test_manifiesto_cubre_el_corpus(manifest_file):
    manifest = pd.read_csv(manifest_file)
    assert list(manifest.columns) == ["file", "verdict", "bound"]
    assert sorted(manifest["file"]) == [f"{name}.loop" for name in CORPUS_FILES]
    assert len(CORPUS_FILES) >= 30


@pytest.mark.unit
@pytest.mark.parametrize("name", ["leading_example", "polynomial_drift", "mixed_spectrum_3d", "nilpotent_chain3"])
def test_homogeneizar_conserva_la_trayectoria(corpus_loop, rng, name):
    loop = corpus_loop(name)
    hom = homogenize(loop)
    for _ in range(20):
        v = tuple(Fraction(int(k), int(q)) for k, q in zip(
            rng.integers(-20, 21, size=loop.dimension), rng.integers(1, 6, size=loop.dimension)
        ))
        w = v + (Fraction(1),)
        for _ in range(10):
            v, w = apply_update(loop, v), apply_update(hom, w)
            assert w[:-1] == v and w[-1] == 1


@pytest.mark.unit
def test_normalizacion_de_la_guarda_en_puntos_aleatorios(rng):
    loop = parse_loop("vars x, y\nguard 1 < x <= 2*y && x + y = 3 && (x - y)/2 >= -1 && 3 > y\nupdate x := x")

    def direct(x, y):
        return 1 < x <= 2 * y and x + y == 3 and (x - y) / 2 >= -1 and 3 > y

    for _ in range(60):
        y = Fraction(int(rng.integers(-12, 13)), int(rng.integers(1, 4)))
        # la mitad de los puntos sobre la recta x + y = 3
        x = 3 - y if rng.integers(2) else Fraction(int(rng.integers(-12, 13)), int(rng.integers(1, 4)))
        assert loop.guard.holds(loop.env((x, y))) == direct(x, y)
