# test_exactmath.py
from fractions import Fraction

import pytest

from services.exactmath import (
    ONE,
    ZERO,
    NumberField,
    RatPoly,
    RealAlgebraic,
    alg_compare,
    alg_pow,
    alg_sign,
    alg_sum,
    as_algebraic,
    common_field,
    irreducible_factors,
    isolate_real_roots,
    rat_arith,
    roots_in_closed,
    sturm_count,
    Ordering,
)

X2_MINUS_2 = RatPoly((-2, 0, 1))
GOLDEN = RatPoly((-1, -1, 1))


@pytest.fixture
def sqrt2():
    return isolate_real_roots(X2_MINUS_2)[1]


@pytest.mark.unit
def test_rat_arith_exacto():
    assert rat_arith(Fraction(1, 3), Fraction(1, 6), "+") == Fraction(1, 2)
    assert rat_arith(Fraction(2, 3), Fraction(4, 9), "/") == Fraction(3, 2)
    with pytest.raises(ValueError):
        rat_arith(Fraction(1), Fraction(1), "%")


@pytest.mark.unit
def test_ratpoly_recorta_ceros_y_evalua():
    p = RatPoly((1, 0, 0))
    assert p.degree == 0
    assert X2_MINUS_2(Fraction(3, 2)) == Fraction(1, 4)
    assert RatPoly((2, 4)).monic() == RatPoly((Fraction(1, 2), 1))


@pytest.mark.unit
def test_sturm_cuenta_raices_en_intervalos():
    assert sturm_count(X2_MINUS_2) == 2
    assert sturm_count(X2_MINUS_2, Fraction(0), Fraction(2)) == 1
    x_minus_1 = RatPoly((-1, 1))
    # (lo, hi] excluye el extremo izquierdo, [lo, hi] no
    assert sturm_count(x_minus_1, Fraction(1), Fraction(2)) == 0
    assert roots_in_closed(x_minus_1, Fraction(1), Fraction(2)) == 1


@pytest.mark.unit
def test_factores_irreducibles_con_multiplicidad():
    # (z - 1)^2 (z^2 - 2)
    p = RatPoly((-2, 4, -1, -2, 1))
    factors = dict(irreducible_factors(p))
    assert factors[RatPoly((-1, 1))] == 2
    assert factors[X2_MINUS_2] == 1


@pytest.mark.unit
def test_aislamiento_de_raices(sqrt2):
    roots = isolate_real_roots(X2_MINUS_2)
    assert len(roots) == 2
    assert alg_sign(roots[0]) == -1 and alg_sign(roots[1]) == 1
    assert not sqrt2.is_rational
    assert sqrt2 * sqrt2 == 2
    assert roots[0] + roots[1] == 0


@pytest.mark.unit
def test_comparaciones_por_intervalos(sqrt2):
    assert sqrt2 < Fraction(3, 2)
    assert Fraction(7, 5) < sqrt2
    assert alg_compare(sqrt2, sqrt2) is Ordering.EQUAL
    assert alg_compare(-sqrt2, ZERO) is Ordering.LESS


@pytest.mark.unit
def test_identidades_algebraicas(sqrt2):
    phi = isolate_real_roots(GOLDEN)[1]
    assert phi * phi == phi + 1
    assert ONE / sqrt2 == sqrt2 / 2
    assert alg_pow(sqrt2, 4) == 4
    assert (sqrt2 - 1) * (sqrt2 + 1) == 1
    assert alg_sum([sqrt2, -sqrt2, ONE]) == 1


@pytest.mark.unit
def test_representacion_canonica(sqrt2):
    other = RealAlgebraic.from_root(X2_MINUS_2, Fraction(1), Fraction(2))
    assert other == sqrt2
    assert hash(other) == hash(sqrt2)
    assert str(as_algebraic(Fraction(3, 2))) == "3/2"
    assert str(sqrt2).startswith("root1(")


@pytest.mark.unit
def test_errores_de_entrada():
    with pytest.raises(TypeError):
        as_algebraic(0.5)
    with pytest.raises(ValueError):
        RealAlgebraic.from_root(X2_MINUS_2, Fraction(-2), Fraction(2))
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


@pytest.mark.unit
def test_aritmetica_racional_coincide_con_fraction(rng):
    for _ in range(50):
        a = Fraction(int(rng.integers(-50, 50)), int(rng.integers(1, 20)))
        b = Fraction(int(rng.integers(-50, 50)), int(rng.integers(1, 20)))
        x, y = as_algebraic(a), as_algebraic(b)
        assert x + y == a + b
        assert x - y == a - b
        assert x * y == a * b
        assert (x < y) == (a < b)


X2_MINUS_3 = RatPoly((-3, 0, 1))


def random_rational(rng, bound=50):
    return Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, 20)))


@pytest.fixture
def mixed_values(rng, sqrt2):
    """Racionales y r + s·α con α = √2 aislada, √2 en Q(√2) o φ en Q(√5)"""
    field_sqrt2 = common_field(isolate_real_roots(X2_MINUS_2))[1]
    phi = common_field(isolate_real_roots(GOLDEN))[1]
    values = []
    for _ in range(24):
        r, s = random_rational(rng, 9), random_rational(rng, 9)
        kind = int(rng.integers(4))
        if kind == 0 or s == 0:
            values.append(as_algebraic(r))
        else:
            values.append((sqrt2, field_sqrt2, phi)[kind - 1] * s + r)
    return values


@pytest.mark.unit
def test_cuerpo_comun_de_conjugados(sqrt2):
    minus, plus = common_field(isolate_real_roots(X2_MINUS_2))
    assert isinstance(plus.field, NumberField) and plus.field is minus.field
    assert plus.field.degree == 2
    assert minus + plus == 0
    assert plus * plus == 2
    assert minus < 0 < plus
    # misma clave y hash que la raíz aislada equivalente
    assert plus == sqrt2 and hash(plus) == hash(sqrt2)
    assert plus.key == sqrt2.key
    assert str(plus).startswith("root1(")
    assert ONE / (plus + 1) == plus - 1
    assert (plus + 1).minpoly == RatPoly((-1, -2, 1))


@pytest.mark.unit
def test_cuerpo_comun_de_varios_generadores(sqrt2):
    root2, root3, one = common_field([sqrt2, isolate_real_roots(X2_MINUS_3)[1], ONE])
    assert root2.field is root3.field and root2.field.degree == 4
    assert one.is_rational and one == 1
    assert root2 * root2 == 2 and root3 * root3 == 3
    product = root2 * root3
    assert product == isolate_real_roots(RatPoly((-6, 0, 1)))[1]
    assert product * product == 6
    assert Fraction(314, 100) < root2 + root3 < Fraction(315, 100)
    assert root2 == sqrt2 and hash(root2) == hash(sqrt2)


@pytest.mark.unit
def test_cuerpo_sin_irracionales():
    values = [as_algebraic(1), as_algebraic(Fraction(-1, 2))]
    assert common_field(values) == values
    with pytest.raises(ValueError):
        NumberField(ONE)


@pytest.mark.unit
def test_signo_del_opuesto(mixed_values):
    for a in mixed_values:
        assert alg_sign(a) == -alg_sign(-a)


@pytest.mark.unit
def test_comparacion_antisimetrica_y_transitiva(mixed_values, rng):
    for _ in range(30):
        a, b, c = (mixed_values[int(i)] for i in rng.integers(len(mixed_values), size=3))
        assert alg_compare(a, b) == -alg_compare(b, a)
        if alg_compare(a, b) <= 0 and alg_compare(b, c) <= 0:
            assert alg_compare(a, c) <= 0
        if alg_compare(a, b) == 0:
            assert a == b and hash(a) == hash(b)


@pytest.mark.unit
def test_aislamiento_cuenta_todas_las_raices(rng):
    for _ in range(25):
        coeffs = tuple(int(k) for k in rng.integers(-5, 6, size=int(rng.integers(2, 7))))
        p = RatPoly(coeffs)
        if p.degree < 1:
            continue
        roots = isolate_real_roots(p)
        assert len(roots) == sturm_count(p)
        assert all(alg_compare(x, y) is Ordering.LESS for x, y in zip(roots, roots[1:]))


@pytest.mark.unit
def test_axiomas_de_cuerpo_en_racionales(rng):
    for _ in range(30):
        a, b, c = (as_algebraic(random_rational(rng)) for _ in range(3))
        assert a + b == b + a and a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + ZERO == a and a * ONE == a
        assert a - a == 0
        if a != 0:
            assert a * (ONE / a) == 1
