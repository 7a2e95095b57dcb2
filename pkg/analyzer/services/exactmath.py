"""
Aritmética exacta sobre Q y sobre los reales algebraicos.

Un real algebraico se representa de una de estas dos formas:

* un polinomio definidor irreducible sobre Q (mónico) y un intervalo racional
  que aísla una única raíz real;
* un elemento de un cuerpo de números Q(θ), es decir, un polinomio en θ de
  grado menor que el de θ. Su polinomio mínimo solo se calcula cuando hace
  falta (claves canónicas, impresión).

Dentro de un mismo cuerpo las operaciones son aritmética de polinomios módulo
el polinomio mínimo de θ, y los signos salen de evaluar por intervalos sobre la
caja aislante de θ. Entre números sin cuerpo común se usan resultantes (sympy)
y se refinan los intervalos por bisección hasta aislar la raíz del resultado.
Ningún paso usa coma flotante.
"""
from __future__ import annotations

import math
import operator
import threading
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import cached_property, lru_cache, total_ordering
from typing import Iterable, Literal, Sequence, Union

import sympy as sp
from sympy import Poly, QQ
from sympy.polys.matrices import DomainMatrix

from core.logging_config import setup_logger

logger = setup_logger(__name__)

Z = sp.Symbol("z")
_Y = sp.Symbol("_y")

NEG_INF = -math.inf
POS_INF = math.inf

ArithOp = Literal["+", "-", "*", "/"]
Number = Union[int, Fraction, "RealAlgebraic"]
Coords = tuple[Fraction, ...]

_RAT_OPS = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "/": operator.truediv,
}


def _fraction(value) -> Fraction:
    """Convierte un racional de sympy (o int/Fraction/elemento de QQ) a Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    return Fraction(int(value.numerator), int(value.denominator))


def _sympy_rational(value: Fraction) -> sp.Rational:
    return sp.Rational(value.numerator, value.denominator)


def _sign(value) -> int:
    return (value > 0) - (value < 0)


# ---------------------------------------------------------------------------
# Racionales
# ---------------------------------------------------------------------------

def rat_arith(a: Fraction, b: Fraction, op: ArithOp) -> Fraction:
    """Operación exacta entre racionales; Fraction ya guarda la forma canónica."""
    if op not in _RAT_OPS:
        raise ValueError(f"Unknown operation: {op}")
    return _RAT_OPS[op](Fraction(a), Fraction(b))


# ---------------------------------------------------------------------------
# Polinomios univariados sobre Q
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RatPoly:
    """coeffs[i] es el coeficiente de z**i; el último coeficiente nunca es 0."""
    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = [Fraction(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def linear_root(cls, r: Fraction) -> "RatPoly":
        return cls((-Fraction(r), Fraction(1)))

    @classmethod
    def from_sympy(cls, poly: Poly) -> "RatPoly":
        if poly.is_zero:
            return cls(())
        return cls(tuple(_fraction(c) for c in reversed(poly.all_coeffs())))

    def to_sympy(self) -> Poly:
        if not self.coeffs:
            return Poly(0, Z, domain=QQ)
        return Poly([_sympy_rational(c) for c in reversed(self.coeffs)], Z, domain=QQ)

    def as_expr(self, var: sp.Symbol = Z) -> sp.Expr:
        return sum((_sympy_rational(c) * var**i for i, c in enumerate(self.coeffs)), sp.Integer(0))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "RatPoly":
        if self.is_zero:
            return self
        lead = self.leading
        return RatPoly(tuple(c / lead for c in self.coeffs))

    def compose_neg(self) -> "RatPoly":
        """p(-z)"""
        return RatPoly(tuple(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)))

    def reciprocal(self) -> "RatPoly":
        """z**deg * p(1/z)"""
        return RatPoly(tuple(reversed(self.coeffs)))

    def shift(self, r: Fraction) -> "RatPoly":
        """p(z - r)"""
        expr = sp.expand(self.as_expr().subs(Z, Z - _sympy_rational(r)))
        return RatPoly.from_sympy(Poly(expr, Z, domain=QQ))

    def scale(self, r: Fraction) -> "RatPoly":
        """z**deg * p(z / r) escalado, cuyas raíces son r veces las de p"""
        n = self.degree
        return RatPoly(tuple(c * Fraction(r) ** (n - i) for i, c in enumerate(self.coeffs)))

    def sqf_part(self) -> "RatPoly":
        return _sqf_part(self)

    def __str__(self) -> str:
        return str(self.as_expr())


@lru_cache(maxsize=4096)
def _sqf_part(p: RatPoly) -> RatPoly:
    if p.degree <= 0:
        return p
    return RatPoly.from_sympy(p.to_sympy().sqf_part()).monic()


@lru_cache(maxsize=4096)
def irreducible_factors(p: RatPoly) -> tuple[tuple[RatPoly, int], ...]:
    """Factores irreducibles mónicos (no constantes) con su multiplicidad."""
    if p.degree <= 0:
        return ()
    _, factors = p.to_sympy().factor_list()
    return tuple((RatPoly.from_sympy(f).monic(), int(k)) for f, k in factors if f.degree() > 0)


@lru_cache(maxsize=4096)
def squarefree_factors(p: RatPoly) -> tuple[tuple[RatPoly, int], ...]:
    if p.degree <= 0:
        return ()
    _, factors = p.to_sympy().sqf_list()
    return tuple((RatPoly.from_sympy(f).monic(), int(k)) for f, k in factors if f.degree() > 0)


# ---------------------------------------------------------------------------
# Sucesiones de Sturm
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _sturm_chain(p: RatPoly) -> tuple[RatPoly, ...]:
    return tuple(RatPoly.from_sympy(q) for q in sp.sturm(p.sqf_part().to_sympy()))


def _sign_at(q: RatPoly, x) -> int:
    if x == POS_INF:
        return _sign(q.leading)
    if x == NEG_INF:
        return _sign(q.leading) * (-1 if q.degree % 2 else 1)
    return _sign(q(Fraction(x)))


def _variations(chain: Iterable[RatPoly], x) -> int:
    signs = [s for s in (_sign_at(q, x) for q in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: RatPoly, lo=NEG_INF, hi=POS_INF) -> int:
    """Número de raíces reales distintas de p en (lo, hi]"""
    if p.is_zero:
        raise ValueError("sturm_count needs a nonzero polynomial")
    if p.degree == 0 or not lo < hi:
        return 0
    chain = _sturm_chain(p)
    return _variations(chain, lo) - _variations(chain, hi)


def roots_in_closed(p: RatPoly, lo: Fraction, hi: Fraction) -> int:
    """Número de raíces reales distintas de p en [lo, hi]"""
    at_lo = 1 if p(lo) == 0 else 0
    return at_lo + sturm_count(p, lo, hi)


# ---------------------------------------------------------------------------
# Reales algebraicos
# ---------------------------------------------------------------------------

class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class _IsolatingBox:
    """Intervalo aislante compartido; solo se estrecha, bajo lock."""
    __slots__ = ("lo", "hi", "_lock")

    def __init__(self, lo: Fraction, hi: Fraction):
        self.lo = lo
        self.hi = hi
        self._lock = threading.Lock()

    def snapshot(self) -> tuple[Fraction, Fraction]:
        with self._lock:
            return self.lo, self.hi

    def narrow(self, lo: Fraction, hi: Fraction) -> None:
        with self._lock:
            if hi - lo < self.hi - self.lo:
                self.lo, self.hi = lo, hi


@total_ordering
class RealAlgebraic:
    """
    Número real algebraico. Sin cuerpo, `minpoly` y `box` lo determinan; con
    cuerpo, `coords` son sus coordenadas en la base 1, θ, ..., θ^(d-1) y nunca
    es racional (los racionales siempre van sin cuerpo).
    """

    def __init__(
        self,
        minpoly: RatPoly | None,
        box: _IsolatingBox | None = None,
        field: NumberField | None = None,
        coords: Coords = (),
    ):
        self._minpoly = minpoly
        self.box = box
        self.field = field
        self.coords = coords
        self._hash: int | None = None

    @classmethod
    def from_fraction(cls, value) -> "RealAlgebraic":
        r = Fraction(value)
        return cls(RatPoly.linear_root(r), _IsolatingBox(r, r))

    @classmethod
    def from_root(cls, poly: RatPoly, lo: Fraction, hi: Fraction) -> "RealAlgebraic":
        """Raíz de un polinomio irreducible aislada en [lo, hi]."""
        poly = poly.monic()
        if poly.degree == 1:
            return cls.from_fraction(-poly.coeffs[0])
        if roots_in_closed(poly, Fraction(lo), Fraction(hi)) != 1:
            raise ValueError(f"[{lo}, {hi}] does not isolate a root of {poly}")
        return cls(poly, _IsolatingBox(Fraction(lo), Fraction(hi)))

    @property
    def minpoly(self) -> RatPoly:
        if self._minpoly is None:
            self._minpoly = self.field.minpoly_of(self.coords)
        return self._minpoly

    @property
    def is_rational(self) -> bool:
        return self.field is None and self._minpoly.degree == 1

    @property
    def value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return -self._minpoly.coeffs[0]

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        if self.field is not None:
            return self.field.enclose(self.coords)
        return self.box.snapshot()

    @cached_property
    def key(self) -> tuple:
        """Clave canónica: el valor racional, o (polinomio mínimo, índice de la raíz)."""
        if self.is_rational:
            return ("q", self.value)
        if self.field is not None:
            return self.field.key_of(self.coords)
        lo, _ = self.interval
        return ("a", self.minpoly.coeffs, sturm_count(self.minpoly, NEG_INF, lo))

    def bisect(self) -> None:
        if self.field is not None:
            self.field.theta.bisect()
            return
        if self.is_rational:
            return
        lo, hi = self.interval
        mid = (lo + hi) / 2
        p = self.minpoly
        # irreducible de grado >= 2: ni lo ni mid son raíces
        if _sign(p(lo)) != _sign(p(mid)):
            self.box.narrow(lo, mid)
        else:
            self.box.narrow(mid, hi)

    def refine(self, width: Fraction) -> tuple[Fraction, Fraction]:
        while True:
            lo, hi = self.interval
            if hi - lo <= width:
                return lo, hi
            self.bisect()

    def approx(self, digits: int = 6) -> str:
        lo, hi = self.refine(Fraction(1, 10 ** (digits + 1)))
        return f"{float((lo + hi) / 2):.{digits}g}"

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.value == other
        if not isinstance(other, RealAlgebraic):
            return NotImplemented
        if self.field is not None and self.field is other.field:
            return self.coords == other.coords
        if self.is_rational or other.is_rational:
            return self.is_rational and other.is_rational and self.value == other.value
        if hash(self) != hash(other):
            return False
        return self.key == other.key

    def __hash__(self) -> int:
        # media de los conjugados: no depende del cuerpo en que se represente
        if self._hash is None:
            if self.is_rational:
                self._hash = hash(("q", self.value))
            elif self.field is not None:
                self._hash = hash(("a", self.field.conjugate_mean(self.coords)))
            else:
                p = self.minpoly
                self._hash = hash(("a", -p.coeffs[-2] / p.degree))
        return self._hash

    def __lt__(self, other) -> bool:
        return alg_compare(self, as_algebraic(other)) is Ordering.LESS

    def __bool__(self) -> bool:
        return alg_sign(self) != 0

    def __neg__(self) -> "RealAlgebraic":
        return _negate(self)

    def __add__(self, other) -> "RealAlgebraic":
        return alg_arith(self, as_algebraic(other), "+")

    __radd__ = __add__

    def __sub__(self, other) -> "RealAlgebraic":
        return alg_arith(self, as_algebraic(other), "-")

    def __rsub__(self, other) -> "RealAlgebraic":
        return alg_arith(as_algebraic(other), self, "-")

    def __mul__(self, other) -> "RealAlgebraic":
        return alg_arith(self, as_algebraic(other), "*")

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RealAlgebraic":
        return alg_arith(self, as_algebraic(other), "/")

    def __rtruediv__(self, other) -> "RealAlgebraic":
        return alg_arith(as_algebraic(other), self, "/")

    def __pow__(self, k: int) -> "RealAlgebraic":
        return alg_pow(self, k)

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.value)
        index = self.key[2]
        return f"root{index}({self.minpoly})~{self.approx()}"

    def __repr__(self) -> str:
        return f"RealAlgebraic({self})"


ZERO = RealAlgebraic.from_fraction(0)
ONE = RealAlgebraic.from_fraction(1)


def as_algebraic(value: Number) -> RealAlgebraic:
    if isinstance(value, RealAlgebraic):
        return value
    if isinstance(value, (int, Fraction)):
        return RealAlgebraic.from_fraction(value)
    raise TypeError(f"Cannot convert {type(value).__name__} to RealAlgebraic")


# ---------------------------------------------------------------------------
# Cuerpos de números Q(θ)
# ---------------------------------------------------------------------------

def _strip(coeffs: list[Fraction]) -> Coords:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _power_sums(p: RatPoly) -> Coords:
    """Sumas de potencias p_0..p_{d-1} de las raíces complejas de p mónico (Newton)"""
    d = p.degree
    a = p.coeffs
    sums = [Fraction(d)]
    for k in range(1, d):
        s = k * a[d - k]
        for i in range(1, k):
            s += a[d - i] * sums[k - i]
        sums.append(-s)
    return tuple(sums)


class NumberField:
    """Q(θ) para un θ irracional aislado; elementos como polinomios en θ de grado < d."""

    def __init__(self, theta: RealAlgebraic):
        if theta.is_rational or theta.field is not None:
            raise ValueError("the generator of a number field must be an isolated irrational root")
        self.theta = theta
        self.modulus = theta.minpoly
        self.degree = self.modulus.degree
        self._power_sums = _power_sums(self.modulus)
        self._minpolys: dict[Coords, RatPoly] = {}
        self._keys: dict[Coords, tuple] = {}

    @property
    def generator(self) -> RealAlgebraic:
        return self.element((Fraction(0), Fraction(1)))

    def reduce(self, coeffs: Sequence[Fraction]) -> Coords:
        """Resto módulo el polinomio mínimo (mónico) de θ"""
        c = list(coeffs)
        f = self.modulus.coeffs
        d = self.degree
        for i in range(len(c) - 1, d - 1, -1):
            lead = c[i]
            if lead:
                for k in range(d):
                    c[i - d + k] -= lead * f[k]
                c[i] = Fraction(0)
        return _strip(c[:d])

    def element(self, coords: Coords) -> RealAlgebraic:
        if len(coords) <= 1:
            return RealAlgebraic.from_fraction(coords[0] if coords else 0)
        return RealAlgebraic(None, field=self, coords=coords)

    def coords_of(self, a: RealAlgebraic) -> Coords:
        if a.field is self:
            return a.coords
        if a.is_rational:
            return (a.value,) if a.value else ()
        raise ValueError(f"{a} is not an element of {self}")

    def add(self, x: Coords, y: Coords) -> Coords:
        size = max(len(x), len(y))
        return _strip([
            (x[i] if i < len(x) else 0) + (y[i] if i < len(y) else 0)
            for i in range(size)
        ])

    def mul(self, x: Coords, y: Coords) -> Coords:
        if not x or not y:
            return ()
        out = [Fraction(0)] * (len(x) + len(y) - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    out[i + j] += a * b
        return self.reduce(out)

    def inverse(self, x: Coords) -> Coords:
        if not x:
            raise ZeroDivisionError("division by an algebraic zero")
        inv = RatPoly(x).to_sympy().invert(self.modulus.to_sympy())
        return self.reduce(RatPoly.from_sympy(inv).coeffs)

    def combine(self, a: RealAlgebraic, b: RealAlgebraic, op: ArithOp) -> RealAlgebraic:
        x, y = self.coords_of(a), self.coords_of(b)
        if op == "+":
            return self.element(self.add(x, y))
        if op == "-":
            return self.element(self.add(x, tuple(-c for c in y)))
        if op == "*":
            return self.element(self.mul(x, y))
        return self.element(self.mul(x, self.inverse(y)))

    def enclose(self, coords: Coords) -> tuple[Fraction, Fraction]:
        """Horner por intervalos sobre la caja actual de θ"""
        if not coords:
            return Fraction(0), Fraction(0)
        t = self.theta.interval
        lo = hi = coords[-1]
        for c in reversed(coords[:-1]):
            lo, hi = _interval_op((lo, hi), t, "*")
            lo, hi = lo + c, hi + c
        return lo, hi

    def minpoly_of(self, coords: Coords) -> RatPoly:
        """Parte libre de cuadrados del polinomio característico de la multiplicación por el elemento"""
        p = self._minpolys.get(coords)
        if p is None:
            d = self.degree
            columns = []
            current = coords
            for _ in range(d):
                columns.append(current + (Fraction(0),) * (d - len(current)))
                current = self.reduce((Fraction(0),) + current)
            rows = [[QQ(c.numerator, c.denominator) for c in row] for row in zip(*columns)]
            charpoly = DomainMatrix(rows, (d, d), QQ).charpoly()
            p = RatPoly(tuple(_fraction(c) for c in reversed(charpoly))).sqf_part()
            self._minpolys[coords] = p
        return p

    def key_of(self, coords: Coords) -> tuple:
        key = self._keys.get(coords)
        if key is None:
            p = self.minpoly_of(coords)
            while True:
                lo, hi = self.enclose(coords)
                if roots_in_closed(p, lo, hi) == 1:
                    break
                self.theta.bisect()
            key = ("a", p.coeffs, sturm_count(p, NEG_INF, lo))
            self._keys[coords] = key
        return key

    def conjugate_mean(self, coords: Coords) -> Fraction:
        """Traza / grado: media de los conjugados del elemento"""
        return sum((c * s for c, s in zip(coords, self._power_sums)), Fraction(0)) / self.degree

    def __repr__(self) -> str:
        return f"NumberField({self.modulus})"


def _sympy_root(a: RealAlgebraic) -> sp.Expr:
    return sp.CRootOf(a.minpoly.to_sympy(), a.key[2])


def _within_quadratic(field: NumberField, g: RealAlgebraic) -> RealAlgebraic | None:
    """g como elemento de `field` si es θ o, en grado 2, su conjugado"""
    if g.field is None and g.minpoly == field.modulus:
        if g.key == field.theta.key:
            return field.generator
        if field.degree == 2:
            # θ + θ' = -c1
            return field.element((-field.modulus.coeffs[1], Fraction(-1)))
    return None


def _primitive_field(generators: list[RealAlgebraic]) -> tuple[NumberField, list[RealAlgebraic]]:
    if generators[0].field is None:
        field = NumberField(generators[0])
        images = [_within_quadratic(field, g) for g in generators]
        if all(image is not None for image in images):
            return field, images
    f, lincomb, reps = sp.primitive_element([_sympy_root(g) for g in generators], Z, ex=True, polys=True)
    target = RatPoly.from_sympy(f).monic()
    weights = [int(c) for c in lincomb]
    # θ = Σ c_i·g_i: se afinan las cajas hasta que la suma aísle una raíz de f
    while True:
        lo = hi = Fraction(0)
        for c, g in zip(weights, generators):
            glo, ghi = g.interval
            lo, hi = (lo + c * glo, hi + c * ghi) if c >= 0 else (lo + c * ghi, hi + c * glo)
        if roots_in_closed(target, lo, hi) == 1:
            break
        for g in generators:
            g.bisect()
    field = NumberField(RealAlgebraic.from_root(target, lo, hi))
    images = [field.element(field.reduce([_fraction(c) for c in reversed(rep)])) for rep in reps]
    return field, images


def common_field(values: Sequence[RealAlgebraic]) -> list[RealAlgebraic]:
    """
    Reescribe los irracionales de `values` como elementos de un único cuerpo
    Q(θ), con θ un elemento primitivo calculado por sympy. Los racionales no
    cambian. Si no se encuentra el cuerpo se devuelven los valores tal cual y la
    aritmética sigue por resultantes.
    """
    generators: list[RealAlgebraic] = []
    for v in values:
        if not v.is_rational and v not in generators:
            generators.append(v)
    if not generators:
        return list(values)
    first = generators[0].field
    if first is not None and all(g.field is first for g in generators):
        return list(values)
    try:
        field, images = _primitive_field(generators)
    except Exception as e:
        logger.warning(f"⚠️ Sin cuerpo común para {len(generators)} números: {e}")
        return list(values)
    logger.debug(f"🧮 Cuerpo común de grado {field.degree}: {field.modulus}")
    return [v if v.is_rational else images[generators.index(v)] for v in values]


# ---------------------------------------------------------------------------
# Operaciones
# ---------------------------------------------------------------------------

def isolate_real_roots(p: RatPoly) -> list[RealAlgebraic]:
    """Una raíz por cada raíz real distinta de p, en orden ascendente."""
    if p.is_zero:
        raise ValueError("isolate_real_roots needs a nonzero polynomial")
    roots: list[RealAlgebraic] = []
    for factor, _ in irreducible_factors(p):
        if factor.degree == 1:
            roots.append(RealAlgebraic.from_fraction(-factor.coeffs[0]))
            continue
        for (lo, hi), _ in factor.to_sympy().intervals():
            roots.append(RealAlgebraic.from_root(factor, _fraction(lo), _fraction(hi)))
    return sorted(roots)


def _shared_field(a: RealAlgebraic, b: RealAlgebraic) -> NumberField | None:
    if a.field is not None and (b.field is a.field or b.is_rational):
        return a.field
    if b.field is not None and a.is_rational:
        return b.field
    return None


def alg_sign(a: RealAlgebraic) -> int:
    if a.is_rational:
        return _sign(a.value)
    # un irracional no se anula: basta afinar hasta que la caja no contenga 0
    while True:
        lo, hi = a.interval
        if lo >= 0:
            return 1
        if hi <= 0:
            return -1
        a.bisect()


def alg_compare(a: RealAlgebraic, b: RealAlgebraic) -> Ordering:
    if a.is_rational and b.is_rational:
        return Ordering(_sign(a.value - b.value))
    field = _shared_field(a, b)
    if field is not None:
        return Ordering(alg_sign(field.combine(a, b, "-")))
    if a.key == b.key:
        return Ordering.EQUAL
    while True:
        alo, ahi = a.interval
        blo, bhi = b.interval
        if ahi < blo:
            return Ordering.LESS
        if bhi < alo:
            return Ordering.GREATER
        if ahi - alo >= bhi - blo:
            a.bisect()
        else:
            b.bisect()


def _negate(a: RealAlgebraic) -> RealAlgebraic:
    if a.is_rational:
        return RealAlgebraic.from_fraction(-a.value)
    if a.field is not None:
        return a.field.element(tuple(-c for c in a.coords))
    lo, hi = a.interval
    return RealAlgebraic(a.minpoly.compose_neg().monic(), _IsolatingBox(-hi, -lo))


def _inverse(a: RealAlgebraic) -> RealAlgebraic:
    if alg_sign(a) == 0:
        raise ZeroDivisionError("division by an algebraic zero")
    if a.is_rational:
        return RealAlgebraic.from_fraction(1 / a.value)
    if a.field is not None:
        return a.field.element(a.field.inverse(a.coords))
    while True:
        lo, hi = a.interval
        if lo > 0 or hi < 0:
            break
        a.bisect()
    return RealAlgebraic(a.minpoly.reciprocal().monic(), _IsolatingBox(1 / hi, 1 / lo))


def _interval_op(x: tuple[Fraction, Fraction], y: tuple[Fraction, Fraction], op: str):
    if op == "+":
        return x[0] + y[0], x[1] + y[1]
    products = [x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1]]
    return min(products), max(products)


def _resultant(p: RatPoly, q: RatPoly, op: str) -> RatPoly:
    """Polinomio que se anula en alpha op beta para raíces alpha de p y beta de q"""
    p_y = p.as_expr(_Y)
    n = q.degree
    if op == "+":
        q_shifted = sum((_sympy_rational(c) * (Z - _Y) ** i for i, c in enumerate(q.coeffs)), sp.Integer(0))
    else:
        q_shifted = sum((_sympy_rational(c) * Z**i * _Y ** (n - i) for i, c in enumerate(q.coeffs)), sp.Integer(0))
    res = sp.resultant(sp.expand(p_y), sp.expand(q_shifted), _Y)
    return RatPoly.from_sympy(Poly(sp.expand(res), Z, domain=QQ))


def _combine(a: RealAlgebraic, b: RealAlgebraic, op: str) -> RealAlgebraic:
    res = _resultant(a.minpoly, b.minpoly, op)
    factors = [f for f, _ in irreducible_factors(res)]
    while True:
        lo, hi = _interval_op(a.interval, b.interval, op)
        counts = [roots_in_closed(f, lo, hi) for f in factors]
        if sum(counts) == 1:
            factor = factors[counts.index(1)]
            if factor.degree == 1:
                return RealAlgebraic.from_fraction(-factor.coeffs[0])
            return RealAlgebraic(factor, _IsolatingBox(lo, hi))
        a.bisect()
        b.bisect()


def alg_arith(a: RealAlgebraic, b: RealAlgebraic, op: ArithOp) -> RealAlgebraic:
    if op not in _RAT_OPS:
        raise ValueError(f"Unknown operation: {op}")
    if a.is_rational and b.is_rational:
        return RealAlgebraic.from_fraction(rat_arith(a.value, b.value, op))
    field = _shared_field(a, b)
    if field is not None:
        return field.combine(a, b, op)
    if op == "-":
        return alg_arith(a, _negate(b), "+")
    if op == "/":
        return alg_arith(a, _inverse(b), "*")
    if b.is_rational:
        a, b = b, a
    if a.is_rational:
        r = a.value
        lo, hi = b.interval
        if op == "+":
            return RealAlgebraic(b.minpoly.shift(r).monic(), _IsolatingBox(lo + r, hi + r))
        if r == 0:
            return ZERO
        lo, hi = sorted((lo * r, hi * r))
        return RealAlgebraic(b.minpoly.scale(r).monic(), _IsolatingBox(lo, hi))
    return _combine(a, b, op)


def alg_pow(a: RealAlgebraic, k: int) -> RealAlgebraic:
    if k < 0:
        raise ValueError("alg_pow expects a natural exponent")
    if a.is_rational:
        return RealAlgebraic.from_fraction(a.value ** k)
    result, base = ONE, a
    while k:
        if k & 1:
            result = alg_arith(result, base, "*")
        k >>= 1
        if k:
            base = alg_arith(base, base, "*")
    return result


def alg_sum(values: Iterable[RealAlgebraic]) -> RealAlgebraic:
    total = ZERO
    for v in values:
        total = alg_arith(total, v, "+")
    return total
