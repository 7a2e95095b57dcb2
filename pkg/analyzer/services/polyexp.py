"""
Álgebra de expresiones poli-exponenciales.

Una PolyExp es  Σ a_i(x) · b_i^n · n^e_i  con formas lineales a_i de coeficientes
algebraicos y bases b_i > 0. Un Coeff es su versión univariada en m,
Σ d_i · b_i^m · m^e_i, que aparece al sustituir n por n0 + j·m. Ambos se
mantienen normalizados: pares (base, exponente) únicos, sin sumandos nulos y
ordenados de mayor a menor.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Literal, Mapping

from models.loop import Relation
from services.exactmath import (
    ONE,
    ZERO,
    Number,
    RealAlgebraic,
    alg_pow,
    alg_sign,
    alg_sum,
    as_algebraic,
)

CoeffOp = Literal["+", "-", "*"]


def _check_base(base: RealAlgebraic) -> None:
    if alg_sign(base) != 1:
        raise ValueError(f"poly-exponential bases must be positive, got {base}")


def _power_text(base: RealAlgebraic, exp: int, var: str) -> str:
    parts = []
    if base != 1:
        parts.append(f"{base}^{var}" if base.is_rational else f"({base})^{var}")
    if exp == 1:
        parts.append(var)
    elif exp > 1:
        parts.append(f"{var}^{exp}")
    return "*".join(parts)


def _join_signed(parts: list[tuple[int, str]]) -> str:
    if not parts:
        return "0"
    sign, text = parts[0]
    out = f"-{text}" if sign < 0 else text
    for sign, text in parts[1:]:
        out += f" {'-' if sign < 0 else '+'} {text}"
    return out


def _scaled_text(d: RealAlgebraic, power: str) -> tuple[int, str]:
    sign = alg_sign(d)
    magnitude = -d if sign < 0 else d
    if not power:
        return sign, str(magnitude)
    if magnitude == 1:
        return sign, power
    return sign, f"{magnitude}*{power}"


# ---------------------------------------------------------------------------
# Formas lineales con coeficientes algebraicos
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinForm:
    coeffs: tuple[tuple[str, RealAlgebraic], ...] = ()
    constant: RealAlgebraic = ZERO

    def __post_init__(self):
        merged: dict[str, RealAlgebraic] = {}
        for name, c in self.coeffs:
            merged[name] = merged[name] + c if name in merged else as_algebraic(c)
        object.__setattr__(self, "coeffs", tuple(sorted((n, c) for n, c in merged.items() if c != 0)))
        object.__setattr__(self, "constant", as_algebraic(self.constant))

    @classmethod
    def of_constant(cls, value: Number) -> "LinForm":
        return cls((), as_algebraic(value))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs and self.constant == 0

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.coeffs)

    def coeff(self, name: str) -> RealAlgebraic:
        return dict(self.coeffs).get(name, ZERO)

    def __add__(self, other: "LinForm") -> "LinForm":
        return LinForm(self.coeffs + other.coeffs, self.constant + other.constant)

    def scale(self, c: Number) -> "LinForm":
        c = as_algebraic(c)
        if c == 0:
            return LinForm()
        return LinForm(tuple((n, a * c) for n, a in self.coeffs), self.constant * c)

    def evaluate(self, env: Mapping[str, Number]) -> RealAlgebraic:
        return self.constant + alg_sum(a * as_algebraic(env[name]) for name, a in self.coeffs)

    def __str__(self) -> str:
        parts = [_scaled_text(a, name) for name, a in self.coeffs]
        if self.constant != 0 or not parts:
            parts.append(_scaled_text(self.constant, "") if self.constant != 0 else (1, "0"))
        return _join_signed(parts)


# ---------------------------------------------------------------------------
# PolyExp
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Addend:
    form: LinForm
    base: RealAlgebraic
    exp: int


@dataclass(frozen=True)
class PolyExp:
    addends: tuple[Addend, ...] = ()

    @classmethod
    def constant(cls, value: Number) -> "PolyExp":
        return pe_normalize([(LinForm.of_constant(value), ONE, 0)])

    @property
    def is_zero(self) -> bool:
        return not self.addends

    @property
    def is_constant(self) -> bool:
        """Sin n ni variables: un único sumando constante de base 1"""
        return all(a.base == 1 and a.exp == 0 and not a.form.coeffs for a in self.addends)

    @property
    def variables(self) -> set[str]:
        return {n for a in self.addends for n in a.form.variables}

    def __add__(self, other: "PolyExp") -> "PolyExp":
        return pe_normalize(
            [(a.form, a.base, a.exp) for a in self.addends + other.addends]
        )

    def scale(self, c: Number) -> "PolyExp":
        return pe_normalize([(a.form.scale(c), a.base, a.exp) for a in self.addends])

    def __str__(self) -> str:
        parts = []
        for a in self.addends:
            power = _power_text(a.base, a.exp, "n")
            form = a.form
            if not power:
                parts.append((1, str(form)))
            elif not form.coeffs:
                parts.append(_scaled_text(form.constant, power))
            elif len(form.coeffs) == 1 and form.constant == 0:
                name, c = form.coeffs[0]
                parts.append(_scaled_text(c, f"{power}*{name}"))
            else:
                parts.append((1, f"({form})*{power}"))
        return _join_signed(parts)


def pe_normalize(raw: Iterable[tuple[LinForm, RealAlgebraic, int]]) -> PolyExp:
    merged: dict[tuple[RealAlgebraic, int], LinForm] = {}
    for form, base, exp in raw:
        base = as_algebraic(base)
        _check_base(base)
        key = (base, int(exp))
        merged[key] = merged[key] + form if key in merged else form
    addends = [Addend(form, base, exp) for (base, exp), form in merged.items() if not form.is_zero]
    addends.sort(key=lambda a: (a.base, a.exp), reverse=True)
    return PolyExp(tuple(addends))


def rootbound(t: PolyExp) -> int:
    """Cota de raíces reales: M - 1 + Σ e_i, 0 para la expresión nula"""
    if t.is_zero:
        return 0
    return len(t.addends) - 1 + sum(a.exp for a in t.addends)


def pe_evaluate(t: PolyExp, env: Mapping[str, Number], n: int) -> RealAlgebraic:
    return alg_sum(a.form.evaluate(env) * alg_pow(a.base, n) * (n ** a.exp) for a in t.addends)


# ---------------------------------------------------------------------------
# Coeff: poli-exponenciales univariadas en m
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoeffAddend:
    d: RealAlgebraic
    base: RealAlgebraic
    exp: int


@dataclass(frozen=True)
class Coeff:
    addends: tuple[CoeffAddend, ...] = ()

    @classmethod
    def of(cls, raw: Iterable[tuple[Number, Number, int]]) -> "Coeff":
        return coeff_normalize(raw)

    @classmethod
    def constant(cls, value: Number) -> "Coeff":
        return coeff_normalize([(value, 1, 0)])

    @property
    def is_zero(self) -> bool:
        return not self.addends

    @property
    def is_rational(self) -> bool:
        return all(a.d.is_rational and a.base.is_rational for a in self.addends)

    def __add__(self, other: "Coeff") -> "Coeff":
        return coeff_arith(self, other, "+")

    def __sub__(self, other: "Coeff") -> "Coeff":
        return coeff_arith(self, other, "-")

    def __mul__(self, other: "Coeff") -> "Coeff":
        return coeff_arith(self, other, "*")

    def __neg__(self) -> "Coeff":
        return Coeff(tuple(CoeffAddend(-a.d, a.base, a.exp) for a in self.addends))

    def scale(self, c: Number) -> "Coeff":
        return coeff_normalize([(a.d * as_algebraic(c), a.base, a.exp) for a in self.addends])

    def __str__(self) -> str:
        return _join_signed([_scaled_text(a.d, _power_text(a.base, a.exp, "m")) for a in self.addends])


def coeff_normalize(raw: Iterable[tuple[Number, Number, int]]) -> Coeff:
    merged: dict[tuple[RealAlgebraic, int], RealAlgebraic] = {}
    for d, base, exp in raw:
        base = as_algebraic(base)
        _check_base(base)
        key = (base, int(exp))
        merged[key] = merged[key] + d if key in merged else as_algebraic(d)
    addends = [CoeffAddend(d, base, exp) for (base, exp), d in merged.items() if d != 0]
    addends.sort(key=lambda a: (a.base, a.exp), reverse=True)
    return Coeff(tuple(addends))


def coeff_arith(a: Coeff, b: Coeff, op: CoeffOp) -> Coeff:
    if op == "+":
        return coeff_normalize([(x.d, x.base, x.exp) for x in a.addends + b.addends])
    if op == "-":
        return coeff_arith(a, -b, "+")
    if op == "*":
        return coeff_normalize(
            (x.d * y.d, x.base * y.base, x.exp + y.exp)
            for x in a.addends
            for y in b.addends
        )
    raise ValueError(f"Unknown operation: {op}")


def coeff_eval(c: Coeff, m: int) -> RealAlgebraic:
    return alg_sum(a.d * alg_pow(a.base, m) * (m ** a.exp) for a in c.addends)


def esign(c: Coeff) -> int:
    """Signo para m suficientemente grande: el del sumando dominante"""
    if c.is_zero:
        return 0
    # los sumandos están ordenados por (base, exp) descendente
    return alg_sign(c.addends[0].d)


# ---------------------------------------------------------------------------
# Desigualdades simbólicas en x con coeficientes en m
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymTerm:
    """Σ c_v(m)·v + c_0(m)"""
    coeffs: tuple[tuple[str, Coeff], ...] = ()
    constant: Coeff = Coeff()

    def __post_init__(self):
        merged: dict[str, Coeff] = {}
        for name, c in self.coeffs:
            merged[name] = merged[name] + c if name in merged else c
        object.__setattr__(self, "coeffs", tuple(sorted((n, c) for n, c in merged.items() if not c.is_zero)))

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.coeffs)

    def coeff(self, name: str) -> Coeff:
        return dict(self.coeffs).get(name, Coeff())

    def __add__(self, other: "SymTerm") -> "SymTerm":
        return SymTerm(self.coeffs + other.coeffs, self.constant + other.constant)

    def mul(self, c: Coeff) -> "SymTerm":
        return SymTerm(tuple((n, a * c) for n, a in self.coeffs), self.constant * c)

    def without(self, name: str) -> "SymTerm":
        return SymTerm(tuple((n, a) for n, a in self.coeffs if n != name), self.constant)

    def __str__(self) -> str:
        parts = [f"({c})*{n}" for n, c in self.coeffs]
        if not self.constant.is_zero or not parts:
            parts.append(f"({self.constant})" if len(self.constant.addends) > 1 else str(self.constant))
        return " + ".join(parts)


@dataclass(frozen=True)
class SymIneq:
    term: SymTerm
    rel: Relation = Relation.GE
    # índices de los conjuntos de π de los que procede (regla de Chernikov)
    origins: frozenset[int] = field(default=frozenset(), compare=False)

    @property
    def coeffs(self) -> tuple[tuple[str, Coeff], ...]:
        return self.term.coeffs

    @property
    def constant(self) -> Coeff:
        return self.term.constant

    @property
    def is_ground(self) -> bool:
        return not self.term.coeffs

    def __str__(self) -> str:
        return f"{self.term} {self.rel.value} 0"


def _binomial_weights(base: RealAlgebraic, exp: int, n0: int, j: int) -> Coeff:
    """b^n · n^e con n = n0 + j·m, como Coeff en m"""
    head = alg_pow(base, n0)
    step = alg_pow(base, j)
    raw = []
    for k in range(exp + 1):
        # 0^0 = 1
        weight = comb(exp, k) * Fraction(n0) ** (exp - k) * Fraction(j) ** k
        if weight:
            raw.append((head * weight, step, k))
    return coeff_normalize(raw)


def substitute_n(t: PolyExp, n0: int, j: int) -> SymTerm:
    """t[n / n0 + j·m]"""
    result = SymTerm()
    for a in t.addends:
        weight = _binomial_weights(a.base, a.exp, n0, j)
        coeffs = tuple((name, weight.scale(c)) for name, c in a.form.coeffs)
        result = result + SymTerm(coeffs, weight.scale(a.form.constant))
    return result
