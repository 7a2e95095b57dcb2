"""Tipos del modelo de bucles: términos lineales, guardas y el bucle x <- Ax + b"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping

from utils.matrices import Matrix, Vector, to_matrix, to_vector


class Relation(str, Enum):
    GT = ">"
    GE = ">="

    def combine(self, other: "Relation") -> "Relation":
        """>= solo si ambas son >=; > en otro caso"""
        return Relation.GE if self is Relation.GE and other is Relation.GE else Relation.GT


@dataclass(frozen=True)
class LinearTerm:
    coeffs: tuple[tuple[str, Fraction], ...] = ()
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        merged: dict[str, Fraction] = {}
        for name, c in self.coeffs:
            merged[name] = merged.get(name, Fraction(0)) + Fraction(c)
        object.__setattr__(self, "coeffs", tuple(sorted((n, c) for n, c in merged.items() if c != 0)))
        object.__setattr__(self, "constant", Fraction(self.constant))

    @classmethod
    def of(cls, coeffs: Mapping[str, Fraction] | None = None, constant=0) -> "LinearTerm":
        return cls(tuple((coeffs or {}).items()), Fraction(constant))

    @classmethod
    def var(cls, name: str) -> "LinearTerm":
        return cls(((name, Fraction(1)),))

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.coeffs)

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    def coeff(self, name: str) -> Fraction:
        return dict(self.coeffs).get(name, Fraction(0))

    def __add__(self, other: "LinearTerm") -> "LinearTerm":
        return LinearTerm(self.coeffs + other.coeffs, self.constant + other.constant)

    def __neg__(self) -> "LinearTerm":
        return self.scale(-1)

    def __sub__(self, other: "LinearTerm") -> "LinearTerm":
        return self + (-other)

    def scale(self, c) -> "LinearTerm":
        c = Fraction(c)
        return LinearTerm(tuple((n, a * c) for n, a in self.coeffs), self.constant * c)

    def evaluate(self, env: Mapping[str, Fraction]) -> Fraction:
        return self.constant + sum((a * Fraction(env[n]) for n, a in self.coeffs), Fraction(0))

    def substitute(self, images: Mapping[str, "LinearTerm"]) -> "LinearTerm":
        result = LinearTerm(constant=self.constant)
        for name, a in self.coeffs:
            image = images.get(name, LinearTerm.var(name))
            result = result + image.scale(a)
        return result

    def __str__(self) -> str:
        parts = []
        for name, a in self.coeffs:
            if a == 1:
                parts.append(("+", name))
            elif a == -1:
                parts.append(("-", name))
            else:
                parts.append(("-" if a < 0 else "+", f"{abs(a)}*{name}"))
        if self.constant != 0 or not parts:
            parts.append(("-" if self.constant < 0 else "+", str(abs(self.constant))))
        sign, text = parts[0]
        out = text if sign == "+" else f"-{text}"
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out


@dataclass(frozen=True)
class Inequation:
    """term > 0 o term >= 0"""
    term: LinearTerm
    rel: Relation = Relation.GE

    def holds(self, env: Mapping[str, Fraction]) -> bool:
        value = self.term.evaluate(env)
        return value > 0 if self.rel is Relation.GT else value >= 0

    def substitute(self, images: Mapping[str, LinearTerm]) -> "Inequation":
        return Inequation(self.term.substitute(images), self.rel)

    def __str__(self) -> str:
        return f"{self.term} {self.rel.value} 0"


@dataclass(frozen=True)
class Guard:
    conjuncts: tuple[Inequation, ...] = ()

    @property
    def variables(self) -> set[str]:
        return {n for ineq in self.conjuncts for n in ineq.term.variables}

    def holds(self, env: Mapping[str, Fraction]) -> bool:
        return all(ineq.holds(env) for ineq in self.conjuncts)

    def substitute(self, images: Mapping[str, LinearTerm]) -> "Guard":
        return Guard(tuple(ineq.substitute(images) for ineq in self.conjuncts))

    def __and__(self, other: "Guard") -> "Guard":
        return Guard(self.conjuncts + other.conjuncts)

    def __str__(self) -> str:
        return " && ".join(str(c) for c in self.conjuncts) or "true"


@dataclass(frozen=True)
class Loop:
    vars: tuple[str, ...]
    A: Matrix
    b: Vector
    guard: Guard = field(default_factory=Guard)

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "A", to_matrix(self.A))
        object.__setattr__(self, "b", to_vector(self.b))
        d = len(self.vars)
        if d < 1:
            raise ValueError("a loop needs at least one variable")
        if len(set(self.vars)) != d:
            raise ValueError(f"duplicate variables in {self.vars}")
        if len(self.A) != d or any(len(row) != d for row in self.A) or len(self.b) != d:
            raise ValueError(f"update dimensions do not match {d} variables")
        unknown = self.guard.variables - set(self.vars)
        if unknown:
            raise ValueError(f"guard mentions undeclared variables: {sorted(unknown)}")

    @property
    def dimension(self) -> int:
        return len(self.vars)

    def update_terms(self) -> dict[str, LinearTerm]:
        """x_i -> (A x + b)_i como términos lineales"""
        return {
            name: LinearTerm(tuple(zip(self.vars, row)), bi)
            for name, row, bi in zip(self.vars, self.A, self.b)
        }

    def env(self, values: Iterable) -> dict[str, Fraction]:
        return dict(zip(self.vars, (Fraction(v) for v in values)))
