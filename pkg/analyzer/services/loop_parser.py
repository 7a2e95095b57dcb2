"""
Parser del DSL de bucles.

    vars x, y
    guard 0 <= x + y <= 10
    update x := x + 1
    update y := 2*y

Las líneas también pueden separarse con ';' y '#' inicia un comentario. Las
comparaciones se normalizan a t > 0 / t >= 0 y las variables sin línea update
conservan su valor.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from core.errors import LoopSyntaxError
from core.logging_config import setup_logger
from models.loop import Guard, Inequation, LinearTerm, Loop, Relation

logger = setup_logger(__name__)

TOKEN_RE = re.compile(r"""
     (?P<ws>[ \t\r]+)
    |(?P<number>\d+(?:\.\d+)?)
    |(?P<name>[A-Za-z_][A-Za-z0-9_']*)
    |(?P<op>:=|<=|>=|==|&&|\*\*|[<>=+\-*/^(),])
""", re.VERBOSE)

COMPARISONS = {"<", "<=", ">", ">=", "=", "=="}
KEYWORDS = {"vars", "guard", "update"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str, line: int) -> list[Token]:
    tokens, pos = [], 0
    while pos < len(text):
        match = TOKEN_RE.match(text, pos)
        if match is None:
            raise LoopSyntaxError(f"unexpected character {text[pos]!r}", line, pos + 1)
        if match.lastgroup != "ws":
            tokens.append(Token(match.lastgroup, match.group(), line, pos + 1))
        pos = match.end()
    return tokens


def _split_lines(source: str):
    """(número de línea, columna inicial, texto) por cada sentencia no vacía"""
    for lineno, raw in enumerate(source.splitlines(), start=1):
        code = raw.split("#", 1)[0]
        offset = 0
        for chunk in code.split(";"):
            if chunk.strip():
                yield lineno, offset, chunk
            offset += len(chunk) + 1


class _StatementParser:
    """Descenso recursivo sobre los tokens de una sentencia."""

    def __init__(self, tokens: list[Token], line: int, end_column: int):
        self.tokens = tokens
        self.pos = 0
        self.line = line
        self.end_column = end_column
        self.names: list[Token] = []

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def error(self, message: str, token: Token | None = None) -> LoopSyntaxError:
        token = token or self.peek()
        column = token.column if token else self.end_column
        return LoopSyntaxError(message, self.line, column)

    def advance(self) -> Token:
        token = self.peek()
        if token is None:
            raise self.error("unexpected end of line")
        self.pos += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.peek()
        if token is None or token.text != text:
            raise self.error(f"expected {text!r}")
        return self.advance()

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def expect_end(self) -> None:
        if not self.at_end():
            raise self.error(f"unexpected {self.peek().text!r}")

    # expr := term (('+'|'-') term)*
    def expr(self) -> LinearTerm:
        result = self.term()
        while (tok := self.peek()) is not None and tok.text in ("+", "-"):
            self.advance()
            rhs = self.term()
            result = result + rhs if tok.text == "+" else result - rhs
        return result

    # term := power (('*'|'/') power)*
    def term(self) -> LinearTerm:
        result = self.power()
        while (tok := self.peek()) is not None and tok.text in ("*", "/"):
            self.advance()
            rhs = self.power()
            if tok.text == "*":
                if not result.is_constant and not rhs.is_constant:
                    raise self.error("nonlinear term (product of variables)", tok)
                result = result.scale(rhs.constant) if rhs.is_constant else rhs.scale(result.constant)
            else:
                if not rhs.is_constant:
                    raise self.error("nonlinear term (division by a variable)", tok)
                if rhs.constant == 0:
                    raise self.error("division by zero", tok)
                result = result.scale(1 / rhs.constant)
        return result

    # power := unary (('^'|'**') unary)?
    def power(self) -> LinearTerm:
        base = self.unary()
        tok = self.peek()
        if tok is not None and tok.text in ("^", "**"):
            self.advance()
            exponent = self.unary()
            if not base.is_constant or not exponent.is_constant:
                raise self.error("nonlinear term (variable in a power)", tok)
            if exponent.constant.denominator != 1 or exponent.constant < 0:
                raise self.error("only natural exponents of constants are allowed", tok)
            return LinearTerm(constant=base.constant ** int(exponent.constant))
        return base

    def unary(self) -> LinearTerm:
        tok = self.peek()
        if tok is not None and tok.text in ("-", "+"):
            self.advance()
            inner = self.unary()
            return -inner if tok.text == "-" else inner
        return self.atom()

    def atom(self) -> LinearTerm:
        tok = self.advance()
        if tok.kind == "number":
            return LinearTerm(constant=Fraction(tok.text))
        if tok.kind == "name":
            if tok.text in KEYWORDS:
                raise self.error(f"keyword {tok.text!r} used as a variable", tok)
            self.names.append(tok)
            return LinearTerm.var(tok.text)
        if tok.text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise self.error(f"unexpected {tok.text!r}", tok)

    def comparison_chain(self) -> list[Inequation]:
        operands = [self.expr()]
        relations = []
        while (tok := self.peek()) is not None and tok.text in COMPARISONS:
            relations.append(self.advance().text)
            operands.append(self.expr())
        if not relations:
            raise self.error("expected a comparison")
        conjuncts = []
        for lhs, rel, rhs in zip(operands, relations, operands[1:]):
            conjuncts.extend(normalize_comparison(lhs, rel, rhs))
        return conjuncts


def normalize_comparison(lhs: LinearTerm, rel: str, rhs: LinearTerm) -> list[Inequation]:
    """Lleva lhs rel rhs a la forma t > 0 / t >= 0"""
    if rel == "<=":
        return [Inequation(rhs - lhs, Relation.GE)]
    if rel == "<":
        return [Inequation(rhs - lhs, Relation.GT)]
    if rel == ">=":
        return [Inequation(lhs - rhs, Relation.GE)]
    if rel == ">":
        return [Inequation(lhs - rhs, Relation.GT)]
    if rel in ("=", "=="):
        return [Inequation(rhs - lhs, Relation.GE), Inequation(lhs - rhs, Relation.GE)]
    raise ValueError(f"Unknown comparison: {rel}")


def parse_loop(text: str) -> Loop:
    declared: list[str] | None = None
    seen: dict[str, None] = {}
    conjuncts: list[Inequation] = []
    updates: dict[str, LinearTerm] = {}
    used_names: list[Token] = []

    for lineno, offset, chunk in _split_lines(text):
        tokens = [
            Token(t.kind, t.text, t.line, t.column + offset)
            for t in tokenize(chunk, lineno)
        ]
        parser = _StatementParser(tokens, lineno, offset + len(chunk) + 1)
        head = parser.advance()
        if head.text == "vars":
            names = [parser.advance()]
            while not parser.at_end():
                parser.expect(",")
                names.append(parser.advance())
            for tok in names:
                if tok.kind != "name" or tok.text in KEYWORDS:
                    raise parser.error("expected a variable name", tok)
            declared = (declared or []) + [t.text for t in names]
            if len(set(declared)) != len(declared):
                raise parser.error("variable declared twice", names[-1])
            for tok in names:
                seen.setdefault(tok.text)
        elif head.text == "guard":
            conjuncts.extend(parser.comparison_chain())
            while not parser.at_end():
                parser.expect("&&")
                conjuncts.extend(parser.comparison_chain())
        elif head.text == "update":
            target = parser.advance()
            if target.kind != "name" or target.text in KEYWORDS:
                raise parser.error("expected a variable name", target)
            parser.expect(":=")
            rhs = parser.expr()
            parser.expect_end()
            if target.text in updates:
                raise parser.error(f"duplicate update for {target.text!r}", target)
            updates[target.text] = rhs
            parser.names.insert(0, target)
        else:
            raise parser.error(f"expected 'vars', 'guard' or 'update', got {head.text!r}", head)
        for tok in parser.names:
            seen.setdefault(tok.text)
        used_names.extend(parser.names)

    if declared is not None:
        for tok in used_names:
            if tok.text not in declared:
                raise LoopSyntaxError(f"unknown variable {tok.text!r}", tok.line, tok.column)
        variables = declared
    else:
        variables = list(seen)
    if not variables:
        raise LoopSyntaxError("the loop has no variables", 1, 1)

    A, b = [], []
    for name in variables:
        image = updates.get(name, LinearTerm.var(name))
        A.append([image.coeff(v) for v in variables])
        b.append(image.constant)
    loop = Loop(tuple(variables), A, b, Guard(tuple(conjuncts)))
    logger.debug(f"🧩 Bucle leído: {len(variables)} variables, {len(conjuncts)} conjuntos en la guarda")
    return loop


def pretty_print(loop: Loop) -> str:
    """Texto DSL tal que parse_loop(pretty_print(L)) == L"""
    lines = [f"vars {', '.join(loop.vars)}"]
    if loop.guard.conjuncts:
        lines.append(f"guard {loop.guard}")
    for name, image in loop.update_terms().items():
        lines.append(f"update {name} := {image}")
    return "\n".join(lines) + "\n"
