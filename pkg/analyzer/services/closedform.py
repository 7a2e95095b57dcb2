"""
Formas cerradas poli-exponenciales de up^n(x).

El bucle se homogeneiza (x' = A'x) y para cada coordenada se plantea
f(n) = Σ_{λ>0} Σ_{e<mult(λ)} c_{λ,e} · λ^n · n^e, con c_{λ,e} formas lineales en x.
Los coeficientes salen de igualar f con las filas de A'^n para n = n0, ..., n0+D-1
(sistema de Vandermonde confluente, invertible). Por último se fija z := 1.
"""
from dataclasses import dataclass
from typing import Mapping, Sequence

from core.errors import NonRealEigenvalues, SingularSystem
from core.logging_config import setup_logger
from models.loop import Loop
from services.exactmath import RealAlgebraic, alg_pow, alg_sign, common_field, irreducible_factors, isolate_real_roots
from services.loop_service import homogenize, matrix_eigenvalues_real
from services.polyexp import LinForm, PolyExp, pe_evaluate, pe_normalize
from utils.matrices import Matrix, charpoly, identity, mat_mul, rank

logger = setup_logger(__name__)


@dataclass(frozen=True)
class Spectrum:
    entries: tuple[tuple[RealAlgebraic, int], ...]

    @property
    def dimension(self) -> int:
        return sum(k for _, k in self.entries)

    @property
    def positive(self) -> tuple[tuple[RealAlgebraic, int], ...]:
        return tuple((lam, k) for lam, k in self.entries if alg_sign(lam) > 0)

    def within_unit_set(self) -> bool:
        """Todos los autovalores en {-1, 0, 1}"""
        return all(lam.is_rational and lam.value in (-1, 0, 1) for lam, _ in self.entries)


@dataclass(frozen=True)
class ClosedForm:
    vars: tuple[str, ...]
    forms: tuple[PolyExp, ...]
    n0: int

    def __getitem__(self, name: str) -> PolyExp:
        return self.forms[self.vars.index(name)]

    def as_dict(self) -> dict[str, PolyExp]:
        return dict(zip(self.vars, self.forms))

    def __str__(self) -> str:
        return ", ".join(f"{v} = {f}" for v, f in zip(self.vars, self.forms))


def spectrum(a: Matrix) -> Spectrum:
    p = charpoly(a)
    if not matrix_eigenvalues_real(a):
        raise NonRealEigenvalues()
    entries = []
    for factor, mult in irreducible_factors(p):
        entries.extend((root, mult) for root in isolate_real_roots(factor))
    # todos los irracionales en un mismo cuerpo Q(θ)
    roots = common_field([lam for lam, _ in entries])
    entries = sorted(zip(roots, (k for _, k in entries)), key=lambda e: e[0])
    return Spectrum(tuple(entries))


def nilpotency_index(a: Matrix) -> int:
    """Menor k con rank(A^k) = rank(A^(k+1))"""
    power = identity(len(a))
    current = rank(power)
    k = 0
    while True:
        power = mat_mul(power, a)
        following = rank(power)
        if following == current:
            return k
        current = following
        k += 1


def _solve(system: list[list[RealAlgebraic]], rhs: list[list[RealAlgebraic]]) -> list[list[RealAlgebraic]]:
    """
    Eliminación gaussiana libre de fracciones con varios lados derechos.
    Solo se divide en la sustitución hacia atrás.
    """
    size = len(system)
    rows = [list(r) + list(b) for r, b in zip(system, rhs)]
    width = len(rows[0]) if rows else 0
    for col in range(size):
        pivot = next((r for r in range(col, size) if alg_sign(rows[r][col]) != 0), None)
        if pivot is None:
            raise SingularSystem(f"singular interpolation system at column {col}")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        p = rows[col][col]
        for r in range(col + 1, size):
            f = rows[r][col]
            if alg_sign(f) == 0:
                continue
            rows[r] = [p * rows[r][c] - f * rows[col][c] for c in range(width)]
    solution = [[None] * (width - size) for _ in range(size)]
    for r in reversed(range(size)):
        for c in range(width - size):
            acc = rows[r][size + c]
            for k in range(r + 1, size):
                acc = acc - rows[r][k] * solution[k][c]
            solution[r][c] = acc / rows[r][r]
    return solution


def closed_form(loop: Loop) -> ClosedForm:
    """
    cl con up^n(x) = cl[n] para todo n >= n0. Requiere autovalores reales no
    negativos (el llamador encadena antes si hace falta).
    """
    hom = homogenize(loop)
    a = hom.A
    d = loop.dimension
    n0 = nilpotency_index(a)
    eigen = spectrum(a)
    if any(alg_sign(lam) < 0 for lam, _ in eigen.entries):
        raise ValueError("closed_form needs non-negative eigenvalues; chain the loop first")

    basis = [(lam, e) for lam, mult in eigen.positive for e in range(mult)]
    size = len(basis)
    logger.debug(f"🧮 Forma cerrada: n0={n0}, {size} incógnitas por coordenada")

    powers = []
    power = identity(len(a))
    for _ in range(n0):
        power = mat_mul(power, a)
    for _ in range(size):
        powers.append(power)
        power = mat_mul(power, a)

    system = [
        [alg_pow(lam, n0 + k) * ((n0 + k) ** e) for lam, e in basis]
        for k in range(size)
    ]
    # un lado derecho por cada (fila de variable original, columna de A')
    columns = [(i, c) for i in range(d) for c in range(d + 1)]
    rhs = [
        [RealAlgebraic.from_fraction(powers[k][i][c]) for i, c in columns]
        for k in range(size)
    ]
    solution = _solve(system, rhs)

    forms = []
    for i in range(d):
        raw = []
        for idx, (lam, e) in enumerate(basis):
            coeffs = [solution[idx][columns.index((i, c))] for c in range(d + 1)]
            # z := 1 convierte la última columna en la constante
            form = LinForm(tuple(zip(loop.vars, coeffs[:d])), coeffs[d])
            raw.append((form, lam, e))
        forms.append(pe_normalize(raw))
    cf = ClosedForm(loop.vars, tuple(forms), n0)
    logger.debug(f"✅ Forma cerrada: {cf}")
    return cf


def evaluate_closed_form(cf: ClosedForm, values: Sequence | Mapping, n: int) -> tuple[RealAlgebraic, ...]:
    env = dict(values) if isinstance(values, Mapping) else dict(zip(cf.vars, values))
    return tuple(pe_evaluate(form, env, n) for form in cf.forms)
