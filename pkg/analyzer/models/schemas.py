from enum import Enum
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

# Veredictos que aparecen en informes y CSV
ReportVerdict = Literal["constant", "nonconstant", "unsupported", "error"]

REPORT_COLUMNS = ["file", "verdict", "bound", "n0", "rb", "chained", "elapsed_ms", "message"]


class VerdictKind(str, Enum):
    CONSTANT = "constant"
    NONCONSTANT = "nonconstant"


class DecisionTrace(BaseModel):
    """Registro de diagnóstico de una decisión"""
    n0: int = 0
    rb: int = 0
    chained: bool = False
    spectrum: list[str] = Field(default_factory=list)
    eigenvalues_in_unit_set: bool = False
    closed_form: list[str] = Field(default_factory=list)
    instantiated_guard: list[str] = Field(default_factory=list)
    pi_size: int = 0
    elimination_order: list[str] = Field(default_factory=list)
    ground_system: list[str] = Field(default_factory=list)
    ground_esigns: list[int] = Field(default_factory=list)
    early_exit: bool = False
    formula_bound: Optional[int] = None
    witness_m: Optional[int] = None
    domain: str = "R/Q"


class Verdict(BaseModel):
    kind: VerdictKind
    bound: Optional[int] = None
    trace: DecisionTrace = Field(default_factory=DecisionTrace)

    @model_validator(mode="after")
    def check_bound(self):
        if (self.bound is not None) != (self.kind is VerdictKind.CONSTANT):
            raise ValueError("bound must be present exactly for constant verdicts")
        return self

    @property
    def is_constant(self) -> bool:
        return self.kind is VerdictKind.CONSTANT


class AnalysisReport(BaseModel):
    """Una fila del análisis (salida de decide y de batch)"""
    file: str
    verdict: ReportVerdict
    bound: Optional[int] = None
    n0: int = 0
    rb: int = 0
    chained: bool = False
    elapsed_ms: int = 0
    message: str = ""
    # solo con decide --explain --format json; no es columna del CSV
    trace: Optional[DecisionTrace] = None

    @model_validator(mode="after")
    def check_bound(self):
        if (self.bound is not None) != (self.verdict == "constant"):
            raise ValueError("bound must be present exactly for constant verdicts")
        return self

    class Config:
        json_schema_extra = {
            "example": {
                "file": "corpus/leading_example.loop",
                "verdict": "constant",
                "bound": 15,
                "n0": 0,
                "rb": 6,
                "chained": False,
                "elapsed_ms": 850,
                "message": "",
            }
        }


class SimulationReport(BaseModel):
    file: str
    inputs: dict[str, str]
    steps_run: int
    halted: bool
    max_steps: int

    def render(self) -> str:
        if self.halted:
            return f"halted after {self.steps_run} iterations"
        return f"still running after {self.steps_run}"


class OracleReport(BaseModel):
    file: str
    max_unroll: int
    first_unsat: Optional[int] = None
    decided: Optional[VerdictKind] = None
    decided_bound: Optional[int] = None
    mismatch: bool = False

    def render(self) -> str:
        if self.first_unsat is None:
            line = f"satisfiable through {self.max_unroll}"
        else:
            line = f"unsatisfiable first at c={self.first_unsat}"
        if self.decided is not None:
            decided = self.decided.value.upper()
            if self.decided_bound is not None:
                decided += f" bound={self.decided_bound}"
            line += f"; decide: {decided}"
            if self.mismatch:
                line += " ORACLE-MISMATCH"
        return line
