import sys
import time
from fractions import Fraction
from pathlib import Path

from core.config import settings
from core.errors import AnalyzerError, OracleMismatch, UnsupportedLoopClass
from core.logging_config import setup_logger
from models.schemas import AnalysisReport, OracleReport, SimulationReport, Verdict
from services.batch_service import compare_with_manifest, load_manifest, run_batch, summarize, summary_line
from services.decision_service import decide, oracle_agrees, simulate
from services.linsat import first_unsat_unroll
from services.loop_parser import parse_loop

logger = setup_logger(__name__)


def parse_assignments(text: str, variables: tuple[str, ...]) -> list[Fraction]:
    """'x=1,y=-1/200' -> valores en el orden de las variables del bucle"""
    values = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        name, sep, literal = item.partition("=")
        if not sep:
            raise AnalyzerError(f"malformed assignment {item!r}; expected name=value")
        try:
            values[name.strip()] = Fraction(literal.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise AnalyzerError(f"invalid rational literal for {name.strip()}: {literal.strip()!r}") from e
    missing = [v for v in variables if v not in values]
    if missing:
        raise AnalyzerError(f"missing assignment for {', '.join(missing)}")
    unknown = sorted(set(values) - set(variables))
    if unknown:
        raise AnalyzerError(f"unknown variable in assignment: {', '.join(unknown)}")
    return [values[v] for v in variables]


class TerminalInterface:
    """Comandos de la CLI; escriben el informe en `out` y devuelven el código de salida"""

    def __init__(self, out=None):
        self.out = out or sys.stdout

    def emit(self, text: str = "") -> None:
        print(text, file=self.out)

    def load(self, file: str):
        return parse_loop(Path(file).read_text(encoding="utf-8"))

    def explain(self, verdict: Verdict) -> None:
        trace = verdict.trace
        self.emit(f"domain: {trace.domain}")
        self.emit(f"chained: {trace.chained}")
        self.emit(f"spectrum: {', '.join(trace.spectrum)}")
        self.emit(f"eigenvalues within {{-1, 0, 1}}: {trace.eigenvalues_in_unit_set}")
        self.emit("closed form:")
        for line in trace.closed_form:
            self.emit(f"  {line}")
        self.emit("instantiated guard:")
        for line in trace.instantiated_guard:
            self.emit(f"  {line}")
        self.emit(f"rb: {trace.rb}")
        self.emit(f"pi size: {trace.pi_size}")
        self.emit(f"elimination order: {', '.join(trace.elimination_order) or '-'}")
        if trace.early_exit:
            self.emit("elimination stopped early on an eventually false conjunct")
        self.emit("final system (esign):")
        for line, sign in zip(trace.ground_system, trace.ground_esigns):
            self.emit(f"  [{sign:+d}] {line}")
        if trace.formula_bound is not None:
            self.emit(f"sample-distance bound: {trace.formula_bound} (m={trace.witness_m})")

    def cmd_decide(self, file: str, fmt: str = "text", explain: bool = False, max_unroll: int | None = None) -> int:
        start = time.perf_counter()
        loop = self.load(file)
        try:
            verdict = decide(loop, max_unroll=max_unroll)
        except UnsupportedLoopClass as e:
            report = AnalysisReport(
                file=file,
                verdict="unsupported",
                elapsed_ms=int((time.perf_counter() - start) * 1000),
                message=f"unsupported loop class: {e}",
            )
            self.emit(report.model_dump_json(exclude={"trace"}) if fmt == "json" else f"UNSUPPORTED {e}")
            return e.exit_code

        report = AnalysisReport(
            file=file,
            verdict=verdict.kind.value,
            bound=verdict.bound,
            n0=verdict.trace.n0,
            rb=verdict.trace.rb,
            chained=verdict.trace.chained,
            elapsed_ms=int((time.perf_counter() - start) * 1000),
            trace=verdict.trace if explain else None,
        )
        if fmt == "json":
            self.emit(report.model_dump_json(exclude=None if explain else {"trace"}))
            return 0
        if verdict.is_constant:
            self.emit(f"CONSTANT bound={report.bound} n0={report.n0} rb={report.rb}")
        else:
            self.emit(f"NONCONSTANT n0={report.n0} rb={report.rb}")
        if explain:
            self.explain(verdict)
        return 0

    def cmd_batch(self, directory: str, csv: str | None = None, jobs: int | None = None,
                  manifest: str | None = None) -> int:
        df = run_batch(Path(directory), jobs=jobs)
        summary = summarize(df)
        if csv:
            df.to_csv(csv, index=False)
            logger.info(f"💾 CSV guardado en {csv}")
        else:
            self.emit(df.to_csv(index=False).rstrip("\n"))
        self.emit(summary_line(summary))
        if manifest:
            mismatches = compare_with_manifest(df, load_manifest(Path(manifest)))
            for line in mismatches:
                self.emit(f"# manifest mismatch: {line}")
            self.emit(f"# manifest: {'ok' if not mismatches else f'{len(mismatches)} mismatches'}")
            if mismatches:
                return 1
        return 0

    def cmd_simulate(self, file: str, inputs: str, steps: int | None = None) -> int:
        loop = self.load(file)
        values = parse_assignments(inputs, loop.vars)
        max_steps = steps if steps is not None else settings.SIMULATE_STEPS
        steps_run, halted = simulate(loop, values, max_steps)
        report = SimulationReport(
            file=file,
            inputs={v: str(x) for v, x in zip(loop.vars, values)},
            steps_run=steps_run,
            halted=halted,
            max_steps=max_steps,
        )
        self.emit(report.render())
        return 0

    def cmd_oracle(self, file: str, max_unroll: int | None = None, check: bool = False) -> int:
        loop = self.load(file)
        k = max_unroll if max_unroll is not None else settings.ORACLE_MAX_UNROLL
        report = OracleReport(file=file, max_unroll=k, first_unsat=first_unsat_unroll(loop, k))
        if check:
            verdict = decide(loop)
            agrees, first = oracle_agrees(loop, verdict, k)
            report.decided = verdict.kind
            report.decided_bound = verdict.bound
            report.mismatch = not agrees
            if verdict.is_constant:
                report.first_unsat = first
        self.emit(report.render())
        if report.mismatch:
            raise OracleMismatch(f"decide and unrolling disagree on {file}")
        return 0
