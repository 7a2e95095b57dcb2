import time
from pathlib import Path

import joblib
import pandas as pd

from core.config import settings
from core.errors import AnalyzerError, UnsupportedLoopClass
from core.logging_config import setup_logger
from models.schemas import REPORT_COLUMNS, AnalysisReport
from services.decision_service import decide
from services.loop_parser import parse_loop

logger = setup_logger(__name__)

VERDICTS = ("constant", "nonconstant", "unsupported", "error")


def analyze_file(path: Path, max_unroll: int | None = None) -> AnalysisReport:
    """Analiza un fichero .loop; los errores quedan en el informe"""
    start = time.perf_counter()
    fields = {"file": str(path)}
    try:
        loop = parse_loop(Path(path).read_text(encoding="utf-8"))
        verdict = decide(loop, max_unroll=max_unroll)
        fields.update(
            verdict=verdict.kind.value,
            bound=verdict.bound,
            n0=verdict.trace.n0,
            rb=verdict.trace.rb,
            chained=verdict.trace.chained,
        )
    except UnsupportedLoopClass as e:
        fields.update(verdict="unsupported", message=f"unsupported loop class: {e}")
    except Exception as e:
        logger.error(f"❌ Error analizando {path}: {e}", exc_info=not isinstance(e, AnalyzerError))
        fields.update(verdict="error", message=f"{type(e).__name__}: {e}")
    fields["elapsed_ms"] = int((time.perf_counter() - start) * 1000)
    return AnalysisReport(**fields)


def run_batch(directory: Path, jobs: int | None = None, max_unroll: int | None = None) -> pd.DataFrame:
    directory = Path(directory)
    if not directory.is_dir():
        raise NotADirectoryError(f"not a directory: {directory}")
    files = sorted(directory.glob(f"*{settings.LOOP_FILE_SUFFIX}"), key=lambda p: p.name)
    logger.info(f"📂 Analizando {len(files)} bucles en {directory} (jobs={jobs or settings.BATCH_JOBS})")
    reports = joblib.Parallel(n_jobs=jobs or settings.BATCH_JOBS)(
        joblib.delayed(analyze_file)(path, max_unroll) for path in files
    )
    df = pd.DataFrame([r.model_dump() for r in reports], columns=REPORT_COLUMNS)
    df["bound"] = df["bound"].astype("Int64")
    return df


def summarize(df: pd.DataFrame) -> dict:
    counts = df["verdict"].value_counts()
    summary = {v: int(counts.get(v, 0)) for v in VERDICTS}
    summary["files"] = len(df)
    summary["mean_elapsed_ms"] = round(float(df["elapsed_ms"].mean()), 1) if len(df) else 0.0
    return summary


def summary_line(summary: dict) -> str:
    return (
        f"# summary: constant={summary['constant']} nonconstant={summary['nonconstant']} "
        f"unsupported={summary['unsupported']} error={summary['error']} "
        f"mean_elapsed_ms={summary['mean_elapsed_ms']}"
    )


def load_manifest(path: Path) -> pd.DataFrame:
    manifest = pd.read_csv(path, dtype={"file": str, "verdict": str})
    manifest["bound"] = manifest["bound"].astype("Int64")
    return manifest


def compare_with_manifest(df: pd.DataFrame, manifest: pd.DataFrame) -> list[str]:
    """Diferencias entre un lote y el manifiesto del corpus (por nombre de fichero)"""
    results = {Path(f).name: row for f, row in zip(df["file"], df.itertuples(index=False))}
    mismatches = []
    for row in manifest.itertuples(index=False):
        got = results.get(row.file)
        if got is None:
            mismatches.append(f"{row.file}: missing from batch")
            continue
        if got.verdict != row.verdict or (pd.isna(got.bound) != pd.isna(row.bound)) or (
            not pd.isna(row.bound) and int(got.bound) != int(row.bound)
        ):
            mismatches.append(
                f"{row.file}: expected {row.verdict} bound={row.bound}, got {got.verdict} bound={got.bound}"
            )
    return mismatches
