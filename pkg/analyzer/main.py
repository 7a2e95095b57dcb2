import argparse
import sys

from core.config import settings
from core.errors import AnalyzerError
from core.logging_config import setup_logger
from core.terminal_interface import TerminalInterface

logger = setup_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="analyzer",
        description=f"{settings.PROJECT_NAME}: decides constant runtime of linear loops over R/Q",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide constant runtime of one loop")
    p.add_argument("file")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--explain", action="store_true",
                   help="print closed form, instantiated guard, rb and the final system")
    p.add_argument("--max-unroll", type=int, default=None,
                   help=f"ceiling for the bound computation (default {settings.MAX_UNROLL})")

    p = sub.add_parser("batch", help="analyze every loop file in a directory")
    p.add_argument("dir")
    p.add_argument("--csv", default=None, help="write the rows to this file instead of stdout")
    p.add_argument("--jobs", type=int, default=None, help=f"parallel workers (default {settings.BATCH_JOBS})")
    p.add_argument("--manifest", default=None, help="compare the results with a corpus manifest")

    p = sub.add_parser("simulate", help="run a loop on concrete inputs")
    p.add_argument("file")
    p.add_argument("--input", required=True, help='assignments, e.g. "x=1,y=-1/200"')
    p.add_argument("--steps", type=int, default=None, help=f"iteration ceiling (default {settings.SIMULATE_STEPS})")

    p = sub.add_parser("oracle", help="brute-force unrolling cross-check")
    p.add_argument("file")
    p.add_argument("--max-unroll", type=int, default=None,
                   help=f"unrolling depth (default {settings.ORACLE_MAX_UNROLL})")
    p.add_argument("--check", action="store_true", help="also run decide and flag disagreements")
    return ap


def run(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    terminal = TerminalInterface(out)
    try:
        if args.command == "decide":
            return terminal.cmd_decide(args.file, args.format, args.explain, args.max_unroll)
        if args.command == "batch":
            return terminal.cmd_batch(args.dir, args.csv, args.jobs, args.manifest)
        if args.command == "simulate":
            return terminal.cmd_simulate(args.file, args.input, args.steps)
        return terminal.cmd_oracle(args.file, args.max_unroll, args.check)
    except AnalyzerError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.error(f"❌ No se pudo leer la entrada: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(run())
