import argparse
import logging
import sys
from typing import List, Optional

from algebra.config import DEFAULT_CONFIG, WorkbenchConfig
from algebra.errors import WorkbenchError
from orchestrator.analysis_coordinator import AnalysisCoordinator
from orchestrator.report import Report

logger = logging.getLogger(__name__)

ANALYSES = ("congruences", "end", "aut", "fully_invariant", "characteristic", "hopfian", "census")


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="Report format")
    common.add_argument("--cap-end", type=positive_int, help=f"Largest End S (default {DEFAULT_CONFIG.cap_end})")
    common.add_argument(
        "--cap-congruences", type=positive_int,
        help=f"Largest congruence family (default {DEFAULT_CONFIG.cap_congruences})"
    )
    common.add_argument("--max-order", type=positive_int, help=f"Largest carrier (default {DEFAULT_CONFIG.max_order})")
    common.add_argument("--workers", type=positive_int, help="Processes for the End search (default 1)")
    common.add_argument(
        "--log-level", default="WARNING", choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        help="Diagnostics on stderr"
    )

    parser = argparse.ArgumentParser(
        prog="python -m cli",
        description="Finite semigroup workbench: congruences, End/Aut and their inverse limits"
    )
    commands = parser.add_subparsers(dest="command", required=True)
    source_help = "Semigroup file, or a builtin such as left-zero:3, cyclic:4, semilattice:2"

    validate = commands.add_parser("validate", parents=[common], help="Check a multiplication table")
    validate.add_argument("source", help=source_help)

    analyze = commands.add_parser("analyze", parents=[common], help="Congruences, End/Aut and invariance")
    analyze.add_argument("source", help=source_help)
    analyze.add_argument("--congruences", action="store_true", help="Congruence lattice")
    analyze.add_argument("--end", action="store_true", help="Endomorphism monoid")
    analyze.add_argument("--aut", action="store_true", help="Automorphism group")
    analyze.add_argument("--fully-invariant", action="store_true", help="Fully invariant verdicts")
    analyze.add_argument("--characteristic", action="store_true", help="Characteristic verdicts")
    analyze.add_argument("--hopfian", action="store_true", help="Surjective vs bijective endomorphisms")
    analyze.add_argument("--census", action="store_true", help="Generator extension census")
    analyze.add_argument("--index-bound", type=positive_int, help="Also report rho_n for this n")

    rho = commands.add_parser("rho", parents=[common], help="rho_n, the meet of congruences of index <= n")
    rho.add_argument("source", help=source_help)
    rho.add_argument("-n", type=positive_int, help="Single index bound (default: the whole sequence)")

    theorem9 = commands.add_parser(
        "theorem9", parents=[common], help="Verify End S as the limit of End S/ρ̂ along a chain"
    )
    theorem9.add_argument("source", help=source_help)
    theorem9.add_argument(
        "--family",
        help="Congruence literals separated by ';', e.g. 'universal;{0 2}{1 3};equality' (default: rho chain)"
    )
    theorem9.add_argument("--automorphisms", action="store_true", help="Verify Aut S instead of End S")

    tower = commands.add_parser("tower", parents=[common], help="Inverse systems")
    tower.add_argument("kind", choices=("left-zero", "file"))
    tower.add_argument("path", nargs="?", help="Tower file (kind 'file')")
    tower.add_argument("--levels", type=positive_int, default=3, help="Levels of the left-zero tower")

    end = commands.add_parser("end", parents=[common], help="List End S")
    end.add_argument("source", help=source_help)

    aut = commands.add_parser("aut", parents=[common], help="List Aut S")
    aut.add_argument("source", help=source_help)
    return parser


def config_from(args: argparse.Namespace) -> WorkbenchConfig:
    return DEFAULT_CONFIG.with_overrides(
        max_order=args.max_order,
        cap_end=args.cap_end,
        cap_congruences=args.cap_congruences,
        workers=args.workers
    )


def dispatch(args: argparse.Namespace, parser: argparse.ArgumentParser) -> Report:
    coordinator = AnalysisCoordinator(config_from(args))
    if args.command == "validate":
        return coordinator.cmd_validate(args.source)
    if args.command == "analyze":
        chosen = {name: getattr(args, name) for name in ANALYSES}
        if not any(chosen.values()):
            chosen = {name: True for name in ANALYSES}
        return coordinator.cmd_analyze(args.source, index_bound=args.index_bound, **chosen)
    if args.command == "rho":
        return coordinator.cmd_rho(args.source, args.n)
    if args.command == "theorem9":
        return coordinator.cmd_theorem9(args.source, args.family, args.automorphisms)
    if args.command == "tower":
        if args.kind == "file":
            if args.path is None:
                parser.error("tower file needs a path")
            return coordinator.cmd_tower_file(args.path)
        return coordinator.cmd_tower_left_zero(args.levels)
    if args.command == "end":
        return coordinator.cmd_end(args.source)
    return coordinator.cmd_aut(args.source)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one command and write its report to stdout

    Exit codes: 0 success, 1 domain error, 2 usage or parse error, 3 cap exceeded.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=args.log_level,
            stream=sys.stderr,
            format="%(levelname)s %(name)s: %(message)s",
            force=True
        )
        report = dispatch(args, parser)
    except SystemExit as exit_request:
        return exit_request.code if isinstance(exit_request.code, int) else 2
    except WorkbenchError as error:
        print(f"error: {error}", file=sys.stderr)
        return error.exit_code
    except OSError as error:
        print(f"error: {error.filename}: {error.strerror}", file=sys.stderr)
        return 2

    sys.stdout.write(report.render(args.format))
    return 0
