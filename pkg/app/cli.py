"""``mcmp`` command line entry point."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from app.config import configure_logging, settings
from app.multicut.exceptions import MulticutError, SolverInvariantError
from app.multicut.instance import load_instance
from app.multicut.oracle import exact_optimum
from app.multicut.solver import solve
from app.reporting import write_csv, write_solution, write_svg
from app.schemas.solver import SolveConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTERNAL = 2


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _number(value: float) -> str:
    # Avoid printing "-0".
    return f"{value + 0.0:g}"


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="mcmp", description="Minimum cost multicut by message passing")
    parser.add_argument("--log-level", default=None, help=f"Logging level (default: {settings.log_level})")
    commands = parser.add_subparsers(dest="command", required=True)

    solve_parser = commands.add_parser("solve", help="Solve an instance")
    solve_parser.add_argument("-i", "--input", required=True, help="Instance file in MULTICUT format")
    solve_parser.add_argument("--max-iter", type=int, dest="max_iterations", help="Message passing iterations")
    solve_parser.add_argument("--sep-interval", type=int, dest="separation_interval", help="Iterations between separation rounds")
    solve_parser.add_argument("--round-interval", type=int, dest="rounding_interval", help="Iterations between rounding rounds")
    solve_parser.add_argument("--epsilon", type=float, help="Minimum guaranteed bound increase of a separated subproblem")
    solve_parser.add_argument("--tighten", choices=["cycles", "cycles+oddwheels"], help="Inequalities to separate")
    solve_parser.add_argument("--time-limit", type=float, dest="time_limit", help="Wall-clock limit in seconds")
    solve_parser.add_argument("--log", type=Path, help="Write the convergence records as CSV")
    solve_parser.add_argument("--plot", type=Path, help="Write the convergence plot as SVG")
    solve_parser.add_argument("--solution", type=Path, help="Write edge labels and node components")
    solve_parser.add_argument("--store", action="store_true", help="Store the run in DATABASE_URL")

    oracle_parser = commands.add_parser("oracle", help="Exact optimum by enumeration (at most 12 nodes)")
    oracle_parser.add_argument("-i", "--input", required=True, help="Instance file in MULTICUT format")
    return parser


def _store(instance_name: str, instance, result, tighten: str) -> int:
    from app.crud.run_crud import RunCRUD
    from app.database.connection import create_database, get_session

    create_database()
    db = get_session()
    try:
        run = RunCRUD.create_from_result(db, instance_name, instance, result, tighten)
        return run.id
    finally:
        db.close()


def run_solve(args: argparse.Namespace) -> int:
    try:
        instance = load_instance(args.input)
    except (OSError, MulticutError) as error:
        print(f"mcmp: cannot read {args.input}: {error}", file=sys.stderr)
        return EXIT_USAGE
    try:
        config = SolveConfig.from_settings(
            max_iterations=args.max_iterations,
            separation_interval=args.separation_interval,
            rounding_interval=args.rounding_interval,
            epsilon=args.epsilon,
            tighten=args.tighten,
            time_limit=args.time_limit,
        )
    except ValidationError as error:
        print(f"mcmp: invalid settings: {error}", file=sys.stderr)
        return EXIT_USAGE

    try:
        result = solve(instance, config)
    except SolverInvariantError as error:
        logger.exception("solver invariant violated")
        print(f"mcmp: internal error: {error}", file=sys.stderr)
        return EXIT_INTERNAL

    try:
        if args.log:
            write_csv(result.records, args.log)
        if args.plot:
            write_svg(result.records, args.plot, title=Path(args.input).name)
        if args.solution:
            write_solution(instance, result.labeling, args.solution)
    except OSError as error:
        print(f"mcmp: cannot write output: {error}", file=sys.stderr)
        return EXIT_USAGE
    if args.store:
        run_id = _store(Path(args.input).name, instance, result, config.tighten)
        print(f"stored run {run_id}")

    print(f"LB={_number(result.lower_bound)} UB={_number(result.upper_bound)} status={result.status}")
    return EXIT_OK


def run_oracle(args: argparse.Namespace) -> int:
    try:
        instance = load_instance(args.input)
        optimum, partition = exact_optimum(instance)
    except (OSError, MulticutError) as error:
        print(f"mcmp: {error}", file=sys.stderr)
        return EXIT_USAGE
    print(f"OPT={_number(optimum)}")
    for cluster in partition.clusters():
        print(" ".join(map(str, cluster)))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    if args.command == "solve":
        return run_solve(args)
    return run_oracle(args)


if __name__ == "__main__":
    sys.exit(main())
