#!/usr/bin/env python3
"""
Command-line interface for hessian-rigidity.

Exit codes: 0 when every check passed, 1 when at least one check failed,
2 when the configuration or usage was rejected before any check ran.
"""

import argparse
import asyncio
import logging
import sys
from typing import Any, Dict, List, Optional

from ._version import __version__
from .exceptions import ConfigurationError, HessianRigidityError
from .harness import run_scenario, run_scenario_async
from .models import Report, Scenario
from .operators import get_builtin_operators
from .utils import format_summary, load_batch, load_json, load_matrix, parse_scenario, render_report, setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

SUBCOMMANDS = ["symm", "sigma0", "verify-example", "residual-scan", "rigidity-probe", "growth"]


def create_parser() -> argparse.ArgumentParser:
    """Create the command-line argument parser."""
    parser = argparse.ArgumentParser(
        prog="hessian-rigidity",
        description="Verify the numerical machinery of Liouville-type rigidity for Hessian operators",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Symmetric functions, Maclaurin chain and majorization of a matrix
  hessian-rigidity symm --matrix A.json --eps 2

  # Lower bound sigma0 for det Hess f - Laplacian f, with the oracle
  hessian-rigidity sigma0 --operator eq3 --n 3

  # Separable quadratic-growth example on an 11x11 grid
  hessian-rigidity verify-example --n 2 --q 0.5

  # Touching-paraboloid probe from a config file, report to disk
  hessian-rigidity rigidity-probe --config probe.json --out report.json

  # Several scenarios in one go
  hessian-rigidity --batch scenarios.json
        """,
    )

    parser.add_argument("command", nargs="?", choices=SUBCOMMANDS, help="Scenario kind to run")
    parser.add_argument("--config", type=str, help="JSON scenario file")
    parser.add_argument("--out", type=str, help="Report path (default: stdout)")
    parser.add_argument("--csv", type=str, help="Per-point CSV dump path")
    parser.add_argument("--format", choices=["json", "csv"], help="Report format (default: json)")
    parser.add_argument("--seed", type=int, help="Seed for random sampling and the oracle")
    parser.add_argument("--tol", type=float, help="Residual and identity tolerance")
    parser.add_argument("--operator", type=str, help="Builtin operator (eq3, eq4, theoremA, separable)")
    parser.add_argument("--n", type=int, help="Dimension")
    parser.add_argument("--q", type=float, help="Bound parameter of the separable example")
    parser.add_argument("--profile", choices=["cosine", "step", "quadrature-cosine"], help="Separable profile")
    parser.add_argument("--eps", type=float, action="append", help="Majorization or probe eps (repeatable)")
    parser.add_argument("--matrix", type=str, help="JSON file with a square matrix (kind symm)")
    parser.add_argument("--field", type=str, help="Field for rigidity-probe or growth")
    parser.add_argument("--batch", type=str, help="JSON file with a list of scenarios")
    parser.add_argument("--list-operators", action="store_true", help="List builtin operators")
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable debug logging")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    return parser


def print_operator_list() -> None:
    """Print the builtin operators."""
    print("Builtin operators:")
    print("==================")
    for name, info in get_builtin_operators().items():
        print(f"  {name:10} n >= {info['min_n']}   {info['description']}")
    print("  separable  n >= 2   S_n(Hess f) - omega(x) S_1(Hess f) = 0")
    print("  custom     n >= 1   constant coefficients from operator.coefficients")


def _nested(data: Dict[str, Any], section: str) -> Dict[str, Any]:
    value = data.setdefault(section, {})
    if not isinstance(value, dict):
        raise ConfigurationError(f"Section '{section}' must be an object", config_key=section)
    return value


def build_scenario(args: argparse.Namespace) -> Scenario:
    """
    Load the config (if any), then apply command-line overrides.

    Raises:
        ConfigurationError: If the resulting scenario is invalid
    """
    data: Dict[str, Any] = {}
    if args.config:
        loaded = load_json(args.config)
        if not isinstance(loaded, dict):
            raise ConfigurationError("Scenario must be a JSON object", expected_type="object")
        data = loaded
    if args.command:
        data["kind"] = args.command

    if args.operator is not None:
        _nested(data, "operator")["builtin"] = args.operator
    if args.n is not None:
        _nested(data, "operator")["n"] = args.n
    if args.q is not None:
        _nested(data, "operator")["q"] = args.q
    if args.profile is not None:
        _nested(data, "operator")["profile"] = args.profile
    if args.seed is not None:
        _nested(data, "sampling")["seed"] = args.seed
    if args.tol is not None:
        _nested(data, "tolerances")["check"] = args.tol
    if args.out is not None:
        _nested(data, "output")["report"] = args.out
    if args.csv is not None:
        _nested(data, "output")["csv"] = args.csv
    if args.format is not None:
        _nested(data, "output")["format"] = args.format
    if args.matrix is not None:
        data["matrix"] = load_matrix(args.matrix)
    if args.eps:
        if data.get("kind") == "rigidity-probe":
            _nested(data, "probe")["eps"] = args.eps
        else:
            data["eps"] = args.eps[-1]
    if args.field is not None:
        _nested(data, "growth" if data.get("kind") == "growth" else "probe")["field"] = args.field

    return parse_scenario(data)


def emit(report: Report, scenario: Scenario) -> None:
    """Print the report when it is not written to a file."""
    if scenario.output.report is None:
        sys.stdout.write(render_report(report, scenario.output.format))
    else:
        print(format_summary(report), file=sys.stderr)


async def process_batch(scenarios: List[Scenario], verbose: bool = False) -> int:
    """Run scenarios in order; the exit code is the worst of the runs."""
    print(f"Processing {len(scenarios)} scenarios...", file=sys.stderr)
    worst = EXIT_OK
    for i, scenario in enumerate(scenarios, 1):
        try:
            report = await run_scenario_async(scenario)
        except ConfigurationError as e:
            print(f"✗ Scenario {i} ({scenario.kind}) rejected: {e}", file=sys.stderr)
            worst = max(worst, EXIT_CONFIG)
            continue
        emit(report, scenario)
        worst = max(worst, report.exit_code)
        mark = "✓" if report.exit_code == EXIT_OK else "✗"
        if verbose or report.exit_code != EXIT_OK:
            print(f"{mark} Scenario {i} ({scenario.kind}): {report.summary.failed} failed", file=sys.stderr)

    print("\nBatch Summary:", file=sys.stderr)
    print(f"  Scenarios: {len(scenarios)}", file=sys.stderr)
    print(f"  Exit code: {worst}", file=sys.stderr)
    return worst


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point; returns the process exit code."""
    parser = create_parser()
    args = parser.parse_args(argv)
    setup_logging("DEBUG" if args.verbose else "WARNING")

    if args.list_operators:
        print_operator_list()
        return EXIT_OK

    if not args.command and not args.batch and not args.config:
        parser.print_usage(sys.stderr)
        print("error: a subcommand, --config or --batch is required", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.batch:
            return asyncio.run(process_batch(load_batch(args.batch), args.verbose))
        scenario = build_scenario(args)
        report = run_scenario(scenario)
    except HessianRigidityError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except KeyboardInterrupt:
        print("\n\nRun interrupted by user.", file=sys.stderr)
        return EXIT_FAILED

    emit(report, scenario)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
