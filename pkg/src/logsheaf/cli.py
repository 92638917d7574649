"""Command-line entry point."""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .charts import DEFAULT_DEGREE_BOUND
from .paper_suite import verify_paper_suite
from .saturation import CONVENTIONS, STRICT
from .scenario import run_scenario

SCENARIO_COMMANDS = {
    "saturated": "saturated",
    "root-order": "root_order",
    "subdivide": "subdivide",
    "pl-sections": "pl_sections",
    "pic": "pic",
    "fiber": "fiber",
    "pushforward": "pushforward",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree-bound", type=int, default=None,
                        help=f"degree bound for sweeps and nilpotency checks (default {DEFAULT_DEGREE_BOUND})")
    common.add_argument("--convention", choices=CONVENTIONS, default=None,
                        help="whether a zero facet pairing is allowed for saturated elements")
    common.add_argument("--json", action="store_true", help="emit the JSON report")

    p = argparse.ArgumentParser(prog="logsheaf", description="Exact monoid, subdivision and chart computations.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, kind in SCENARIO_COMMANDS.items():
        s = sub.add_parser(name, parents=[common], help=f"run a {kind} scenario file")
        s.add_argument("scenario", help="path to a scenario file")
    sub.add_parser("verify-paper", parents=[common], help="run the built-in example suite")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify-paper":
        report = verify_paper_suite(
            args.degree_bound if args.degree_bound is not None else DEFAULT_DEGREE_BOUND,
            args.convention or STRICT,
        )
    else:
        report = run_scenario(args.scenario, args.degree_bound, args.convention,
                              kind=SCENARIO_COMMANDS[args.command])
    sys.stdout.write(report.to_json() + "\n" if args.json else report.to_text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
