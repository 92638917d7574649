#!/usr/bin/env python3
"""Run every scenario file in a directory (default: the built-in ones)."""
import argparse
import sys
from importlib import resources
from pathlib import Path

from logsheaf.scenario import run_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("directory", nargs="?", default=None)
    ap.add_argument("--degree-bound", type=int, default=None)
    ap.add_argument("--convention", default=None)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    root = Path(args.directory) if args.directory else Path(str(resources.files("logsheaf") / "data"))
    worst = 0
    for path in sorted(root.glob("*.scn")):
        rep = run_scenario(str(path), args.degree_bound, args.convention)
        sys.stdout.write(rep.to_json() + "\n" if args.json else rep.to_text() + "\n")
        if rep.exit_code or not rep.passed:
            worst = max(worst, rep.exit_code or 1)
    sys.exit(worst)


if __name__ == "__main__":
    main()
