"""Command-line entry point.

    kitaev-kms run --config cfg.toml --format json --out reports/
    kitaev-kms list-suites

Exit status: 0 when every record passes, 1 on any failure, 2 on a
configuration error.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path

from .errors import ConfigError
from .reporting import SUITES, emit, parse_config, run_suite


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="kitaev-kms", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute the verification suites from a config file")
    run_p.add_argument("--config", required=True, help="path to the TOML run configuration")
    run_p.add_argument("--format", choices=["csv", "json"], default="json")
    run_p.add_argument("--out", default=None, help="output directory (default: config 'output')")

    sub.add_parser("list-suites", help="print the available suite names")

    args = parser.parse_args(argv)

    if args.command == "list-suites":
        for name in SUITES:
            print(name)
        return 0

    try:
        cfg = parse_config(Path(args.config).read_text())
    except (OSError, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    records = run_suite(cfg)
    target = emit(records, args.format, args.out if args.out is not None else cfg.output)

    by_suite = Counter(r.suite for r in records)
    failed = [r for r in records if not r.passed]
    for suite in sorted(by_suite):
        bad = sum(1 for r in failed if r.suite == suite)
        status = "ok" if bad == 0 else f"{bad} FAILED"
        print(f"{suite:10s} {by_suite[suite]:4d} cases  {status}")
    for r in failed[:20]:
        print(f"  FAIL {r.suite}/{r.case}: expected {r.expected}, got {r.computed}")
    print(f"report: {target}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
