"""Command line front end.

Three subcommands: `analyze` runs a convergence scan from a config file and
writes CSV/JSON outputs, `verify` runs a named check suite, `gallery` lists
the built-in operator families. Exit codes: 0 success, 2 usage or config
error, 3 numerical failure inside a scan.
"""

from __future__ import annotations

import argparse
import sys

from .config import TOL_ENV_VAR, ConfigError, load_scan_config
from .operators import FAMILY_NAMES, get_family
from .scan import ScanNumericalError, render_csv, run_scan, write_outputs
from .suites import SUITE_NAMES, run_suite

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lpakit",
        description="Finite-truncation diagnostics for least-squares "
                    "projection approximations.",
        epilog=f"The {TOL_ENV_VAR} environment variable overrides the default "
               "decision tolerance (1e-8) used by the yes/no diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser(
        "analyze", help="run a convergence scan described by a JSON config")
    p_analyze.add_argument("config", help="path to the scan config file")
    p_analyze.add_argument(
        "--out-dir", default=None,
        help="directory prepended to relative output paths from the config")

    p_verify = sub.add_parser("verify", help="run a named verification suite")
    p_verify.add_argument("suite", help="one of: " + ", ".join(SUITE_NAMES))

    sub.add_parser("gallery", help="list the built-in operator families")
    return parser


def _cmd_analyze(config_path: str, out_dir: str | None) -> int:
    try:
        config = load_scan_config(config_path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        report = run_scan(config)
    except ScanNumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(f"operator: {config.operator_name}")
    sys.stdout.write(render_csv(report))
    print("verdicts:")
    for key, value in report.verdicts.items():
        print(f"  {key}: {value}")
    for path in write_outputs(report, out_dir):
        print(f"wrote {path}")
    return 0


def _cmd_verify(suite: str) -> int:
    try:
        results = run_suite(suite)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {suite}.{res.name}: {res.detail}")
        failed += 0 if res.passed else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def _cmd_gallery() -> int:
    for name in FAMILY_NAMES:
        family = get_family(name)
        print(name)
        if family.params:
            pairs = ", ".join(f"{k}={v}" for k, v in sorted(family.params.items()))
            print(f"  defaults: {pairs}")
        if family.kernel_dim_hint is not None:
            print(f"  kernel dim: {family.kernel_dim_hint}")
        print(f"  {family.notes}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return _cmd_analyze(args.config, args.out_dir)
        if args.command == "verify":
            return _cmd_verify(args.suite)
        return _cmd_gallery()
    except ConfigError as exc:
        # a malformed tolerance override reaches here from any subcommand
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
