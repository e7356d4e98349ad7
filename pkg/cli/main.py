"""Command-line entry point: ``bpgc <command> [options]``."""

import argparse
import logging
import sys
import traceback
from typing import List, Optional

from core.errors import BPGCError
from sample.gibbs import DEFAULT_SEED

from . import commands
from .report import RunReport, stdout_report
from .settings import default_threads, load_settings

COMMANDS = {
    'eval': commands.cmd_eval,
    'sample': commands.cmd_sample,
    'fit': commands.cmd_fit,
    'gof': commands.cmd_gof,
    'simstudy': commands.cmd_simstudy,
    'make-dataset': commands.cmd_make_dataset,
    'histogram': commands.cmd_histogram,
}


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def seed_value(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2**64)")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", help="Also write the JSON run report to this file")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging on standard error")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument(
        "--params", nargs=5, type=float, metavar=("M10", "M01", "M11", "M02", "M12"),
        help="Parameter vector m10 m01 m11 m02 m12",
    )

    parser = argparse.ArgumentParser(
        prog="bpgc",
        description="Bivariate Poisson-Gamma conditionals: evaluate, sample, fit and test",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common, params], help="Density, marginals and normalizer")
    p.add_argument("--x", type=int, help="Count coordinate")
    p.add_argument("--y", type=float, help="Positive real coordinate")
    p.add_argument("--grid", help="Grid such as x=0..15,y=0.1..10:100 (CSV output)")
    p.add_argument("--tol", type=float, default=1e-12, help="Relative tolerance of the normalizer series")
    p.add_argument("--out", help="CSV file for --grid (default: standard output)")

    p = sub.add_parser("sample", parents=[common, params], help="Draw a dataset")
    p.add_argument("--n", type=positive_int, required=True)
    p.add_argument("--seed", type=seed_value, default=DEFAULT_SEED)
    p.add_argument("--method", choices=("exact", "gibbs"), default="exact")
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--thin", type=int, default=5)
    p.add_argument("--init-y", type=float, default=1.0)
    p.add_argument("--out", help="CSV file (default: standard output)")

    p = sub.add_parser("fit", parents=[common], help="Maximum-likelihood fit of a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--init", nargs=5, type=float, metavar=("M10", "M01", "M11", "M02", "M12"))
    p.add_argument("--warm-start", action="store_true", help="Start from moment-based estimates")
    p.add_argument("--no-std-errors", action="store_true")

    p = sub.add_parser("gof", parents=[common], help="Fit, simulate and run the two-sample test")
    p.add_argument("--data", required=True)
    p.add_argument("--nperm", type=int, default=999)
    p.add_argument("--seed", type=seed_value, default=DEFAULT_SEED)
    p.add_argument("--method", choices=("exact", "gibbs"), default="exact")
    p.add_argument("--n-sim", type=positive_int, help="Simulated sample size (default: data size)")
    p.add_argument("--self-compare", action="store_true", help="Test the data against itself")

    p = sub.add_parser("simstudy", parents=[common, params], help="Simulate, fit and test over sample sizes")
    p.add_argument("--case", type=int, choices=sorted(commands.SIMSTUDY_CASES), default=1)
    p.add_argument("--sizes", type=positive_int, nargs="+", default=[100, 1000, 10000])
    p.add_argument("--replicates", type=positive_int, default=20)
    p.add_argument("--seed", type=seed_value, default=DEFAULT_SEED)
    p.add_argument("--out", help="Directory for table1.csv, table1_summary.csv and table2.csv")
    p.add_argument("--threads", type=positive_int, default=None, help="Worker processes (default: BPGC_THREADS or 1)")
    p.add_argument("--nperm", type=int, default=999)
    p.add_argument("--gof-n", type=positive_int, default=1000)
    p.add_argument("--gof-replicates", type=int, default=1, help="Replicates per size that also run the test")
    p.add_argument("--method", choices=("exact", "gibbs"), default="exact")

    p = sub.add_parser("make-dataset", parents=[common], help="Regenerate a dataset from a published fit")
    p.add_argument("--template", choices=sorted(commands.TEMPLATES), default="hospital")
    p.add_argument("--n", type=positive_int, default=500)
    p.add_argument("--seed", type=seed_value, default=DEFAULT_SEED)
    p.add_argument("--method", choices=("exact", "gibbs"), default="exact")
    p.add_argument("--out", help="CSV file (default: standard output)")

    p = sub.add_parser("histogram", parents=[common, params], help="Binned empirical vs model probabilities")
    p.add_argument("--data", required=True)
    p.add_argument("--y-bins", type=positive_int, default=30)
    p.add_argument("--x-max", type=int, help="Largest x bin (default: data maximum)")
    p.add_argument("--out", help="CSV file (default: standard output)")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    if args.command in ('eval', 'sample') and args.params is None:
        parser.error("--params is required")

    report = RunReport(command=args.command)
    csv_on_stdout = False
    try:
        load_settings()
        if args.command == 'simstudy' and args.threads is None:
            args.threads = default_threads()
        csv_on_stdout = COMMANDS[args.command](args, report)
    except BPGCError as e:
        report.fail(e, e.exit_code)
        print(f"❌ {e}", file=sys.stderr, flush=True)
    except Exception as e:
        report.fail(e, 1)
        print(f"❌ Unexpected error: {e}", file=sys.stderr, flush=True)
        traceback.print_exc()

    report.finish()
    try:
        stdout_report(report, args.report, bool(csv_on_stdout))
    except BPGCError as e:
        print(f"❌ {e}", file=sys.stderr, flush=True)
        return e.exit_code
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
