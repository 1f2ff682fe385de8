"""
Command line entry point.

    powerbound <kind> --config <path> [--out <path>] [--seed <u64>]
               [--trials <n>] [--threads <n>] [--csv <path>] [--wall-time]
    powerbound plot --report <path> --series <name> [--out <path>]

Exit codes: 0 when every trial succeeded and every asserted bound held,
1 on bound failures or library errors, 2 on configuration errors.
"""

import argparse
import json
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from ..errors import ConfigSchemaError
from .exception_handlers import error_payload, exit_code_for
from .runner import (
    emit_plot_data,
    exit_status,
    load_experiment_config,
    plain,
    report_json,
    run,
    write_report,
    write_trial_csv,
)
from .schemas import KIND_PREFIXES, RunReport


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="powerbound", description="Power-bound experiments and reports.")
    commands = parser.add_subparsers(dest="command", required=True)

    for kind in KIND_PREFIXES:
        sub = commands.add_parser(kind, help=f"run a {kind} experiment")
        sub.add_argument("--config", required=True, help="flat KEY=value experiment file")
        sub.add_argument("--out", help="report path (default: OUTPUT_PATH or stdout)")
        sub.add_argument("--seed", type=int, help="override SEED")
        sub.add_argument("--trials", type=int, help="override TRIALS")
        sub.add_argument("--threads", type=int, default=None, help="worker threads")
        sub.add_argument("--csv", help="per-trial CSV path")
        sub.add_argument("--wall-time", action="store_true", help="serialize wall_time_s in the report")

    plot = commands.add_parser("plot", help="CSV plot data for one report series")
    plot.add_argument("--report", required=True)
    plot.add_argument("--series", required=True)
    plot.add_argument("--out")
    return parser


def _fail(exc: Exception) -> int:
    print(json.dumps(plain(error_payload(exc)), indent=2), file=sys.stderr)
    return exit_code_for(exc)


def _run_command(args: argparse.Namespace) -> int:
    try:
        experiment = load_experiment_config(
            args.config,
            args.command,
            {"seed": args.seed, "trials": args.trials, "output_path": args.out},
        )
        report = run(experiment, args.threads)
    except Exception as exc:
        return _fail(exc)

    if experiment.output_path:
        write_report(report, experiment.output_path, args.wall_time)
    else:
        sys.stdout.write(report_json(report, args.wall_time) + "\n")
    if args.csv:
        write_trial_csv(report, args.csv)
    return exit_status(report)


def _plot_command(args: argparse.Namespace) -> int:
    try:
        with open(args.report, encoding="utf-8") as handle:
            report = RunReport.model_validate_json(handle.read())
    except OSError as exc:
        return _fail(ConfigSchemaError(f"cannot read report {args.report}: {exc}", details={"path": args.report}))
    except ValidationError as exc:
        return _fail(exc)
    try:
        text = emit_plot_data(report, args.series)
    except Exception as exc:
        return _fail(exc)

    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "plot":
        return _plot_command(args)
    return _run_command(args)


if __name__ == "__main__":
    sys.exit(main())
