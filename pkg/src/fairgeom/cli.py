"""Command line entry point.

Exit codes: 0 success, 1 config error, 2 acceptance/verification failure,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import kernels
from .errors import ConfigError, FairGeomError
from .experiments import (
    ExperimentConfig,
    dump_json,
    oracle_listing,
    run_example,
    run_sweep,
    run_verify,
    solve_listing,
    write_sweep,
)

EXIT_OK, EXIT_CONFIG, EXIT_CHECK, EXIT_NUMERIC = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment config (default: built-in example)")
    common.add_argument("--out-dir", help="directory for output files")
    common.add_argument("--grid", type=int, help="grid points per free oracle parameter")
    common.add_argument("--no-oracle", action="store_true", help="skip brute-force oracles")
    common.add_argument("--seed", type=int, help="seed for random instances (verify)")
    common.add_argument("--format", choices=["csv", "json", "both"], help="output file format")

    parser = argparse.ArgumentParser(prog="fairgeom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("example", parents=[common], help="reproduce the built-in binary example")
    sub.add_parser("solve", parents=[common], help="closed-form designs for each epsilon")
    sub.add_parser("sweep", parents=[common], help="closed form vs. oracles over epsilon")
    sub.add_parser("oracle", parents=[common], help="exhaustive search only")
    sub.add_parser("verify", parents=[common], help="invariant suite over seeded random priors")
    return parser


def load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig.example()
    if args.grid is not None:
        if args.grid < 2:
            raise ConfigError("--grid", "must be >= 2")
        cfg.grid_points = args.grid
    if args.no_oracle:
        cfg.disable_oracles()
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("--seed", "must be non-negative")
        cfg.seed = args.seed
    if args.format:
        cfg.output_format = args.format
    if args.out_dir:
        cfg.out_dir = args.out_dir
    return cfg


def _write_report(args, name: str, text: str) -> None:
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        if args.command == "example":
            report = run_example()
            print(report.text, end="")
            _write_report(args, "report.txt", report.text)
            return EXIT_CHECK if report.failures else EXIT_OK

        if args.command == "solve":
            text, records, ok = solve_listing(cfg)
            print(text, end="")
            _write_report(args, "report.txt", text)
            if args.out_dir and cfg.output_format in ("json", "both"):
                dump_json({"config": cfg.to_json(), "designs": records}, Path(args.out_dir) / "summary.json")
            return EXIT_OK if ok else EXIT_NUMERIC

        if args.command == "sweep":
            result = run_sweep(cfg)
            print(result.report_text(), end="")
            for path in write_sweep(result, cfg.out_dir, cfg.output_format):
                print(f"wrote {path}")
            return EXIT_OK

        if args.command == "oracle":
            text, records = oracle_listing(cfg)
            print(f"kernel backend: {kernels.BACKEND}")
            print(text, end="")
            _write_report(args, "report.txt", text)
            if args.out_dir and cfg.output_format in ("json", "both"):
                dump_json({"config": cfg.to_json(), "oracle": records}, Path(args.out_dir) / "summary.json")
            return EXIT_OK

        if args.command == "verify":
            report = run_verify(cfg)
            print(report.text(), end="")
            _write_report(args, "report.txt", report.text())
            return EXIT_OK if report.ok else EXIT_CHECK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FairGeomError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
