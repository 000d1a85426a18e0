"""Command-line entry point.

    vacuum-sampler <scenario> --config <path> --out <dir> [--jobs N]
                   [--order 1|2|pert|all]

Reads a JSON configuration, runs the scan and writes <scenario>.csv plus
<scenario>.meta.json into the output directory.  The environment variable
VACUUM_SAMPLER_TOL overrides the default relative quadrature tolerance.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .quadrature import DEFAULT_REL_TOL, QuadratureError
from .scan import SCENARIOS, ConfigError, NumericalError, RunConfig, run_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vacuum-sampler",
        description="Vacuum quadrature scans for subcycle modes and "
                    "electro-optic sampling.")
    parser.add_argument("scenario", choices=SCENARIOS)
    parser.add_argument("--config", required=True, help="JSON config file")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: logical cores)")
    parser.add_argument("--order", choices=["1", "2", "pert", "all"],
                        default="all", help="evolution orders for EO scans")
    return parser


def _tolerance_from_env() -> float:
    raw = os.environ.get("VACUUM_SAMPLER_TOL")
    if raw is None:
        return DEFAULT_REL_TOL
    try:
        tol = float(raw)
    except ValueError as exc:
        raise ConfigError(f"VACUUM_SAMPLER_TOL is not a number: {raw!r}") from exc
    if tol <= 0:
        raise ConfigError("VACUUM_SAMPLER_TOL must be positive")
    return tol


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rel_tol = _tolerance_from_env()
        cfg = RunConfig.from_json(args.config)
        if cfg.scenario != args.scenario:
            raise ConfigError(
                f"config declares scenario {cfg.scenario!r} but "
                f"{args.scenario!r} was requested")
        if args.jobs is not None and args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        result = run_scenario(cfg, rel_tol=rel_tol, jobs=args.jobs,
                              order_flag=args.order)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, QuadratureError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{cfg.scenario}.csv"
    meta_path = out_dir / f"{cfg.scenario}.meta.json"
    result.write_csv(csv_path)
    result.write_metadata_json(meta_path)
    print(f"wrote {csv_path} ({result.n_rows} rows)")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
