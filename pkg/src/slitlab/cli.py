"""Command-line front end.

Subcommands: ``run`` a scenario config, ``sweep`` one parameter, run the
``check-theorem`` sampler, or emit a ``fringe-map``. Exit codes: 0 success,
2 configuration/validation error, 3 pipeline error. The environment
variable SLITLAB_OUTPUT_ROOT overrides the root for relative output paths.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import scenarios, serialize
from .optics import find_dark_fringes
from .scenarios import (
    PipelineError,
    ScenarioConfig,
    ValidationError,
    parse_config,
    run_scenario,
    sweep,
    write_run_outputs,
)
from .wavepacket import initial_state, initial_state_with_momentum, propagate_analytic, propagate_spectral

OUTPUT_ROOT_ENV = "SLITLAB_OUTPUT_ROOT"


def _load_config(path: str) -> ScenarioConfig:
    try:
        with open(path) as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(raw)


def _resolve_output(cfg_output_dir: str, cli_output: str | None) -> str:
    if cli_output:
        return cli_output
    root = os.environ.get(OUTPUT_ROOT_ENV, ".")
    return os.path.join(root, cfg_output_dir)


def _cmd_run(args) -> int:
    cfg = _load_config(args.config)
    report = run_scenario(cfg)
    out_dir = _resolve_output(cfg.output_dir, args.output)
    written = write_run_outputs(report, out_dir, plot=args.plot)
    print(f"scenario: {report.scenario}")
    for path in written:
        print(f"wrote: {path}")
    detector = report.detector_report
    if detector is not None:
        print(
            "p_da_total="
            + serialize.format_float(detector["p_da_total"])
            + " p_db_total="
            + serialize.format_float(detector["p_db_total"])
            + " blocked_flux="
            + serialize.format_float(detector["blocked_flux"])
        )
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"--values must be comma-separated numbers: {exc}") from exc
    result = sweep(cfg, args.param, values)
    out_dir = _resolve_output(cfg.output_dir, args.output)
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"sweep_{args.param}.csv")
    serialize.write_text_atomic(csv_path, result.csv_text())
    print(f"wrote: {csv_path}")
    for entry in result.errors:
        print(f"value {entry['value']} failed: {entry['error']}", file=sys.stderr)
    if not result.reports:
        raise PipelineError("sweep", "slitlab.scenarios",
                            RuntimeError("every sweep value failed"))
    return 0


def _cmd_check_theorem(args) -> int:
    cfg = parse_config(
        {
            "kind": "theorem_check",
            "trials": args.trials,
            "dim": args.dim,
            "seed": args.seed,
        }
    )
    report = run_scenario(cfg)
    print(serialize.dumps(report.theorem), end="")
    if not report.theorem["passed"]:
        raise PipelineError("check_theorem", "slitlab.theorem",
                            RuntimeError("surviving-overlap check failed"))
    return 0


def _cmd_fringe_map(args) -> int:
    cfg = _load_config(args.config)
    if cfg.kind not in ("afshar", "single_slit", "wheeler"):
        raise ValidationError(f"{cfg.kind} has no fringe map")
    if cfg.kind == "wheeler":
        source = initial_state_with_momentum(cfg.slit, cfg.grid, cfg.momentum)
        crossing = cfg.slit.y0 * cfg.slit.mass / (cfg.slit.hbar * cfg.momentum)
        field = propagate_spectral(source, crossing)
    else:
        field = propagate_analytic(initial_state(cfg.slit, cfg.grid), cfg.time)
    fringes = find_dark_fringes(field, cfg.window)
    payload = fringes.to_dict()
    print(serialize.dumps(payload), end="")
    if args.output:
        os.makedirs(args.output, exist_ok=True)
        path = os.path.join(args.output, "fringes.json")
        serialize.write_json_atomic(path, payload)
        print(f"wrote: {path}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slitlab",
        description="Two-slit numerical laboratory: scenarios, sweeps, and checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scenario from a JSON config")
    run_p.add_argument("config", help="path to the scenario JSON")
    run_p.add_argument("--output", help="output directory (overrides config)")
    run_p.add_argument("--plot", action="store_true", help="also write fringes.svg")
    run_p.set_defaults(func=_cmd_run)

    sweep_p = sub.add_parser("sweep", help="run a scenario across parameter values")
    sweep_p.add_argument("config")
    sweep_p.add_argument("--param", required=True, choices=scenarios.SWEEP_PARAMETERS)
    sweep_p.add_argument("--values", required=True, help="comma-separated values")
    sweep_p.add_argument("--output", help="output directory (overrides config)")
    sweep_p.set_defaults(func=_cmd_sweep)

    thm_p = sub.add_parser("check-theorem", help="randomized surviving-overlap check")
    thm_p.add_argument("--trials", type=int, default=1000)
    thm_p.add_argument("--dim", type=int, default=3)
    thm_p.add_argument("--seed", type=int, default=0)
    thm_p.set_defaults(func=_cmd_check_theorem)

    fm_p = sub.add_parser("fringe-map", help="locate dark fringes for a config")
    fm_p.add_argument("config")
    fm_p.add_argument("--output", help="directory for fringes.json")
    fm_p.set_defaults(func=_cmd_fringe_map)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except PipelineError as exc:
        print(f"pipeline error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
