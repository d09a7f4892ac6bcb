"""Command line entry point: ``eochannel <subcommand> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import config as cfgmod
from .errors import ChannelModelError
from .experiment import padp_report, pdp_experiment, sweep_experiment, write_json
from .metrics import read_scatterer_table

DEFAULT_GRIDS = {
    "k_eo": (0.1, 0.3, 0.5, 0.7, 0.9),
    "d_rx": (3.25, 6.5, 13.0, 19.5),
}


def _grid(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("grid must not be empty")
    return values


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON experiment configuration (defaults if omitted)")
    p.add_argument("--seed", type=int, help="master seed; overrides the config file")
    p.add_argument("--drops", type=int, help="number of Monte Carlo drops; overrides the config file")
    p.add_argument("--out-dir", type=Path, default=Path("out"), help="output directory (default: out)")
    p.add_argument("--scenario-file", type=Path, help="scenario parameter JSON replacing the bundled one")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eochannel",
        description="NLOS channel simulation with a deterministic wall reflection and stochastic clusters.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pdp", help="single drop: power delay profile")
    _add_run_options(p)
    p.add_argument("--drop", type=int, default=0, help="drop index (default 0)")
    p.add_argument("--time", type=float, help="evaluation time in seconds for the Doppler terms")

    for name, param in (("sweep-keo", "k_eo"), ("sweep-drx", "d_rx")):
        p = sub.add_parser(name, help=f"delay-spread CDFs over a {param} grid")
        _add_run_options(p)
        p.add_argument(
            "--grid", type=_grid,
            help="comma-separated grid values (default: the config sweep, else "
                 + ",".join(str(v) for v in DEFAULT_GRIDS[param]) + ")",
        )
        p.add_argument("--workers", type=int, default=1, help="worker processes (output does not depend on it)")
        p.set_defaults(sweep_parameter=param)

    p = sub.add_parser("analyze-padp", help="per-scatterer power proportions from a per-angle power table")
    p.add_argument("table", type=Path, help="CSV: angle_deg,<scatterers...>,target_total")
    p.add_argument("--out-dir", type=Path, help="also write proportions.json and proportions.txt here")

    p = sub.add_parser("validate-config", help="check a configuration file")
    p.add_argument("config", type=Path, nargs="?")
    p.add_argument("--print-schema", action="store_true", help="print the configuration JSON schema")
    return parser


def _load(args) -> cfgmod.SimConfig:
    scenario_file = None if args.scenario_file is None else str(args.scenario_file)
    return cfgmod.load_config(args.config, seed=args.seed, num_drops=args.drops, scenario_file=scenario_file)


def _cmd_pdp(args) -> int:
    meta = pdp_experiment(_load(args), args.out_dir, drop_index=args.drop, t=args.time)
    print(
        f"EO delay(s): {', '.join(f'{d:.2f}' for d in meta['eo_delays_ns'])} ns; "
        f"PDP peak at {meta['peak_delay_ns']:.2f} ns; RMS DS {meta['rms_ds_ns']:.2f} ns"
    )
    print(f"wrote {args.out_dir / 'pdp.csv'} and {args.out_dir / 'run.json'}")
    return 0


def _cmd_sweep(args) -> int:
    config = _load(args)
    param = args.sweep_parameter
    if args.grid is not None:
        grid = args.grid
    elif config.sweep is not None and config.sweep.parameter == param:
        grid = list(config.sweep.grid)
    else:
        grid = list(DEFAULT_GRIDS[param])
    data = config.to_dict()
    data["sweep"] = {"parameter": param, "grid": grid}
    config = cfgmod.from_dict(data)
    meta = sweep_experiment(config, args.out_dir, workers=args.workers)
    for row in meta["summary"]:
        print(f"{param} = {row['grid_value']:g}: mean DS {row['mean_ds_ns']:.2f} ns, median {row['median_ds_ns']:.2f} ns")
    for err in meta["errors"]:
        print(f"{param} = {err['grid_value']:g}: skipped ({err['message']})", file=sys.stderr)
    return 0


def _cmd_analyze(args) -> int:
    payload, text = padp_report(read_scatterer_table(args.table))
    print(json.dumps(payload, indent=2))
    print(text, end="")
    if args.out_dir is not None:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        write_json(args.out_dir / "proportions.json", payload)
        (args.out_dir / "proportions.txt").write_text(text)
    return 0


def _cmd_validate(args) -> int:
    if args.print_schema:
        print(json.dumps(cfgmod.schema(), indent=2))
        return 0
    config = cfgmod.load_config(args.config)
    from .experiment import eo_geometries

    geoms = eo_geometries(config)
    print(f"ok: {len(geoms)} reflector(s), k_eo = {config.k_eo}, {config.num_drops} drops, seed {config.seed}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "pdp": _cmd_pdp,
        "sweep-keo": _cmd_sweep,
        "sweep-drx": _cmd_sweep,
        "analyze-padp": _cmd_analyze,
        "validate-config": _cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except ChannelModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
