"""Monte Carlo drops, parameter sweeps and their on-disk outputs.

Every drop draws from its own random stream derived from ``(seed,
drop_index)``, so results do not depend on how drops are scheduled across
workers, and every grid value of a sweep sees the same cluster realizations.
"""

from __future__ import annotations

import csv
import json
import math
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from importlib import metadata
from pathlib import Path

import numpy as np

from .cir import EO, Cir, Tap, cluster_taps, combine_nlos, eo_coefficient
from .clusters import draw_lsps, generate_clusters
from .config import SimConfig
from .errors import InfeasibleGeometry
from .geometry import EoPathGeometry, eo_path_geometry, to_plane
from .metrics import CdfTable, Pdp, cir_delay_spread, compute_pdp, empirical_cdf, power_proportion


def drop_rng(seed: int, drop_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(drop_index,)))


def eo_geometries(config: SimConfig) -> list[EoPathGeometry]:
    """Resolved reflector paths of ``config``; raises InfeasibleGeometry."""
    return [eo_path_geometry(config.link, to_plane(config.link, eo)) for eo in config.eo]


def eo_taps(config: SimConfig, t: float | None = None) -> list[Tap]:
    t = config.time if t is None else t
    taps = []
    for eo, geom in zip(config.eo, eo_geometries(config)):
        coeff = eo_coefficient(config.link, geom, config.material(eo.material), config.tx, config.rx, t)
        taps.append(Tap(geom.tau_eo, coeff, EO))
    return taps


@dataclass(frozen=True)
class DsSample:
    rms_ds: float
    drop_index: int


@dataclass(frozen=True)
class DropResult:
    cir: Cir
    sample: DsSample


def run_drop(config: SimConfig, drop_index: int, t: float | None = None) -> DropResult:
    """Generate one composite response at time ``t`` (default: the configured time)."""
    t = config.time if t is None else t
    rng = drop_rng(config.seed, drop_index)
    # clusters are always drawn so that the stream is consumed identically for every k_eo
    lsps = draw_lsps(config.scenario, rng)
    clusters = generate_clusters(lsps, config.scenario, rng, config.link)
    nlos = cluster_taps(clusters, config.link, config.tx, config.rx, t)
    cir = combine_nlos(eo_taps(config, t) if config.eo else [], nlos, config.k_eo, t)
    return DropResult(cir, DsSample(cir_delay_spread(cir), drop_index))


def _drop_ds(config: SimConfig, drop_index: int) -> float:
    return run_drop(config, drop_index).sample.rms_ds


def monte_carlo(config: SimConfig, workers: int = 1, executor=None) -> list[DsSample]:
    """Delay spread of drops ``0 .. num_drops-1``, ordered by drop index."""
    eo_geometries(config)  # fail fast on infeasible reflectors
    config = config.for_delay_spread()
    indices = range(config.num_drops)
    job = partial(_drop_ds, config)
    if executor is not None:
        values = list(executor.map(job, indices, chunksize=max(1, config.num_drops // 64)))
    elif workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            values = list(pool.map(job, indices, chunksize=max(1, config.num_drops // (4 * workers))))
    else:
        values = [job(i) for i in indices]
    return [DsSample(v, i) for i, v in zip(indices, values)]


@dataclass
class SweepResult:
    parameter: str
    grid: tuple
    samples: dict = field(default_factory=dict)  # grid value -> list[DsSample]
    errors: dict = field(default_factory=dict)  # grid value -> message

    def cdf(self, value) -> CdfTable:
        return empirical_cdf([s.rms_ds for s in self.samples[value]])

    def mean_ds(self, value) -> float:
        return math.fsum(s.rms_ds for s in self.samples[value]) / len(self.samples[value])


def run_sweep(config: SimConfig, workers: int = 1) -> SweepResult:
    """Run ``num_drops`` drops per grid value of ``config.sweep``.

    Grid values whose reflector geometry is infeasible are reported in
    ``errors`` and skipped.
    """
    if config.sweep is None:
        raise ValueError("configuration has no sweep")
    result = SweepResult(config.sweep.parameter, config.sweep.grid)
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for value in config.sweep.grid:
            try:
                cfg = config.with_value(config.sweep.parameter, value)
                result.samples[value] = monte_carlo(cfg, executor=pool)
            except InfeasibleGeometry as exc:
                result.errors[value] = str(exc)
    finally:
        if pool is not None:
            pool.shutdown()
    return result


# -- output files -------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(x, ".6f")


def _versions() -> dict:
    try:
        version = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        version = "unknown"
    return {"eochannel": version, "numpy": np.__version__, "python": platform.python_version()}


def write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n")


def write_pdp_csv(path: Path, pdp: Pdp) -> None:
    """Occupied bins only, power in dB relative to the total."""
    total = float(pdp.powers.sum())
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["delay_ns", "power_db"])
        for d, p in zip(pdp.delays, pdp.powers):
            if p > 0:
                w.writerow([_fmt(d * 1e9), _fmt(10.0 * math.log10(p / total))])


def write_sweep_csvs(out_dir: Path, result: SweepResult) -> None:
    with (out_dir / "ds_samples.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["grid_value", "drop_index", "ds_ns"])
        for value, samples in result.samples.items():
            for s in samples:
                w.writerow([repr(value), s.drop_index, _fmt(s.rms_ds * 1e9)])
    with (out_dir / "ds_cdf.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["grid_value", "ds_ns", "cum_prob"])
        for value in result.samples:
            cdf = result.cdf(value)
            for v, p in zip(cdf.values, cdf.probs):
                w.writerow([repr(value), _fmt(v * 1e9), _fmt(p)])


def pdp_experiment(config: SimConfig, out_dir, drop_index: int = 0, t: float | None = None) -> dict:
    """Single drop: write ``pdp.csv`` and ``run.json``; return the metadata written."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    t = config.time if t is None else t
    drop = run_drop(config, drop_index, t)
    pdp = compute_pdp(drop.cir, config.bin_width)
    write_pdp_csv(out_dir / "pdp.csv", pdp)
    total = drop.cir.total_power()
    meta = {
        "command": "pdp",
        "versions": _versions(),
        "config": config.to_dict(),
        "seed": config.seed,
        "drop_index": drop_index,
        "time_s": t,
        "bin_width_ns": config.bin_width * 1e9,
        "eo_delays_ns": [g.tau_eo * 1e9 for g in eo_geometries(config)],
        "eo_power_fraction": drop.cir.kind_power(EO) / total,
        "peak_delay_ns": pdp.peak_delay() * 1e9,
        "rms_ds_ns": drop.sample.rms_ds * 1e9,
        "taps": [
            {"delay_ns": tap.delay * 1e9, "kind": tap.kind, "power_db": 10.0 * math.log10(tap.power / total)}
            for tap in drop.cir.taps
            if tap.power > 0
        ],
    }
    write_json(out_dir / "run.json", meta)
    return meta


def sweep_experiment(config: SimConfig, out_dir, workers: int = 1) -> dict:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = run_sweep(config, workers)
    write_sweep_csvs(out_dir, result)
    meta = {
        "command": f"sweep-{result.parameter.replace('_', '')}",
        "versions": _versions(),
        "config": config.to_dict(),
        "seed": config.seed,
        "num_drops": config.num_drops,
        "parameter": result.parameter,
        "grid": list(result.grid),
        "summary": [
            {
                "grid_value": v,
                "mean_ds_ns": result.mean_ds(v) * 1e9,
                "median_ds_ns": float(np.median([s.rms_ds for s in result.samples[v]])) * 1e9,
            }
            for v in result.samples
        ],
        "errors": [{"grid_value": v, "message": msg} for v, msg in result.errors.items()],
    }
    write_json(out_dir / "run.json", meta)
    return meta


def padp_report(table) -> tuple[dict, str]:
    """Proportions as a JSON-ready dict and as an aligned text table."""
    fractions = power_proportion(table)
    payload = {
        "num_angles": int(len(table.angles)),
        "total_power": float(np.sum(table.target_total)),
        "proportions": fractions,
    }
    width = max(len("scatterer"), *(len(n) for n in fractions))
    lines = [f"{'scatterer':<{width}}  proportion", f"{'-' * width}  ----------"]
    lines += [f"{name:<{width}}  {100.0 * frac:9.1f}%" for name, frac in fractions.items()]
    return payload, "\n".join(lines) + "\n"
