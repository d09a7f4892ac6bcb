"""Stochastic NLOS clusters.

A reduced form of the standard cluster procedure: large-scale parameters are
drawn log-normally, then cluster delays, cluster powers, per-ray angles and
random initial phases. Intra-cluster delay splitting, weak-cluster removal,
cross-polarization, LSP cross-correlation and spatial consistency are left
out.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from importlib import resources
from pathlib import Path

import numpy as np

from .geometry import LinkGeometry, SphericalAngles, wrap_azimuth

DEFAULT_SCENARIO = "umi_street_canyon_nlos"

# Upper limits on drawn angular spreads, degrees.
_MAX_AZIMUTH_SPREAD = 104.0
_MAX_ZENITH_SPREAD = 52.0


@dataclass(frozen=True)
class ScenarioParams:
    ds_log_mean: float
    ds_log_std: float
    asa_log_mean: float
    asa_log_std: float
    asd_log_mean: float
    asd_log_std: float
    zsa_log_mean: float
    zsa_log_std: float
    zsd_log_mean: float = 0.0
    zsd_log_std: float = 0.0
    zod_offset: float = 0.0
    num_clusters: int = 19
    rays_per_cluster: int = 20
    delay_scaling: float = 2.1
    cluster_shadowing_std: float = 3.0
    cluster_asa: float = 22.0
    cluster_asd: float = 10.0
    cluster_zsa: float = 7.0

    def __post_init__(self):
        if self.num_clusters < 1 or self.rays_per_cluster < 1:
            raise ValueError("num_clusters and rays_per_cluster must be positive")
        if self.rays_per_cluster > len(_TABLES["ray_offsets"]):
            raise ValueError(f"at most {len(_TABLES['ray_offsets'])} rays per cluster are supported")
        if not self.delay_scaling > 1:
            raise ValueError("delay_scaling must exceed 1")
        for name in ("ds_log_std", "asa_log_std", "asd_log_std", "zsa_log_std", "zsd_log_std",
                     "cluster_shadowing_std"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        for name in ("cluster_asa", "cluster_asd", "cluster_zsa"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_dict(cls, record: dict) -> "ScenarioParams":
        known = {f.name for f in fields(cls)}
        unknown = set(record) - known
        if unknown:
            raise ValueError(f"unknown scenario fields: {sorted(unknown)}")
        return cls(**record)

    def to_dict(self) -> dict:
        return asdict(self)


def _read_bundle(path=None) -> dict:
    if path is None:
        text = resources.files("eochannel").joinpath("data/scenarios.json").read_text()
    else:
        text = Path(path).read_text()
    return json.loads(text)


_TABLES = _read_bundle()["_tables"]


def load_scenario(name: str = DEFAULT_SCENARIO, path=None) -> ScenarioParams:
    """Look up a named scenario in the bundled parameter file, or in ``path``."""
    bundle = _read_bundle(path)
    if name.startswith("_") or name not in bundle:
        available = sorted(k for k in bundle if not k.startswith("_"))
        raise KeyError(f"unknown scenario {name!r}; available: {available}")
    return ScenarioParams.from_dict(bundle[name])


@dataclass(frozen=True)
class LspSet:
    """Large-scale parameters of one drop: delay spread in seconds, angle spreads in degrees."""

    ds: float
    asa: float
    asd: float
    zsa: float
    zsd: float


@dataclass(frozen=True)
class ClusterSet:
    """Cluster delays (s), powers, and per-ray angles/phases (radians, shape (N, M))."""

    delays: np.ndarray
    powers: np.ndarray
    aoa: np.ndarray
    zoa: np.ndarray
    aod: np.ndarray
    zod: np.ndarray
    phases: np.ndarray

    @property
    def num_clusters(self) -> int:
        return self.delays.shape[0]

    @property
    def rays_per_cluster(self) -> int:
        return self.phases.shape[1]


def draw_lsps(params: ScenarioParams, rng: np.random.Generator) -> LspSet:
    z = rng.standard_normal(5)
    ds = 10.0 ** (params.ds_log_mean + params.ds_log_std * z[0])
    asa = 10.0 ** (params.asa_log_mean + params.asa_log_std * z[1])
    asd = 10.0 ** (params.asd_log_mean + params.asd_log_std * z[2])
    zsa = 10.0 ** (params.zsa_log_mean + params.zsa_log_std * z[3])
    zsd = 10.0 ** (params.zsd_log_mean + params.zsd_log_std * z[4])
    return LspSet(
        ds=ds,
        asa=min(asa, _MAX_AZIMUTH_SPREAD),
        asd=min(asd, _MAX_AZIMUTH_SPREAD),
        zsa=min(zsa, _MAX_ZENITH_SPREAD),
        zsd=min(zsd, _MAX_ZENITH_SPREAD),
    )


def azimuth_scaling(n: int) -> float:
    """Scaling factor for azimuth spreads; linear interpolation between tabulated cluster counts."""
    return float(np.interp(n, _TABLES["cluster_counts"], _TABLES["azimuth_scaling"]))


def zenith_scaling(n: int) -> float:
    return float(np.interp(n, _TABLES["zenith_cluster_counts"], _TABLES["zenith_scaling"]))


def _wrap_zenith(theta_deg):
    theta = np.mod(theta_deg, 360.0)
    return np.where(theta > 180.0, 360.0 - theta, theta)


def generate_clusters(
    lsps: LspSet,
    params: ScenarioParams,
    rng: np.random.Generator,
    link: LinkGeometry | None = None,
) -> ClusterSet:
    """Draw one set of clusters.

    Cluster angles are centered on the LOS directions of ``link``; without a
    link they are centered on the horizon at zero azimuth.
    """
    n, m = params.num_clusters, params.rays_per_cluster
    r_tau = params.delay_scaling

    # delays
    u = 1.0 - rng.random(n)  # (0, 1]
    tau = -r_tau * lsps.ds * np.log(u)
    tau = np.sort(tau - tau.min())

    # powers
    shadow = rng.normal(0.0, params.cluster_shadowing_std, n) if params.cluster_shadowing_std > 0 else np.zeros(n)
    p = np.exp(-tau * (r_tau - 1.0) / (r_tau * lsps.ds)) * 10.0 ** (-shadow / 10.0)
    p = p / p.sum()

    if link is None:
        los_aod = los_aoa = SphericalAngles(np.pi / 2, 0.0)
    else:
        los_aod, los_aoa = link.los_departure(), link.los_arrival()

    rel = p / p.max()
    c_phi = azimuth_scaling(n)
    c_theta = zenith_scaling(n)
    alpha = np.asarray(_TABLES["ray_offsets"][:m])

    def azimuths(spread, center_deg, ray_spread):
        base = 2.0 * (spread / 1.4) * np.sqrt(-np.log(rel)) / c_phi
        sign = rng.choice([-1.0, 1.0], size=n)
        jitter = rng.normal(0.0, spread / 7.0, n)
        centers = sign * base + jitter + center_deg
        return centers[:, None] + ray_spread * alpha[None, :]

    def zeniths(spread, center_deg, ray_spread):
        base = -spread * np.log(rel) / c_theta
        sign = rng.choice([-1.0, 1.0], size=n)
        jitter = rng.normal(0.0, spread / 7.0, n)
        centers = sign * base + jitter + center_deg
        return centers[:, None] + ray_spread * alpha[None, :]

    aoa = azimuths(lsps.asa, np.degrees(los_aoa.azimuth), params.cluster_asa)
    aod = azimuths(lsps.asd, np.degrees(los_aod.azimuth), params.cluster_asd)
    zoa = zeniths(lsps.zsa, np.degrees(los_aoa.zenith), params.cluster_zsa)
    zod = zeniths(
        lsps.zsd,
        np.degrees(los_aod.zenith) + params.zod_offset,
        0.375 * 10.0 ** params.zsd_log_mean,
    )

    # random coupling of rays within each cluster
    aod = np.take_along_axis(aod, rng.permuted(np.tile(np.arange(m), (n, 1)), axis=1), axis=1)
    zoa = np.take_along_axis(zoa, rng.permuted(np.tile(np.arange(m), (n, 1)), axis=1), axis=1)
    zod = np.take_along_axis(zod, rng.permuted(np.tile(np.arange(m), (n, 1)), axis=1), axis=1)

    phases = np.pi - rng.uniform(0.0, 2.0 * np.pi, (n, m))  # (-pi, pi]

    return ClusterSet(
        delays=tau,
        powers=p,
        aoa=wrap_azimuth(np.radians(aoa)),
        zoa=np.radians(_wrap_zenith(zoa)),
        aod=wrap_azimuth(np.radians(aod)),
        zod=np.radians(_wrap_zenith(zod)),
        phases=phases,
    )
