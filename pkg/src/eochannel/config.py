"""Experiment configuration: JSON file <-> :class:`SimConfig`.

A configuration file only needs the fields it changes; everything else falls
back to :data:`DEFAULTS`, which describe a 26 GHz street-canyon link with Tx at
(0, 0, 1.6) m, Rx at (0, 26, 1.6) m, single horn elements of 8 degree
beamwidth and one concrete wall 6.5 m from both terminals.

``ds_antennas`` selects the antennas behind Monte Carlo delay-spread
statistics: ``"omni"`` (default) evaluates the omnidirectional channel, so the
statistics describe the channel rather than the horn pointing;
``"configured"`` keeps the configured patterns.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import jsonschema

from .antenna import Antenna, ArrayLayout, ElementPattern
from .clusters import DEFAULT_SCENARIO, ScenarioParams, load_scenario
from .errors import ConfigError
from .geometry import EoOffsets, EoPlane, LinkGeometry, SphericalAngles
from .materials import Material, load_presets

SWEEP_PARAMETERS = ("k_eo", "d_rx")

_HORN = {
    "pattern": "directional",
    "azimuth_hpbw_deg": 8.0,
    "zenith_hpbw_deg": 8.0,
    "max_attenuation_db": 30.0,
    "boresight": "los",
    "elements": [[0.0, 0.0, 0.0]],
}

DEFAULTS = {
    "carrier_freq_hz": 26e9,
    "bandwidth_hz": 600e6,
    "bin_width_s": None,
    "tx": {"position": [0.0, 0.0, 1.6], "velocity": [0.0, 0.0, 0.0], "antenna": _HORN},
    "rx": {"position": [0.0, 26.0, 1.6], "velocity": [0.0, 0.0, 0.0], "antenna": _HORN},
    "eo": [{"d_tx": 6.5, "d_rx": 6.5, "material": "concrete"}],
    "k_eo": 0.5,
    "scenario": DEFAULT_SCENARIO,
    "scenario_file": None,
    "materials": {},
    "seed": 20240917,
    "num_drops": 1000,
    "time_s": 0.0,
    "ds_antennas": "omni",
    "sweep": None,
}


def schema() -> dict:
    return json.loads(resources.files("eochannel").joinpath("data/config.schema.json").read_text())


def _merge(base, override):
    if isinstance(base, dict) and isinstance(override, dict):
        out = copy.deepcopy(base)
        for key, val in override.items():
            out[key] = _merge(base[key], val) if key in base and key not in ("eo", "materials") else copy.deepcopy(val)
        return out
    return copy.deepcopy(override)


def normalize(data: dict) -> dict:
    """Validate ``data`` against the schema and fill in defaults."""
    try:
        jsonschema.validate(data, schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None
    out = _merge(DEFAULTS, data)
    # canonical float representation so that the echo round-trips
    for key in ("carrier_freq_hz", "bandwidth_hz", "k_eo", "time_s"):
        out[key] = float(out[key])
    if out["bin_width_s"] is not None:
        out["bin_width_s"] = float(out["bin_width_s"])
    return out


@dataclass(frozen=True)
class Sweep:
    parameter: str
    grid: tuple


@dataclass(frozen=True)
class SimConfig:
    link: LinkGeometry
    eo: tuple
    k_eo: float
    scenario: ScenarioParams
    materials: dict
    tx: Antenna
    rx: Antenna
    seed: int
    num_drops: int
    bandwidth: float
    bin_width: float
    time: float
    sweep: Sweep | None
    source: dict
    ds_antennas: str = "omni"

    def to_dict(self) -> dict:
        return copy.deepcopy(self.source)

    def material(self, name: str) -> Material:
        return self.materials[name]

    def omni(self) -> "SimConfig":
        """Same configuration with every element pattern made isotropic."""
        return replace(
            self,
            tx=Antenna(ElementPattern(), self.tx.layout),
            rx=Antenna(ElementPattern(), self.rx.layout),
        )

    def for_delay_spread(self) -> "SimConfig":
        """Configuration used for delay-spread statistics (see ``ds_antennas``)."""
        return self.omni() if self.ds_antennas == "omni" else self

    def with_value(self, parameter: str, value: float) -> "SimConfig":
        """Copy of this configuration with one sweep parameter replaced."""
        data = self.to_dict()
        if parameter == "k_eo":
            data["k_eo"] = float(value)
        elif parameter == "d_rx":
            offsets = [e for e in data["eo"] if "d_rx" in e]
            if not offsets:
                raise ConfigError("a d_rx sweep needs at least one reflector given by d_tx/d_rx")
            for e in offsets:
                e["d_rx"] = float(value)
        else:
            raise ConfigError(f"unknown sweep parameter {parameter!r}")
        return from_dict(data)


def _antenna(spec: dict, default_boresight: SphericalAngles) -> Antenna:
    if spec["boresight"] == "los":
        boresight = default_boresight
    else:
        boresight = SphericalAngles.from_degrees(spec["boresight"]["zenith_deg"], spec["boresight"]["azimuth_deg"])
    pattern = ElementPattern(
        kind=spec["pattern"],
        azimuth_hpbw=float(spec["azimuth_hpbw_deg"]),
        zenith_hpbw=float(spec["zenith_hpbw_deg"]),
        max_attenuation=float(spec["max_attenuation_db"]),
        boresight=boresight,
    )
    return Antenna(pattern, ArrayLayout(spec["elements"]))


def from_dict(data: dict) -> SimConfig:
    """Build a :class:`SimConfig`; raises :class:`ConfigError` on invalid input."""
    norm = normalize(data)
    try:
        link = LinkGeometry(
            tx_pos=norm["tx"]["position"],
            rx_pos=norm["rx"]["position"],
            carrier_freq=norm["carrier_freq_hz"],
            tx_vel=norm["tx"]["velocity"],
            rx_vel=norm["rx"]["velocity"],
        )
        materials = load_presets(norm["materials"])
        eos = []
        for rec in norm["eo"]:
            mat = rec.get("material", "concrete")
            if mat not in materials:
                raise ConfigError(f"unknown material {mat!r}; known: {sorted(materials)}")
            if "d_tx" in rec:
                eos.append(EoOffsets(float(rec["d_tx"]), float(rec["d_rx"]), mat))
            else:
                eos.append(EoPlane(rec["plane_point"], rec["plane_normal"], mat))
        try:
            scenario = load_scenario(norm["scenario"], norm["scenario_file"])
        except (KeyError, OSError) as exc:
            raise ConfigError(str(exc)) from None
        tx = _antenna(norm["tx"]["antenna"], link.los_departure())
        rx = _antenna(norm["rx"]["antenna"], link.los_arrival())
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    sweep = None
    if norm["sweep"] is not None:
        sweep = Sweep(norm["sweep"]["parameter"], tuple(float(v) for v in norm["sweep"]["grid"]))
    bin_width = norm["bin_width_s"] if norm["bin_width_s"] is not None else 1.0 / norm["bandwidth_hz"]
    return SimConfig(
        link=link,
        eo=tuple(eos),
        k_eo=norm["k_eo"],
        scenario=scenario,
        materials=materials,
        tx=tx,
        rx=rx,
        seed=int(norm["seed"]),
        num_drops=int(norm["num_drops"]),
        bandwidth=norm["bandwidth_hz"],
        bin_width=bin_width,
        time=norm["time_s"],
        sweep=sweep,
        source=norm,
        ds_antennas=norm["ds_antennas"],
    )


def load_config(path=None, **overrides) -> SimConfig:
    """Read a JSON configuration file (or start from defaults) and apply ``overrides``.

    ``overrides`` maps top-level field names to values; ``None`` values are
    ignored so that unset CLI flags fall through.
    """
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be a JSON object")
    data.update({k: v for k, v in overrides.items() if v is not None})
    return from_dict(data)
