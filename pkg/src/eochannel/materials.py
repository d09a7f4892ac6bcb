"""Reflection coefficients of planar reflectors.

Reflectors are homogeneous half-spaces: either a perfect electric conductor
or a dielectric described by its relative permittivity and conductivity.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from importlib import resources

from .errors import DomainError

EPSILON_0 = 8.8541878128e-12  # F/m


@dataclass(frozen=True)
class Material:
    name: str
    kind: str = "dielectric"
    eps_real: float = 1.0
    conductivity: float = 0.0

    def __post_init__(self):
        if self.kind not in ("pec", "dielectric"):
            raise ValueError(f"unknown material kind {self.kind!r}")
        if self.eps_real < 1.0:
            raise ValueError(f"{self.name}: eps_real must be >= 1, got {self.eps_real}")
        if self.conductivity < 0.0:
            raise ValueError(f"{self.name}: conductivity must be >= 0, got {self.conductivity}")

    @classmethod
    def from_dict(cls, name: str, record: dict) -> "Material":
        return cls(
            name=name,
            kind=record.get("kind", "dielectric"),
            eps_real=float(record.get("eps_real", 1.0)),
            conductivity=float(record.get("conductivity", 0.0)),
        )

    def to_dict(self) -> dict:
        if self.kind == "pec":
            return {"kind": "pec"}
        return {"kind": self.kind, "eps_real": self.eps_real, "conductivity": self.conductivity}


def load_presets(overrides: dict | None = None) -> dict[str, Material]:
    """Bundled material presets, optionally updated by ``overrides`` (name -> record)."""
    text = resources.files("eochannel").joinpath("data/materials.json").read_text()
    records = {k: v for k, v in json.loads(text).items() if not k.startswith("_")}
    records.update(overrides or {})
    return {name: Material.from_dict(name, rec) for name, rec in records.items()}


def complex_permittivity(m: Material, freq: float) -> complex:
    """eps_r - j sigma / (2 pi f eps_0). A conductor maps to complex infinity."""
    if m.kind == "pec":
        return complex(math.inf, 0.0)
    return complex(m.eps_real, -m.conductivity / (2.0 * math.pi * freq * EPSILON_0))


def fresnel(theta_i: float, m: Material, freq: float) -> tuple[complex, complex]:
    """Return (R_par, R_perp) for incidence angle ``theta_i`` from the surface normal."""
    if not 0.0 <= theta_i < math.pi / 2:
        raise DomainError(f"incidence angle must lie in [0, pi/2), got {theta_i}")
    if m.kind == "pec":
        return complex(1.0, 0.0), complex(-1.0, 0.0)
    eta = complex_permittivity(m, freq)
    cos_i = math.cos(theta_i)
    root = cmath.sqrt(eta - math.sin(theta_i) ** 2)
    r_par = (eta * cos_i - root) / (eta * cos_i + root)
    r_perp = (cos_i - root) / (cos_i + root)
    return r_par, r_perp
