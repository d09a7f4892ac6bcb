"""Antenna element patterns, array layouts and the phase factors of a ray.

All patterns are vertically polarized: the phi component of the field is
identically zero and the theta component is the square root of the linear
power gain.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import SphericalAngles, wrap_azimuth


@dataclass(frozen=True)
class ElementPattern:
    """Isotropic element, or a directional one with a parabolic-in-dB main lobe.

    ``azimuth_hpbw`` / ``zenith_hpbw`` are half-power beamwidths in degrees,
    ``max_attenuation`` is the side-lobe floor in dB. ``boresight=None`` means
    the direction is filled in later (the CLI points it along the LOS axis).
    """

    kind: str = "isotropic"
    azimuth_hpbw: float = 8.0
    zenith_hpbw: float = 8.0
    max_attenuation: float = 30.0
    boresight: SphericalAngles | None = None

    def __post_init__(self):
        if self.kind not in ("isotropic", "directional"):
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        if self.kind == "directional":
            for name in ("azimuth_hpbw", "zenith_hpbw"):
                hpbw = getattr(self, name)
                if not 0 < hpbw <= 180:
                    raise ValueError(f"{name} must lie in (0, 180], got {hpbw}")
            if not self.max_attenuation > 0:
                raise ValueError("max_attenuation must be positive")

    def aimed(self, boresight: SphericalAngles) -> "ElementPattern":
        return ElementPattern(
            self.kind, self.azimuth_hpbw, self.zenith_hpbw, self.max_attenuation, boresight
        )


def power_gain_db(pattern: ElementPattern, zenith, azimuth):
    """Element power gain in dB for the given direction(s), radians."""
    zenith = np.asarray(zenith, dtype=float)
    if pattern.kind == "isotropic":
        return np.zeros_like(zenith + np.asarray(azimuth, dtype=float))
    bs = pattern.boresight or SphericalAngles(np.pi / 2, 0.0)
    d_az = np.degrees(np.abs(wrap_azimuth(np.asarray(azimuth, dtype=float) - bs.azimuth)))
    d_zen = np.degrees(np.abs(zenith - bs.zenith))
    a_max = pattern.max_attenuation
    att_az = np.minimum(12.0 * (d_az / pattern.azimuth_hpbw) ** 2, a_max)
    att_zen = np.minimum(12.0 * (d_zen / pattern.zenith_hpbw) ** 2, a_max)
    return -np.minimum(att_az + att_zen, a_max)


def field_pattern(pattern: ElementPattern, zenith, azimuth):
    """Return ``(F_theta, F_phi)`` for direction(s) given in radians."""
    gain_db = power_gain_db(pattern, zenith, azimuth)
    f_theta = 10.0 ** (gain_db / 20.0)
    if np.ndim(f_theta) == 0:
        return float(f_theta), 0.0
    return f_theta, np.zeros_like(f_theta)


@dataclass(frozen=True)
class ArrayLayout:
    """Element offsets (meters) relative to the array phase center, shape (E, 3)."""

    elements: np.ndarray = field(default_factory=lambda: np.zeros((1, 3)))

    def __post_init__(self):
        arr = np.asarray(self.elements, dtype=float).reshape(-1, 3)
        if arr.shape[0] == 0:
            raise ValueError("array layout needs at least one element")
        if not np.all(np.isfinite(arr)):
            raise ValueError("array element offsets must be finite")
        object.__setattr__(self, "elements", arr)

    def __len__(self):
        return self.elements.shape[0]


@dataclass(frozen=True)
class Antenna:
    pattern: ElementPattern = field(default_factory=ElementPattern)
    layout: ArrayLayout = field(default_factory=ArrayLayout)


def array_phase(r_hat, element_offset, lambda0: float):
    """exp(j 2 pi (r_hat . offset) / lambda0).

    Broadcasts: ``r_hat`` of shape (..., 3) against ``element_offset`` of
    shape (..., 3).
    """
    proj = np.sum(np.asarray(r_hat, dtype=float) * np.asarray(element_offset, dtype=float), axis=-1)
    return np.exp(2j * np.pi * proj / lambda0)


def doppler_phase(r_hat, vel, lambda0: float, t: float):
    """exp(j 2 pi (r_hat . vel) t / lambda0)."""
    radial = np.sum(np.asarray(r_hat, dtype=float) * np.asarray(vel, dtype=float), axis=-1)
    return np.exp(2j * np.pi * radial * t / lambda0)
