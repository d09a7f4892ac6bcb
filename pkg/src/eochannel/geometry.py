"""Single-bounce reflection geometry for a vertical planar reflector.

Positions are 3-vectors in meters (numpy arrays of shape ``(3,)``), with z
pointing up. The reflector is an unbounded vertical plane; the specular path
is built with the image method: mirror the transmitter across the plane and
take the straight segment from the image to the receiver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleGeometry

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact

# Terminals closer than this to the plane are treated as lying on it.
_SIDE_TOL = 1e-12


def vec3(v) -> np.ndarray:
    """Coerce ``v`` to a finite float array of shape (3,)."""
    arr = np.asarray(v, dtype=float).reshape(3)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite vector component in {v!r}")
    return arr


@dataclass(frozen=True)
class SphericalAngles:
    """Direction given as zenith in [0, pi] and azimuth in (-pi, pi], radians."""

    zenith: float
    azimuth: float

    @classmethod
    def from_vector(cls, v) -> "SphericalAngles":
        v = np.asarray(v, dtype=float)
        r = np.linalg.norm(v)
        zen = math.acos(min(1.0, max(-1.0, v[2] / r)))
        return cls(zen, wrap_azimuth(math.atan2(v[1], v[0])))

    @classmethod
    def from_degrees(cls, zenith: float, azimuth: float) -> "SphericalAngles":
        return cls(math.radians(zenith), wrap_azimuth(math.radians(azimuth)))

    def unit_vector(self) -> np.ndarray:
        return unit_vector(self.zenith, self.azimuth)


def wrap_azimuth(phi):
    """Wrap angles (radians) into (-pi, pi]."""
    wrapped = np.pi - np.mod(np.pi - np.asarray(phi, dtype=float), 2 * np.pi)
    # np.mod may round up to exactly 2*pi
    wrapped = np.where(wrapped <= -np.pi, np.pi, wrapped)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def unit_vector(zenith, azimuth) -> np.ndarray:
    """Unit direction(s) for zenith/azimuth angles; output has a trailing axis of 3."""
    zenith = np.asarray(zenith, dtype=float)
    azimuth = np.asarray(azimuth, dtype=float)
    s = np.sin(zenith)
    return np.stack([s * np.cos(azimuth), s * np.sin(azimuth), np.cos(zenith)], axis=-1)


@dataclass(frozen=True)
class LinkGeometry:
    """Transmitter/receiver placement, velocities and carrier."""

    tx_pos: np.ndarray
    rx_pos: np.ndarray
    carrier_freq: float
    tx_vel: np.ndarray = field(default_factory=lambda: np.zeros(3))
    rx_vel: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        for name in ("tx_pos", "rx_pos", "tx_vel", "rx_vel"):
            object.__setattr__(self, name, vec3(getattr(self, name)))
        if not self.carrier_freq > 0:
            raise ValueError("carrier_freq must be positive")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_freq

    @property
    def h_tx(self) -> float:
        return float(self.tx_pos[2])

    @property
    def h_rx(self) -> float:
        return float(self.rx_pos[2])

    @property
    def d_2d(self) -> float:
        return float(np.hypot(*(self.rx_pos[:2] - self.tx_pos[:2])))

    @property
    def d_3d(self) -> float:
        return float(np.linalg.norm(self.rx_pos - self.tx_pos))

    def los_departure(self) -> SphericalAngles:
        """Direction from Tx toward Rx."""
        return SphericalAngles.from_vector(self.rx_pos - self.tx_pos)

    def los_arrival(self) -> SphericalAngles:
        """Direction from Rx toward Tx."""
        return SphericalAngles.from_vector(self.tx_pos - self.rx_pos)


@dataclass(frozen=True)
class EoOffsets:
    """Reflector given by its perpendicular horizontal distances to Tx and Rx."""

    d_tx: float
    d_rx: float
    material: str = "concrete"


@dataclass(frozen=True)
class EoPlane:
    """Vertical reflector through ``point`` with horizontal unit ``normal``.

    The normal points from the plane toward the half-space holding the
    terminals.
    """

    point: np.ndarray
    normal: np.ndarray
    material: str = "concrete"

    def __post_init__(self):
        point = vec3(self.point)
        normal = vec3(self.normal)
        if abs(normal[2]) > 1e-12:
            raise ValueError("reflector normal must be horizontal")
        n = np.linalg.norm(normal)
        if abs(n - 1.0) > 1e-9:
            raise ValueError(f"reflector normal must be unit length, got |n| = {n}")
        object.__setattr__(self, "point", point)
        object.__setattr__(self, "normal", normal / n)

    def signed_distance(self, p) -> float:
        return float(np.dot(vec3(p) - self.point, self.normal))


@dataclass(frozen=True)
class EoPathGeometry:
    d_eo: float
    tau_eo: float
    depart: SphericalAngles
    arrive: SphericalAngles
    r_hat_tx_eo: np.ndarray
    r_hat_rx_eo: np.ndarray
    specular_point: np.ndarray
    incidence_angle: float
    reflection_angle: float


def image_point(p, plane: EoPlane) -> np.ndarray:
    """Mirror ``p`` across ``plane``."""
    p = vec3(p)
    return p - 2.0 * plane.signed_distance(p) * plane.normal


def resolve_plane(link: LinkGeometry, d_tx: float, d_rx: float, material: str = "concrete") -> EoPlane:
    """Build the vertical plane lying ``d_tx`` from Tx and ``d_rx`` from Rx.

    Of the two mirror-image solutions, the plane returned lies on the side
    obtained by rotating the horizontal Tx->Rx direction by +90 degrees.
    """
    if not (d_tx > 0 and d_rx > 0):
        raise InfeasibleGeometry("d_tx and d_rx must be positive")
    d2 = link.d_2d
    diff = d_tx - d_rx
    if d2 * d2 < diff * diff:
        raise InfeasibleGeometry(
            f"|d_tx - d_rx| = {abs(diff):g} m exceeds the Tx-Rx horizontal distance {d2:g} m"
        )
    if d2 > 0:
        u = (link.rx_pos[:2] - link.tx_pos[:2]) / d2
        cos_a = diff / d2
    else:
        u = np.array([1.0, 0.0])
        cos_a = 0.0
    w = np.array([-u[1], u[0]])
    sin_a = math.sqrt(max(0.0, 1.0 - cos_a * cos_a))
    outward = cos_a * u + sin_a * w
    normal = np.array([-outward[0], -outward[1], 0.0])
    point = link.tx_pos + d_tx * np.array([outward[0], outward[1], 0.0])
    return EoPlane(point, normal, material)


def plane_offsets(link: LinkGeometry, plane: EoPlane) -> tuple[float, float]:
    """Perpendicular distances (d_tx, d_rx) from the terminals to ``plane``."""
    return plane.signed_distance(link.tx_pos), plane.signed_distance(link.rx_pos)


def to_plane(link: LinkGeometry, eo) -> EoPlane:
    if isinstance(eo, EoPlane):
        return eo
    return resolve_plane(link, eo.d_tx, eo.d_rx, eo.material)


def closed_form_path_length(h_tx: float, h_rx: float, d_tx: float, d_rx: float, d_2d: float) -> float:
    """Reflected path length from heights, reflector offsets and horizontal separation."""
    return math.sqrt((h_tx - h_rx) ** 2 + (d_tx + d_rx) ** 2 + d_2d**2 - (d_tx - d_rx) ** 2)


def eo_path_geometry(link: LinkGeometry, plane: EoPlane) -> EoPathGeometry:
    """Resolve the specular path Tx -> plane -> Rx."""
    s_tx = plane.signed_distance(link.tx_pos)
    s_rx = plane.signed_distance(link.rx_pos)
    if s_tx * s_rx <= 0 or min(abs(s_tx), abs(s_rx)) < _SIDE_TOL:
        raise InfeasibleGeometry("Tx and Rx must lie strictly on the same side of the reflector")

    img = image_point(link.tx_pos, plane)
    seg = link.rx_pos - img
    d_eo = float(np.linalg.norm(seg))
    frac = -plane.signed_distance(img) / float(np.dot(seg, plane.normal))
    if not 0.0 < frac < 1.0:
        raise InfeasibleGeometry("specular point falls outside the image segment")
    spec = img + frac * seg

    out_tx = spec - link.tx_pos
    out_tx /= np.linalg.norm(out_tx)
    to_rx = link.rx_pos - spec
    to_rx /= np.linalg.norm(to_rx)
    r_hat_rx = -to_rx

    n = plane.normal
    incidence = math.acos(min(1.0, abs(float(np.dot(out_tx, n)))))
    reflection = math.acos(min(1.0, abs(float(np.dot(to_rx, n)))))

    return EoPathGeometry(
        d_eo=d_eo,
        tau_eo=d_eo / SPEED_OF_LIGHT,
        depart=SphericalAngles.from_vector(out_tx),
        arrive=SphericalAngles.from_vector(r_hat_rx),
        r_hat_tx_eo=out_tx,
        r_hat_rx_eo=r_hat_rx,
        specular_point=spec,
        incidence_angle=incidence,
        reflection_angle=reflection,
    )
