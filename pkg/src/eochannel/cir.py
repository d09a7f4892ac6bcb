"""Channel impulse response assembly.

Builds the coefficient of the deterministic reflector path, turns a
:class:`~eochannel.clusters.ClusterSet` into stochastic taps, and merges both
groups with the reflector power share ``k_eo``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .antenna import Antenna, array_phase, doppler_phase, field_pattern
from .clusters import ClusterSet
from .errors import DegenerateInput
from .geometry import EoPathGeometry, LinkGeometry, unit_vector
from .materials import Material, fresnel

EO = "eo"
NLOS = "nlos"


@dataclass(frozen=True)
class Tap:
    delay: float
    coeff: np.ndarray  # complex, shape (num_rx_elements, num_tx_elements)
    kind: str = NLOS

    @property
    def power(self) -> float:
        """Mean power over all (rx, tx) element pairs."""
        return float(np.mean(np.abs(self.coeff) ** 2))


@dataclass(frozen=True)
class Cir:
    taps: list
    time: float = 0.0

    @property
    def delays(self) -> np.ndarray:
        return np.array([t.delay for t in self.taps])

    @property
    def powers(self) -> np.ndarray:
        return np.array([t.power for t in self.taps])

    def total_power(self) -> float:
        return float(self.powers.sum())

    def kind_power(self, kind: str) -> float:
        return float(sum(t.power for t in self.taps if t.kind == kind))


def eo_coefficient(
    link: LinkGeometry,
    geom: EoPathGeometry,
    material: Material,
    tx: Antenna,
    rx: Antenna,
    t: float = 0.0,
) -> np.ndarray:
    """Coefficient matrix (rx element, tx element) of the single-bounce reflector path."""
    lam = link.wavelength
    r_par, r_perp = fresnel(geom.incidence_angle, material, link.carrier_freq)
    f_rx_t, f_rx_p = field_pattern(rx.pattern, geom.arrive.zenith, geom.arrive.azimuth)
    f_tx_t, f_tx_p = field_pattern(tx.pattern, geom.depart.zenith, geom.depart.azimuth)
    # [F_rx]^T diag(R_par, -R_perp) [F_tx]
    gain = f_rx_t * r_par * f_tx_t - f_rx_p * r_perp * f_tx_p

    phase = np.exp(-2j * np.pi * geom.d_eo / lam)
    rx_arr = array_phase(geom.r_hat_rx_eo, rx.layout.elements, lam)  # (U,)
    tx_arr = array_phase(geom.r_hat_tx_eo, tx.layout.elements, lam)  # (S,)
    doppler = doppler_phase(geom.r_hat_tx_eo, link.tx_vel, lam, t) * doppler_phase(
        geom.r_hat_rx_eo, link.rx_vel, lam, t
    )
    return gain * phase * doppler * np.outer(rx_arr, tx_arr)


def cluster_taps(
    clusters: ClusterSet,
    link: LinkGeometry,
    tx: Antenna,
    rx: Antenna,
    t: float = 0.0,
) -> list[Tap]:
    """One tap per cluster, summing its rays with their random initial phases.

    Each cluster is scaled by sqrt(p_n / M), so with unit-gain antennas the
    expected total power over the random phases is one. Only co-polar
    (theta-theta plus phi-phi) coupling is kept.
    """
    lam = link.wavelength
    m = clusters.rays_per_cluster
    r_rx = unit_vector(clusters.zoa, clusters.aoa)  # (N, M, 3)
    r_tx = unit_vector(clusters.zod, clusters.aod)

    f_rx_t, f_rx_p = field_pattern(rx.pattern, clusters.zoa, clusters.aoa)
    f_tx_t, f_tx_p = field_pattern(tx.pattern, clusters.zod, clusters.aod)
    ray = (f_rx_t * f_tx_t + f_rx_p * f_tx_p) * np.exp(1j * clusters.phases)
    ray = ray * doppler_phase(r_rx, link.rx_vel, lam, t) * doppler_phase(r_tx, link.tx_vel, lam, t)

    rx_arr = array_phase(r_rx[:, :, None, :], rx.layout.elements[None, None, :, :], lam)  # (N, M, U)
    tx_arr = array_phase(r_tx[:, :, None, :], tx.layout.elements[None, None, :, :], lam)  # (N, M, S)
    coeff = np.einsum("nm,nmu,nms->nus", ray, rx_arr, tx_arr)
    coeff *= np.sqrt(clusters.powers / m)[:, None, None]
    return [Tap(float(d), c, NLOS) for d, c in zip(clusters.delays, coeff)]


def _group_power(taps) -> float:
    return float(sum(t.power for t in taps))


def combine_nlos(eo_taps, nlos_taps, k_eo: float, time: float = 0.0) -> Cir:
    """Merge reflector and stochastic taps into one response carrying share ``k_eo`` on the reflector.

    Each group is first rescaled to unit total power, then weighted by
    sqrt(k_eo) or sqrt(1 - k_eo). A group with zero weight is dropped.
    """
    if not 0.0 <= k_eo <= 1.0:
        raise ValueError(f"k_eo must lie in [0, 1], got {k_eo}")
    out = []
    for taps, weight, kind in ((eo_taps, k_eo, EO), (nlos_taps, 1.0 - k_eo, NLOS)):
        if weight == 0.0:
            continue
        power = _group_power(taps)
        if not taps or power <= 0.0:
            raise DegenerateInput(f"k_eo = {k_eo} requires {kind} taps with non-zero power")
        scale = np.sqrt(weight / power)
        out.extend(Tap(t.delay, t.coeff * scale, kind) for t in taps)
    return Cir(out, time)
