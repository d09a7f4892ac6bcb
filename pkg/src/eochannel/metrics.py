"""Delay-domain statistics and the per-scatterer power breakdown."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyInput, ParseError


@dataclass(frozen=True)
class Pdp:
    """Binned power delay profile. ``delays`` holds bin start times (s)."""

    delays: np.ndarray
    powers: np.ndarray
    bin_width: float

    def peak_delay(self) -> float:
        return float(self.delays[int(np.argmax(self.powers))])


def compute_pdp(cir, bin_width: float) -> Pdp:
    """Accumulate tap powers into delay bins ``[k w, (k+1) w)`` starting at zero."""
    if not bin_width > 0:
        raise ValueError("bin_width must be positive")
    delays = cir.delays
    powers = cir.powers
    idx = np.floor(delays / bin_width).astype(np.int64)
    if np.any(idx < 0):
        raise ValueError("negative tap delay")
    binned = np.bincount(idx, weights=powers, minlength=int(idx.max()) + 1)
    return Pdp(np.arange(binned.size) * bin_width, binned, bin_width)


def rms_delay_spread(delays, powers) -> float:
    """Power-weighted RMS delay spread of unbinned taps, in the units of ``delays``."""
    delays = np.asarray(delays, dtype=float)
    powers = np.asarray(powers, dtype=float)
    total = powers.sum()
    if delays.size == 0 or not total > 0:
        raise EmptyInput("delay spread needs at least one tap with positive power")
    # shift to the earliest tap to keep the raw moments well conditioned
    rel = delays - delays.min()
    mean = np.dot(powers, rel) / total
    second = np.dot(powers, rel * rel) / total
    return math.sqrt(max(second - mean * mean, 0.0))


def cir_delay_spread(cir) -> float:
    return rms_delay_spread(cir.delays, cir.powers)


@dataclass(frozen=True)
class CdfTable:
    values: np.ndarray
    probs: np.ndarray

    def evaluate(self, x):
        """Fraction of samples <= x."""
        return np.searchsorted(self.values, x, side="right") / self.values.size


def empirical_cdf(samples) -> CdfTable:
    values = np.sort(np.asarray(samples, dtype=float))
    if values.size == 0:
        raise EmptyInput("empirical CDF of an empty sample")
    n = values.size
    return CdfTable(values, np.arange(1, n + 1) / n)


@dataclass(frozen=True)
class ScattererPowerTable:
    """Per-angle powers (linear) of each scatterer and of the whole target channel."""

    angles: np.ndarray  # (N,) degrees
    names: list
    powers: np.ndarray  # (N, K)
    target_total: np.ndarray  # (N,)

    def __post_init__(self):
        if len(self.angles) == 0:
            raise EmptyInput("scatterer table has no angles")
        if self.powers.shape != (len(self.angles), len(self.names)):
            raise ValueError("powers must have shape (num_angles, num_scatterers)")
        if np.any(self.powers < 0) or np.any(self.target_total < 0):
            raise ValueError("powers must be non-negative")


def power_proportion(table: ScattererPowerTable) -> dict[str, float]:
    """Share of the target-channel power owned by each scatterer, summed over all angles."""
    total = float(np.sum(table.target_total))
    if not total > 0:
        raise EmptyInput("target channel carries no power")
    sums = table.powers.sum(axis=0)
    return {name: float(s) / total for name, s in zip(table.names, sums)}


def read_scatterer_table(path, rtol: float = 1e-9) -> ScattererPowerTable:
    """Parse ``angle_deg,<scatterer...>,target_total`` CSV rows of linear powers.

    Each row's ``target_total`` must equal the sum of its scatterer columns
    to within ``rtol``.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    # drop blank lines but keep line numbers
    numbered = [(i + 1, r) for i, r in enumerate(rows) if any(c.strip() for c in r)]
    if not numbered:
        raise ParseError("empty file", path)
    head_line, header = numbered[0]
    header = [h.strip() for h in header]
    if len(header) < 3 or header[0] != "angle_deg" or header[-1] != "target_total":
        raise ParseError(
            "header must be 'angle_deg,<scatterer names...>,target_total'", path, head_line
        )
    names = header[1:-1]
    if len(set(names)) != len(names):
        raise ParseError("duplicate scatterer names in header", path, head_line)

    angles, powers, totals = [], [], []
    for line, row in numbered[1:]:
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, found {len(row)}", path, line)
        vals = []
        for col, cell in enumerate(row, start=1):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"not a number: {cell.strip()!r}", path, line, col) from None
            if not math.isfinite(v):
                raise ParseError(f"non-finite value {cell.strip()!r}", path, line, col)
            if col > 1 and v < 0:
                raise ParseError(f"negative power {v!r}", path, line, col)
            vals.append(v)
        row_sum = math.fsum(vals[1:-1])
        if abs(row_sum - vals[-1]) > rtol * max(abs(vals[-1]), abs(row_sum)):
            raise ParseError(
                f"target_total {vals[-1]!r} differs from the scatterer sum {row_sum!r}",
                path, line, len(header),
            )
        angles.append(vals[0])
        powers.append(vals[1:-1])
        totals.append(vals[-1])
    if not angles:
        raise ParseError("no data rows", path)
    return ScattererPowerTable(np.array(angles), names, np.array(powers), np.array(totals))
