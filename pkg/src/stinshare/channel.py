"""Link-budget arithmetic: pathloss, received power, SINR and Shannon SE."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s
NEAR_FIELD_M = 1.0


def dbm_to_watt(dbm):
    w = 10.0 ** (np.asarray(dbm, dtype=float) / 10.0 - 3.0)
    return float(w) if w.ndim == 0 else w


def watt_to_dbm(watt):
    return 10.0 * np.log10(watt) + 30.0


@dataclass
class Diagnostics:
    """Counters a run accumulates; merged across replications."""

    near_field_clamps: int = 0

    def merge(self, other: "Diagnostics") -> "Diagnostics":
        return Diagnostics(self.near_field_clamps + other.near_field_clamps)


@dataclass(frozen=True)
class RadioParams:
    tx_power: float  # dBm
    main_lobe_gain: float = 0.0  # dBi
    side_lobe_gain: float = 0.0  # dBi
    pathloss_exponent: float = 2.0
    carrier_frequency: float = 2.0  # GHz

    def problems(self) -> list[str]:
        out = []
        if self.main_lobe_gain < self.side_lobe_gain:
            out.append("main_lobe_gain must be >= side_lobe_gain")
        if not self.pathloss_exponent >= 2:
            out.append("pathloss_exponent must be >= 2")
        if not self.carrier_frequency > 0:
            out.append("carrier_frequency must be > 0")
        return out


@dataclass(frozen=True)
class LinkResult:
    desired_power: float
    interference_power: float
    noise_power: float
    sinr: float
    spectral_efficiency: float


def friis_constant(carrier_frequency_ghz: float) -> float:
    """Free-space gain at 1 m, ``(c / 4 pi f)^2``."""
    return (SPEED_OF_LIGHT / (4.0 * math.pi * carrier_frequency_ghz * 1e9)) ** 2


def pathloss_gain(distance_m, exponent: float, carrier_frequency_ghz: float = 2.0,
                  diagnostics: Diagnostics | None = None):
    """Friis-anchored power law ``K d^-exponent``; distances below 1 m are clamped."""
    d = np.asarray(distance_m, dtype=float)
    short = d < NEAR_FIELD_M
    if short.any():
        if diagnostics is not None:
            diagnostics.near_field_clamps += int(short.sum())
        d = np.maximum(d, NEAR_FIELD_M)
    g = friis_constant(carrier_frequency_ghz) * d ** (-exponent)
    return float(g) if g.ndim == 0 else g


def received_power(tx: RadioParams, gain_dbi, distance_m, diagnostics: Diagnostics | None = None):
    """Received power in W for EIRP ``tx.tx_power + gain_dbi``."""
    eirp_w = 10.0 ** ((tx.tx_power + np.asarray(gain_dbi, dtype=float)) / 10.0 - 3.0)
    p = eirp_w * pathloss_gain(distance_m, tx.pathloss_exponent, tx.carrier_frequency, diagnostics)
    return float(p) if np.ndim(p) == 0 else p


def spectral_efficiency(sinr):
    return np.log2(1.0 + np.asarray(sinr, dtype=float)) if np.ndim(sinr) else math.log2(1.0 + sinr)


def aggregate_sinr(desired: float, interferers, noise: float) -> LinkResult:
    if not noise > 0:
        raise ValueError(f"noise power must be positive, got {noise}")
    interference = math.fsum(np.asarray(interferers, dtype=float).ravel())
    sinr = desired / (interference + noise)
    return LinkResult(desired, interference, noise, sinr, math.log2(1.0 + sinr))


def noise_power(noise_dbm: float, bandwidth_mhz: float | None = None,
                reference_bandwidth_mhz: float | None = None) -> float:
    """Noise in W; scaled by ``bandwidth / reference`` only when both are given."""
    n = 10.0 ** (noise_dbm / 10.0 - 3.0)
    if bandwidth_mhz is not None and reference_bandwidth_mhz:
        n *= bandwidth_mhz / reference_bandwidth_mhz
    return n


def rayleigh_power(rng: np.random.Generator, size) -> np.ndarray:
    """Unit-mean exponential power multipliers."""
    return rng.exponential(1.0, size=size)
