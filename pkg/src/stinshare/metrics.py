"""Performance metrics and their Monte Carlo summaries."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from statistics import NormalDist

import numpy as np

from .channel import SPEED_OF_LIGHT

Z95 = NormalDist().inv_cdf(0.975)


def avg_data_rate(se, bandwidth_mhz):
    """Rate in bit/s of a link with spectral efficiency ``se`` over ``bandwidth_mhz``."""
    if np.any(np.asarray(se) < 0) or np.any(np.asarray(bandwidth_mhz) < 0):
        raise ValueError("spectral efficiency and bandwidth must be >= 0")
    return se * bandwidth_mhz * 1e6


def system_capacity(se, density, area, bandwidth_mhz):
    """``se * density * area * bandwidth`` in bit/s (density per km^2, area in km^2)."""
    for name, v in (("se", se), ("density", density), ("area", area), ("bandwidth", bandwidth_mhz)):
        if np.any(np.asarray(v) < 0):
            raise ValueError(f"{name} must be >= 0")
    return se * density * area * bandwidth_mhz * 1e6


def area_spectrum_efficiency(sum_rate, area, bandwidth_mhz):
    """bit/s/Hz/km^2."""
    if not area > 0 or not bandwidth_mhz > 0:
        raise ValueError(f"area and bandwidth must be > 0, got area={area}, bandwidth={bandwidth_mhz}")
    return sum_rate / (bandwidth_mhz * 1e6 * area)


def interference_intensity(total_interference, bandwidth_mhz):
    """W/Hz."""
    if not bandwidth_mhz > 0:
        raise ValueError(f"bandwidth must be > 0, got {bandwidth_mhz}")
    return total_interference / (bandwidth_mhz * 1e6)


def wilson_interval(successes: int, n: int, z: float = Z95) -> tuple[float, float]:
    if n <= 0:
        raise ValueError("Wilson interval needs n >= 1")
    p = successes / n
    denom = 1.0 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def spectrum_access_probability(access_trace) -> tuple[float, float, float]:
    """Fraction of granted attempts with its Wilson 95% interval ``(p, lo, hi)``."""
    a = np.asarray(access_trace, dtype=bool).ravel()
    if a.size == 0:
        raise ValueError("access trace is empty")
    k = int(a.sum())
    lo, hi = wilson_interval(k, a.size)
    return k / a.size, lo, hi


def e2e_latency(distance_km, rate, packet_bits, access_wait_slots, slot_ms):
    """Propagation + transmission + access wait, in ms; zero rate gives ``inf``."""
    if rate <= 0:
        return math.inf
    return distance_km * 1e3 / SPEED_OF_LIGHT * 1e3 + packet_bits / rate * 1e3 + access_wait_slots * slot_ms


def energy_efficiency(throughput, tx_power, circuit_power=0.0):
    """bit/J."""
    total = tx_power + circuit_power
    if not total > 0:
        raise ValueError(f"total power must be > 0, got {total}")
    return throughput / total


@dataclass(frozen=True)
class Estimate:
    mean: float
    half_width: float = 0.0  # 95% confidence half-width
    n: int = 1

    @classmethod
    def of(cls, values) -> "Estimate":
        """Mean with normal-approximation CI; NaN entries are excluded."""
        v = np.asarray(values, dtype=float).ravel()
        v = v[~np.isnan(v)]
        n = v.size
        if n == 0:
            return cls(math.nan, math.nan, 0)
        mean = math.fsum(v) / n
        if n < 2:
            return cls(mean, 0.0, n)
        var = math.fsum((v - mean) ** 2) / (n - 1)
        return cls(mean, Z95 * math.sqrt(var / n), n)

    @classmethod
    def proportion(cls, successes: int, n: int) -> "Estimate":
        lo, hi = wilson_interval(successes, n)
        return cls(successes / n, (hi - lo) / 2, n)

    def scaled(self, c: float) -> "Estimate":
        return Estimate(self.mean * c, self.half_width * abs(c), self.n)


REPORT_METRICS = (
    "ntn_user_rate",
    "tn_user_rate",
    "ntn_capacity",
    "tn_capacity",
    "sum_capacity",
    "sap",
    "interference_intensity",
    "e2e_latency",
    "energy_efficiency",
)


@dataclass(frozen=True)
class MetricsReport:
    ntn_user_rate: Estimate  # bit/s
    tn_user_rate: Estimate
    ntn_capacity: Estimate
    tn_capacity: Estimate
    sum_capacity: Estimate
    ase: Estimate  # bit/s/Hz/km^2
    sap: Estimate  # probability, Wilson interval
    interference_intensity: Estimate  # W/Hz
    e2e_latency: Estimate  # ms
    energy_efficiency: Estimate  # bit/J
    replication_count: int
    ntn_reserved_rate: Estimate = Estimate(math.nan, math.nan, 0)  # given reserved band
    ntn_shared_rate: Estimate = Estimate(math.nan, math.nan, 0)  # given shared band
    tn_outage: float = 0.0
    ntn_outage: float = 0.0
    latency_outages: int = 0
    mean_bs_count: float = 0.0
    mean_satellite_count: float = 0.0
    mean_visible_count: float = 0.0
    near_field_clamps: int = 0
    extras: dict = field(default_factory=dict)

    def as_row(self) -> dict:
        row = {}
        for name in REPORT_METRICS:
            row[name] = getattr(self, name).mean
        for name in REPORT_METRICS:
            row[f"{name}_ci"] = getattr(self, name).half_width
        return row

    def estimates(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if isinstance(getattr(self, f.name), Estimate)}
