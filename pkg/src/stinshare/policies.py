"""Spectrum-access policies: energy detection, single- and two-node spatial
sensing, and slotted dynamic spectrum access."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


class Verdict(enum.Enum):
    BUSY = "busy"
    IDLE = "idle"


@dataclass(frozen=True)
class SensingResult:
    test_statistic: float  # W
    threshold: float  # W
    verdict: Verdict

    @property
    def busy(self) -> bool:
        return self.verdict is Verdict.BUSY


@dataclass(frozen=True)
class AccessPolicyParams:
    p_high: float = 1.0
    p_low: float = 0.0
    threshold: float = 1e-14  # W
    satellite_threshold: float | None = None  # W, second node in joint sensing
    slot_duration: float = 1.0  # ms
    primary_activity: float = 0.5
    p_none: float = 0.0  # joint sensing, both nodes busy

    def __post_init__(self):
        if not 0 <= self.p_low <= self.p_high <= 1:
            raise ValueError(f"need 0 <= p_low <= p_high <= 1, got p_low={self.p_low}, p_high={self.p_high}")
        if not 0 <= self.p_none <= 1:
            raise ValueError(f"p_none must lie in [0, 1], got {self.p_none}")
        if not self.threshold > 0:
            raise ValueError(f"threshold must be > 0, got {self.threshold}")
        if not 0 <= self.primary_activity <= 1:
            raise ValueError(f"primary_activity must lie in [0, 1], got {self.primary_activity}")


def energy_detect(interference_sample: float, noise: float, threshold: float) -> SensingResult:
    """Busy iff interference + noise reaches the threshold."""
    if interference_sample < 0 or noise < 0:
        raise ValueError("interference and noise must be >= 0")
    if not threshold > 0:
        raise ValueError(f"threshold must be > 0, got {threshold}")
    stat = interference_sample + noise
    return SensingResult(stat, threshold, Verdict.BUSY if stat >= threshold else Verdict.IDLE)


def calibrate_threshold(statistic_samples, target_false_alarm: float) -> float:
    """Nearest-rank ``(1 - target)`` quantile of primary-inactive statistics.

    Returns the order statistic of rank ``floor((1 - target) n) + 1``, so with
    ``busy`` meaning ``statistic >= threshold`` the in-sample false-alarm rate
    is ``ceil(target n) / n`` when the samples are distinct.
    """
    x = np.sort(np.asarray(statistic_samples, dtype=float).ravel())
    if x.size == 0:
        raise ValueError("calibrate_threshold needs at least one sample")
    if not 0 < target_false_alarm < 1:
        raise ValueError(f"target false-alarm must lie in (0, 1), got {target_false_alarm}")
    rank = math.floor((1.0 - target_false_alarm) * x.size) + 1
    return float(x[min(rank, x.size) - 1])


def _bernoulli(rng: np.random.Generator, p: float) -> bool:
    # one draw per decision regardless of p keeps random streams aligned
    return bool(rng.uniform() < p)


def sss_access(result: SensingResult, params: AccessPolicyParams, rng: np.random.Generator) -> bool:
    return _bernoulli(rng, params.p_low if result.busy else params.p_high)


def jsss_fuse(sat_result: SensingResult, user_result: SensingResult, params: AccessPolicyParams,
              rng: np.random.Generator) -> bool:
    """Both idle -> p_high; disagreement -> p_low; both busy -> p_none."""
    busy = sat_result.busy + user_result.busy
    p = (params.p_high, params.p_low, params.p_none)[busy]
    return _bernoulli(rng, p)


@dataclass(frozen=True)
class SlotRecord:
    primary_on: np.ndarray  # (slots,) bool
    secondary_access: np.ndarray
    collision: np.ndarray

    @property
    def access_probability(self) -> float:
        return float(self.secondary_access.mean())

    @property
    def collision_rate(self) -> float:
        return float(self.collision.mean())

    def first_access(self) -> int:
        """Index of the first slot with access, -1 if none."""
        hits = np.flatnonzero(self.secondary_access)
        return int(hits[0]) if hits.size else -1


Detector = Callable[[np.ndarray, np.random.Generator], np.ndarray]


def perfect_detector(primary_on: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Busy exactly when the primary transmits."""
    return np.asarray(primary_on, dtype=bool).copy()


def bernoulli_detector(missed_detection: float = 0.0, false_alarm: float = 0.0) -> Detector:
    """Detector that misses an active primary w.p. ``missed_detection`` and
    flags an idle channel w.p. ``false_alarm``."""

    def detect(primary_on, rng):
        on = np.asarray(primary_on, dtype=bool)
        u = rng.uniform(size=on.shape)
        return np.where(on, u >= missed_detection, u < false_alarm)

    return detect


def energy_detector(signal: float, noise: float, threshold: float) -> Detector:
    """Deterministic energy detector on the per-slot aggregate power."""

    def detect(primary_on, rng):
        on = np.asarray(primary_on, dtype=bool)
        return (np.where(on, signal, 0.0) + noise) >= threshold

    return detect


def dsa_simulate(slots: int, primary_activity: float, detector: Detector,
                 rng: np.random.Generator) -> SlotRecord:
    """Slotted opportunistic access: transmit in every slot sensed idle."""
    if slots < 1:
        raise ValueError(f"slots must be >= 1, got {slots}")
    if not 0 <= primary_activity <= 1:
        raise ValueError(f"primary_activity must lie in [0, 1], got {primary_activity}")
    on = rng.uniform(size=slots) < primary_activity
    busy = np.asarray(detector(on, rng), dtype=bool)
    access = ~busy
    return SlotRecord(on, access, on & access)
