"""Bandwidth bookkeeping and the three case-study sharing scenarios."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .deployment import ZoneDecision


class InvalidConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class SpectrumPlan:
    """Partition of the total band (MHz) into an NTN-reserved and a shared segment."""

    total: float
    reserved_ntn: float
    shared: float

    def __post_init__(self):
        probs = self.problems()
        if probs:
            raise InvalidConfigurationError("; ".join(probs))

    def problems(self) -> list[str]:
        out = []
        if min(self.total, self.reserved_ntn, self.shared) < 0:
            out.append("bandwidths must be >= 0")
        if abs(self.reserved_ntn + self.shared - self.total) > 1e-9 * max(1.0, self.total):
            out.append(
                f"reserved ({self.reserved_ntn:g}) + shared ({self.shared:g}) must equal total ({self.total:g})"
            )
        return out

    @classmethod
    def split(cls, total: float, reserved: float) -> "SpectrumPlan":
        if reserved > total:
            raise InvalidConfigurationError(
                f"reserved ({reserved:g}) exceeds total ({total:g}); reserved_ntn + shared = total requires reserved <= total"
            )
        return cls(total, reserved, total - reserved)


class ScenarioId(enum.Enum):
    S1 = "S1-protection-zone-SS"
    S2 = "S2-SS-no-zone"
    S3 = "S3-no-SS"

    @property
    def token(self) -> str:
        return self.name

    @classmethod
    def parse(cls, text: str) -> "ScenarioId":
        t = text.strip()
        for s in cls:
            if t.upper() == s.name or t.lower() == s.value.lower():
                return s
        raise ValueError(f"unknown scenario {text!r}; expected one of S1, S2, S3")


class Band(enum.Enum):
    RESERVED = "reserved"
    SHARED = "shared"
    EXCLUSIVE_NTN = "exclusive-ntn"
    EXCLUSIVE_TN = "exclusive-tn"
    NONE = "none"


@dataclass(frozen=True)
class Segment:
    band: Band
    width: float  # MHz
    co_channel: frozenset  # transmitter classes ("ntn", "tn") active on the band


@dataclass(frozen=True)
class BandAssignment:
    user: str
    segments: tuple

    @property
    def band(self) -> Band:
        return self.segments[0].band if self.segments else Band.NONE

    @property
    def bandwidth(self) -> float:
        return sum(s.width for s in self.segments)

    def width(self, band: Band) -> float:
        return sum(s.width for s in self.segments if s.band is band)

    def bands(self) -> frozenset:
        return frozenset(s.band for s in self.segments if s.band is not Band.NONE)


_BOTH = frozenset({"ntn", "tn"})


def ntn_transmit_bands(scenario: ScenarioId, in_zone: bool) -> frozenset:
    """Bands an NTN transmitter occupies, given its link's zone status."""
    if scenario is ScenarioId.S1:
        return frozenset({Band.RESERVED if in_zone else Band.SHARED})
    if scenario is ScenarioId.S2:
        return frozenset({Band.RESERVED, Band.SHARED})
    return frozenset({Band.EXCLUSIVE_NTN})


def tn_transmit_bands(scenario: ScenarioId) -> frozenset:
    if scenario is ScenarioId.S3:
        return frozenset({Band.EXCLUSIVE_TN})
    return frozenset({Band.SHARED})


def assign_bands(scenario: ScenarioId, plan: SpectrumPlan, zone: ZoneDecision | None) -> dict:
    """Band assignment for the NTN and TN user classes.

    For S3 the plan's reserved segment is the NTN's exclusive share and its
    shared segment the TN's exclusive share.
    """
    if scenario is ScenarioId.S3:
        if plan.reserved_ntn <= 0 or plan.shared <= 0:
            raise InvalidConfigurationError(
                "S3 needs a plan with positive NTN and TN exclusive widths"
            )
        return {
            "ntn": BandAssignment("ntn", (Segment(Band.EXCLUSIVE_NTN, plan.reserved_ntn, frozenset({"ntn"})),)),
            "tn": BandAssignment("tn", (Segment(Band.EXCLUSIVE_TN, plan.shared, frozenset({"tn"})),)),
        }
    tn = BandAssignment("tn", (Segment(Band.SHARED, plan.shared, _BOTH),))
    reserved = Segment(Band.RESERVED, plan.reserved_ntn, frozenset({"ntn"}))
    shared = Segment(Band.SHARED, plan.shared, _BOTH)
    if scenario is ScenarioId.S2:
        return {"ntn": BandAssignment("ntn", (reserved, shared)), "tn": tn}
    inside = bool(zone is not None and zone.inside_protection_zone)
    return {"ntn": BandAssignment("ntn", (reserved,) if inside else (shared,)), "tn": tn}


def cross_interference_enabled(a: BandAssignment, b: BandAssignment) -> bool:
    return bool(a.bands() & b.bands())
