import pytest

from stinshare.deployment import ZoneDecision
from stinshare.spectrum import (
    Band,
    InvalidConfigurationError,
    ScenarioId,
    SpectrumPlan,
    assign_bands,
    cross_interference_enabled,
)

INSIDE = ZoneDecision("ntn:0", 5.0, True)
OUTSIDE = ZoneDecision("ntn:0", 15.0, False)


def test_plan_invariant():
    p = SpectrumPlan.split(300, 120)
    assert (p.reserved_ntn, p.shared) == (120, 180)
    with pytest.raises(InvalidConfigurationError, match="reserved"):
        SpectrumPlan.split(300, 400)
    with pytest.raises(InvalidConfigurationError):
        SpectrumPlan(300, 100, 100)
    with pytest.raises(InvalidConfigurationError):
        SpectrumPlan(300, -10, 310)


def test_s1_inside_zone_uses_reserved():
    a = assign_bands(ScenarioId.S1, SpectrumPlan.split(300, 120), INSIDE)
    assert a["ntn"].band is Band.RESERVED and a["ntn"].bandwidth == 120
    assert not cross_interference_enabled(a["ntn"], a["tn"])


def test_s1_outside_zone_uses_shared():
    a = assign_bands(ScenarioId.S1, SpectrumPlan.split(300, 120), OUTSIDE)
    assert a["ntn"].band is Band.SHARED and a["ntn"].bandwidth == 180
    assert cross_interference_enabled(a["ntn"], a["tn"])


def test_s1_with_zero_radius_matches_s2_shared_component():
    plan = SpectrumPlan.split(300, 120)
    s1 = assign_bands(ScenarioId.S1, plan, ZoneDecision("ntn:0", 0.5, False))
    s2 = assign_bands(ScenarioId.S2, plan, None)
    assert s1["ntn"].width(Band.SHARED) == s2["ntn"].width(Band.SHARED)
    assert s1["tn"] == s2["tn"]


def test_s2_uses_both_segments():
    a = assign_bands(ScenarioId.S2, SpectrumPlan.split(300, 120), INSIDE)
    assert a["ntn"].bands() == {Band.RESERVED, Band.SHARED}
    assert a["ntn"].bandwidth == 300


def test_s3_widths_and_isolation():
    a = assign_bands(ScenarioId.S3, SpectrumPlan.split(300, 120), None)
    assert a["ntn"].bandwidth == 120 and a["tn"].bandwidth == 180
    assert not cross_interference_enabled(a["ntn"], a["tn"])
    with pytest.raises(InvalidConfigurationError):
        assign_bands(ScenarioId.S3, SpectrumPlan.split(300, 0), None)


def test_cross_interference_cases():
    plan = SpectrumPlan.split(300, 120)
    shared = assign_bands(ScenarioId.S1, plan, OUTSIDE)["ntn"]
    reserved = assign_bands(ScenarioId.S1, plan, INSIDE)["ntn"]
    assert cross_interference_enabled(shared, shared)
    assert not cross_interference_enabled(reserved, shared)


def test_scenario_parse():
    assert ScenarioId.parse("s2") is ScenarioId.S2
    assert ScenarioId.parse("S3-no-SS") is ScenarioId.S3
    with pytest.raises(ValueError):
        ScenarioId.parse("S4")
