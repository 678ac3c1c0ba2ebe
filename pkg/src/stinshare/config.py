"""Scenario configuration: dataclasses, validation, and the sectioned text format.

The text format is INI-like::

    [spectrum]
    reserved = 120   # MHz
    [scenario]
    id = S1

Every omitted key takes the case-study default.  JSON documents of the form
``{"section": {"key": value}}`` are accepted as well.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

from .deployment import Framework
from .geometry import EARTH_RADIUS_KM, Region
from .spectrum import ScenarioId


class ConfigError(ValueError):
    """Parse or validation failure; ``problems`` lists every offending key."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("\n".join(self.problems))


@dataclass(frozen=True)
class TerrestrialParams:
    density: float = 3e-3  # BS / km^2
    service_radius: float = 10.0  # km
    tx_power: float = 46.0  # dBm
    bs_gain: float = 10.0  # dBi, serving link
    interferer_gain: float = 0.0  # dBi, non-serving BS links
    pathloss_exponent: float = 3.5
    activity: float = 1.0  # per-BS activity probability
    uplink_power: float = 23.0  # dBm, TN user


@dataclass(frozen=True)
class SatelliteParams:
    density: float = 1e-5  # satellites / km^2 of orbital sphere
    altitude: float = 500.0  # km
    tx_power: float = 50.0  # dBm
    main_lobe_gain: float = 30.0  # dBi
    side_lobe_gain: float = 10.0  # dBi
    pathloss_exponent: float = 2.0
    min_elevation: float = 10.0  # deg


@dataclass(frozen=True)
class UserParams:
    ntn_offset: float = 50.0  # km from the TN user
    ntn_count: int = 1
    ntn_uplink_power: float = 23.0  # dBm
    terminal_gain: float = 0.0  # dBi
    noise: float = -110.0  # dBm
    noise_reference_bandwidth: float = 0.0  # MHz; 0 keeps noise fixed


@dataclass(frozen=True)
class ChannelParams:
    carrier_frequency: float = 2.0  # GHz
    fading: bool = False
    sensing_samples: int = 16


@dataclass(frozen=True)
class SpectrumParams:
    total: float = 300.0  # MHz
    reserved: float = 120.0  # MHz, NTN-reserved segment in S1
    fixed_ntn: float = 120.0  # MHz, NTN share without sharing (S3)
    s2_reserved: float | None = 0.0  # MHz; None follows ``reserved``


@dataclass(frozen=True)
class ScenarioParams:
    id: ScenarioId = ScenarioId.S1
    framework: Framework = Framework.DL_DL
    protection_radius: float = 10.0  # km
    primary_side: str = "ntn"


@dataclass(frozen=True)
class PolicyParams:
    access: str = "zone"  # zone | sss | jsss | dsa
    threshold: float | None = None  # dBm at the NTN user; None = auto
    satellite_threshold: float | None = None  # dBm at the satellite; None = auto
    p_high: float = 1.0
    p_low: float = 0.0
    p_none: float = 0.0
    dsa_slots: int = 100


@dataclass(frozen=True)
class MetricParams:
    packet_bytes: int = 1500
    slot_ms: float = 1.0
    circuit_power: float = 0.0  # W


@dataclass(frozen=True)
class RunParams:
    replications: int = 10_000
    seed: int = 2024


@dataclass(frozen=True)
class ScenarioConfig:
    region: Region = field(default_factory=Region)
    terrestrial: TerrestrialParams = field(default_factory=TerrestrialParams)
    satellite: SatelliteParams = field(default_factory=SatelliteParams)
    users: UserParams = field(default_factory=UserParams)
    channel: ChannelParams = field(default_factory=ChannelParams)
    spectrum: SpectrumParams = field(default_factory=SpectrumParams)
    scenario: ScenarioParams = field(default_factory=ScenarioParams)
    policy: PolicyParams = field(default_factory=PolicyParams)
    metrics: MetricParams = field(default_factory=MetricParams)
    run: RunParams = field(default_factory=RunParams)

    @property
    def orbit_radius(self) -> float:
        return EARTH_RADIUS_KM + self.satellite.altitude

    @property
    def orbit_area(self) -> float:
        return 4.0 * math.pi * self.orbit_radius**2

    @property
    def s2_reserved(self) -> float:
        r = self.spectrum.s2_reserved
        return self.spectrum.reserved if r is None else r

    def get(self, key: str):
        section, name = _split_key(key)
        return getattr(getattr(self, section), name)

    def with_values(self, **values) -> "ScenarioConfig":
        """Copy with dotted-key overrides, e.g. ``with_values(**{"spectrum.reserved": 60})``."""
        cfg = self
        for key, value in values.items():
            section, name = _split_key(key)
            sub = dataclasses.replace(getattr(cfg, section), **{name: value})
            cfg = dataclasses.replace(cfg, **{section: sub})
        return cfg

    def problems(self) -> list[str]:
        out = []

        def need(ok, key, msg):
            if not ok:
                out.append(f"{key}: {msg} (got {self.get(key)!r})")

        t, s, u, sp = self.terrestrial, self.satellite, self.users, self.spectrum
        need(t.density >= 0, "terrestrial.density", "must be >= 0")
        need(t.service_radius > 0, "terrestrial.service_radius", "must be > 0")
        need(t.pathloss_exponent >= 2, "terrestrial.pathloss_exponent", "must be >= 2")
        need(0 <= t.activity <= 1, "terrestrial.activity", "must lie in [0, 1]")
        need(s.density >= 0, "satellite.density", "must be >= 0")
        need(s.altitude > 0, "satellite.altitude", "must be > 0")
        need(s.main_lobe_gain >= s.side_lobe_gain, "satellite.main_lobe_gain", "must be >= side_lobe_gain")
        need(s.pathloss_exponent >= 2, "satellite.pathloss_exponent", "must be >= 2")
        need(0 <= s.min_elevation <= 90, "satellite.min_elevation", "must lie in [0, 90]")
        need(u.ntn_offset >= 0, "users.ntn_offset", "must be >= 0")
        need(u.ntn_count >= 1, "users.ntn_count", "must be >= 1")
        need(u.noise_reference_bandwidth >= 0, "users.noise_reference_bandwidth", "must be >= 0")
        need(self.channel.carrier_frequency > 0, "channel.carrier_frequency", "must be > 0")
        need(self.channel.sensing_samples >= 1, "channel.sensing_samples", "must be >= 1")
        need(sp.total > 0, "spectrum.total", "must be > 0")
        need(sp.reserved >= 0, "spectrum.reserved", "must be >= 0")
        need(sp.reserved <= sp.total, "spectrum.reserved",
             f"SpectrumPlan invariant reserved_ntn + shared = total needs reserved <= total ({sp.total:g})")
        need(0 < sp.fixed_ntn < sp.total, "spectrum.fixed_ntn", f"must lie in (0, total={sp.total:g})")
        if sp.s2_reserved is not None:
            need(0 <= sp.s2_reserved <= sp.total, "spectrum.s2_reserved", f"must lie in [0, total={sp.total:g}]")
        need(self.scenario.protection_radius >= 0, "scenario.protection_radius", "must be >= 0")
        need(self.scenario.primary_side in ("ntn", "tn"), "scenario.primary_side", "must be 'ntn' or 'tn'")
        p = self.policy
        need(p.access in ("zone", "sss", "jsss", "dsa"), "policy.access", "must be one of zone, sss, jsss, dsa")
        need(0 <= p.p_low <= p.p_high <= 1, "policy.p_low", "needs 0 <= p_low <= p_high <= 1")
        need(0 <= p.p_none <= p.p_low or p.p_none == 0, "policy.p_none", "needs 0 <= p_none <= p_low")
        need(p.dsa_slots >= 1, "policy.dsa_slots", "must be >= 1")
        need(self.metrics.packet_bytes >= 0, "metrics.packet_bytes", "must be >= 0")
        need(self.metrics.slot_ms >= 0, "metrics.slot_ms", "must be >= 0")
        need(self.metrics.circuit_power >= 0, "metrics.circuit_power", "must be >= 0")
        need(self.run.replications >= 1, "run.replications", "must be >= 1")
        need(0 <= self.run.seed < 2**64, "run.seed", "must be an unsigned 64-bit integer")
        return out

    def validate(self) -> "ScenarioConfig":
        probs = self.problems()
        if probs:
            raise ConfigError(probs)
        return self


SECTIONS = {f.name: f for f in dataclasses.fields(ScenarioConfig)}
_SECTION_TYPES = {
    "region": Region,
    "terrestrial": TerrestrialParams,
    "satellite": SatelliteParams,
    "users": UserParams,
    "channel": ChannelParams,
    "spectrum": SpectrumParams,
    "scenario": ScenarioParams,
    "policy": PolicyParams,
    "metrics": MetricParams,
    "run": RunParams,
}
_NONE_WORDS = {
    ("spectrum", "s2_reserved"): "follow",
    ("policy", "threshold"): "auto",
    ("policy", "satellite_threshold"): "auto",
}


def _split_key(key: str) -> tuple[str, str]:
    if "." not in key:
        raise KeyError(f"{key}: keys take the form section.name")
    section, name = key.split(".", 1)
    if section not in _SECTION_TYPES:
        raise KeyError(f"{key}: unknown section {section!r}")
    if name not in {f.name for f in dataclasses.fields(_SECTION_TYPES[section])}:
        raise KeyError(f"{key}: unknown key {name!r} in section [{section}]")
    return section, name


def known_keys() -> list[str]:
    return [f"{s}.{f.name}" for s, cls in _SECTION_TYPES.items() for f in dataclasses.fields(cls)]


def _field_type(section: str, name: str) -> str:
    for f in dataclasses.fields(_SECTION_TYPES[section]):
        if f.name == name:
            return f.type if isinstance(f.type, str) else f.type.__name__
    raise KeyError(name)


def convert(key: str, raw):
    """Coerce a raw text/JSON value to the type of ``key``."""
    section, name = _split_key(key)
    ftype = _field_type(section, name)
    text = raw.strip() if isinstance(raw, str) else raw
    none_word = _NONE_WORDS.get((section, name))
    if none_word is not None and (text is None or (isinstance(text, str) and text.lower() == none_word)):
        return None
    try:
        if ftype.startswith("float"):
            v = float(text)
            if not math.isfinite(v):
                raise ValueError("not finite")
            return v
        if ftype == "int":
            if isinstance(text, float) and not text.is_integer():
                raise ValueError("not an integer")
            return int(text)
        if ftype == "bool":
            if isinstance(text, bool):
                return text
            low = str(text).lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError("not a boolean")
        if ftype == "ScenarioId":
            return ScenarioId.parse(str(text))
        if ftype == "Framework":
            return Framework.parse(str(text))
        return str(text)
    except (TypeError, ValueError) as exc:
        hint = f" or {none_word!r}" if none_word else ""
        raise ValueError(f"{key}: expected {ftype.split(' ')[0]}{hint}, got {raw!r} ({exc})") from None


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, ScenarioId):
        return value.token
    if isinstance(value, Framework):
        return value.value
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_config(text: str, overrides=()) -> ScenarioConfig:
    """Parse the sectioned key=value format (or JSON) into a validated config."""
    problems: list[str] = []
    values: dict[str, object] = {}
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"line {exc.lineno}, column {exc.colno}: JSON parse error: {exc.msg}"]) from None
        if not isinstance(doc, dict):
            raise ConfigError(["line 1, column 1: JSON document must be an object of sections"])
        for section, body in doc.items():
            if not isinstance(body, dict):
                problems.append(f"{section}: section must be an object")
                continue
            for name, raw in body.items():
                _store(f"{section}.{name}", raw, values, problems, where=f"{section}.{name}")
    else:
        section = None
        for lineno, line in enumerate(text.splitlines(), start=1):
            content = line.split("#", 1)[0].split(";", 1)[0].strip()
            if not content:
                continue
            col = line.index(content[0]) + 1
            if content.startswith("["):
                if not content.endswith("]"):
                    raise ConfigError([f"line {lineno}, column {col}: unterminated section header"])
                section = content[1:-1].strip()
                if section not in _SECTION_TYPES:
                    problems.append(f"line {lineno}, column {col}: unknown section [{section}]")
                    section = "?"
                continue
            if "=" not in content:
                raise ConfigError([f"line {lineno}, column {col}: expected key = value"])
            if section is None:
                raise ConfigError([f"line {lineno}, column {col}: key outside of any [section]"])
            if section == "?":
                continue
            name, raw = (s.strip() for s in content.split("=", 1))
            _store(f"{section}.{name}", raw, values, problems, where=f"line {lineno}, column {col}")
    for item in overrides:
        if "=" not in item:
            problems.append(f"--set {item!r}: expected key=value")
            continue
        key, raw = (s.strip() for s in item.split("=", 1))
        _store(key, raw, values, problems, where=f"--set {key}")
    if problems:
        raise ConfigError(problems)
    try:
        cfg = ScenarioConfig().with_values(**values)
    except Exception as exc:  # section constructors (e.g. Region) validate eagerly
        raise ConfigError([str(exc)]) from None
    return cfg.validate()


def _store(key, raw, values, problems, where):
    try:
        values[key] = convert(key, raw)
    except KeyError as exc:
        problems.append(f"{where}: {exc.args[0]}")
    except ValueError as exc:
        problems.append(f"{where}: {exc}")


def emit_config(cfg: ScenarioConfig) -> str:
    lines = []
    for section, cls in _SECTION_TYPES.items():
        lines.append(f"[{section}]")
        sub = getattr(cfg, section)
        for f in dataclasses.fields(cls):
            v = getattr(sub, f.name)
            lines.append(f"{f.name} = {_NONE_WORDS[(section, f.name)] if v is None else format_value(v)}")
        lines.append("")
    return "\n".join(lines)
