"""One network snapshot: node placement, association, protection zones, and
the co-channel transmitters each framework points at a receiver."""

from __future__ import annotations

import enum
import functools
import hashlib
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .geometry import (
    EARTH_RADIUS_KM,
    Region,
    cap_area,
    sample_planar_ppp,
    sample_sphere_cap_ppp,
    visibility_half_angle,
    visibility_mask,
)

if TYPE_CHECKING:
    from .config import ScenarioConfig


class InvalidReferenceError(KeyError):
    pass


class Framework(enum.Enum):
    DL_DL = "ntn-dl/tn-dl"
    DL_UL = "ntn-dl/tn-ul"
    UL_DL = "ntn-ul/tn-dl"
    UL_UL = "ntn-ul/tn-ul"

    @property
    def ntn_downlink(self) -> bool:
        return self in (Framework.DL_DL, Framework.DL_UL)

    @property
    def tn_downlink(self) -> bool:
        return self in (Framework.DL_DL, Framework.UL_DL)

    @classmethod
    def parse(cls, text: str) -> "Framework":
        t = text.strip().lower().replace(" ", "")
        for f in cls:
            if t in (f.value, f.name.lower(), f.name.lower().replace("_", "-")):
                return f
        raise ValueError(f"unknown framework {text!r}; expected one of {[f.value for f in cls]}")


@dataclass(frozen=True)
class ZoneDecision:
    user: str
    nearest_bs_distance: float  # km; inf with no BSs
    inside_protection_zone: bool


def protection_zone_check(ntn_user, bss, radius: float, user: str = "ntn:0") -> ZoneDecision:
    """Whether any BS lies strictly within ``radius`` km of ``ntn_user``."""
    if not radius >= 0:
        raise ValueError(f"protection radius must be >= 0, got {radius}")
    b = np.asarray(bss, dtype=float).reshape(-1, 2)
    if len(b) == 0:
        return ZoneDecision(user, math.inf, False)
    u = np.asarray(ntn_user, dtype=float)
    d = float(np.min(np.hypot(b[:, 0] - u[0], b[:, 1] - u[1])))
    return ZoneDecision(user, d, d < radius)


@dataclass(frozen=True)
class NetworkRealization:
    region: Region
    bs_positions: np.ndarray  # (n, 2) km
    bs_xyz: np.ndarray  # (n, 3)
    bs_active: np.ndarray  # (n,) bool
    satellite_positions: np.ndarray  # (m, 3): satellites in the regional cap
    satellite_count: int  # whole constellation, including those never seen from the region
    tn_user: np.ndarray  # (2,)
    tn_user_xyz: np.ndarray  # (3,)
    tn_server: int  # BS index, -1 = TN outage
    tn_server_distance: float  # km, inf on outage
    ntn_users: np.ndarray  # (k, 2)
    ntn_users_xyz: np.ndarray  # (k, 3)
    ntn_servers: np.ndarray  # (k,) satellite index, -1 = NTN outage
    companions: np.ndarray  # (m, 2): the in-region user each satellite serves
    tn_uplink_users: np.ndarray  # (n, 2): the uplink user of each BS
    regional: np.ndarray  # (m,) bool: visible from some ground receiver
    visible_from: dict  # receiver name -> (m,) bool visibility mask

    @property
    def ntn_outage(self) -> np.ndarray:
        return self.ntn_servers < 0

    @property
    def tn_outage(self) -> bool:
        return self.tn_server < 0

    def receivers(self) -> list[str]:
        return ["tn"] + [f"ntn:{j}" for j in range(len(self.ntn_users))]

    def digest(self) -> str:
        h = hashlib.blake2b(digest_size=16)
        for a in (self.bs_positions, self.bs_active, self.satellite_positions, self.ntn_users,
                  self.companions, self.tn_uplink_users):
            h.update(np.ascontiguousarray(a).tobytes())
        return h.hexdigest()


def _disc_points(rng: np.random.Generator, centres: np.ndarray, radius: float) -> np.ndarray:
    u = rng.uniform(size=(len(centres), 2))
    r = radius * np.sqrt(u[:, 0])
    phi = 2.0 * math.pi * u[:, 1]
    return centres + np.column_stack((r * np.cos(phi), r * np.sin(phi)))


@functools.lru_cache(maxsize=32)
def _fixed_users(region: Region, offset: float, count: int):
    """TN user at the origin and ``count`` NTN users evenly spaced on a circle, first due east."""
    tn_user = np.zeros(2)
    ang = 2.0 * math.pi * np.arange(count) / count
    ntn = np.column_stack((offset * np.cos(ang), offset * np.sin(ang)))
    out = (tn_user, region.to_sphere(tn_user)[0], ntn, region.to_sphere(ntn))
    for a in out:
        a.flags.writeable = False
    return out


def build_realization(config: "ScenarioConfig", rng: np.random.Generator) -> NetworkRealization:
    """Sample one snapshot.

    Random draws happen in a fixed order and never depend on the scenario,
    sharing policy or bandwidth plan, so paired runs see identical geometry.
    """
    region = config.region
    t, s, u = config.terrestrial, config.satellite, config.users
    bs = sample_planar_ppp(t.density, region, rng)
    # only satellites above the horizon of some point of the region can matter;
    # the rest of the constellation contributes its count alone
    orbit = EARTH_RADIUS_KM + s.altitude
    cap = min(math.pi, visibility_half_angle(s.altitude, s.min_elevation)
              + (region.diagonal / 2.0 + t.service_radius) / EARTH_RADIUS_KM)
    up = region.frame()[0]
    sats = sample_sphere_cap_ppp(s.density, orbit, up, cap, rng)
    n_outside = int(rng.poisson(s.density * max(0.0, 4.0 * math.pi * orbit**2 - cap_area(orbit, cap))))
    active = rng.uniform(size=len(bs)) < t.activity
    comp = rng.uniform(size=(len(sats), 2))
    comp[:, 0] = (comp[:, 0] - 0.5) * region.width
    comp[:, 1] = (comp[:, 1] - 0.5) * region.height
    ul = _disc_points(rng, bs, t.service_radius)

    tn_user, tn_xyz, ntn, ntn_xyz = _fixed_users(region, u.ntn_offset, u.ntn_count)
    bs_xyz = region.to_sphere(bs) if len(bs) else np.zeros((0, 3))

    tn_server, tn_dist = -1, math.inf
    if active.any():
        d = np.hypot(bs[:, 0], bs[:, 1])
        d = np.where(active, d, np.inf)
        i = int(np.argmin(d))
        if d[i] <= t.service_radius:
            tn_server, tn_dist = i, float(d[i])
            ul[i] = tn_user

    k = u.ntn_count
    visible = {"tn": visibility_mask(tn_xyz, sats, s.min_elevation)}
    servers = np.full(k, -1, dtype=np.int64)
    for j in range(k):
        vis = visibility_mask(ntn_xyz[j], sats, s.min_elevation)
        visible[f"ntn:{j}"] = vis
        idx = np.flatnonzero(vis)
        if idx.size:
            d = np.linalg.norm(sats[idx] - ntn_xyz[j], axis=1)
            servers[j] = int(idx[np.argmin(d)])
    if tn_server >= 0 and not config.scenario.framework.tn_downlink:
        visible["bs"] = visibility_mask(bs_xyz[tn_server], sats, s.min_elevation)
    regional = np.zeros(len(sats), dtype=bool)
    for v in visible.values():
        regional |= v

    return NetworkRealization(
        region=region, bs_positions=bs, bs_xyz=bs_xyz, bs_active=active,
        satellite_positions=sats, satellite_count=len(sats) + n_outside, tn_user=tn_user, tn_user_xyz=tn_xyz,
        tn_server=tn_server, tn_server_distance=tn_dist,
        ntn_users=ntn, ntn_users_xyz=ntn_xyz, ntn_servers=servers,
        companions=comp, tn_uplink_users=ul, regional=regional, visible_from=visible,
    )


@dataclass(frozen=True)
class SourceGroup:
    """Co-channel transmitters of one kind as seen by one receiver.

    ``kind`` is one of ``satellite`` (index = satellite), ``bs`` (index = BS),
    ``tn_user`` (index = BS whose uplink user transmits), ``ntn_user``
    (index = typical NTN user) or ``companion`` (index = satellite whose
    in-region user transmits).
    """

    kind: str
    system: str  # "ntn" | "tn"
    index: np.ndarray
    distance_km: np.ndarray
    tx_power: float  # dBm
    gain: float  # dBi, transmit + receive
    exponent: float

    def __len__(self):
        return len(self.index)


@dataclass(frozen=True)
class Link:
    distance_km: float
    tx_power: float
    gain: float
    exponent: float


def _receiver_point(realization: NetworkRealization, config: "ScenarioConfig", receiver: str):
    """(kind, planar position or None, xyz) of the physical receiving node."""
    fw = config.scenario.framework
    if receiver == "tn":
        if fw.tn_downlink:
            return "ground", realization.tn_user, realization.tn_user_xyz
        if realization.tn_server < 0:
            return None
        i = realization.tn_server
        return "ground", realization.bs_positions[i], realization.bs_xyz[i]
    j = _ntn_index(realization, receiver)
    if fw.ntn_downlink:
        return "ground", realization.ntn_users[j], realization.ntn_users_xyz[j]
    srv = realization.ntn_servers[j]
    if srv < 0:
        return None
    return "space", None, realization.satellite_positions[srv]


def _ntn_index(realization: NetworkRealization, receiver: str) -> int:
    try:
        kind, idx = receiver.split(":")
        j = int(idx)
    except ValueError:
        raise InvalidReferenceError(f"unknown receiver {receiver!r}") from None
    if kind != "ntn" or not 0 <= j < len(realization.ntn_users):
        raise InvalidReferenceError(f"unknown receiver {receiver!r}")
    return j


def serving_link(realization: NetworkRealization, config: "ScenarioConfig", receiver: str) -> Link | None:
    """Desired link into ``receiver``; None on outage."""
    fw = config.scenario.framework
    t, s, u = config.terrestrial, config.satellite, config.users
    if receiver == "tn":
        if realization.tn_server < 0:
            return None
        d = realization.tn_server_distance
        if fw.tn_downlink:
            return Link(d, t.tx_power, t.bs_gain + u.terminal_gain, t.pathloss_exponent)
        return Link(d, t.uplink_power, u.terminal_gain + t.bs_gain, t.pathloss_exponent)
    j = _ntn_index(realization, receiver)
    srv = realization.ntn_servers[j]
    if srv < 0:
        return None
    d = float(np.linalg.norm(realization.satellite_positions[srv] - realization.ntn_users_xyz[j]))
    if fw.ntn_downlink:
        return Link(d, s.tx_power, s.main_lobe_gain + u.terminal_gain, s.pathloss_exponent)
    return Link(d, u.ntn_uplink_power, u.terminal_gain + s.main_lobe_gain, s.pathloss_exponent)


def ntn_uplink_transmitters(realization: NetworkRealization) -> tuple[np.ndarray, np.ndarray]:
    """Typical NTN users with a server, and satellites whose companion transmits."""
    served = np.flatnonzero(realization.ntn_servers >= 0)
    comp = realization.regional.copy()
    comp[realization.ntn_servers[served]] = False
    return served, np.flatnonzero(comp)


def interference_sources(framework: Framework, realization: NetworkRealization, receiver: str,
                         config: "ScenarioConfig") -> list[SourceGroup]:
    """Co-channel transmitters the framework directs at ``receiver``.

    Band membership is not applied here; every transmitter that could share a
    band with the receiver is returned and the spectrum rules filter later.
    The serving node and inactive BSs are never included.
    """
    if framework is not config.scenario.framework:
        config = config.with_values(**{"scenario.framework": framework})
    point = _receiver_point(realization, config, receiver)
    if point is None:
        return []
    where, pos2, xyz = point
    t, s, u = config.terrestrial, config.satellite, config.users
    r = realization
    groups: list[SourceGroup] = []
    space = where == "space"
    rx_gain_other = {
        # receive gain towards non-serving transmitters
        "tn": t.interferer_gain if not framework.tn_downlink else u.terminal_gain,
        "ntn": s.side_lobe_gain if not framework.ntn_downlink else u.terminal_gain,
    }["tn" if receiver == "tn" else "ntn"]
    serving_sat = -1
    serving_bs = r.tn_server
    if receiver != "tn":
        serving_sat = int(r.ntn_servers[_ntn_index(r, receiver)])

    def ground_dist(points2):
        if space:
            return np.linalg.norm(r.region.to_sphere(points2) - xyz, axis=1) if len(points2) else np.zeros(0)
        return np.hypot(points2[:, 0] - pos2[0], points2[:, 1] - pos2[1])

    ground_exp = s.pathloss_exponent if space else t.pathloss_exponent

    # NTN transmitters
    if framework.ntn_downlink:
        if space:
            raise AssertionError("downlink NTN never interferes at a satellite receiver")
        key = receiver if receiver != "tn" else ("tn" if framework.tn_downlink else "bs")
        vis = r.visible_from.get(key)
        if vis is None:
            vis = visibility_mask(xyz, r.satellite_positions, s.min_elevation)
        idx = np.flatnonzero(vis)
        idx = idx[idx != serving_sat]
        d = np.linalg.norm(r.satellite_positions[idx] - xyz, axis=1)
        groups.append(SourceGroup("satellite", "ntn", idx, d, s.tx_power, s.side_lobe_gain + rx_gain_other,
                                  s.pathloss_exponent))
    else:
        users, comp = ntn_uplink_transmitters(r)
        if receiver != "tn":
            users = users[users != _ntn_index(r, receiver)]
        g = u.terminal_gain + rx_gain_other
        groups.append(SourceGroup("ntn_user", "ntn", users, ground_dist(r.ntn_users[users]),
                                  u.ntn_uplink_power, g, ground_exp))
        groups.append(SourceGroup("companion", "ntn", comp, ground_dist(r.companions[comp]),
                                  u.ntn_uplink_power, g, ground_exp))

    # TN transmitters
    act = np.flatnonzero(r.bs_active)
    if receiver == "tn" and serving_bs >= 0:
        act = act[act != serving_bs]
    if framework.tn_downlink:
        groups.append(SourceGroup("bs", "tn", act, ground_dist(r.bs_positions[act]), t.tx_power,
                                  t.interferer_gain + rx_gain_other, ground_exp))
    else:
        groups.append(SourceGroup("tn_user", "tn", act, ground_dist(r.tn_uplink_users[act]), t.uplink_power,
                                  u.terminal_gain + rx_gain_other, ground_exp))
    return groups


def zone_flags(realization: NetworkRealization, config: "ScenarioConfig"):
    """Protection-zone status of every NTN link.

    Returns ``(user_zone, sat_zone, companion_zone, decisions)``: per typical
    NTN user, per satellite (the satellite's own link), per companion user,
    and the typical users' :class:`ZoneDecision` records.  With the NTN as
    primary the zone is a disc around each NTN user that must be BS-free for
    the link to use the shared band; with the TN as primary it is a disc
    around the TN user that NTN transmitters must stay out of.
    """
    r = realization
    radius = config.scenario.protection_radius
    m, k = len(r.satellite_positions), len(r.ntn_users)
    user_zone = np.zeros(k, dtype=bool)
    comp_zone = np.zeros(m, dtype=bool)
    decisions = []
    reg = np.flatnonzero(r.regional)
    if config.scenario.primary_side == "ntn":
        for j in range(k):
            z = protection_zone_check(r.ntn_users[j], r.bs_positions, radius, user=f"ntn:{j}")
            decisions.append(z)
            user_zone[j] = z.inside_protection_zone
        if len(r.bs_positions) and len(reg) and radius > 0:
            c = r.companions[reg]
            b = r.bs_positions
            d2 = (c[:, None, 0] - b[None, :, 0]) ** 2 + (c[:, None, 1] - b[None, :, 1]) ** 2
            comp_zone[reg] = np.sqrt(d2.min(axis=1)) < radius
        sat_zone = comp_zone.copy()
        for j in range(k - 1, -1, -1):
            if r.ntn_servers[j] >= 0:
                sat_zone[r.ntn_servers[j]] = user_zone[j]
    else:
        tn = r.tn_user
        for j in range(k):
            d = float(np.hypot(*(r.ntn_users[j] - tn)))
            decisions.append(ZoneDecision(f"ntn:{j}", d, d < radius))
            user_zone[j] = d < radius
        comp_zone[reg] = np.hypot(r.companions[reg, 0] - tn[0], r.companions[reg, 1] - tn[1]) < radius
        sat_zone = np.linalg.norm(r.satellite_positions - r.tn_user_xyz, axis=1) < radius
        if config.scenario.framework.ntn_downlink:
            for j in range(k):
                if r.ntn_servers[j] >= 0:
                    user_zone[j] = sat_zone[r.ntn_servers[j]]
    return user_zone, sat_zone, comp_zone, decisions
