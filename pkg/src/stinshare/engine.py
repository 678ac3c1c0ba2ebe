"""Replication driver: seeded runs, B_R / R_p sweeps, and paired scenario comparison.

A replication produces a :class:`ReplicationRecord` holding everything that
does not depend on bandwidth (SINRs, access decisions, distances).
:func:`score` turns a record into rates and the other metrics for a given
bandwidth plan, so sweeps over bandwidth-only parameters reuse records.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import channel, policies
from .channel import SPEED_OF_LIGHT, Diagnostics, dbm_to_watt, pathloss_gain
from .config import ConfigError, ScenarioConfig
from .deployment import (
    NetworkRealization,
    build_realization,
    interference_sources,
    serving_link,
    zone_flags,
)
from .geometry import EARTH_RADIUS_KM
from .metrics import (
    Estimate,
    MetricsReport,
    area_spectrum_efficiency,
    avg_data_rate,
    interference_intensity,
)
from .spectrum import ScenarioId, SpectrumPlan

# parameters that only enter score(); sweeping them reuses replication records
SCORE_ONLY_KEYS = frozenset({
    "spectrum.total",
    "spectrum.reserved",
    "spectrum.fixed_ntn",
    "spectrum.s2_reserved",
    "metrics.packet_bytes",
    "metrics.slot_ms",
    "metrics.circuit_power",
})


class InvalidComparisonError(ValueError):
    pass


def child_rng(master_seed: int, index: int) -> np.random.Generator:
    """Independent stream for replication ``index``; depends only on (seed, index)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(master_seed, spawn_key=(index,))))


@dataclass
class ReplicationRecord:
    index: int
    n_bs: int
    n_sat: int
    n_visible: int
    tn_served: bool
    tn_sinr: float
    tn_se: float  # on the TN band
    tn_se_no_ntn: float  # same link with every NTN transmitter removed
    tn_cross_interference: float  # W from NTN transmitters on the TN band; nan without a receiver
    tn_tx_power: float  # W
    ntn_served: np.ndarray  # (k,) bool
    ntn_se_own: np.ndarray  # SE on the reserved (S1/S2) or exclusive (S3) band
    ntn_se_shared: np.ndarray  # SE on the shared band; 0 in S3
    ntn_access: np.ndarray  # fraction of attempts granted the shared band
    ntn_attempts: np.ndarray  # int attempts per user
    ntn_first_access: np.ndarray  # first granted slot, -1 if none
    ntn_distance: np.ndarray  # km, serving link
    ntn_tx_power: float  # W
    near_field_clamps: int = 0
    digest: str = ""


def _group_powers(groups, f_ghz, diag):
    return [dbm_to_watt(g.tx_power + g.gain) * pathloss_gain(g.distance_km * 1e3, g.exponent, f_ghz, diag)
            for g in groups]


def _link_power(link, f_ghz, diag) -> float:
    return dbm_to_watt(link.tx_power + link.gain) * pathloss_gain(link.distance_km * 1e3, link.exponent, f_ghz, diag)


def _tn_emitters(r: NetworkRealization, cfg: ScenarioConfig):
    """Planar positions, EIRP (dBm) of the TN transmitters a sensing node can hear."""
    act = np.flatnonzero(r.bs_active)
    t, u = cfg.terrestrial, cfg.users
    if cfg.scenario.framework.tn_downlink:
        return r.bs_positions[act], t.tx_power + t.interferer_gain
    return r.tn_uplink_users[act], t.uplink_power + u.terminal_gain


def auto_thresholds(cfg: ScenarioConfig) -> tuple[float, float]:
    """Default detection thresholds in W for the NTN user and its satellite.

    The user threshold is noise plus one TN emitter at the protection radius,
    which makes hard-decision sensing mimic the zone rule; the satellite
    threshold is noise plus the region's mean TN population seen from
    directly overhead.
    """
    t, s, u, f = cfg.terrestrial, cfg.satellite, cfg.users, cfg.channel.carrier_frequency
    noise = channel.noise_power(u.noise)
    eirp = t.tx_power + t.interferer_gain if cfg.scenario.framework.tn_downlink else t.uplink_power + u.terminal_gain
    p = cfg.policy
    if p.threshold is not None:
        user_th = dbm_to_watt(p.threshold)
    else:
        user_th = noise + dbm_to_watt(eirp + u.terminal_gain) * pathloss_gain(
            cfg.scenario.protection_radius * 1e3, t.pathloss_exponent, f)
    if p.satellite_threshold is not None:
        sat_th = dbm_to_watt(p.satellite_threshold)
    else:
        sat_th = noise + t.density * cfg.region.area * dbm_to_watt(eirp + s.side_lobe_gain) * pathloss_gain(
            s.altitude * 1e3, s.pathloss_exponent, f)
    return user_th, sat_th


def _sensed_power(powers: np.ndarray, rng, cfg: ScenarioConfig) -> float:
    if cfg.channel.fading and powers.size:
        h = channel.rayleigh_power(rng, (cfg.channel.sensing_samples, powers.size))
        return math.fsum((h @ powers) / cfg.channel.sensing_samples)
    return math.fsum(powers)


def _access_decisions(r, cfg, user_zone, rng, diag):
    """Shared-band access fraction, attempts and first granted slot per NTN user."""
    k = len(r.ntn_users)
    access = np.zeros(k)
    attempts = np.ones(k, dtype=np.int64)
    first = np.full(k, -1, dtype=np.int64)
    pol = cfg.policy
    if pol.access == "zone":
        access[:] = ~user_zone
        first[~user_zone] = 0
        return access, attempts, first
    t, s, u, f = cfg.terrestrial, cfg.satellite, cfg.users, cfg.channel.carrier_frequency
    noise = channel.noise_power(u.noise)
    if pol.access == "dsa":
        radius = cfg.scenario.protection_radius
        for j in range(k):
            b = r.bs_positions
            n_zone = int(np.sum(np.hypot(b[:, 0] - r.ntn_users[j, 0], b[:, 1] - r.ntn_users[j, 1]) < radius)) if len(b) else 0
            activity = 1.0 - (1.0 - t.activity) ** n_zone
            rec = policies.dsa_simulate(pol.dsa_slots, activity, policies.perfect_detector, rng)
            access[j] = rec.access_probability
            attempts[j] = pol.dsa_slots
            first[j] = rec.first_access()
        return access, attempts, first
    user_th, sat_th = auto_thresholds(cfg)
    params = policies.AccessPolicyParams(p_high=pol.p_high, p_low=pol.p_low, threshold=user_th,
                                         satellite_threshold=sat_th, p_none=pol.p_none)
    pos, eirp = _tn_emitters(r, cfg)
    for j in range(k):
        d = np.hypot(pos[:, 0] - r.ntn_users[j, 0], pos[:, 1] - r.ntn_users[j, 1])
        pw = dbm_to_watt(eirp + u.terminal_gain) * pathloss_gain(d * 1e3, t.pathloss_exponent, f, diag)
        user_res = policies.energy_detect(_sensed_power(np.atleast_1d(pw), rng, cfg), noise, user_th)
        if pol.access == "sss":
            granted = policies.sss_access(user_res, params, rng)
        else:
            srv = r.ntn_servers[j]
            if srv >= 0:
                ds = np.linalg.norm(r.region.to_sphere(pos) - r.satellite_positions[srv], axis=1) if len(pos) else np.zeros(0)
                ps = dbm_to_watt(eirp + s.side_lobe_gain) * pathloss_gain(ds * 1e3, s.pathloss_exponent, f, diag)
                sat_stat = _sensed_power(np.atleast_1d(ps), rng, cfg)
            else:
                sat_stat = math.inf
            sat_res = policies.energy_detect(sat_stat, noise, sat_th)
            granted = policies.jsss_fuse(sat_res, user_res, params, rng)
        access[j] = float(granted)
        first[j] = 0 if granted else -1
    return access, attempts, first


def _band_masks(scenario: ScenarioId, group, sat_zone, comp_zone, user_shared):
    """(on_own_band, on_shared) masks for the transmitters of ``group``.

    "Own" is the NTN-only band (reserved in S1/S2, exclusive in S3) for NTN
    transmitters and the TN-exclusive band for TN transmitters in S3.
    """
    n = len(group)
    if group.system == "tn":
        if scenario is ScenarioId.S3:
            return np.ones(n, bool), np.zeros(n, bool)
        return np.zeros(n, bool), np.ones(n, bool)
    if scenario is ScenarioId.S2:
        return np.ones(n, bool), np.ones(n, bool)
    if scenario is ScenarioId.S3:
        return np.ones(n, bool), np.zeros(n, bool)
    if group.kind == "satellite":
        shared = ~sat_zone[group.index]
    elif group.kind == "companion":
        shared = ~comp_zone[group.index]
    else:
        shared = user_shared[group.index]
    return ~shared, shared


def simulate_replication(cfg: ScenarioConfig, index: int, with_digest: bool = False) -> ReplicationRecord:
    rng = child_rng(cfg.run.seed, index)
    r = build_realization(cfg, rng)
    diag = Diagnostics()
    scenario, fw = cfg.scenario.id, cfg.scenario.framework
    f = cfg.channel.carrier_frequency
    noise = channel.noise_power(cfg.users.noise)
    k = len(r.ntn_users)

    # powers for every receiver first: fading draws never depend on the scenario
    rx = {}
    for name in r.receivers():
        link = serving_link(r, cfg, name)
        groups = interference_sources(fw, r, name, cfg)
        desired = _link_power(link, f, diag) if link is not None else 0.0
        powers = _group_powers(groups, f, diag)
        if cfg.channel.fading:
            desired *= float(channel.rayleigh_power(rng, 1)[0]) if link is not None else 1.0
            powers = [p * channel.rayleigh_power(rng, len(p)) for p in powers]
        rx[name] = (link, desired, groups, powers)

    user_zone, sat_zone, comp_zone, _ = zone_flags(r, cfg)
    access, attempts, first = _access_decisions(r, cfg, user_zone, rng, diag)
    user_shared = access > 0
    if fw.ntn_downlink:
        # a typical user's serving satellite follows that user's access decision
        sat_zone = sat_zone.copy()
        for j in range(k - 1, -1, -1):
            if r.ntn_servers[j] >= 0:
                sat_zone[r.ntn_servers[j]] = not user_shared[j]

    def band_power(name, band, systems=("ntn", "tn")):
        _, _, groups, powers = rx[name]
        parts = []
        rx_system = "tn" if name == "tn" else "ntn"
        for g, p in zip(groups, powers):
            if g.system not in systems:
                continue
            if band == "own" and g.system != rx_system:
                # "own" bands are system-exclusive: NTN reserved/exclusive vs TN exclusive
                continue
            own, shared = _band_masks(scenario, g, sat_zone, comp_zone, user_shared)
            parts.append(p[shared if band == "shared" else own])
        return math.fsum(np.concatenate(parts)) if parts else 0.0

    # TN receiver
    tn_link, tn_desired, _, _ = rx["tn"]
    tn_band = "own" if scenario is ScenarioId.S3 else "shared"
    tn_cross = band_power("tn", tn_band, ("ntn",))
    tn_self = band_power("tn", tn_band, ("tn",))
    if tn_link is None:
        tn_sinr = tn_se = tn_se_clean = 0.0
        if not fw.tn_downlink:
            tn_cross = math.nan
    else:
        tn_sinr = tn_desired / (tn_self + tn_cross + noise)
        tn_se = math.log2(1.0 + tn_sinr)
        tn_se_clean = math.log2(1.0 + tn_desired / (tn_self + noise))

    se_own = np.zeros(k)
    se_shared = np.zeros(k)
    dist = np.full(k, math.nan)
    for j in range(k):
        name = f"ntn:{j}"
        link, desired, _, _ = rx[name]
        if link is None:
            continue
        dist[j] = link.distance_km
        se_own[j] = math.log2(1.0 + desired / (band_power(name, "own") + noise))
        if scenario is not ScenarioId.S3:
            se_shared[j] = math.log2(1.0 + desired / (band_power(name, "shared") + noise))

    if scenario is ScenarioId.S2:
        access, first = np.ones(k), np.zeros(k, dtype=np.int64)
        attempts = np.ones(k, dtype=np.int64)
    elif scenario is ScenarioId.S3:
        access, first = np.zeros(k), np.full(k, -1, dtype=np.int64)
        attempts = np.ones(k, dtype=np.int64)

    t, s, u = cfg.terrestrial, cfg.satellite, cfg.users
    return ReplicationRecord(
        index=index,
        n_bs=len(r.bs_positions),
        n_sat=r.satellite_count,
        n_visible=int(r.visible_from["ntn:0"].sum()),
        tn_served=tn_link is not None,
        tn_sinr=tn_sinr,
        tn_se=tn_se,
        tn_se_no_ntn=tn_se_clean,
        tn_cross_interference=tn_cross,
        tn_tx_power=dbm_to_watt(t.tx_power if fw.tn_downlink else t.uplink_power),
        ntn_served=r.ntn_servers >= 0,
        ntn_se_own=se_own,
        ntn_se_shared=se_shared,
        ntn_access=access,
        ntn_attempts=attempts,
        ntn_first_access=first,
        ntn_distance=dist,
        ntn_tx_power=dbm_to_watt(s.tx_power if fw.ntn_downlink else u.ntn_uplink_power),
        near_field_clamps=diag.near_field_clamps,
        digest=r.digest() if with_digest else "",
    )


def scenario_plan(cfg: ScenarioConfig) -> SpectrumPlan:
    """Bandwidth plan the configured scenario actually uses.

    S1 uses the swept reserved width; S2 uses ``spectrum.s2_reserved``
    (default 0, i.e. the whole band shared; ``follow`` tracks S1); S3 uses the
    fixed no-sharing split, read as NTN-exclusive / TN-exclusive.
    """
    sp = cfg.spectrum
    if cfg.scenario.id is ScenarioId.S1:
        return SpectrumPlan.split(sp.total, sp.reserved)
    if cfg.scenario.id is ScenarioId.S2:
        return SpectrumPlan.split(sp.total, cfg.s2_reserved)
    return SpectrumPlan.split(sp.total, sp.fixed_ntn)


def score_records(records, cfg: ScenarioConfig) -> dict:
    """Bandwidth-dependent metrics of many replications at once.

    Scalar metrics come back as ``(n,)`` arrays and per-user quantities as
    ``(n, k)`` arrays, row ``i`` belonging to ``records[i]``.
    """
    plan = scenario_plan(cfg)
    scenario = cfg.scenario.id
    b_own, b_shared = plan.reserved_ntn, plan.shared
    served = np.array([r.ntn_served for r in records], dtype=bool)
    a = np.array([r.ntn_access for r in records], dtype=float)
    se_own = np.array([r.ntn_se_own for r in records], dtype=float)
    se_shared = np.array([r.ntn_se_shared for r in records], dtype=float)
    attempts = np.array([r.ntn_attempts for r in records], dtype=np.int64)
    first = np.array([r.ntn_first_access for r in records], dtype=np.int64)
    dist = np.array([r.ntn_distance for r in records], dtype=float)
    tn_se = np.array([r.tn_se for r in records], dtype=float)
    tn_served = np.array([r.tn_served for r in records], dtype=bool)
    cross = np.array([r.tn_cross_interference for r in records], dtype=float)
    ntn_tx = np.array([r.ntn_tx_power for r in records], dtype=float)
    tn_tx = np.array([r.tn_tx_power for r in records], dtype=float)

    own_rate = avg_data_rate(se_own, b_own)
    shared_rate = avg_data_rate(se_shared, b_shared)
    if scenario is ScenarioId.S2:
        rates = own_rate + shared_rate
    else:
        rates = a * shared_rate + (1.0 - a) * own_rate
    rates = np.where(served, rates, 0.0)
    tn_rate = avg_data_rate(tn_se, b_shared)

    m = cfg.metrics
    waiting = np.zeros_like(served)
    if scenario is ScenarioId.S1 and b_own == 0 and cfg.policy.access == "dsa":
        # no reserved band to fall back on: wait for the first temporal hole
        waiting = first > 0
    eff_rate = np.where(waiting, shared_rate, rates)
    wait = np.where(waiting, first, 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        lat = (dist * 1e3 / SPEED_OF_LIGHT * 1e3 + m.packet_bytes * 8 / eff_rate * 1e3 + wait * m.slot_ms)
    outage = ~served | ~(eff_rate > 0)
    lat = np.where(outage, np.nan, lat)
    has_lat = ~np.all(outage, axis=1)
    with np.errstate(invalid="ignore"):
        mean_lat = np.where(has_lat, np.nansum(lat, axis=1) / np.maximum(1, (~outage).sum(axis=1)), np.nan)

    ntn_rate = rates.sum(axis=1) / rates.shape[1]
    power = ntn_tx * served.sum(axis=1) + np.where(tn_served, tn_tx, 0.0) + m.circuit_power
    thr = rates.sum(axis=1) + tn_rate
    with np.errstate(divide="ignore", invalid="ignore"):
        ee = np.where(power > 0, thr / power, np.nan)

    region_area = cfg.region.area
    ntn_cap = cfg.satellite.density * cfg.orbit_area * ntn_rate
    tn_cap = cfg.terrestrial.density * region_area * tn_rate
    # NTN links served per km^2 of ground: one per satellite, spread over the Earth
    ntn_ground_density = cfg.satellite.density * cfg.orbit_area / (4.0 * math.pi * EARTH_RADIUS_KM**2)
    region_rate = cfg.terrestrial.density * region_area * tn_rate + ntn_ground_density * region_area * ntn_rate

    return {
        "ntn_user_rate": ntn_rate,
        "tn_user_rate": tn_rate,
        "ntn_capacity": ntn_cap,
        "tn_capacity": tn_cap,
        "sum_capacity": ntn_cap + tn_cap,
        "ase": area_spectrum_efficiency(region_rate, region_area, plan.total),
        "interference_intensity": (interference_intensity(cross, b_shared) if b_shared > 0
                                   else np.full(len(records), math.nan)),
        "e2e_latency": mean_lat,
        "energy_efficiency": ee,
        "sap": a.mean(axis=1),
        "sap_successes": np.rint((a * attempts).sum(axis=1)).astype(np.int64),
        "sap_attempts": attempts.sum(axis=1),
        "latency_outages": outage.sum(axis=1),
        "ntn_rates": rates,
        "ntn_on_reserved": (a == 0) & served,
        "ntn_on_shared": (a == 1) & served,
    }


def score(rec: ReplicationRecord, cfg: ScenarioConfig) -> dict:
    """Bandwidth-dependent metrics of one replication."""
    out = {}
    for name, v in score_records([rec], cfg).items():
        v = v[0]
        out[name] = v if isinstance(v, np.ndarray) else v.item()
    return out


def _simulate_chunk(args):
    cfg, start, stop, with_digest = args
    return [simulate_replication(cfg, i, with_digest) for i in range(start, stop)]


def simulate_records(cfg: ScenarioConfig, workers: int = 1, with_digest: bool = False) -> list[ReplicationRecord]:
    n = cfg.run.replications
    if workers <= 1 or n < 2:
        return _simulate_chunk((cfg, 0, n, with_digest))
    chunks = max(workers * 4, 1)
    bounds = np.linspace(0, n, min(chunks, n) + 1).astype(int)
    tasks = [(cfg, int(a), int(b), with_digest) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(_simulate_chunk, tasks))
    return [rec for part in parts for rec in part]


def summarize(records: list[ReplicationRecord], cfg: ScenarioConfig) -> MetricsReport:
    """Aggregate records in index order; the result is independent of how they were produced."""
    records = sorted(records, key=lambda r: r.index)
    sc = score_records(records, cfg)
    ntn_cap, tn_cap = Estimate.of(sc["ntn_capacity"]), Estimate.of(sc["tn_capacity"])
    sum_cap = Estimate.of(sc["sum_capacity"])
    sum_cap = Estimate(ntn_cap.mean + tn_cap.mean, sum_cap.half_width, sum_cap.n)
    rates = sc["ntn_rates"].ravel()
    served = np.array([r.ntn_served for r in records], dtype=bool)
    return MetricsReport(
        ntn_user_rate=Estimate.of(sc["ntn_user_rate"]),
        tn_user_rate=Estimate.of(sc["tn_user_rate"]),
        ntn_capacity=ntn_cap,
        tn_capacity=tn_cap,
        sum_capacity=sum_cap,
        ase=Estimate.of(sc["ase"]),
        sap=Estimate.proportion(int(sc["sap_successes"].sum()), int(sc["sap_attempts"].sum())),
        interference_intensity=Estimate.of(sc["interference_intensity"]),
        e2e_latency=Estimate.of(sc["e2e_latency"]),
        energy_efficiency=Estimate.of(sc["energy_efficiency"]),
        replication_count=len(records),
        ntn_reserved_rate=Estimate.of(rates[sc["ntn_on_reserved"].ravel()]),
        ntn_shared_rate=Estimate.of(rates[sc["ntn_on_shared"].ravel()]),
        tn_outage=float(np.mean([not r.tn_served for r in records])),
        ntn_outage=float(1.0 - served.mean()),
        latency_outages=int(sc["latency_outages"].sum()),
        mean_bs_count=float(np.mean([r.n_bs for r in records])),
        mean_satellite_count=float(np.mean([r.n_sat for r in records])),
        mean_visible_count=float(np.mean([r.n_visible for r in records])),
        near_field_clamps=sum(r.near_field_clamps for r in records),
    )


def run(config: ScenarioConfig, workers: int = 1) -> MetricsReport:
    config.validate()
    return summarize(simulate_records(config, workers), config)


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple
    base: ScenarioConfig = field(default_factory=ScenarioConfig)

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ConfigError([f"sweep {self.parameter}: values must be nonempty"])
        diffs = np.diff(np.asarray(vals, dtype=float))
        if len(diffs) and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ConfigError([f"sweep {self.parameter}: values must be strictly monotone"])
        try:
            self.base.get(self.parameter)
        except KeyError as exc:
            raise ConfigError([str(exc.args[0])]) from None


def sweep(spec: SweepSpec, workers: int = 1) -> list[tuple[float, MetricsReport]]:
    """One run per value with common random numbers across values."""
    configs = [spec.base.with_values(**{spec.parameter: v}).validate() for v in spec.values]
    out = []
    cached = None
    for v, cfg in zip(spec.values, configs):
        if spec.parameter in SCORE_ONLY_KEYS and cached is not None:
            records = cached
        else:
            records = simulate_records(cfg, workers)
            cached = records
        out.append((v, summarize(records, cfg)))
    return out


_COMPARE_KEYS = ("terrestrial.density", "satellite.density", "satellite.altitude", "run.seed", "run.replications")


@dataclass(frozen=True)
class ComparisonRow:
    baseline: str
    other: str
    metric: str
    difference: Estimate  # other - baseline, paired by replication


@dataclass(frozen=True)
class ComparisonTable:
    labels: tuple
    reports: tuple
    rows: tuple

    def row(self, other: str, metric: str, baseline: str | None = None) -> ComparisonRow:
        baseline = baseline or self.labels[0]
        for r in self.rows:
            if r.other == other and r.metric == metric and r.baseline == baseline:
                return r
        raise KeyError((baseline, other, metric))


PAIRED_METRICS = ("ntn_user_rate", "tn_user_rate", "ntn_capacity", "tn_capacity", "sum_capacity", "ase", "sap",
                  "interference_intensity", "e2e_latency", "energy_efficiency")


def compare(configs, workers: int = 1) -> ComparisonTable:
    """Paired-seed differences of every metric against the first config (and each later one)."""
    configs = [c.validate() for c in configs]
    if not configs:
        raise InvalidComparisonError("compare needs at least one config")
    base = configs[0]
    for c in configs[1:]:
        bad = [k for k in _COMPARE_KEYS if c.get(k) != base.get(k)]
        if c.region != base.region:
            bad.append("region")
        if bad:
            raise InvalidComparisonError(f"configs differ in shared base fields: {', '.join(bad)}")
    labels, seen = [], {}
    for c in configs:
        tok = c.scenario.id.token
        seen[tok] = seen.get(tok, 0) + 1
        labels.append(tok if seen[tok] == 1 else f"{tok}#{seen[tok]}")
    per_cfg = []
    reports = []
    for c in configs:
        recs = sorted(simulate_records(c, workers), key=lambda r: r.index)
        per_cfg.append(score_records(recs, c))
        reports.append(summarize(recs, c))
    rows = []
    for i in range(len(configs)):
        for j in range(i + 1, len(configs)):
            for metric in PAIRED_METRICS:
                if metric == "ase":
                    continue
                a, b = per_cfg[i][metric], per_cfg[j][metric]
                rows.append(ComparisonRow(labels[i], labels[j], metric, Estimate.of(b - a)))
    return ComparisonTable(tuple(labels), tuple(reports), tuple(rows))
