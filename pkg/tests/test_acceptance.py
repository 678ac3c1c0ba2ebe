"""Acceptance criteria 1-9.

Each test records a one-line verdict that the conftest prints in the
terminal summary, then asserts it.  The B_R sweep (10^4 replications, three
scenarios) is computed once and shared by criteria 3, 4 and 9.
"""

import math
import os
import time

import numpy as np
import pytest
from scipy import stats

from conftest import record
from helpers import hand_realization
from stinshare import cli, engine
from stinshare.config import ScenarioConfig, parse_config
from stinshare.engine import SweepSpec, compare, run, simulate_replication, sweep
from stinshare.geometry import EARTH_RADIUS_KM, Region, sample_planar_ppp, sample_sphere_ppp
from stinshare.policies import (
    AccessPolicyParams,
    calibrate_threshold,
    dsa_simulate,
    energy_detect,
    jsss_fuse,
    perfect_detector,
    sss_access,
)
from stinshare.spectrum import ScenarioId

pytestmark = pytest.mark.acceptance

WORKERS = min(4, os.cpu_count() or 1)
GRID = tuple(float(v) for v in range(0, 281, 20))
C = 299_792_458.0


def case_cfg(**kv) -> ScenarioConfig:
    return ScenarioConfig().with_values(**kv)


@pytest.fixture(scope="module")
def br_sweep():
    t0 = time.perf_counter()
    out = {}
    for sc in ScenarioId:
        base = case_cfg(**{"scenario.id": sc, "run.replications": 10_000})
        out[sc] = [rep for _, rep in sweep(SweepSpec("spectrum.reserved", GRID, base), workers=WORKERS)]
    return out, time.perf_counter() - t0


def test_c1_sap_void_probability():
    cfg = case_cfg(**{"run.replications": 100_000, "scenario.protection_radius": 10.0,
                       "spectrum.reserved": 120.0})
    t0 = time.perf_counter()
    rep = run(cfg, workers=WORKERS)
    elapsed = time.perf_counter() - t0
    oracle = math.exp(-3e-3 * math.pi * 10.0**2)
    err = abs(rep.sap.mean - oracle)
    ok = err <= 0.005 and elapsed <= 120.0
    record(1, ok, f"SAP={rep.sap.mean:.4f} vs exp(-lambda pi R^2)={oracle:.4f} (|err|={err:.4f} <= 0.005), "
                  f"1e5 reps in {elapsed:.1f}s on {WORKERS} worker(s) (<= 120s)")
    assert ok


def test_c2_scenario_degeneration():
    n = 2000
    problems = []
    # R_p = 0 against S2 on the same plan (both segment widths equal), per realization
    s1 = case_cfg(**{"scenario.protection_radius": 0.0, "run.replications": n})
    s2 = case_cfg(**{"scenario.id": ScenarioId.S2, "spectrum.s2_reserved": None, "run.replications": n})
    r1, r2 = engine.simulate_records(s1), engine.simulate_records(s2)
    k1, k2 = engine.score_records(r1, s1), engine.score_records(r2, s2)
    for a, b in zip(r1, r2):
        if a.tn_sinr != b.tn_sinr or not np.array_equal(a.ntn_se_shared, b.ntn_se_shared):
            problems.append(f"rep {a.index}: shared-band SINR differs")
    for m in ("tn_user_rate", "tn_capacity", "interference_intensity"):
        if not np.array_equal(k1[m], k2[m], equal_nan=True):
            problems.append(f"{m} differs")
    # and against the default fully shared S2 at B_R = 0, where the plans coincide
    s1_0 = s1.with_values(**{"spectrum.reserved": 0.0})
    s2_0 = case_cfg(**{"scenario.id": ScenarioId.S2, "run.replications": n})
    if engine.summarize(r1, s1_0).tn_user_rate != engine.summarize(r2, s2_0).tn_user_rate:
        problems.append("TN rate differs at B_R=0")

    # R_p = 300 km: every NTN link sits on the reserved band, TN sees no NTN power
    big = case_cfg(**{"scenario.protection_radius": 300.0, "run.replications": n})
    recs = engine.simulate_records(big)
    clean = sum(r.tn_se == r.tn_se_no_ntn for r in recs)
    zero_cross = sum(r.tn_cross_interference == 0.0 for r in recs)
    if clean != n or zero_cross != n:
        problems.append(f"R_p=300: {n - clean} reps differ from the no-NTN baseline")
    # independent baseline: TN SINR from BS positions alone
    t = big.terrestrial
    k = (C / (4 * math.pi * 2e9)) ** 2
    for i in range(200):
        rng = engine.child_rng(big.run.seed, i)
        rz = engine.build_realization(big, rng)
        if rz.tn_server < 0:
            continue
        d = np.hypot(rz.bs_positions[:, 0], rz.bs_positions[:, 1]) * 1e3
        pw = 10 ** ((t.tx_power - 30) / 10) * k * np.maximum(d, 1.0) ** -t.pathloss_exponent
        desired = pw[rz.tn_server] * 10 ** (t.bs_gain / 10)
        others = math.fsum(np.delete(pw * rz.bs_active, rz.tn_server))
        se = math.log2(1 + desired / (others + 1e-14))
        if not math.isclose(se, recs[i].tn_se, rel_tol=1e-12):
            problems.append(f"rep {i}: TN SE {recs[i].tn_se} vs baseline {se}")
            break
    ok = not problems
    record(2, ok, "R_p=0 matches S2 shared-band SINRs and TN metrics bit-for-bit; "
                  "R_p=300 km TN equals the no-NTN baseline" + ("" if ok else f" [{'; '.join(problems[:3])}]"))
    assert ok, problems


def _crossover(s1_tn, s2_tn):
    diff = np.asarray(s1_tn) - np.asarray(s2_tn)
    for i in range(1, len(diff)):
        if diff[i - 1] > 0 >= diff[i]:
            return GRID[i - 1] + (GRID[i] - GRID[i - 1]) * diff[i - 1] / (diff[i - 1] - diff[i])
    return None


def test_c3_capacity_orderings(br_sweep):
    res, _ = br_sweep
    s1, s2, s3 = res[ScenarioId.S1], res[ScenarioId.S2], res[ScenarioId.S3]
    a = all(x.sum_capacity.mean > y.sum_capacity.mean and x.ntn_capacity.mean > y.ntn_capacity.mean
            for x, y in zip(s2, s3))
    ntn = [r.ntn_capacity.mean for r in s1]
    tot = [r.sum_capacity.mean for r in s1]
    b = all(np.diff(ntn) >= 0) and all(np.diff(tot) >= 0)
    tn1 = [r.tn_capacity.mean for r in s1]
    tn2 = [r.tn_capacity.mean for r in s2]
    b_star = _crossover(tn1, tn2)
    first_above = tn1[0] > tn2[0]
    c = b_star is not None and first_above and 40.0 <= b_star <= 180.0
    ok = a and b and c
    record(3, ok, f"(a) S2>S3 sum & NTN capacity at all 15 points: {a}; "
                  f"(b) S1 sum & NTN capacity non-decreasing: {b}; "
                  f"(c) S1/S2 TN capacity crossover B_R*={b_star if b_star is None else round(b_star, 1)} MHz "
                  f"in [40, 180]: {c}")
    assert ok


def test_c4_rate_orderings(br_sweep):
    res, _ = br_sweep
    table = compare([case_cfg(**{"scenario.id": ScenarioId.S2, "run.replications": 10_000}),
                     case_cfg(**{"scenario.id": ScenarioId.S3, "run.replications": 10_000})], workers=WORKERS)
    # differences are S3 - S2
    ntn = table.row("S3", "ntn_user_rate", "S2").difference
    tn = table.row("S3", "tn_user_rate", "S2").difference
    paired = ntn.mean + ntn.half_width < 0 and tn.mean - tn.half_width > 0
    s1 = res[ScenarioId.S1]
    reserved = [r.ntn_reserved_rate.mean for r in s1]
    shared = [r.ntn_shared_rate.mean for r in s1]
    res_up = all(np.diff(reserved) > 0)
    sh_down = all(np.diff(shared) < 0)
    ok = paired and res_up and sh_down
    record(4, ok, f"S2-S3 NTN rate {-ntn.mean:.4g} +/- {ntn.half_width:.2g}, TN rate {-tn.mean:.4g} "
                  f"+/- {tn.half_width:.2g} (CIs exclude 0: {paired}); S1 reserved-band rate strictly up: {res_up}; "
                  f"shared-band rate strictly down: {sh_down}")
    assert ok


def _instances():
    rng = np.random.default_rng(2024)
    out = []
    for _ in range(10):
        n_bs = int(rng.integers(1, 4))
        n_sat = int(rng.integers(1, 6 - n_bs + 1))  # serving sat + others, at most 5 interferers in total
        bs = np.vstack([[rng.uniform(-8, 8), rng.uniform(-6, 6)], rng.uniform(-90, 90, size=(n_bs - 1, 2))])
        sats = np.vstack([[50.0, 0.0], rng.uniform(-400, 400, size=(n_sat - 1, 2))])
        out.append((bs, sats))
    return out


def _oracle(rz, cfg):
    """SINRs at the TN user and the NTN user for S2 DL/DL from first principles."""
    t, s = cfg.terrestrial, cfg.satellite
    k = (C / (4 * math.pi * 2e9)) ** 2

    def rx(p_dbm, g_db, d_km, alpha):
        return 10 ** ((p_dbm + g_db - 30) / 10) * k * max(d_km * 1e3, 1.0) ** -alpha

    def el_ok(g, sat):
        d = sat - g
        return float(np.dot(d, g / np.linalg.norm(g))) / float(np.linalg.norm(d)) >= math.sin(math.radians(10))

    sats = rz.satellite_positions
    u, uxyz = rz.ntn_users[0], rz.ntn_users_xyz[0]
    srv = rz.ntn_servers[0]
    terms = [rx(t.tx_power, t.interferer_gain, math.dist(b, u), t.pathloss_exponent) for b in rz.bs_positions]
    terms += [rx(s.tx_power, s.side_lobe_gain, float(np.linalg.norm(x - uxyz)), s.pathloss_exponent)
              for i, x in enumerate(sats) if i != srv and el_ok(uxyz, x)]
    ntn = rx(s.tx_power, s.main_lobe_gain, float(np.linalg.norm(sats[srv] - uxyz)), s.pathloss_exponent)
    ntn_sinr = ntn / (sum(sorted(terms)) + 1e-14)
    tn_sinr = None
    if rz.tn_server >= 0:
        txyz = rz.tn_user_xyz
        terms = [rx(t.tx_power, t.interferer_gain, math.dist(b, (0, 0)), t.pathloss_exponent)
                 for i, b in enumerate(rz.bs_positions) if i != rz.tn_server]
        terms += [rx(s.tx_power, s.side_lobe_gain, float(np.linalg.norm(x - txyz)), s.pathloss_exponent)
                  for x in sats if el_ok(txyz, x)]
        des = rx(t.tx_power, t.bs_gain, math.dist(rz.bs_positions[rz.tn_server], (0, 0)), t.pathloss_exponent)
        tn_sinr = des / (sum(sorted(terms)) + 1e-14)
    return ntn_sinr, tn_sinr


def test_c5_sinr_oracle(monkeypatch):
    cfg = case_cfg(**{"scenario.id": ScenarioId.S2, "run.replications": 1})
    worst = 0.0
    for bs, sats in _instances():
        rz = hand_realization(bs, sats, cfg=cfg)
        monkeypatch.setattr(engine, "build_realization", lambda c, rng, rz=rz: rz)
        rec = simulate_replication(cfg, 0)
        ntn_sinr, tn_sinr = _oracle(rz, cfg)
        se = math.log2(1 + ntn_sinr)
        worst = max(worst, abs(rec.ntn_se_shared[0] - se) / se)
        if tn_sinr is not None:
            worst = max(worst, abs(rec.tn_sinr - tn_sinr) / tn_sinr,
                        abs(rec.tn_se - math.log2(1 + tn_sinr)) / math.log2(1 + tn_sinr))
    ok = worst <= 1e-12
    record(5, ok, f"10 hand-built instances (<= 5 interferers): max relative SINR/SE error {worst:.2e} (<= 1e-12)")
    assert ok


def test_c6_point_process_statistics():
    rng = np.random.default_rng(6)
    region = Region()
    planar = np.array([len(sample_planar_ppp(3e-3, region, rng)) for _ in range(100_000)])
    radius = EARTH_RADIUS_KM + 500.0
    mean_sat = 1e-5 * 4 * math.pi * radius**2
    sphere_counts = []
    lat_sample = []
    for i in range(10_000):
        p = sample_sphere_ppp(1e-5, radius, rng)
        sphere_counts.append(len(p))
        if i < 20:
            lat_sample.append(np.arcsin(p[:, 2] / radius))
    lat = np.concatenate(lat_sample)
    ks = stats.kstest(np.sin(lat), "uniform", args=(-1, 2)).pvalue
    planar_err = abs(planar.mean() - 120.0) / 120.0
    sphere_err = abs(np.mean(sphere_counts) - mean_sat) / mean_sat
    ok = planar_err < 0.01 and sphere_err < 0.01 and ks > 0.01 and abs(mean_sat - 5933) / 5933 < 0.01
    record(6, ok, f"planar mean {planar.mean():.3f} vs 120 ({planar_err:.2%}); sphere mean "
                  f"{np.mean(sphere_counts):.1f} vs {mean_sat:.1f} ({sphere_err:.2%}, 1e4 draws); "
                  f"latitude KS p={ks:.3f} on {len(lat)} points (> 0.01)")
    assert ok


class _Fixed:
    """Stands in for a generator so both policies see the same uniform."""

    def __init__(self, u):
        self.u = u

    def uniform(self):
        return self.u


def test_c7_detector_calibration():
    rng = np.random.default_rng(7)
    noise = 1e-14
    # primary-inactive statistic: noise-only energy over 16 samples
    h0 = lambda n: noise * rng.gamma(16, 1 / 16, size=n)  # noqa: E731
    th = calibrate_threshold(h0(20_000), 0.10)
    fa = float(np.mean(h0(20_000) >= th))
    fa_ok = abs(fa - 0.10) <= 0.02

    activity = 0.35
    rec = dsa_simulate(100_000, activity, perfect_detector, rng)
    dsa_ok = abs(rec.access_probability - (1 - activity)) <= 0.005

    # identical traces: user and satellite statistics, both policies on the same draws
    params = AccessPolicyParams(p_high=0.9, p_low=0.2, threshold=th)
    user_stat = h0(20_000) + noise * rng.exponential(size=20_000) * (rng.uniform(size=20_000) < 0.4)
    sat_stat = h0(20_000) + noise * rng.exponential(size=20_000) * (rng.uniform(size=20_000) < 0.4)
    u = rng.uniform(size=20_000)
    sss = jsss = 0
    for i in range(20_000):
        ur = energy_detect(user_stat[i], 0.0, th)
        sr = energy_detect(sat_stat[i], 0.0, th)
        shared = _Fixed(u[i])
        sss += sss_access(ur, params, shared)
        jsss += jsss_fuse(sr, ur, params, shared)
    trace_ok = jsss <= sss
    engine_ok = True
    for i in range(300):
        a = simulate_replication(case_cfg(**{"policy.access": "sss", "run.replications": 1}), i)
        b = simulate_replication(case_cfg(**{"policy.access": "jsss", "run.replications": 1}), i)
        engine_ok &= bool(b.ntn_access[0] <= a.ntn_access[0])
    ok = fa_ok and dsa_ok and trace_ok and engine_ok
    record(7, ok, f"held-out false alarm {fa:.4f} (0.10 +/- 0.02); DSA perfect-detector SAP "
                  f"{rec.access_probability:.4f} vs {1 - activity:.2f} (+/- 0.005); JSSS {jsss / 2e4:.4f} <= "
                  f"SSS {sss / 2e4:.4f} on identical traces, and per replication in the engine: {engine_ok}")
    assert ok


def test_c8_parallel_invariance(tmp_path):
    outs = []
    for workers in (1, 8):
        out = tmp_path / f"sweep_{workers}.csv"
        code = cli.main(["sweep", "--set", "run.replications=1000", "--workers", str(workers), "--out", str(out)])
        assert code == 0
        outs.append(out.read_bytes())
    run_outs = []
    for workers in (1, 8):
        out = tmp_path / f"run_{workers}.csv"
        assert cli.main(["compare", "--set", "run.replications=2000", "--workers", str(workers),
                         "--out", str(out)]) == 0
        run_outs.append(out.read_bytes())
    ok = outs[0] == outs[1] and run_outs[0] == run_outs[1]
    record(8, ok, f"sweep CSV ({len(outs[0])} bytes, 45 rows) and compare CSV identical at 1 and 8 workers: {ok}")
    assert ok


def test_c9_performance(br_sweep):
    _, elapsed = br_sweep
    ok = elapsed < 600.0
    record(9, ok, f"3-scenario B_R sweep, 15 points x 1e4 replications: {elapsed:.1f}s on {WORKERS} "
                  f"worker(s) (< 600s)")
    assert ok


def test_config_defaults_match_case_study():
    # guard for every acceptance run above: the empty document is the case-study setup
    assert parse_config("") == ScenarioConfig()
