"""Hand-built network snapshots for oracle tests."""

import math

import numpy as np

from stinshare.config import ScenarioConfig
from stinshare.deployment import NetworkRealization
from stinshare.geometry import EARTH_RADIUS_KM, visibility_mask

CFG = ScenarioConfig()


def hand_realization(bs, sats_above, active=None, ntn_user=(50.0, 0.0), cfg=CFG, companions=None):
    """Realization with BSs at planar ``bs`` and satellites directly above planar points."""
    region = cfg.region
    bs = np.asarray(bs, dtype=float).reshape(-1, 2)
    above = np.asarray(sats_above, dtype=float).reshape(-1, 2)
    orbit = EARTH_RADIUS_KM + cfg.satellite.altitude
    sats = region.to_sphere(above, radius=orbit) if len(above) else np.zeros((0, 3))
    active = np.ones(len(bs), bool) if active is None else np.asarray(active, bool)
    tn_user = np.zeros(2)
    tn_xyz = region.to_sphere(tn_user)[0]
    bs_xyz = region.to_sphere(bs) if len(bs) else np.zeros((0, 3))
    d = np.where(active, np.hypot(bs[:, 0], bs[:, 1]), np.inf) if len(bs) else np.zeros(0)
    srv = int(np.argmin(d)) if len(bs) and d.min() <= cfg.terrestrial.service_radius else -1
    ul = bs + np.array([1.0, 0.0]) if len(bs) else np.zeros((0, 2))
    if srv >= 0:
        ul[srv] = tn_user
    ntn = np.asarray(ntn_user, float).reshape(1, 2)
    ntn_xyz = region.to_sphere(ntn)
    vis = {"tn": visibility_mask(tn_xyz, sats, 10.0), "ntn:0": visibility_mask(ntn_xyz[0], sats, 10.0)}
    if srv >= 0:
        vis["bs"] = visibility_mask(bs_xyz[srv], sats, 10.0)
    servers = np.array([-1])
    if vis["ntn:0"].any():
        dd = np.where(vis["ntn:0"], np.linalg.norm(sats - ntn_xyz[0], axis=1), np.inf)
        servers[0] = int(np.argmin(dd))
    regional = np.zeros(len(sats), bool)
    for v in vis.values():
        regional |= v
    comp = above.copy() if companions is None else np.asarray(companions, float)
    return NetworkRealization(region, bs, bs_xyz, active, sats, len(sats), tn_user, tn_xyz, srv,
                              float(d[srv]) if srv >= 0 else math.inf, ntn, ntn_xyz, servers, comp, ul,
                              regional, vis)
