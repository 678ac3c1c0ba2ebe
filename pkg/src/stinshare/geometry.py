"""Point-process sampling and Earth/orbit geometry.

Collections of points are numpy arrays: planar points are ``(n, 2)`` arrays
in km (x east, y north, region-local frame) and points on a sphere are
``(n, 3)`` geocentric Cartesian arrays in km.  :class:`SpherePoint` is the
scalar lat/lon/radius view used at API boundaries.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

EARTH_RADIUS_KM = 6371.0


class InvalidParameterError(ValueError):
    """A parameter violates its documented precondition."""


class NoCandidateError(ValueError):
    """Nearest-point query over an empty candidate set."""


@dataclass(frozen=True)
class SpherePoint:
    latitude: float  # rad
    longitude: float  # rad
    radius: float = EARTH_RADIUS_KM  # km, geocentric

    def __post_init__(self):
        if abs(self.latitude) > math.pi / 2 + 1e-12:
            raise InvalidParameterError(f"latitude {self.latitude} outside [-pi/2, pi/2]")
        if self.radius <= 0:
            raise InvalidParameterError(f"radius must be positive, got {self.radius}")

    def xyz(self) -> np.ndarray:
        cl = math.cos(self.latitude)
        return np.array(
            [
                self.radius * cl * math.cos(self.longitude),
                self.radius * cl * math.sin(self.longitude),
                self.radius * math.sin(self.latitude),
            ]
        )

    @classmethod
    def from_xyz(cls, xyz) -> "SpherePoint":
        x, y, z = (float(v) for v in xyz)
        r = math.sqrt(x * x + y * y + z * z)
        lon = math.atan2(y, x)
        if lon >= math.pi:
            lon -= 2 * math.pi
        return cls(math.asin(max(-1.0, min(1.0, z / r))), lon, r)

    def lifted(self, altitude: float) -> "SpherePoint":
        return SpherePoint(self.latitude, self.longitude, self.radius + altitude)


def to_latlon(xyz: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised Cartesian -> (latitude rad, longitude rad, radius km)."""
    xyz = np.atleast_2d(xyz)
    r = np.linalg.norm(xyz, axis=1)
    lat = np.arcsin(np.clip(xyz[:, 2] / r, -1.0, 1.0))
    lon = np.arctan2(xyz[:, 1], xyz[:, 0])
    lon = np.where(lon >= math.pi, lon - 2 * math.pi, lon)
    return lat, lon, r


@functools.lru_cache(maxsize=64)
def _anchor_frame(anchor_lat: float, anchor_lon: float):
    lat = math.radians(anchor_lat)
    lon = math.radians(anchor_lon)
    up = np.array([math.cos(lat) * math.cos(lon), math.cos(lat) * math.sin(lon), math.sin(lat)])
    east = np.array([-math.sin(lon), math.cos(lon), 0.0])
    north = np.array([-math.sin(lat) * math.cos(lon), -math.sin(lat) * math.sin(lon), math.cos(lat)])
    for v in (up, east, north):
        v.flags.writeable = False
    return up, east, north


@dataclass(frozen=True)
class Region:
    """Rectangular planar area centred on a geodetic anchor (degrees)."""

    width: float = 200.0
    height: float = 200.0
    anchor_lat: float = 0.0
    anchor_lon: float = 0.0

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise InvalidParameterError(
                f"region width/height must be positive, got {self.width}x{self.height}"
            )

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def contains(self, points: np.ndarray) -> np.ndarray:
        p = np.atleast_2d(points)
        return (np.abs(p[:, 0]) <= self.width / 2) & (np.abs(p[:, 1]) <= self.height / 2)

    def frame(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Unit up/east/north vectors at the anchor (shared, do not mutate)."""
        return _anchor_frame(self.anchor_lat, self.anchor_lon)

    def to_sphere(self, points: np.ndarray, radius: float = EARTH_RADIUS_KM) -> np.ndarray:
        """Map planar points to the Earth surface via the local tangent plane."""
        p = np.atleast_2d(np.asarray(points, dtype=float))
        up, east, north = self.frame()
        q = radius * up + p[:, :1] * east + p[:, 1:2] * north
        return q * (radius / np.sqrt(np.einsum("ij,ij->i", q, q)))[:, None]


def sample_planar_ppp(density: float, region: Region, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous Poisson process on ``region``; returns an ``(n, 2)`` array in km."""
    if not density >= 0:
        raise InvalidParameterError(f"density must be >= 0, got {density}")
    n = rng.poisson(density * region.area)
    pts = rng.uniform(size=(n, 2))
    pts[:, 0] = (pts[:, 0] - 0.5) * region.width
    pts[:, 1] = (pts[:, 1] - 0.5) * region.height
    return pts


def sample_sphere_ppp(density: float, sphere_radius: float, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous Poisson process on a sphere; area-uniform directions."""
    if not density >= 0:
        raise InvalidParameterError(f"density must be >= 0, got {density}")
    if not sphere_radius > 0:
        raise InvalidParameterError(f"sphere radius must be positive, got {sphere_radius}")
    n = rng.poisson(density * 4.0 * math.pi * sphere_radius**2)
    v = rng.standard_normal(size=(n, 3))
    v *= (sphere_radius / np.sqrt(np.einsum("ij,ij->i", v, v)))[:, None]
    return v


def sample_sphere_cap_ppp(density: float, sphere_radius: float, axis, half_angle: float,
                          rng: np.random.Generator) -> np.ndarray:
    """Poisson process restricted to the cap within ``half_angle`` rad of ``axis``.

    By the restriction property this has the law of the full-sphere process
    seen through the cap.
    """
    if not density >= 0:
        raise InvalidParameterError(f"density must be >= 0, got {density}")
    if not sphere_radius > 0:
        raise InvalidParameterError(f"sphere radius must be positive, got {sphere_radius}")
    if not 0 <= half_angle <= math.pi:
        raise InvalidParameterError(f"cap half-angle must lie in [0, pi], got {half_angle}")
    cos_cap = math.cos(half_angle)
    n = rng.poisson(density * cap_area(sphere_radius, half_angle))
    u = rng.uniform(size=(n, 2))
    z = 1.0 - u[:, 0] * (1.0 - cos_cap)  # area-uniform in the cap
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = 2.0 * math.pi * u[:, 1]
    a, e1, e2 = _cap_basis(*(float(x) for x in axis))
    v = (rho * np.cos(phi))[:, None] * e1 + (rho * np.sin(phi))[:, None] * e2 + z[:, None] * a
    return sphere_radius * v


@functools.lru_cache(maxsize=64)
def _cap_basis(x: float, y: float, z: float):
    a = np.array([x, y, z])
    a = a / math.sqrt(float(a @ a))
    # any orthonormal pair perpendicular to the axis
    helper = np.array([1.0, 0.0, 0.0]) if abs(a[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = helper - (helper @ a) * a
    e1 /= math.sqrt(float(e1 @ e1))
    e2 = np.array([a[1] * e1[2] - a[2] * e1[1], a[2] * e1[0] - a[0] * e1[2], a[0] * e1[1] - a[1] * e1[0]])
    return a, e1, e2


def cap_area(sphere_radius: float, half_angle: float) -> float:
    return 2.0 * math.pi * sphere_radius**2 * (1.0 - math.cos(half_angle))


def visibility_half_angle(altitude: float, min_elevation: float, earth_radius: float = EARTH_RADIUS_KM) -> float:
    """Earth-central angle (rad) out to which a satellite is seen at ``min_elevation``."""
    e = math.radians(min_elevation)
    return math.acos(earth_radius * math.cos(e) / (earth_radius + altitude)) - e


def _xyz(p) -> np.ndarray:
    if isinstance(p, SpherePoint):
        return p.xyz()
    return np.asarray(p, dtype=float)


def slant_range(ground, sat):
    """Euclidean distance (km) between ground point(s) and satellite(s)."""
    d = np.linalg.norm(_xyz(sat) - _xyz(ground), axis=-1)
    return float(d) if np.ndim(d) == 0 else d


def elevation_angle(ground, sat):
    """Elevation (degrees) of ``sat`` above the local horizon at ``ground``."""
    g = _xyz(ground)
    d = _xyz(sat) - g
    up = g / np.linalg.norm(g, axis=-1, keepdims=True)
    rng_ = np.linalg.norm(d, axis=-1)
    s = np.sum(d * up, axis=-1) / rng_
    el = np.degrees(np.arcsin(np.clip(s, -1.0, 1.0)))
    return float(el) if np.ndim(el) == 0 else el


def visibility_mask(ground, sats: np.ndarray, min_elevation: float) -> np.ndarray:
    if not 0.0 <= min_elevation <= 90.0:
        raise InvalidParameterError(f"min_elevation must lie in [0, 90], got {min_elevation}")
    sats = np.asarray(sats, dtype=float).reshape(-1, 3)
    if len(sats) == 0:
        return np.zeros(0, dtype=bool)
    g = _xyz(ground).reshape(3)
    gn = math.sqrt(float(g @ g))
    # elevation >= e  <=>  d.up >= sin(e) |d|, with d = sat - ground
    height = sats @ (g / gn) - gn
    mask = height > 0.0 if min_elevation > 0 else height >= 0.0
    idx = np.flatnonzero(mask)
    d = sats[idx] - g
    rng_ = np.sqrt(np.einsum("ij,ij->i", d, d))
    mask[idx] = height[idx] >= math.sin(math.radians(min_elevation)) * rng_
    return mask


def visible_satellites(ground, sats: np.ndarray, min_elevation: float = 10.0) -> np.ndarray:
    """Satellites at or above ``min_elevation``, in input order."""
    sats = np.asarray(sats, dtype=float).reshape(-1, 3)
    return sats[visibility_mask(ground, sats, min_elevation)]


def nearest(candidates, target) -> tuple[int, float]:
    """Index and distance of the closest candidate; ties go to the lowest index."""
    c = np.asarray(candidates, dtype=float)
    if c.size == 0:
        raise NoCandidateError("nearest() needs at least one candidate")
    t = np.asarray(target, dtype=float)
    if c.ndim == 1:
        c = c.reshape(-1, t.size) if t.size > 1 else c.reshape(-1, 1)
    d = np.linalg.norm(c - t.reshape(1, -1), axis=1)
    i = int(np.argmin(d))  # argmin returns the first minimum
    return i, float(d[i])
