"""Homogeneous Poisson point processes on a disk and on a cylindrical slab.

Every sampler is a pure function of its parameters and seed. Batch samplers
used by the Monte Carlo estimator return flattened per-point arrays together
with per-realization counts so that a block of realizations can be processed
with vectorised numpy code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

GROUND_2D = "ground2d"
UAV_2D = "uav2d"
UAV_3D = "uav3d"


@dataclass(frozen=True)
class Deployment:
    """Where a tier of transmitters lives and how dense it is.

    ``density`` is per m^2 for the planar variants and per m^3 for ``uav3d``.
    """

    variant: str = UAV_2D
    density: float = 1e-4
    altitude: float | None = None
    altitude_min: float | None = None
    vertical_range: float | None = None

    def __post_init__(self):
        if self.density < 0:
            raise ValueError("density must be nonnegative")
        if self.variant == GROUND_2D:
            pass
        elif self.variant == UAV_2D:
            if self.altitude is None or self.altitude <= 0:
                raise ValueError("uav2d deployment needs a positive altitude")
        elif self.variant == UAV_3D:
            if self.altitude_min is None or self.altitude_min <= 0:
                raise ValueError("uav3d deployment needs a positive altitude_min")
            if self.vertical_range is None or self.vertical_range < 0:
                raise ValueError("uav3d deployment needs a nonnegative vertical_range")
        else:
            raise ValueError(f"unknown deployment variant {self.variant!r}")

    @classmethod
    def ground(cls, density: float) -> Deployment:
        return cls(GROUND_2D, density)

    @classmethod
    def uav2d(cls, density: float, altitude: float) -> Deployment:
        return cls(UAV_2D, density, altitude=altitude)

    @classmethod
    def uav3d(cls, density: float, altitude_min: float, vertical_range: float) -> Deployment:
        return cls(UAV_3D, density, altitude_min=altitude_min, vertical_range=vertical_range)

    @property
    def is_3d(self) -> bool:
        return self.variant == UAV_3D

    @property
    def base_altitude(self) -> float:
        """Lowest transmitter altitude (0 for the ground tier)."""
        if self.variant == UAV_2D:
            return self.altitude
        if self.variant == UAV_3D:
            return self.altitude_min
        return 0.0

    @property
    def projected_density(self) -> float:
        """Transmitters per m^2 of ground area."""
        if self.variant == UAV_3D:
            return self.density * self.vertical_range
        return self.density

    def mean_count(self, radius: float) -> float:
        return self.projected_density * math.pi * radius * radius


@dataclass
class PointSet:
    """One realization: an ``(n, 3)`` array of x, y, z coordinates in metres."""

    points: np.ndarray = field(default_factory=lambda: np.empty((0, 3)))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def horizontal_distance(self) -> np.ndarray:
        return np.hypot(self.points[:, 0], self.points[:, 1])

    @property
    def z(self) -> np.ndarray:
        return self.points[:, 2]


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def block_rng(master_seed: int, block: int) -> np.random.Generator:
    """Generator for work unit ``block`` derived from ``master_seed``.

    The stream depends only on the pair, never on execution order.
    """
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(block,)))


def _disk_xy(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.random(n))
    phi = rng.uniform(0.0, 2.0 * math.pi, n)
    return np.column_stack((r * np.cos(phi), r * np.sin(phi)))


def sample_disk_ppp(density: float, radius: float, z: float = 0.0, seed=None) -> PointSet:
    """PPP of intensity ``density`` (per m^2) on a disk of ``radius`` at height ``z``."""
    if density < 0:
        raise ValueError("density must be nonnegative")
    if radius <= 0:
        raise ValueError("radius must be positive")
    rng = _rng(seed)
    n = rng.poisson(density * math.pi * radius * radius)
    xy = _disk_xy(rng, n, radius)
    return PointSet(np.column_stack((xy, np.full(n, float(z)))))


def sample_slab_ppp(density: float, radius: float, h1: float, dh: float, seed=None) -> PointSet:
    """PPP of intensity ``density`` (per m^3) in the cylinder ``r <= radius``, ``h1 <= z <= h1 + dh``.

    ``dh == 0`` degenerates to the plane ``z = h1``; the slab then has zero
    volume, so a finite volumetric density yields no points.
    """
    if density < 0:
        raise ValueError("density must be nonnegative")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if dh < 0:
        raise ValueError("vertical range must be nonnegative")
    rng = _rng(seed)
    n = rng.poisson(density * math.pi * radius * radius * dh)
    xy = _disk_xy(rng, n, radius)
    z = h1 + dh * rng.random(n)
    return PointSet(np.column_stack((xy, z)))


def sample_deployment(dep: Deployment, radius: float, seed=None) -> PointSet:
    if dep.variant == UAV_3D:
        return sample_slab_ppp(dep.density, radius, dep.altitude_min, dep.vertical_range, seed)
    return sample_disk_ppp(dep.density, radius, dep.base_altitude, seed)


def sample_radial_batch(
    dep: Deployment, radius: float, n_realizations: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Horizontal distances and heights of ``n_realizations`` independent realizations.

    Returns ``(counts, r, z)`` where ``r`` and ``z`` are flat arrays holding the
    points of realization ``k`` at ``sum(counts[:k]) : sum(counts[:k+1])``.
    Only distances to the disk centre are drawn; azimuths do not affect a
    victim at the centre.
    """
    counts = rng.poisson(dep.mean_count(radius), n_realizations)
    n = int(counts.sum())
    r = radius * np.sqrt(rng.random(n))
    if dep.variant == UAV_3D:
        z = dep.altitude_min + dep.vertical_range * rng.random(n)
    else:
        z = np.full(n, dep.base_altitude)
    return counts, r, z
