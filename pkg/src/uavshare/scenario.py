"""Experiment description and result containers shared by both estimators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .channel import AntennaPattern, ChannelParams, LosModel
from .pointprocess import UAV_2D, UAV_3D, Deployment

OVERHEAD = "overhead"
EXPLICIT = "explicit"
HORIZONTAL = "horizontal"
X0_MODES = (OVERHEAD, EXPLICIT, HORIZONTAL)

# Gains of interfering UAVs toward a ground victim are divided by the boresight
# gain under "eirp" (P_u is the boresight EIRP) and used as-is under "conducted".
EIRP = "eirp"
CONDUCTED = "conducted"

ANALYTIC = "analytic"
MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class Scenario:
    """Everything needed to evaluate P1, P2 and the transmission capacity.

    ``x0_mode`` fixes the UAV user's serving link: ``overhead`` puts the
    serving UAV straight above the user, ``explicit`` uses the slant distance
    ``x0`` and ``horizontal`` places the serving UAV ``x0_offset`` metres away
    along the ground at the serving altitude.
    """

    channel: ChannelParams = field(default_factory=ChannelParams)
    los: LosModel = field(default_factory=LosModel)
    pattern: AntennaPattern = field(default_factory=AntennaPattern)
    ground_density: float = 1e-3
    uav_deployment: Deployment = field(default_factory=lambda: Deployment.uav2d(1e-4, 100.0))
    beta: float = 0.1
    d0: float = 10.0
    x0_mode: str = OVERHEAD
    x0: float | None = None
    x0_offset: float | None = None
    power_reference: str = EIRP

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.d0 <= 0:
            raise ValueError("d0 must be positive")
        if self.ground_density < 0:
            raise ValueError("ground density must be nonnegative")
        if self.uav_deployment.variant not in (UAV_2D, UAV_3D):
            raise ValueError("uav_deployment must be uav2d or uav3d")
        if self.x0_mode not in X0_MODES:
            raise ValueError(f"x0_mode must be one of {X0_MODES}")
        if self.x0_mode == EXPLICIT:
            if self.x0 is None or self.x0 < self.serving_altitude:
                raise ValueError("explicit x0 must be at least the serving altitude")
        if self.x0_mode == HORIZONTAL and (self.x0_offset is None or self.x0_offset < 0):
            raise ValueError("horizontal x0 mode needs a nonnegative x0_offset")
        if self.power_reference not in (EIRP, CONDUCTED):
            raise ValueError("power_reference must be 'eirp' or 'conducted'")

    @property
    def serving_altitude(self) -> float:
        return self.uav_deployment.base_altitude

    @property
    def serving_distance(self) -> float:
        """Slant distance x0 between the UAV user and its serving UAV."""
        h = self.serving_altitude
        if self.x0_mode == EXPLICIT:
            return self.x0
        if self.x0_mode == HORIZONTAL:
            return math.hypot(h, self.x0_offset)
        return h

    @property
    def serving_elevation_deg(self) -> float:
        ratio = min(1.0, self.serving_altitude / self.serving_distance)
        return math.degrees(math.asin(ratio))

    @property
    def uav_projected_density(self) -> float:
        return self.uav_deployment.projected_density

    @property
    def ground_gain_norm(self) -> float:
        """Divisor applied to interfering UAV gains seen by a ground victim."""
        if self.pattern.is_directional and self.power_reference == EIRP:
            return self.pattern.g0_linear
        return 1.0

    @property
    def serving_gain(self) -> float:
        """Linear gain of the serving beam, which is steered at its user."""
        return self.pattern.g0_linear

    def with_altitude(self, h: float) -> Scenario:
        """Copy with the (lowest) UAV altitude set to ``h``."""
        dep = self.uav_deployment
        if dep.variant == UAV_3D:
            dep = replace(dep, altitude_min=h)
        else:
            dep = replace(dep, altitude=h)
        return replace(self, uav_deployment=dep)

    def with_uav_density(self, density: float) -> Scenario:
        return replace(self, uav_deployment=replace(self.uav_deployment, density=density))


@dataclass(frozen=True)
class LaplaceFactor:
    """Laplace transform of an aggregate interference at one argument."""

    value: float
    kernel_id: str
    s_argument: float
    components: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"Laplace factor {self.value} outside [0, 1]")


@dataclass(frozen=True)
class CoverageEstimate:
    value: float
    stderr: float = 0.0
    n: int = 0
    method: str = ANALYTIC

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"coverage {self.value} outside [0, 1]")

    @classmethod
    def from_counts(cls, successes: int, n: int) -> CoverageEstimate:
        p = successes / n
        return cls(p, math.sqrt(p * (1.0 - p) / n), n, MONTE_CARLO)

    def agrees_with(self, other: CoverageEstimate, slack: float = 0.0, k: float = 3.0) -> bool:
        """True when the values differ by at most ``k`` combined standard errors plus ``slack``."""
        se = math.hypot(self.stderr, other.stderr)
        return abs(self.value - other.value) <= k * se + slack
