"""Propagation primitives: path loss, LoS probability and antenna gain.

All functions accept scalars or numpy arrays. Angles are in degrees at the
API surface; gains returned by :func:`antenna_gain_linear` are linear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

OMNI = "omni"
DIRECTIONAL = "directional"

# Half-power beamwidth must keep the main lobe half-angle (1.3 * theta_3db) below 180 deg.
MAX_THETA_3DB = 180.0 / 1.3


@dataclass(frozen=True)
class ChannelParams:
    """Transmit powers (W), path-loss exponents, NLoS attenuation and noise (W)."""

    p_uav: float = 5.0
    p_ground: float = 0.1
    alpha_uav: float = 3.0
    alpha_ground: float = 4.0
    eta: float = 1e-3
    noise: float = 1e-9

    def __post_init__(self):
        if self.p_uav <= 0 or self.p_ground <= 0:
            raise ValueError("transmit powers must be positive")
        if self.noise < 0:
            raise ValueError("noise power must be nonnegative")
        if self.alpha_uav <= 2 or self.alpha_ground <= 2:
            raise ValueError("path-loss exponents must exceed 2")
        if not 0 < self.eta <= 1:
            raise ValueError("eta must lie in (0, 1]")


@dataclass(frozen=True)
class LosModel:
    """Environment constants of the logistic elevation-angle LoS model."""

    b: float = 0.136
    c: float = 11.95

    def __post_init__(self):
        if self.b <= 0 or self.c <= 0:
            raise ValueError("LoS model constants must be positive")


@dataclass(frozen=True)
class AntennaPattern:
    variant: str = OMNI
    theta_3db: float | None = None

    def __post_init__(self):
        if self.variant == OMNI:
            if self.theta_3db is not None:
                raise ValueError("omnidirectional pattern takes no beamwidth")
        elif self.variant == DIRECTIONAL:
            if self.theta_3db is None or not 0 < self.theta_3db < MAX_THETA_3DB:
                raise ValueError(
                    f"directional beamwidth must lie in (0, {MAX_THETA_3DB:.2f}) degrees"
                )
        else:
            raise ValueError(f"unknown antenna variant {self.variant!r}")

    @classmethod
    def omni(cls) -> AntennaPattern:
        return cls(OMNI)

    @classmethod
    def directional(cls, theta_3db: float) -> AntennaPattern:
        return cls(DIRECTIONAL, float(theta_3db))

    @property
    def is_directional(self) -> bool:
        return self.variant == DIRECTIONAL

    @property
    def g0_db(self) -> float:
        """Boresight gain in dB (0 for the omnidirectional pattern)."""
        if not self.is_directional:
            return 0.0
        return 10.0 * math.log10((1.6162 / math.sin(math.radians(self.theta_3db) / 2)) ** 2)

    @property
    def theta_ml_deg(self) -> float:
        """Full main-lobe width in degrees."""
        if not self.is_directional:
            return 360.0
        return 2.6 * self.theta_3db

    @property
    def gsl_db(self) -> float:
        """Side-lobe gain in dB."""
        if not self.is_directional:
            return 0.0
        return -0.4111 * math.log(self.theta_3db) - 10.597

    @property
    def g0_linear(self) -> float:
        return 10.0 ** (self.g0_db / 10.0)

    @property
    def main_lobe_edge_deg(self) -> float:
        """Off-axis angle where the pattern switches to the side-lobe constant."""
        return self.theta_ml_deg / 2


def _as_output(values, like):
    if np.ndim(like) == 0:
        return float(values)
    return values


def los_probability(model: LosModel, theta_deg):
    """Probability that an air-to-ground link at elevation ``theta_deg`` is LoS."""
    if isinstance(theta_deg, (float, int)):
        if not 0 <= theta_deg <= 90:
            raise ValueError("elevation angle must lie in [0, 90] degrees")
        return 1.0 / (1.0 + model.c * math.exp(-model.b * (theta_deg - model.c)))
    theta = np.asarray(theta_deg, dtype=float)
    if np.any(theta < 0) or np.any(theta > 90) or np.any(np.isnan(theta)):
        raise ValueError("elevation angle must lie in [0, 90] degrees")
    p = 1.0 / (1.0 + model.c * np.exp(-model.b * (theta - model.c)))
    return _as_output(p, theta_deg)


def elevation_deg(height, horizontal):
    """Elevation angle in degrees of a link rising ``height`` over ``horizontal`` metres."""
    return np.degrees(np.arctan2(height, horizontal))


def received_power(params: ChannelParams, distance, los, fading_gain):
    """Received UAV power in watts; NLoS links are scaled by ``params.eta``."""
    d = np.asarray(distance, dtype=float)
    g = np.asarray(fading_gain, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    if np.any(g < 0):
        raise ValueError("fading gain must be nonnegative")
    scale = np.where(np.asarray(los, dtype=bool), 1.0, params.eta)
    p = scale * params.p_uav * d ** (-params.alpha_uav) * g
    return _as_output(p, p)


def antenna_gain_linear(pattern: AntennaPattern, off_axis_deg):
    """Linear antenna gain at ``off_axis_deg`` degrees from boresight."""
    if isinstance(off_axis_deg, (float, int)):
        if not 0 <= off_axis_deg <= 180:
            raise ValueError("off-axis angle must lie in [0, 180] degrees")
        if not pattern.is_directional:
            return 1.0
        if off_axis_deg <= pattern.main_lobe_edge_deg:
            gain_db = pattern.g0_db - 3.01 * (2.0 * off_axis_deg / pattern.theta_3db) ** 2
        else:
            gain_db = pattern.gsl_db
        return 10.0 ** (gain_db / 10.0)
    a = np.asarray(off_axis_deg, dtype=float)
    if np.any(a < 0) or np.any(a > 180) or np.any(np.isnan(a)):
        raise ValueError("off-axis angle must lie in [0, 180] degrees")
    if not pattern.is_directional:
        return _as_output(np.ones_like(a), off_axis_deg)
    main = pattern.g0_db - 3.01 * (2.0 * a / pattern.theta_3db) ** 2
    gain_db = np.where(a <= pattern.main_lobe_edge_deg, main, pattern.gsl_db)
    return _as_output(10.0 ** (gain_db / 10.0), off_axis_deg)
