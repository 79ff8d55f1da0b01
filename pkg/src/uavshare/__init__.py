"""Coverage and transmission capacity of UAV/ground spectrum sharing.

Analytic Laplace-transform coverage probabilities for a Poisson field of
UAV transmitters sharing spectrum with a Poisson ground network, plus an
independent Monte Carlo simulator used to cross-check them.
"""

from .channel import (
    AntennaPattern,
    ChannelParams,
    LosModel,
    antenna_gain_linear,
    los_probability,
    received_power,
)
from .pointprocess import Deployment, PointSet, sample_disk_ppp, sample_slab_ppp
from .scenario import CoverageEstimate, LaplaceFactor, Scenario
from .analytic import (
    IntegrationError,
    ground_laplace_closed_form,
    integrate_semi_infinite,
    p1_coverage,
    p2_coverage,
    uav_laplace_2d,
    uav_laplace_3d,
)
from .montecarlo import McConfig, estimate_coverage, estimate_p1, estimate_p2, realize_interference
from .capacity import HeightSearchSpec, TcResult, optimize_height, transmission_capacity

__version__ = "0.1.0"

__all__ = [
    "AntennaPattern",
    "ChannelParams",
    "CoverageEstimate",
    "Deployment",
    "HeightSearchSpec",
    "IntegrationError",
    "LaplaceFactor",
    "LosModel",
    "McConfig",
    "PointSet",
    "Scenario",
    "TcResult",
    "antenna_gain_linear",
    "estimate_coverage",
    "estimate_p1",
    "estimate_p2",
    "ground_laplace_closed_form",
    "integrate_semi_infinite",
    "los_probability",
    "optimize_height",
    "p1_coverage",
    "p2_coverage",
    "realize_interference",
    "received_power",
    "sample_disk_ppp",
    "sample_slab_ppp",
    "transmission_capacity",
    "uav_laplace_2d",
    "uav_laplace_3d",
]
