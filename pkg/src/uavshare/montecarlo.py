"""Monte Carlo estimator of P1 and P2 by direct simulation of the point fields.

Each realization draws a ground-transmitter field, a UAV field, per-link
Rayleigh fading (exponential power gains) and, for P2, the LoS state of the
serving link, then checks the SINR condition. Realizations are processed in
fixed-size blocks whose random streams derive from ``(master_seed, block)``,
so the estimate is bit-identical for any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import antenna_gain_linear, los_probability
from .pointprocess import Deployment, PointSet, block_rng, sample_radial_batch
from .scenario import CoverageEstimate, Scenario

PAPER_PRODUCT = "paper_product"
BERNOULLI_MIXTURE = "bernoulli_mixture"
INTERFERENCE_MODELS = (PAPER_PRODUCT, BERNOULLI_MIXTURE)

GROUND = "ground"
UAV = "uav"

# Largest Laplace-exponent error tolerated from truncating the ground field.
GROUND_TAIL_TOL = 1e-5


@dataclass(frozen=True)
class McConfig:
    """Simulation controls.

    ``paper_product`` gives every UAV an independent LoS-weighted and an
    NLoS-weighted term (two superposed fields, the structure the analytic
    product of transforms describes); ``bernoulli_mixture`` draws one LoS
    state per UAV. ``ground_radius`` defaults to the smallest radius whose
    truncated ground-field tail changes the Laplace exponent by less than
    ``GROUND_TAIL_TOL``, capped at ``truncation_radius``.
    """

    n_realizations: int = 100_000
    truncation_radius: float = 10_000.0
    master_seed: int = 0
    interference_model: str = PAPER_PRODUCT
    ground_radius: float | None = None
    block_size: int = 32
    workers: int = 1

    def __post_init__(self):
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be at least 1")
        if self.truncation_radius <= 0:
            raise ValueError("truncation_radius must be positive")
        if self.interference_model not in INTERFERENCE_MODELS:
            raise ValueError(f"interference_model must be one of {INTERFERENCE_MODELS}")
        if self.ground_radius is not None and self.ground_radius <= 0:
            raise ValueError("ground_radius must be positive")
        if self.block_size < 1 or self.workers < 1:
            raise ValueError("block_size and workers must be positive")


def ground_truncation_radius(scenario: Scenario, mc: McConfig) -> float:
    if mc.ground_radius is not None:
        return mc.ground_radius
    ch = scenario.channel
    a = ch.alpha_ground
    # 1 - 1/(1+x) <= x bounds the exponent lost beyond R by 2 pi lam beta d0^a R^(2-a) / (a-2)
    c = 2.0 * math.pi * scenario.ground_density * scenario.beta * scenario.d0**a / (a - 2.0)
    if c == 0:
        return mc.truncation_radius
    r = (c / GROUND_TAIL_TOL) ** (1.0 / (a - 2.0))
    return min(mc.truncation_radius, max(r, 10.0 * scenario.d0))


def _uav_link_terms(r, dz, scenario: Scenario, gain_norm: float):
    """Mean received power (fading excluded) and LoS probability of UAV links."""
    ch = scenario.channel
    d2 = r * r + dz * dz
    base = ch.p_uav * d2 ** (-ch.alpha_uav / 2.0)
    if scenario.pattern.is_directional:
        off_axis = np.degrees(np.arctan2(r, dz))
        base = base * antenna_gain_linear(scenario.pattern, off_axis) / gain_norm
    p_los = los_probability(scenario.los, np.degrees(np.arctan2(dz, r)))
    return base, p_los


def _uav_powers(base, p_los, eta, model, rng, n):
    if model == PAPER_PRODUCT:
        g_los = rng.standard_exponential(n)
        g_nlos = rng.standard_exponential(n)
        return base * (p_los * g_los + eta * (1.0 - p_los) * g_nlos)
    is_los = rng.random(n) < p_los
    g = rng.standard_exponential(n)
    return base * np.where(is_los, 1.0, eta) * g


def realize_interference(
    points: PointSet,
    victim,
    scenario: Scenario,
    model: str = PAPER_PRODUCT,
    *,
    tier: str = UAV,
    gain_norm: float = 1.0,
    rng=None,
    fading=None,
) -> float:
    """Aggregate interference power (W) at ``victim`` from one realization.

    ``tier='ground'`` treats the points as ground transmitters (power
    ``p_ground``, exponent ``alpha_ground``, no LoS model). ``fading`` may
    pin the exponential gains: shape ``(n,)`` for the ground tier and the
    Bernoulli model, ``(n, 2)`` (LoS term, NLoS term) for ``paper_product``.
    """
    if len(points) == 0:
        return 0.0
    rng = np.random.default_rng(rng)
    vx, vy, vz = victim
    r = np.hypot(points.points[:, 0] - vx, points.points[:, 1] - vy)
    dz = points.points[:, 2] - vz
    n = len(points)
    ch = scenario.channel
    if tier == GROUND:
        d = np.hypot(r, dz)
        g = rng.standard_exponential(n) if fading is None else np.asarray(fading, float)
        return float(np.sum(ch.p_ground * d ** (-ch.alpha_ground) * g))
    if tier != UAV:
        raise ValueError(f"unknown tier {tier!r}")
    base, p_los = _uav_link_terms(r, dz, scenario, gain_norm)
    if fading is None:
        return float(np.sum(_uav_powers(base, p_los, ch.eta, model, rng, n)))
    g = np.asarray(fading, float)
    if model == PAPER_PRODUCT:
        return float(np.sum(base * (p_los * g[:, 0] + ch.eta * (1.0 - p_los) * g[:, 1])))
    is_los = rng.random(n) < p_los
    return float(np.sum(base * np.where(is_los, 1.0, ch.eta) * g))


def _field_sum(counts, values, n_real):
    idx = np.repeat(np.arange(n_real), counts)
    return np.bincount(idx, weights=values, minlength=n_real)


def _run_block(args) -> tuple[int, int]:
    scenario, mc, block = args
    start = block * mc.block_size
    nb = min(mc.block_size, mc.n_realizations - start)
    rng = block_rng(mc.master_seed, block)
    ch = scenario.channel

    ground = Deployment.ground(scenario.ground_density)
    counts, r, _ = sample_radial_batch(ground, ground_truncation_radius(scenario, mc), nb, rng)
    g = rng.standard_exponential(r.size)
    with np.errstate(divide="ignore"):
        i_ground = _field_sum(counts, ch.p_ground * r ** (-ch.alpha_ground) * g, nb)

    gain_norm = scenario.ground_gain_norm
    counts, r, z = sample_radial_batch(scenario.uav_deployment, mc.truncation_radius, nb, rng)
    base, p_los = _uav_link_terms(r, z, scenario, gain_norm)
    powers = _uav_powers(base, p_los, ch.eta, mc.interference_model, rng, r.size)
    i_uav = _field_sum(counts, powers, nb)

    # ground user: serving transmitter at fixed distance d0
    g0 = rng.standard_exponential(nb)
    signal1 = ch.p_ground * scenario.d0 ** (-ch.alpha_ground) * g0
    ok1 = signal1 > scenario.beta * (i_ground + i_uav + ch.noise)

    # UAV user: serving UAV excluded from the field, LoS state drawn per realization
    x0 = scenario.serving_distance
    p0 = los_probability(scenario.los, scenario.serving_elevation_deg)
    los0 = rng.random(nb) < p0
    g0 = rng.standard_exponential(nb)
    serving_gain = scenario.serving_gain / gain_norm
    signal2 = ch.p_uav * serving_gain * x0 ** (-ch.alpha_uav) * np.where(los0, 1.0, ch.eta) * g0
    ok2 = signal2 > scenario.beta * i_uav
    return int(ok1.sum()), int(ok2.sum())


def _success_counts(scenario: Scenario, mc: McConfig) -> tuple[int, int]:
    n_blocks = -(-mc.n_realizations // mc.block_size)
    tasks = [(scenario, mc, b) for b in range(n_blocks)]
    if mc.workers == 1:
        results = map(_run_block, tasks)
        return tuple(int(v) for v in np.sum(list(results), axis=0))
    with ProcessPoolExecutor(max_workers=mc.workers) as pool:
        results = list(pool.map(_run_block, tasks, chunksize=max(1, n_blocks // (4 * mc.workers))))
    return tuple(int(v) for v in np.sum(results, axis=0))


def estimate_coverage(scenario: Scenario, mc: McConfig) -> tuple[CoverageEstimate, CoverageEstimate]:
    """P1 and P2 estimated from the same simulated interference fields."""
    s1, s2 = _success_counts(scenario, mc)
    n = mc.n_realizations
    return CoverageEstimate.from_counts(s1, n), CoverageEstimate.from_counts(s2, n)


def estimate_p1(scenario: Scenario, mc: McConfig) -> CoverageEstimate:
    return estimate_coverage(scenario, mc)[0]


def estimate_p2(scenario: Scenario, mc: McConfig) -> CoverageEstimate:
    return estimate_coverage(scenario, mc)[1]
