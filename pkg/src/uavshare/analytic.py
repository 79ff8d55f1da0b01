"""Analytic coverage probabilities via Laplace transforms of interference.

With unit-mean exponential fading on the desired link, coverage reduces to a
product of Laplace transforms of the aggregate interference. The ground tier
has a closed form; the UAV tier is a radial integral (a double integral over
radius and altitude for the slab deployment) evaluated by adaptive
quadrature.
"""

from __future__ import annotations

import math
import warnings
from typing import Callable

import numpy as np
from scipy import integrate

from .channel import AntennaPattern, ChannelParams, LosModel, antenna_gain_linear, los_probability
from .scenario import ANALYTIC, CoverageEstimate, LaplaceFactor, Scenario

DEFAULT_REL_TOL = 1e-8
# Relative size of the power-law tail allowed beyond the quadrature cut-off.
TAIL_REL_TOL = 1e-10


class IntegrationError(RuntimeError):
    """Quadrature did not reach the requested accuracy."""


def _quad(f, a, b, rel_tol):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(f, a, b, epsabs=0.0, epsrel=rel_tol, limit=200)
    if not math.isfinite(val) or err > max(10 * rel_tol * abs(val), 1e-300):
        raise IntegrationError(
            f"quadrature on [{a:g}, {b:g}] reached error {err:.3g} for value {val:.6g}"
        )
    return val


def integrate_semi_infinite(
    kernel: Callable[[float], float],
    rel_tol: float = DEFAULT_REL_TOL,
    *,
    scale: float = 1.0,
    breakpoints=(),
    max_doublings: int = 80,
) -> float:
    """Integrate a nonnegative ``kernel`` over ``[0, inf)``.

    The range is cut into ``[0, scale]`` (split at ``breakpoints``) followed
    by geometric panels ``[scale 2^k, scale 2^(k+1)]``. Doubling stops once
    the power-law tail estimated from the last panel falls below
    ``TAIL_REL_TOL`` of the running total; that tail estimate is then added.

    Raises :class:`IntegrationError` if a panel misses ``rel_tol`` or the
    kernel does not decay faster than ``1/r``.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    edges = sorted({0.0, float(scale), *(float(b) for b in breakpoints if 0 < b < scale)})
    total = sum(_quad(kernel, a, b, rel_tol) for a, b in zip(edges[:-1], edges[1:]))
    # further breakpoints beyond scale become panel edges too
    extra = sorted(float(b) for b in breakpoints if b > scale)

    a = float(scale)
    for _ in range(max_doublings):
        b = 2.0 * a
        while extra and extra[0] <= a:
            extra.pop(0)
        cuts = [a] + [e for e in extra if a < e < b] + [b]
        total += sum(_quad(kernel, lo, hi, rel_tol) for lo, hi in zip(cuts[:-1], cuts[1:]))
        kb, k2b = kernel(b), kernel(2.0 * b)
        if kb == 0.0:
            return total
        if k2b > 0.0:
            p = math.log(kb / k2b) / math.log(2.0)
            if p > 1.0:
                tail = kb * b / (p - 1.0)
                if tail <= TAIL_REL_TOL * total:
                    return total + tail
        a = b
    raise IntegrationError("kernel tail did not decay below tolerance; is the path-loss exponent > 2?")


def ground_laplace_closed_form(lambda_d: float, beta: float, d0: float, alpha_d: float) -> LaplaceFactor:
    """Laplace transform of ground-tier interference at ``beta d0^alpha_d / P_d``."""
    if alpha_d <= 2:
        raise ValueError("alpha_d must exceed 2")
    if lambda_d < 0 or beta < 0 or d0 <= 0:
        raise ValueError("invalid ground-tier parameters")
    exponent = (
        2.0 * lambda_d * math.pi**2 * beta ** (2.0 / alpha_d) * d0**2
        / (alpha_d * math.sin(2.0 * math.pi / alpha_d))
    )
    return LaplaceFactor(math.exp(-exponent), "ground/closed-form", beta * d0**alpha_d)


def ground_laplace_quadrature(
    lambda_d: float, beta: float, d0: float, alpha_d: float, rel_tol: float = DEFAULT_REL_TOL
) -> LaplaceFactor:
    """Same transform as :func:`ground_laplace_closed_form`, by direct radial quadrature."""
    if alpha_d <= 2:
        raise ValueError("alpha_d must exceed 2")
    c = beta * d0**alpha_d
    if lambda_d == 0 or c == 0:
        return LaplaceFactor(1.0, "ground/quadrature", c)

    def kernel(r):
        if r == 0.0:
            return 0.0
        x = c * r ** (-alpha_d)
        return r * x / (1.0 + x)

    h = integrate_semi_infinite(kernel, rel_tol, scale=d0 * beta ** (1.0 / alpha_d))
    return LaplaceFactor(math.exp(-2.0 * math.pi * lambda_d * h), "ground/quadrature", c)


def _radial_kernels(s_eff, z, pattern, gain_norm, channel, los):
    alpha = channel.alpha_uav
    eta = channel.eta
    directional = pattern.is_directional

    def weight(r):
        d2 = r * r + z * z
        base = s_eff * d2 ** (-alpha / 2.0)
        theta = math.degrees(math.atan2(z, r))
        p = los_probability(los, theta)
        if directional:
            base *= antenna_gain_linear(pattern, math.degrees(math.atan2(r, z))) / gain_norm
        return base, p

    def k_los(r):
        base, p = weight(r)
        x = base * p
        return r * x / (1.0 + x)

    def k_nlos(r):
        base, p = weight(r)
        x = base * eta * (1.0 - p)
        return r * x / (1.0 + x)

    return k_los, k_nlos


def _breakpoints(z, pattern, los):
    pts = []
    if los.c < 90:
        pts.append(z / math.tan(math.radians(los.c)))
    if pattern.is_directional and pattern.main_lobe_edge_deg < 90:
        pts.append(z * math.tan(math.radians(pattern.main_lobe_edge_deg)))
    return pts


def radial_integrals(
    s_eff: float,
    z: float,
    pattern: AntennaPattern,
    gain_norm: float,
    channel: ChannelParams,
    los: LosModel,
    rel_tol: float = DEFAULT_REL_TOL,
) -> tuple[float, float]:
    """LoS and NLoS radial integrals for interferers at altitude ``z`` above the victim."""
    if s_eff == 0:
        return 0.0, 0.0
    k_los, k_nlos = _radial_kernels(s_eff, z, pattern, gain_norm, channel, los)
    bps = _breakpoints(z, pattern, los)
    h_los = integrate_semi_infinite(k_los, rel_tol, scale=z, breakpoints=bps)
    h_nlos = integrate_semi_infinite(k_nlos, rel_tol, scale=z, breakpoints=bps)
    return h_los, h_nlos


def _label(kind, dim, pattern):
    return f"{kind}/{dim}/{pattern.variant}"


def uav_laplace_2d(
    s_eff: float,
    lam: float,
    h: float,
    pattern: AntennaPattern,
    gain_norm: float,
    channel: ChannelParams,
    los: LosModel,
    rel_tol: float = DEFAULT_REL_TOL,
    kind: str = "uav",
) -> LaplaceFactor:
    """Laplace transform of interference from a planar UAV field at altitude ``h``.

    ``s_eff`` already includes the interferer transmit power; interferer
    antenna gains are divided by ``gain_norm``.
    """
    if lam < 0 or h <= 0:
        raise ValueError("need lam >= 0 and h > 0")
    label = _label(kind, "2d", pattern)
    if lam == 0:
        return LaplaceFactor(1.0, label, s_eff, {"los": 0.0, "nlos": 0.0})
    h_los, h_nlos = radial_integrals(s_eff, h, pattern, gain_norm, channel, los, rel_tol)
    value = math.exp(-2.0 * math.pi * lam * (h_los + h_nlos))
    return LaplaceFactor(value, label, s_eff, {"los": h_los, "nlos": h_nlos})


def uav_laplace_3d(
    s_eff: float,
    lam: float,
    h1: float,
    dh: float,
    pattern: AntennaPattern,
    gain_norm: float,
    channel: ChannelParams,
    los: LosModel,
    rel_tol: float = DEFAULT_REL_TOL,
    kind: str = "uav",
) -> LaplaceFactor:
    """Laplace transform for a UAV slab of volumetric density ``lam`` in ``[h1, h1 + dh]``."""
    if lam < 0 or h1 <= 0 or dh <= 0:
        raise ValueError("need lam >= 0, h1 > 0 and dh > 0")
    label = _label(kind, "3d", pattern)
    if lam == 0:
        return LaplaceFactor(1.0, label, s_eff, {"los": 0.0, "nlos": 0.0})

    def inner(z):
        return np.array(radial_integrals(s_eff, z, pattern, gain_norm, channel, los, rel_tol))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        res, err = integrate.quad_vec(inner, h1, h1 + dh, epsabs=0.0, epsrel=10 * rel_tol)
    h_los, h_nlos = (float(v) for v in res)
    if err > 100 * rel_tol * (h_los + h_nlos) + 1e-300:
        raise IntegrationError(f"altitude quadrature error {err:.3g} too large")
    value = math.exp(-2.0 * math.pi * lam * (h_los + h_nlos))
    return LaplaceFactor(value, label, s_eff, {"los": h_los, "nlos": h_nlos})


def uav_laplace(scenario: Scenario, s_eff: float, gain_norm: float, kind: str,
                rel_tol: float = DEFAULT_REL_TOL) -> LaplaceFactor:
    """Dispatch to the planar or slab transform for ``scenario``'s UAV deployment."""
    dep = scenario.uav_deployment
    if dep.is_3d:
        return uav_laplace_3d(s_eff, dep.density, dep.altitude_min, dep.vertical_range,
                              scenario.pattern, gain_norm, scenario.channel, scenario.los,
                              rel_tol, kind)
    return uav_laplace_2d(s_eff, dep.density, dep.altitude, scenario.pattern, gain_norm,
                          scenario.channel, scenario.los, rel_tol, kind)


def p1_factors(scenario: Scenario, rel_tol: float = DEFAULT_REL_TOL):
    """The three factors of the ground user's coverage: ground field, UAV field, noise."""
    ch = scenario.channel
    s_ground = scenario.beta * scenario.d0**ch.alpha_ground / ch.p_ground
    ground = ground_laplace_closed_form(
        scenario.ground_density, scenario.beta, scenario.d0, ch.alpha_ground
    )
    uav = uav_laplace(scenario, s_ground * ch.p_uav, scenario.ground_gain_norm,
                      "ground-victim", rel_tol)
    noise = math.exp(-s_ground * ch.noise)
    return ground, uav, noise


def p1_coverage(scenario: Scenario, rel_tol: float = DEFAULT_REL_TOL) -> CoverageEstimate:
    """Coverage probability of the typical ground-network user."""
    ground, uav, noise = p1_factors(scenario, rel_tol)
    return CoverageEstimate(ground.value * uav.value * noise, method=ANALYTIC)


def p2_factors(scenario: Scenario, rel_tol: float = DEFAULT_REL_TOL):
    """LoS probability of the serving link and the Laplace factors of both branches."""
    ch = scenario.channel
    x0 = scenario.serving_distance
    p_los = los_probability(scenario.los, scenario.serving_elevation_deg)
    # interferer gains are taken relative to the serving beam's boresight gain
    norm = scenario.serving_gain
    s_los = scenario.beta * x0**ch.alpha_uav
    los_branch = uav_laplace(scenario, s_los, norm, "uav-victim", rel_tol)
    nlos_branch = uav_laplace(scenario, s_los / ch.eta, norm, "uav-victim", rel_tol)
    return p_los, los_branch, nlos_branch


def p2_coverage(scenario: Scenario, rel_tol: float = DEFAULT_REL_TOL) -> CoverageEstimate:
    """Coverage probability of the typical UAV-network user (interference limited)."""
    p_los, los_branch, nlos_branch = p2_factors(scenario, rel_tol)
    value = p_los * los_branch.value + (1.0 - p_los) * nlos_branch.value
    return CoverageEstimate(min(1.0, value), method=ANALYTIC)


def tail_exponent_bound(scenario: Scenario, radius: float, s_eff: float,
                        gain_norm: float = 1.0) -> float:
    """Upper bound on the Laplace exponent contributed by UAVs beyond ``radius``.

    Uses ``1 - 1/(1+x) <= x``. Beyond ``radius`` the elevation angle is at most
    that of the highest UAV at ``radius``, so the LoS probability is bounded by
    its value there; the antenna gain is bounded by its largest value over the
    off-axis angles that remain.
    """
    ch = scenario.channel
    alpha = ch.alpha_uav
    dep = scenario.uav_deployment
    z_top = dep.base_altitude + (dep.vertical_range if dep.is_3d else 0.0)
    p_max = los_probability(scenario.los, math.degrees(math.atan2(z_top, radius)))
    weight = p_max + ch.eta * (1.0 - p_max)
    pat = scenario.pattern
    if pat.is_directional:
        min_off_axis = math.degrees(math.atan2(radius, z_top))
        g_max = max(antenna_gain_linear(pat, min_off_axis), 10.0 ** (pat.gsl_db / 10.0))
    else:
        g_max = 1.0
    lam = scenario.uav_projected_density
    return (2.0 * math.pi * lam * s_eff * weight * g_max / gain_norm
            * radius ** (2.0 - alpha) / (alpha - 2.0))
