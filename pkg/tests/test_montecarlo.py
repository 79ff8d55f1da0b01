import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.integrate import quad

from oracles import ground_closed_form, los_prob
from uavshare import (AntennaPattern, McConfig, PointSet, Scenario, estimate_coverage,
                      estimate_p1, estimate_p2, p1_coverage, p2_coverage, realize_interference,
                      sample_disk_ppp)
from uavshare.analytic import p2_factors, tail_exponent_bound
from uavshare.montecarlo import ground_truncation_radius

SC = Scenario()


def test_empty_field_gives_zero():
    empty = PointSet(np.zeros((0, 3)))
    assert realize_interference(empty, (0, 0, 0), SC) == 0.0
    assert realize_interference(empty, (0, 0, 0), SC, tier="ground") == 0.0


def test_single_ground_interferer():
    pts = PointSet(np.array([[10.0, 0.0, 0.0]]))
    assert realize_interference(pts, (0, 0, 0), SC, tier="ground", fading=[1.0]) == pytest.approx(1e-5)


def test_single_uav_interferer_both_models():
    pts = PointSet(np.array([[0.0, 0.0, 100.0]]))
    p = los_prob(90.0)
    got = realize_interference(pts, (0, 0, 0), SC, fading=[[1.0, 1.0]])
    assert got == pytest.approx(5e-6 * (p + 1e-3 * (1 - p)), rel=1e-12)
    b = realize_interference(pts, (0, 0, 0), SC, "bernoulli_mixture", fading=[1.0], rng=0)
    assert b in (pytest.approx(5e-6), pytest.approx(5e-9))


def test_ground_field_mean_matches_campbell():
    lam, d_min, radius, n = 1e-3, 10.0, 100.0, 100_000
    rng = np.random.default_rng(11)
    vals = np.empty(n)
    for i in range(n):
        pts = sample_disk_ppp(lam, radius, seed=rng)
        keep = pts.horizontal_distance >= d_min
        vals[i] = realize_interference(PointSet(pts.points[keep]), (0, 0, 0), SC, tier="ground", rng=rng)
    expected = 2 * math.pi * lam * 0.1 * quad(lambda r: r ** (1 - 4), d_min, radius)[0]
    assert abs(vals.mean() - expected) <= 3 * vals.std(ddof=1) / math.sqrt(n)


@pytest.mark.parametrize("model", ["paper_product", "bernoulli_mixture"])
def test_uav_field_mean_matches_campbell(model):
    lam, radius, h, n = 1e-4, 300.0, 100.0, 20_000
    rng = np.random.default_rng(12)
    vals = np.array([
        realize_interference(sample_disk_ppp(lam, radius, z=h, seed=rng), (0, 0, 0), SC, model, rng=rng)
        for _ in range(n)
    ])

    def density(r):
        p = los_prob(math.degrees(math.atan2(h, r)))
        return 5.0 * (r * r + h * h) ** -1.5 * (p + 1e-3 * (1 - p)) * r

    expected = 2 * math.pi * lam * quad(density, 0, radius)[0]
    assert abs(vals.mean() - expected) <= 3 * vals.std(ddof=1) / math.sqrt(n)


def test_noise_only_p1():
    sc = replace(SC, ground_density=0.0).with_uav_density(0.0)
    est = estimate_p1(sc, McConfig(n_realizations=100_000, master_seed=1))
    expected = math.exp(-0.1 * 10**4 * 1e-9 / 0.1)
    assert expected == pytest.approx(0.99999, abs=5e-6)
    assert abs(est.value - expected) <= 3 * max(est.stderr, math.sqrt(expected * (1 - expected) / est.n))


def test_ground_only_p1_matches_closed_form():
    sc = SC.with_uav_density(0.0)
    est = estimate_p1(sc, McConfig(n_realizations=100_000, master_seed=2))
    expected = ground_closed_form() * math.exp(-1e-5)
    assert expected == pytest.approx(0.85551, abs=5e-6)
    assert abs(est.value - expected) <= 3 * est.stderr


def test_p2_without_interferers_is_one():
    est = estimate_p2(SC.with_uav_density(0.0), McConfig(n_realizations=2000))
    assert est.value == 1.0
    est = estimate_p2(replace(SC, channel=replace(SC.channel, eta=1.0)).with_uav_density(0.0),
                      McConfig(n_realizations=2000))
    assert est.value == 1.0


def test_stderr_is_binomial():
    p1, p2 = estimate_coverage(SC, McConfig(n_realizations=500, truncation_radius=2000.0))
    for e in (p1, p2):
        assert e.n == 500 and e.method == "monte_carlo"
        assert e.stderr == pytest.approx(math.sqrt(e.value * (1 - e.value) / 500))


def test_deterministic_across_runs_and_workers():
    mc = McConfig(n_realizations=3000, truncation_radius=2000.0, master_seed=99)
    a = estimate_coverage(SC, mc)
    b = estimate_coverage(SC, mc)
    c = estimate_coverage(SC, replace(mc, workers=2))
    assert a == b == c
    assert a != estimate_coverage(SC, replace(mc, master_seed=100))


def test_directional_small_run_matches_analytic():
    sc = replace(SC, pattern=AntennaPattern.directional(30.0))
    mc = McConfig(n_realizations=20_000, truncation_radius=3000.0, master_seed=5)
    e1, e2 = estimate_coverage(sc, mc)
    assert e1.agrees_with(p1_coverage(sc), slack=0.005)
    assert e2.agrees_with(p2_coverage(sc), slack=0.005)


def test_truncation_bias_below_one_stderr_at_default_radius():
    # ignoring UAVs beyond R inflates each Laplace factor L to at most L * exp(tail),
    # so the coverage error is at most L * tail per factor
    mc = McConfig()
    se = math.sqrt(0.25 / 100_000)
    for h in (50.0, 100.0, 200.0, 400.0):
        sc = SC.with_altitude(h)
        s1 = 0.1 * 10**4 / 0.1 * 5.0
        assert p1_coverage(sc).value * tail_exponent_bound(sc, mc.truncation_radius, s1) < se
        p0, los_branch, nlos_branch = p2_factors(sc)
        s2 = 0.1 * h**3
        lost = (p0 * los_branch.value * tail_exponent_bound(sc, mc.truncation_radius, s2)
                + (1 - p0) * nlos_branch.value * tail_exponent_bound(sc, mc.truncation_radius, s2 / 1e-3))
        assert lost < se


def test_doubling_truncation_radius_small_scale():
    base = McConfig(n_realizations=5000, truncation_radius=2500.0, master_seed=3)
    a = estimate_coverage(SC, base)
    b = estimate_coverage(SC, replace(base, truncation_radius=5000.0, master_seed=4))
    for x, y in zip(a, b):
        assert x.agrees_with(y)


def test_ground_truncation_radius():
    r = ground_truncation_radius(SC, McConfig())
    c = 2 * math.pi * 1e-3 * 0.1 * 10**4 / 2
    assert r == pytest.approx(math.sqrt(c / 1e-5))
    assert ground_truncation_radius(SC, McConfig(ground_radius=123.0)) == 123.0
    assert ground_truncation_radius(SC, McConfig(truncation_radius=200.0)) == 200.0


@pytest.mark.parametrize("kwargs", [dict(n_realizations=0), dict(truncation_radius=0.0),
                                    dict(interference_model="other")])
def test_config_invariants(kwargs):
    with pytest.raises(ValueError):
        McConfig(**kwargs)
