import math
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from uavshare import (AntennaPattern, Deployment, HeightSearchSpec, Scenario, optimize_height,
                      transmission_capacity)
from uavshare.capacity import HeightRecord, TcResult, rate, vacant_intervals

GRID = (20.0, 30.0, 50.0, 100.0, 200.0, 400.0, 800.0)


def test_tc_reference_value():
    assert transmission_capacity(Scenario(), p2=1.0) == pytest.approx(1e-4 * math.log(1.1))
    assert transmission_capacity(Scenario(), p2=1.0) == pytest.approx(9.531e-6, abs=1e-9)


def test_tc_base2():
    assert transmission_capacity(Scenario(), "base2", p2=1.0) == pytest.approx(1e-4 * math.log2(1.1))


def test_tc_zero_density_and_tiny_threshold():
    assert transmission_capacity(Scenario().with_uav_density(0.0)) == 0.0
    assert transmission_capacity(replace(Scenario(), beta=1e-15), p2=1.0) == pytest.approx(0.0, abs=1e-18)


def test_tc_linear_in_density_with_fixed_p2():
    a = transmission_capacity(Scenario().with_uav_density(1e-5), p2=0.4)
    b = transmission_capacity(Scenario().with_uav_density(7e-5), p2=0.4)
    assert b == pytest.approx(7 * a)


def test_tc_3d_uses_projected_density():
    sc = Scenario(uav_deployment=Deployment.uav3d(2e-6, 100.0, 50.0))
    assert transmission_capacity(sc, p2=1.0) == pytest.approx(1e-4 * math.log(1.1))


def test_rate_rejects_unknown_base():
    with pytest.raises(ValueError):
        rate(0.1, "base10")


def test_zero_floor_all_feasible():
    res = optimize_height(Scenario(), HeightSearchSpec(GRID, 0.0))
    assert all(r.feasible for r in res.records)
    assert res.vacant_intervals == ()
    assert res.best_feasible.tc == max(r.tc for r in res.records)


def test_unit_floor_none_feasible():
    res = optimize_height(Scenario(), HeightSearchSpec(GRID, 1.0))
    assert not res.has_feasible and res.best_feasible is None
    assert res.vacant_intervals == ((GRID[0], GRID[-1]),)


def test_records_in_grid_order():
    res = optimize_height(Scenario(), HeightSearchSpec(GRID, 0.7))
    assert tuple(r.h for r in res.records) == GRID
    for r in res.records:
        assert r.feasible == (r.p1 >= 0.7)


@given(st.lists(st.floats(0, 1), min_size=1, max_size=30), st.floats(0, 1))
def test_vacant_intervals_cover_infeasible_exactly(p1s, floor):
    recs = [HeightRecord(float(i + 1), p, 0.0, 0.0, p >= floor) for i, p in enumerate(p1s)]
    spans = vacant_intervals(recs)
    covered = {r.h for r in recs if any(lo <= r.h <= hi for lo, hi in spans)}
    assert covered == {r.h for r in recs if not r.feasible}
    flat = [x for span in spans for x in span]
    assert flat == sorted(flat)


def test_ties_go_to_lowest_altitude(monkeypatch):
    import uavshare.capacity as cap

    class Fixed:
        def __init__(self, v):
            self.value = v

    monkeypatch.setattr(cap, "p1_coverage", lambda sc: Fixed(0.9))
    monkeypatch.setattr(cap, "p2_coverage", lambda sc: Fixed(0.5))
    res = cap.optimize_height(Scenario(), HeightSearchSpec((10.0, 20.0, 30.0), 0.5))
    assert res.best_feasible.h == 10.0


def test_argmax_invariant_under_monotone_transform():
    res = optimize_height(Scenario(), HeightSearchSpec(GRID, 0.62))
    feasible = [r for r in res.records if r.feasible]
    for f in (lambda t: math.log(t), lambda t: t**3, lambda t: 5 * t + 2):
        best = max(feasible, key=lambda r: (f(r.tc), -r.h))
        assert best.h == res.best_feasible.h


def test_feasibility_monotone_in_floor():
    sets = []
    for floor in (0.0, 0.6, 0.62, 0.7, 0.8, 0.9):
        res = optimize_height(Scenario(), HeightSearchSpec(GRID, floor))
        sets.append({r.h for r in res.records if r.feasible})
    assert all(b <= a for a, b in zip(sets, sets[1:]))


@pytest.mark.parametrize("grid, floor", [((), 0.5), ((10.0, 10.0), 0.5), ((-1.0, 5.0), 0.5),
                                          ((10.0, 20.0), 1.5)])
def test_search_spec_invariants(grid, floor):
    with pytest.raises(ValueError):
        HeightSearchSpec(grid, floor)


def test_directional_removes_vacancy_on_coarse_grid():
    grid = tuple(float(h) for h in range(20, 105, 5))
    omni = optimize_height(Scenario(), HeightSearchSpec(grid, 0.615))
    dirv = optimize_height(Scenario(pattern=AntennaPattern.directional(30.0)), HeightSearchSpec(grid, 0.615))
    assert omni.vacant_intervals and not dirv.vacant_intervals
