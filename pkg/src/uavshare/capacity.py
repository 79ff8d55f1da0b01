"""Transmission capacity of the UAV tier and the constrained altitude search."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .analytic import p1_coverage, p2_coverage
from .scenario import Scenario

NATURAL = "natural"
BASE2 = "base2"


@dataclass(frozen=True)
class HeightSearchSpec:
    h_grid: tuple[float, ...]
    coverage_floor: float = 0.0
    log_base: str = NATURAL

    def __post_init__(self):
        grid = tuple(float(h) for h in self.h_grid)
        object.__setattr__(self, "h_grid", grid)
        if not grid:
            raise ValueError("h_grid must not be empty")
        if any(h <= 0 for h in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("h_grid must be strictly increasing and positive")
        if not 0.0 <= self.coverage_floor <= 1.0:
            raise ValueError("coverage_floor must lie in [0, 1]")
        if self.log_base not in (NATURAL, BASE2):
            raise ValueError("log_base must be 'natural' or 'base2'")


@dataclass(frozen=True)
class HeightRecord:
    h: float
    p1: float
    p2: float
    tc: float
    feasible: bool


@dataclass(frozen=True)
class TcResult:
    records: tuple[HeightRecord, ...]
    best_feasible: HeightRecord | None
    vacant_intervals: tuple[tuple[float, float], ...] = field(default=())

    @property
    def has_feasible(self) -> bool:
        return self.best_feasible is not None


def rate(beta: float, log_base: str = NATURAL) -> float:
    """Per-link rate term log(1 + beta) in nats or bits."""
    if log_base == BASE2:
        return math.log2(1.0 + beta)
    if log_base == NATURAL:
        return math.log1p(beta)
    raise ValueError("log_base must be 'natural' or 'base2'")


def transmission_capacity(scenario: Scenario, log_base: str = NATURAL, p2: float | None = None) -> float:
    """Successful UAV links per m^2 times the per-link rate.

    The UAV density is taken per unit ground area, i.e. volumetric density
    times vertical range for the slab deployment. ``p2`` overrides the
    analytic coverage of the UAV user.
    """
    lam = scenario.uav_projected_density
    if lam == 0:
        return 0.0
    if p2 is None:
        p2 = p2_coverage(scenario).value
    return lam * p2 * rate(scenario.beta, log_base)


def vacant_intervals(records) -> tuple[tuple[float, float], ...]:
    """Maximal runs of consecutive infeasible grid altitudes as ``(h_lo, h_hi)``."""
    spans = []
    start = None
    prev = None
    for rec in records:
        if not rec.feasible and start is None:
            start = rec.h
        elif rec.feasible and start is not None:
            spans.append((start, prev))
            start = None
        prev = rec.h
    if start is not None:
        spans.append((start, prev))
    return tuple(spans)


def optimize_height(template: Scenario, spec: HeightSearchSpec) -> TcResult:
    """Grid search for the altitude maximising TC subject to ``P1 >= coverage_floor``.

    Ties go to the lowest altitude. ``best_feasible`` is ``None`` when no grid
    altitude meets the floor.
    """
    records = []
    for h in spec.h_grid:
        sc = template.with_altitude(h)
        p1 = p1_coverage(sc).value
        p2 = p2_coverage(sc).value
        tc = transmission_capacity(sc, spec.log_base, p2=p2)
        records.append(HeightRecord(h, p1, p2, tc, p1 >= spec.coverage_floor))
    best = None
    for rec in records:
        if rec.feasible and (best is None or rec.tc > best.tc):
            best = rec
    return TcResult(tuple(records), best, vacant_intervals(records))
