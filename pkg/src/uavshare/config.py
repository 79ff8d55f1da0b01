"""Scenario files: YAML (or JSON) documents validated against a strict schema.

Every field is optional and defaults to the standard simulation parameters
(P_u = 5 W, P_d = 0.1 W, alpha_u = 3, alpha_d = 4, B = 0.136, C = 11.95,
beta = 0.1, eta = 0.001, lambda_u = 1e-4 /m^2, lambda_d = 1e-3 /m^2,
d0 = 10 m, N = 1e-9 W). Unknown keys are rejected.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, ValidationError

from .capacity import HeightSearchSpec
from .channel import AntennaPattern, ChannelParams, LosModel
from .montecarlo import McConfig
from .pointprocess import Deployment
from .scenario import Scenario


class ConfigError(ValueError):
    """Scenario file could not be read or does not describe a valid scenario."""


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ChannelSection(_Section):
    p_uav: float = 5.0
    p_ground: float = 0.1
    alpha_uav: float = 3.0
    alpha_ground: float = 4.0
    eta: float = 0.001
    noise: float = 1e-9


class LosSection(_Section):
    b: float = 0.136
    c: float = 11.95


class PatternSection(_Section):
    variant: Literal["omni", "directional"] = "omni"
    theta_3db: Optional[float] = None


class UavSection(_Section):
    variant: Literal["uav2d", "uav3d"] = "uav2d"
    # per m^2 for uav2d, per m^3 for uav3d
    density: float = 1e-4
    altitude: float = 100.0
    altitude_min: float = 100.0
    vertical_range: float = 50.0


class MonteCarloSection(_Section):
    n_realizations: int = 100_000
    truncation_radius: float = 10_000.0
    master_seed: int = 0
    interference_model: Literal["paper_product", "bernoulli_mixture"] = "paper_product"
    ground_radius: Optional[float] = None
    workers: int = 1


class SearchSection(_Section):
    h_grid: Optional[list[float]] = None
    h_start: float = 20.0
    h_stop: float = 1000.0
    h_step: float = 10.0
    coverage_floor: float = 0.0
    log_base: Literal["natural", "base2"] = "natural"


class ScenarioFile(_Section):
    channel: ChannelSection = ChannelSection()
    los: LosSection = LosSection()
    pattern: PatternSection = PatternSection()
    power_reference: Literal["eirp", "conducted"] = "eirp"
    ground_density: float = 1e-3
    uav_deployment: UavSection = UavSection()
    beta: float = 0.1
    d0: float = 10.0
    x0_mode: Literal["overhead", "explicit", "horizontal"] = "overhead"
    x0: Optional[float] = None
    x0_offset: Optional[float] = None
    montecarlo: MonteCarloSection = MonteCarloSection()
    search: SearchSection = SearchSection()

    def to_scenario(self) -> Scenario:
        try:
            if self.pattern.variant == "omni":
                pattern = AntennaPattern.omni()
            else:
                pattern = AntennaPattern.directional(self.pattern.theta_3db)
            u = self.uav_deployment
            if u.variant == "uav3d":
                dep = Deployment.uav3d(u.density, u.altitude_min, u.vertical_range)
            else:
                dep = Deployment.uav2d(u.density, u.altitude)
            return Scenario(
                channel=ChannelParams(**self.channel.model_dump()),
                los=LosModel(**self.los.model_dump()),
                pattern=pattern,
                ground_density=self.ground_density,
                uav_deployment=dep,
                beta=self.beta,
                d0=self.d0,
                x0_mode=self.x0_mode,
                x0=self.x0,
                x0_offset=self.x0_offset,
                power_reference=self.power_reference,
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def to_mc(self) -> McConfig:
        try:
            return McConfig(**self.montecarlo.model_dump())
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def to_search(self) -> HeightSearchSpec:
        s = self.search
        try:
            grid = s.h_grid if s.h_grid is not None else linear_grid(s.h_start, s.h_stop, s.h_step)
            return HeightSearchSpec(tuple(grid), s.coverage_floor, s.log_base)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def linear_grid(start: float, stop: float, step: float) -> list[float]:
    """``start, start + step, ...`` up to and including ``stop`` (within rounding)."""
    if step <= 0 or not start < stop:
        raise ValueError("grid needs step > 0 and start < stop")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [float(round(start + i * step, 12)) for i in range(n)]


def parse_value(text: str):
    """Parse an override value with YAML rules, accepting ``1e-4`` style floats."""
    value = yaml.safe_load(text)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            return value
    return value


def set_path(data: dict, path: str, value) -> dict:
    """Return a copy of nested ``data`` with dotted ``path`` set to ``value``."""
    keys = path.split(".")
    out = dict(data)
    node = out
    for key in keys[:-1]:
        child = node.get(key, {})
        if not isinstance(child, dict):
            raise ConfigError(f"{path!r}: {key!r} is not a section")
        node[key] = dict(child)
        node = node[key]
    node[keys[-1]] = value
    return out


def get_path(data: dict, path: str):
    node = data
    for key in path.split("."):
        if not isinstance(node, dict) or key not in node:
            raise ConfigError(f"unknown parameter path {path!r}")
        node = node[key]
    return node


def validate(data: dict) -> ScenarioFile:
    try:
        return ScenarioFile.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"invalid scenario file:\n{exc}") from exc


def read_document(path: str | Path | None) -> dict:
    """Raw mapping from a YAML/JSON file; ``None`` or ``'-'`` means an empty document."""
    if path is None or str(path) == "-":
        return {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return data


def load(path: str | Path | None = None, overrides=()) -> ScenarioFile:
    """Read, override (``"a.b=value"`` strings) and validate a scenario file."""
    data = read_document(path)
    for item in overrides:
        key, sep, text = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"override {item!r} must look like key=value")
        data = set_path(data, key.strip(), parse_value(text))
    return validate(data)


def with_param(doc: ScenarioFile, path: str, value) -> ScenarioFile:
    """Copy of ``doc`` with one dotted parameter replaced."""
    data = doc.model_dump()
    get_path(data, path)
    return validate(set_path(data, path, value))


def with_vertical_range(doc: ScenarioFile, dh: float, fixed: str = "volumetric") -> ScenarioFile:
    """Set the slab thickness, holding either the volumetric or the projected density fixed."""
    if fixed not in ("volumetric", "projected"):
        raise ConfigError("density mode must be 'volumetric' or 'projected'")
    data = doc.model_dump()
    uav = dict(data["uav_deployment"])
    if fixed == "projected":
        if dh <= 0:
            raise ConfigError("projected-density sweeps need a positive vertical range")
        uav["density"] = uav["density"] * uav["vertical_range"] / dh
    uav["vertical_range"] = dh
    data["uav_deployment"] = uav
    return validate(data)
