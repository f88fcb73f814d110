"""Scenario files: JSON with self-describing keys. Lengths in meters, speeds in m/s, times in seconds."""
import json
import logging
import os
from typing import Dict, List, Optional

from pydantic import BaseModel, Extra, ValidationError, validator

from app.controller import ControllerParams, Logic
from app.errors import ScenarioParseError
from app.geometry import build_chain
from app.simulator import ScenarioConfig

logger = logging.getLogger(__name__)

SCENARIO_VERSION = "tubeswarm/1"


def _point(value: List[float]) -> List[float]:
    if len(value) != 2:
        raise ValueError(f"a point needs two coordinates, got {value!r}")
    return value


class AgentSpec(BaseModel):
    position: List[float]
    v_max: float

    class Config:
        extra = Extra.forbid

    _position = validator("position", allow_reuse=True)(_point)

    @validator("v_max")
    def positive_speed(cls, value):
        if value <= 0:
            raise ValueError("v_max must be positive")
        return value


class ScenarioParams(ControllerParams):
    class Config:
        extra = Extra.forbid


class SimSpec(BaseModel):
    dt: float = 0.001
    t_end: float = 15.0
    logic: Logic = Logic.MODIFIED
    seed: int = 0
    snapshot_times: List[float] = []

    class Config:
        extra = Extra.forbid

    @validator("dt", "t_end")
    def positive(cls, value, field):
        if value <= 0:
            raise ValueError(f"{field.name} must be positive")
        return value


class ScenarioFile(BaseModel):
    version: str = SCENARIO_VERSION
    tube: List[List[List[float]]]
    agents: List[AgentSpec]
    params: ScenarioParams
    sim: SimSpec = SimSpec()

    class Config:
        extra = Extra.forbid

    @validator("version")
    def known_version(cls, value):
        if value != SCENARIO_VERSION:
            raise ValueError(f"unsupported scenario version {value!r}")
        return value

    @validator("tube")
    def base_pairs(cls, value):
        if len(value) < 2:
            raise ValueError("the tube needs at least two bases")
        for base in value:
            if len(base) != 2:
                raise ValueError("each base is a [p_fr, p_fl] pair")
            for point in base:
                _point(point)
        return value

    @validator("agents")
    def at_least_one_agent(cls, value):
        if not value:
            raise ValueError("the scenario needs at least one agent")
        return value


def parse_scenario(text: str, source: str = "<string>") -> ScenarioFile:
    try:
        return ScenarioFile.parse_obj(json.loads(text))
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"{source}: invalid JSON: {e}") from e
    except ValidationError as e:
        raise ScenarioParseError(f"{source}: {e}") from e


def load_scenario(path: str) -> ScenarioFile:
    if not os.path.isfile(path):
        raise ScenarioParseError(f"scenario file not found: {path}")
    with open(path, "r") as f:
        return parse_scenario(f.read(), source=path)


def to_config(scenario: ScenarioFile) -> ScenarioConfig:
    """Build the run configuration; tube geometry is derived here, never read from the file."""
    return ScenarioConfig(
        chain=build_chain(scenario.tube),
        positions=[agent.position for agent in scenario.agents],
        v_max=[agent.v_max for agent in scenario.agents],
        params=ControllerParams(**scenario.params.dict()),
        dt=scenario.sim.dt,
        t_end=scenario.sim.t_end,
        logic=scenario.sim.logic,
        seed=scenario.sim.seed,
        snapshot_times=tuple(scenario.sim.snapshot_times),
    )


def from_config(cfg: ScenarioConfig) -> ScenarioFile:
    return ScenarioFile(
        tube=cfg.chain.bases.tolist(),
        agents=[AgentSpec(position=p.tolist(), v_max=float(v)) for p, v in zip(cfg.positions, cfg.v_max)],
        params=ScenarioParams(**cfg.params.dict()),
        sim=SimSpec(dt=cfg.dt, t_end=cfg.t_end, logic=cfg.logic, seed=cfg.seed,
                    snapshot_times=list(cfg.snapshot_times)),
    )


def dump_scenario(scenario: ScenarioFile) -> str:
    return json.dumps(json.loads(scenario.json()), indent=2, sort_keys=True) + "\n"


class ScenarioRegistry:
    """Bundled scenarios under app/data/scenarios, addressable by file stem."""

    def __init__(self, directory: Optional[str] = None):
        self._directory = directory or os.path.join(os.path.dirname(__file__), "..", "data", "scenarios")
        self._paths: Dict[str, str] = {}
        self._load_bundled()

    def _load_bundled(self):
        try:
            for name in sorted(os.listdir(self._directory)):
                if name.endswith(".json"):
                    self._paths[name[:-5]] = os.path.join(self._directory, name)
        except OSError as e:
            logger.error(f"Error listing bundled scenarios: {e}")

    def names(self) -> List[str]:
        return list(self._paths)

    def resolve(self, name_or_path: str) -> str:
        if os.path.isfile(name_or_path):
            return name_or_path
        if name_or_path in self._paths:
            return self._paths[name_or_path]
        raise ScenarioParseError(
            f"no scenario file or bundled scenario named {name_or_path!r} (bundled: {', '.join(self.names())})")

    def load(self, name_or_path: str) -> ScenarioFile:
        return load_scenario(self.resolve(name_or_path))


scenario_registry = ScenarioRegistry()
