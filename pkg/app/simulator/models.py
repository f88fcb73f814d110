from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from app.controller import ControllerParams, ForceBreakdown, Logic, SwarmState
from app.geometry import QuadrangleChain


class Outcome(str, Enum):
    COMPLETED = "completed"
    TIMEOUT = "timeout"
    BREACH = "breach"


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    """Everything a run needs. Positions are (M, 2) in meters, v_max in m/s."""
    chain: QuadrangleChain
    positions: np.ndarray
    v_max: np.ndarray
    params: ControllerParams
    dt: float = 0.001
    t_end: float = 15.0
    logic: Logic = Logic.MODIFIED
    seed: int = 0
    snapshot_times: Tuple[float, ...] = ()
    avoidance_sign: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "positions", np.asarray(self.positions, dtype=float).reshape(-1, 2))
        object.__setattr__(self, "v_max", np.asarray(self.v_max, dtype=float).reshape(-1))
        object.__setattr__(self, "logic", Logic(self.logic))
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_end < self.dt:
            raise ValueError("t_end must be at least dt")
        if len(self.positions) != len(self.v_max):
            raise ValueError("every agent needs a position and a v_max")

    @property
    def steps(self) -> int:
        return int(round(self.t_end / self.dt))

    def initial_state(self) -> SwarmState:
        return SwarmState.from_agents(self.positions.copy(), self.v_max.copy())

    def with_positions(self, positions: np.ndarray) -> "ScenarioConfig":
        return replace(self, positions=np.asarray(positions, dtype=float).copy())


class ValidationReport(BaseModel):
    violations: List[str] = []

    @property
    def ok(self) -> bool:
        return not self.violations


class LyapunovSample(NamedTuple):
    step: int
    t: float
    value: float
    derivative: float


class DeadlockEvent(NamedTuple):
    agent: int
    start: float
    end: float


@dataclass(eq=False)
class SimulationTrace:
    """Per-step record of a run.

    positions and arrived have one more row than commands and the metric arrays:
    row k is the state at times[k], and commands[k] moved it to row k + 1.
    """
    dt: float
    v_max: np.ndarray
    r_s: float
    times: List[float] = field(default_factory=list)
    positions: List[np.ndarray] = field(default_factory=list)
    arrived: List[np.ndarray] = field(default_factory=list)
    commands: List[np.ndarray] = field(default_factory=list)
    min_pair_dist: List[float] = field(default_factory=list)
    min_boundary_dist: List[float] = field(default_factory=list)
    command_time: List[float] = field(default_factory=list)
    lyapunov: List[LyapunovSample] = field(default_factory=list)
    breakdowns: Dict[float, List[Optional[ForceBreakdown]]] = field(default_factory=dict)
    arrival_times: Optional[np.ndarray] = None
    outcome: Outcome = Outcome.TIMEOUT
    logic: Logic = Logic.MODIFIED

    @property
    def steps(self) -> int:
        return len(self.commands)

    @property
    def metric_times(self) -> np.ndarray:
        return np.asarray(self.times[1:])

    @property
    def mean_command_time(self) -> float:
        return float(np.mean(self.command_time)) if self.command_time else 0.0
