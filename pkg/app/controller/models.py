from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, root_validator, validator

from app.geometry import Region, TrapezoidTube
from app.potentials import BarrierParams


class Logic(str, Enum):
    DIRECT = "direct"
    MODIFIED = "modified"
    SINGLE_TRAPEZOID_V1 = "single_trapezoid_v1"
    SINGLE_TRAPEZOID_V2 = "single_trapezoid_v2"


class ControllerParams(BaseModel):
    """Gains, smoothing constants and radii shared by every agent. Lengths in meters."""
    k1: float = 1.0
    k2: float = 1.0
    k3: float = 1.0
    eps_m: float = 1e-6
    eps_s: float = 1e-6
    eps_t: float = 1e-6
    eps_0: Optional[float] = None
    r_s: float
    r_a: float
    lambda0: float = 3.0
    lambda_cap: float = 64.0
    panel_order: int = 32

    class Config:
        allow_mutation = False

    @validator("k1", "k2", "k3", "eps_m", "eps_t")
    def positive(cls, value, field):
        if value <= 0:
            raise ValueError(f"{field.name} must be positive")
        return value

    @validator("eps_s")
    def eps_s_range(cls, value):
        if not 0 < value < 0.1:
            raise ValueError("eps_s must lie in (0, 0.1)")
        return value

    @validator("lambda0")
    def lambda0_at_least_one(cls, value):
        if value < 1:
            raise ValueError("lambda0 must be at least 1")
        return value

    @validator("panel_order")
    def order_at_least_16(cls, value):
        if value < 16:
            raise ValueError("panel_order must be at least 16")
        return value

    @root_validator(skip_on_failure=True)
    def radii_and_arrival(cls, values):
        r_s, r_a = values["r_s"], values["r_a"]
        if not r_a > r_s > 0:
            raise ValueError(f"need r_a > r_s > 0, got r_s={r_s}, r_a={r_a}")
        if values.get("eps_0") is None:
            values["eps_0"] = r_s / 10.0
        elif values["eps_0"] <= 0:
            raise ValueError("eps_0 must be positive")
        return values

    def barrier_params(self) -> BarrierParams:
        return BarrierParams(k2=self.k2, r_s=self.r_s, r_a=self.r_a, eps_m=self.eps_m, eps_s=self.eps_s)


@dataclass(frozen=True)
class AgentState:
    id: int
    p: np.ndarray
    v_max: float
    arrived: bool = False


@dataclass(eq=False)
class SwarmState:
    """Positions (M, 2), per-agent speed caps (M,) and arrival flags (M,)."""
    positions: np.ndarray
    v_max: np.ndarray
    arrived: np.ndarray

    @property
    def size(self) -> int:
        return len(self.positions)

    def agent(self, i: int) -> AgentState:
        return AgentState(id=i, p=self.positions[i], v_max=float(self.v_max[i]), arrived=bool(self.arrived[i]))

    def copy(self) -> "SwarmState":
        return SwarmState(self.positions.copy(), self.v_max.copy(), self.arrived.copy())

    @classmethod
    def from_agents(cls, positions, v_max) -> "SwarmState":
        positions = np.asarray(positions, dtype=float).reshape(-1, 2)
        v_max = np.asarray(v_max, dtype=float).reshape(-1)
        if len(v_max) != len(positions):
            raise ValueError("positions and v_max have different lengths")
        if np.any(v_max <= 0):
            raise ValueError("v_max must be positive")
        return cls(positions, v_max, np.zeros(len(positions), dtype=bool))


@dataclass(frozen=True, eq=False)
class ForceBreakdown:
    """Pre-saturation line approaching (f1), agent avoidance (f2) and tube keeping (f3) terms."""
    f1: np.ndarray
    f2: np.ndarray
    f3: np.ndarray


@dataclass(frozen=True, eq=False)
class ActiveRegion:
    q: int
    region: Region
    tube: TrapezoidTube
    r_s_prime: float
