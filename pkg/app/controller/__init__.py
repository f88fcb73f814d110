from .models import ActiveRegion, AgentState, ControllerParams, ForceBreakdown, Logic, SwarmState
from .commands import (
    agent_lyapunov, arrival_check, avoidance_sum, controller1, controller2, force_breakdown,
    line_approaching_error, neighbor_set, total_lyapunov,
)
from .switching import ChainController

__all__ = [
    "ActiveRegion", "AgentState", "ControllerParams", "ForceBreakdown", "Logic", "SwarmState",
    "agent_lyapunov", "arrival_check", "avoidance_sum", "controller1", "controller2",
    "force_breakdown", "line_approaching_error", "neighbor_set", "total_lyapunov",
    "ChainController",
]
