from .models import (
    DeadlockEvent, LyapunovSample, Outcome, ScenarioConfig, SimulationTrace, ValidationReport,
)
from .engine import EquilibriumResult, compute_commands, find_equilibrium, run, step, validate_scenario
from .deadlock import detect_deadlock

__all__ = [
    "DeadlockEvent", "LyapunovSample", "Outcome", "ScenarioConfig", "SimulationTrace", "ValidationReport",
    "EquilibriumResult", "compute_commands", "find_equilibrium", "run", "step", "validate_scenario",
    "detect_deadlock",
]
