from .scenario import (
    SCENARIO_VERSION, AgentSpec, ScenarioFile, ScenarioParams, ScenarioRegistry, SimSpec, dump_scenario,
    from_config, load_scenario, parse_scenario, scenario_registry, to_config,
)
from .export import export_trace, read_metrics, read_summary, read_trajectory, trajectory_rows
from .plotting import plot_distances, plot_snapshot, plot_trajectories
from .commands import check_reports, cmd_check, cmd_plot, cmd_simulate, load_config

__all__ = [
    "SCENARIO_VERSION", "AgentSpec", "ScenarioFile", "ScenarioParams", "ScenarioRegistry", "SimSpec",
    "dump_scenario", "from_config", "load_scenario", "parse_scenario", "scenario_registry", "to_config",
    "export_trace", "read_metrics", "read_summary", "read_trajectory", "trajectory_rows",
    "plot_distances", "plot_snapshot", "plot_trajectories",
    "check_reports", "cmd_check", "cmd_plot", "cmd_simulate", "load_config",
]
