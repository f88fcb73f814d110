"""simulate | check | plot. Each command returns 0 or raises a TubeSwarmError carrying its exit code."""
import logging
import os
from dataclasses import replace
from typing import List, Optional, Sequence

import numpy as np

from app.controller import ChainController, Logic
from app.errors import OracleFailure, ScenarioValidationError, TubeSwarmError
from app.simulator import DeadlockEvent, ScenarioConfig, detect_deadlock, run, validate_scenario
from app.verification import (
    OracleReport, containment_check, direction_constraint_sampler, gradient_oracle_suite, line_integral_oracle,
    locate_partition_check, prop1_oracle, prop2_check,
)
from .export import export_trace, read_metrics, read_summary, read_trajectory
from .plotting import plot_distances, plot_snapshot, plot_trajectories
from .scenario import scenario_registry, to_config

logger = logging.getLogger(__name__)

SNAPSHOT_TRAIL_POINTS = 2000


def load_config(scenario: str, dt_override: Optional[float] = None, logic_override: Optional[str] = None,
                snapshot_times: Optional[Sequence[float]] = None) -> ScenarioConfig:
    cfg = to_config(scenario_registry.load(scenario))
    updates = {}
    if dt_override is not None:
        updates["dt"] = dt_override
    if logic_override is not None:
        updates["logic"] = Logic(logic_override)
    if snapshot_times is not None:
        updates["snapshot_times"] = tuple(snapshot_times)
    return replace(cfg, **updates) if updates else cfg


def _require_valid(cfg: ScenarioConfig):
    report = validate_scenario(cfg)
    if not report.ok:
        for violation in report.violations:
            print(f"violation: {violation}")
        raise ScenarioValidationError("scenario violates its preconditions: " + "; ".join(report.violations))


def _write_snapshots(trace, cfg: ScenarioConfig, out: str) -> List[str]:
    written = []
    last = len(trace.positions) - 1
    for t in cfg.snapshot_times:
        k = min(max(int(round(t / cfg.dt)), 0), last)
        stride = max(1, k // SNAPSHOT_TRAIL_POINTS)
        trail = trace.positions[: k + 1: stride]
        path = os.path.join(out, f"snapshot_{t:.2f}.svg")
        plot_snapshot(trace.positions[k], trace.arrived[k], cfg.chain.bases, cfg.params.r_s, cfg.params.r_a,
                      trace.times[k], path, trail=np.asarray(trail) if len(trail) > 1 else None)
        written.append(path)
    return written


def _write_outputs(trace, cfg: ScenarioConfig, out: str, violations: Sequence[str] = ()) -> List[DeadlockEvent]:
    deadlocks = detect_deadlock(trace)
    written = export_trace(trace, out, cfg.chain.bases, cfg.params.r_a, deadlocks=deadlocks, violations=violations)
    written += _write_snapshots(trace, cfg, out)
    logger.info(f"Simulation outputs: {', '.join(os.path.basename(p) for p in written)}")
    return deadlocks


def cmd_simulate(scenario: str, out: str, dt_override: Optional[float] = None,
                 logic_override: Optional[str] = None, snapshot_times: Optional[Sequence[float]] = None) -> int:
    cfg = load_config(scenario, dt_override, logic_override, snapshot_times)
    _require_valid(cfg)

    try:
        trace = run(cfg)
    except TubeSwarmError as e:
        if e.partial is not None:
            _write_outputs(e.partial, cfg, out, violations=[str(e)])
        raise
    deadlocks = _write_outputs(trace, cfg, out)

    arrived = int(trace.arrived[-1].sum())
    print(f"{trace.outcome.value}: {arrived}/{len(cfg.v_max)} agents arrived in {trace.steps} steps; "
          f"{len(deadlocks)} deadlock events; outputs in {out}")
    return 0


def check_reports(cfg: ScenarioConfig, samples: int = 10000, gradient_cases: int = 1000) -> List[OracleReport]:
    """Every oracle that applies to the scenario's tube, in a fixed order."""
    chain, params = cfg.chain, cfg.params
    reports = []
    if cfg.logic is Logic.SINGLE_TRAPEZOID_V1:
        controller = ChainController(chain, params, cfg.logic)
        reports.append(direction_constraint_sampler(controller.single_tube, controller.extended, d=params.r_s,
                                                    order=params.panel_order))
    for q in range(1, chain.n + 1):
        decomposition = chain.decomposition(q)
        parts = [("inscribed", decomposition.inscribed), ("circumscribed", decomposition.circumscribed)]
        if decomposition.bottom is not None:
            parts.append(("bottom", decomposition.bottom))
        for label, tube in parts:
            report = prop1_oracle(tube, params.r_s, n_samples=samples, seed=q)
            reports.append(report.copy(update={"name": f"prop1[q={q},{label}]"}))
        reports.append(containment_check(chain, q, n=samples // 2, seed=q))
    reports.append(prop2_check(chain))
    reports.append(locate_partition_check(chain, n=samples // 2))
    reports.extend(gradient_oracle_suite(n=gradient_cases, tube=chain.decomposition(1).inscribed, params=params))
    reports.append(line_integral_oracle())
    return reports


def cmd_check(scenario: str) -> int:
    cfg = load_config(scenario)
    _require_valid(cfg)

    reports = check_reports(cfg)
    for report in reports:
        print(report.summary_line())
    if cfg.logic is not Logic.SINGLE_TRAPEZOID_V1:
        print(f"SKIP direction_constraints: logic {cfg.logic.value} does not use the panel field")

    failed = [report for report in reports if not report.passed]
    if failed:
        raise OracleFailure(f"oracle {failed[0].name} failed: {failed[0].summary_line()}")
    return 0


def cmd_plot(trace_dir: str, output: str) -> int:
    summary = read_summary(trace_dir)
    metrics = read_metrics(trace_dir)
    trajectory = read_trajectory(trace_dir)

    plot_distances(metrics, summary["r_s"], output)
    stem, _ = os.path.splitext(output)
    plot_trajectories(trajectory, summary["tube"], f"{stem}_trajectories.svg")
    return 0
