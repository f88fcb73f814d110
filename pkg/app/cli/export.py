"""Trace tables and run summary. Fixed decimal formatting so outputs diff cleanly."""
import json
import logging
import math
import os
from typing import List, Optional, Sequence

import numpy as np

from app.errors import MissingTrace
from app.simulator import DeadlockEvent, SimulationTrace

logger = logging.getLogger(__name__)

TRAJECTORY_FILE = "trajectory.csv"
METRICS_FILE = "metrics.csv"
LYAPUNOV_FILE = "lyapunov.csv"
SUMMARY_FILE = "summary.json"


def _finite(value: float, ndigits: int = 6) -> Optional[float]:
    return round(float(value), ndigits) if math.isfinite(value) else None


def trajectory_rows(trace: SimulationTrace) -> np.ndarray:
    """One row per recorded state per agent: t, id, x, y, vx, vy, arrived."""
    positions = np.asarray(trace.positions)
    steps, agents = positions.shape[:2]
    commands = np.zeros_like(positions)
    if trace.commands:
        commands[:-1] = np.asarray(trace.commands)
    times = np.repeat(np.asarray(trace.times), agents)
    ids = np.tile(np.arange(agents), steps)
    return np.column_stack([
        times, ids,
        positions.reshape(-1, 2),
        commands.reshape(-1, 2),
        np.asarray(trace.arrived).reshape(-1).astype(float),
    ])


def write_trajectory(trace: SimulationTrace, path: str):
    np.savetxt(path, trajectory_rows(trace), delimiter=",", header="t,id,x,y,vx,vy,arrived", comments="",
               fmt=["%.4f", "%d", "%.6f", "%.6f", "%.6f", "%.6f", "%d"])


def write_metrics(trace: SimulationTrace, path: str):
    rows = np.column_stack([trace.metric_times, trace.min_pair_dist, trace.min_boundary_dist]).reshape(-1, 3)
    np.savetxt(path, rows, delimiter=",", header="t,min_pair_dist,min_boundary_dist", comments="",
               fmt=["%.4f", "%.6f", "%.6f"])


def write_lyapunov(trace: SimulationTrace, path: str):
    rows = np.array([[s.t, s.value, s.derivative] for s in trace.lyapunov]).reshape(-1, 3)
    np.savetxt(path, rows, delimiter=",", header="t,V,V_dot", comments="", fmt=["%.4f", "%.9e", "%.9e"])


def write_summary(trace: SimulationTrace, path: str, bases: np.ndarray, r_a: float,
                  violations: Sequence[str] = (), deadlocks: Sequence[DeadlockEvent] = ()):
    summary = {
        "outcome": trace.outcome.value,
        "logic": trace.logic.value,
        "steps": trace.steps,
        "dt": trace.dt,
        "r_s": trace.r_s,
        "r_a": r_a,
        "tube": np.asarray(bases).tolist(),
        "arrival_times": [_finite(t, 4) for t in trace.arrival_times],
        "min_pair_dist": _finite(min(trace.min_pair_dist, default=math.inf)),
        "min_boundary_dist": _finite(min(trace.min_boundary_dist, default=math.inf)),
        "violations": list(violations),
        "deadlock_events": [{"agent": e.agent, "start": round(e.start, 4), "end": round(e.end, 4)}
                            for e in deadlocks],
        "mean_command_time_s": trace.mean_command_time,
    }
    with open(path, "w") as f:
        json.dump(summary, f, indent=2)
        f.write("\n")


def export_trace(trace: SimulationTrace, out_dir: str, bases: np.ndarray, r_a: float,
                 deadlocks: Sequence[DeadlockEvent] = (), violations: Sequence[str] = ()) -> List[str]:
    os.makedirs(out_dir, exist_ok=True)
    written = [os.path.join(out_dir, TRAJECTORY_FILE), os.path.join(out_dir, METRICS_FILE)]
    write_trajectory(trace, written[0])
    write_metrics(trace, written[1])
    if trace.lyapunov:
        written.append(os.path.join(out_dir, LYAPUNOV_FILE))
        write_lyapunov(trace, written[-1])
    written.append(os.path.join(out_dir, SUMMARY_FILE))
    write_summary(trace, written[-1], bases, r_a, violations=violations, deadlocks=deadlocks)
    logger.info(f"Wrote {len(written)} trace files to {out_dir}")
    return written


def _load_table(path: str, columns: int) -> np.ndarray:
    if not os.path.isfile(path):
        raise MissingTrace(f"trace file not found: {path}")
    with open(path, "r") as f:
        lines = [line for line in f.read().splitlines()[1:] if line.strip()]
    if not lines:
        raise MissingTrace(f"trace file is empty: {path}")
    return np.loadtxt(lines, delimiter=",", ndmin=2).reshape(-1, columns)


def read_metrics(trace_dir: str) -> np.ndarray:
    return _load_table(os.path.join(trace_dir, METRICS_FILE), 3)


def read_trajectory(trace_dir: str) -> np.ndarray:
    return _load_table(os.path.join(trace_dir, TRAJECTORY_FILE), 7)


def read_summary(trace_dir: str) -> dict:
    path = os.path.join(trace_dir, SUMMARY_FILE)
    if not os.path.isfile(path):
        raise MissingTrace(f"summary not found: {path}")
    with open(path, "r") as f:
        return json.load(f)
