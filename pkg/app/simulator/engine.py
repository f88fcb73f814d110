import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.optimize import root
from scipy.spatial.distance import pdist

from app.controller import ChainController, Logic, SwarmState, arrival_check, total_lyapunov
from app.errors import SafetyBreach, TubeBreach, TubeSwarmError
from app.geometry import chain_boundary_distance, locate, section_clearance, tube_width
from app.settings import settings
from .models import LyapunovSample, Outcome, ScenarioConfig, SimulationTrace, ValidationReport

logger = logging.getLogger(__name__)


def validate_scenario(cfg: ScenarioConfig) -> ValidationReport:
    """Check the initial state and the tube against the run's preconditions; one entry per violated clause."""
    chain, params = cfg.chain, cfg.params
    violations = []

    if cfg.logic in (Logic.SINGLE_TRAPEZOID_V1, Logic.SINGLE_TRAPEZOID_V2) and chain.n != 1:
        violations.append(f"single-trapezoid logic needs a one-quadrangle tube, got {chain.n}")

    radii = [params.r_s * chain.region_factors(q).direct for q in range(1, chain.n + 1)]
    padded = [0.0] + radii + [0.0]
    for q in range(1, chain.n + 1):
        needed = max(padded[q - 1], padded[q], padded[q + 1])
        width = tube_width(chain.decomposition(q).circumscribed)
        if width <= needed:
            violations.append(
                f"quadrangle {q} is not wide enough for at least one agent to pass "
                f"(half-width {width:.4f} <= {needed:.4f})")
        factors = chain.region_factors(q)
        largest = params.r_s * max(factors.direct, factors.inscribed, factors.bottom or 0.0)
        if params.r_a <= largest and cfg.logic is not Logic.SINGLE_TRAPEZOID_V1:
            violations.append(
                f"avoidance radius {params.r_a} must exceed revised safety radius {largest:.4f} in quadrangle {q}")

    controller = None if cfg.logic is Logic.SINGLE_TRAPEZOID_V1 else ChainController(chain, params, cfg.logic)
    for i, p in enumerate(cfg.positions):
        q, _ = locate(chain, p)
        if q is None or chain_boundary_distance(chain, p) <= params.r_s:
            violations.append(f"disk outside tube: agent {i}")
            continue
        if controller is None:
            continue
        active = controller.active_region(p)
        d_t = section_clearance(active.tube, p)
        if d_t <= active.r_s_prime:
            violations.append(
                f"agent {i} clearance {d_t:.4f} is within the revised safety radius {active.r_s_prime:.4f}")

    for i in range(len(cfg.positions)):
        for j in range(i + 1, len(cfg.positions)):
            dist = float(np.linalg.norm(cfg.positions[i] - cfg.positions[j]))
            if dist <= 2.0 * params.r_s:
                violations.append(f"initial overlap: agents {i} and {j} at distance {dist:.4f}")

    for violation in violations:
        logger.warning(f"Scenario violation: {violation}")
    return ValidationReport(violations=violations)


def compute_commands(controller: ChainController, swarm: SwarmState, active: Sequence[int],
                     pool: Optional[ThreadPoolExecutor] = None) -> np.ndarray:
    """Commands for the active agents from one snapshot; inactive rows stay zero."""
    commands = np.zeros_like(swarm.positions)
    agents = [swarm.agent(i) for i in active]
    if pool is None:
        results = [controller.command(agent, swarm) for agent in agents]
    else:
        results = list(pool.map(lambda agent: controller.command(agent, swarm), agents))
    for i, v in zip(active, results):
        commands[i] = v
    return commands


def step(swarm: SwarmState, cfg: ScenarioConfig, controller: ChainController,
         pool: Optional[ThreadPoolExecutor] = None):
    """One synchronous Euler step. Returns (next state, commands)."""
    active = [i for i in range(swarm.size) if not swarm.arrived[i]]
    commands = compute_commands(controller, swarm, active, pool)
    following = swarm.copy()
    following.positions[active] += cfg.dt * commands[active]
    finishing = controller.finishing_line
    for i in active:
        if arrival_check(following.positions[i], finishing, cfg.params.eps_0):
            following.arrived[i] = True
    return following, commands


def _metrics(cfg: ScenarioConfig, positions: np.ndarray, active: Sequence[int]):
    min_pair, pair = math.inf, ()
    if len(active) > 1:
        distances = pdist(positions[active])
        k = int(np.argmin(distances))
        min_pair = float(distances[k])
        a, b = np.triu_indices(len(active), 1)
        pair = (active[a[k]], active[b[k]])
    min_boundary, closest = math.inf, None
    for i in active:
        dist = chain_boundary_distance(cfg.chain, positions[i])
        if dist < min_boundary:
            min_boundary, closest = dist, i
    return min_pair, pair, min_boundary, closest


def _lyapunov(controller: ChainController, swarm: SwarmState, active: Sequence[int]) -> float:
    return total_lyapunov(controller.single_tube, controller.extended, swarm, controller.params, active)


def run(cfg: ScenarioConfig, workers: Optional[int] = None,
        controller: Optional[ChainController] = None) -> SimulationTrace:
    """Integrate until every agent arrives or t_end is reached."""
    workers = settings.workers if workers is None else workers
    controller = controller or ChainController(cfg.chain, cfg.params, cfg.logic, cfg.avoidance_sign)
    swarm = cfg.initial_state()
    finishing = controller.finishing_line
    for i in range(swarm.size):
        swarm.arrived[i] = arrival_check(swarm.positions[i], finishing, cfg.params.eps_0)

    trace = SimulationTrace(dt=cfg.dt, v_max=cfg.v_max.copy(), r_s=cfg.params.r_s, logic=cfg.logic)
    trace.times.append(0.0)
    trace.positions.append(swarm.positions.copy())
    trace.arrived.append(swarm.arrived.copy())
    arrival_times = np.where(swarm.arrived, 0.0, np.nan)
    snapshots = {int(round(t / cfg.dt)): t for t in cfg.snapshot_times}
    every = max(settings.lyapunov_every, 1)
    sample_lyapunov = cfg.logic is Logic.SINGLE_TRAPEZOID_V1

    logger.info(f"Starting run: {swarm.size} agents, {cfg.chain.n} quadrangles, logic={cfg.logic.value}, "
                f"dt={cfg.dt}, t_end={cfg.t_end}, workers={workers}")
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for k in range(cfg.steps):
            if swarm.arrived.all():
                break
            active = [i for i in range(swarm.size) if not swarm.arrived[i]]
            t = k * cfg.dt
            if k in snapshots and cfg.logic is not Logic.SINGLE_TRAPEZOID_V1:
                trace.breakdowns[snapshots[k]] = [
                    None if swarm.arrived[i] else controller.forces(swarm.agent(i), swarm)
                    for i in range(swarm.size)
                ]
            try:
                before = _lyapunov(controller, swarm, active) if sample_lyapunov and k % every == 0 else None
                started = time.perf_counter()
                following, commands = step(swarm, cfg, controller, pool)
                trace.command_time.append(time.perf_counter() - started)

                min_pair, pair, min_boundary, closest = _metrics(cfg, following.positions, active)
                if min_pair <= 2.0 * cfg.params.r_s:
                    raise SafetyBreach(f"agents at distance {min_pair:.6g} <= 2 r_s").with_context(k, pair)
                if min_boundary <= cfg.params.r_s:
                    raise TubeBreach(f"agent at wall distance {min_boundary:.6g} <= r_s").with_context(k, (closest,))

                if before is not None:
                    after = _lyapunov(controller, following, active)
                    trace.lyapunov.append(LyapunovSample(k, t, before, (after - before) / cfg.dt))
            except TubeSwarmError as e:
                if e.step is None:
                    e.with_context(step=k, agents=e.agents)
                trace.arrival_times = arrival_times
                trace.outcome = Outcome.BREACH
                e.partial = trace
                logger.error(f"Run stopped at t={t:.3f}: {e}")
                raise

            t_next = (k + 1) * cfg.dt
            for i in active:
                if following.arrived[i]:
                    arrival_times[i] = t_next
                    logger.info(f"Agent {i} arrived at t={t_next:.3f}")

            swarm = following
            trace.times.append(t_next)
            trace.positions.append(swarm.positions.copy())
            trace.arrived.append(swarm.arrived.copy())
            trace.commands.append(commands)
            trace.min_pair_dist.append(min_pair)
            trace.min_boundary_dist.append(min_boundary)
    finally:
        if pool is not None:
            pool.shutdown()

    trace.arrival_times = arrival_times
    trace.outcome = Outcome.COMPLETED if swarm.arrived.all() else Outcome.TIMEOUT
    logger.info(f"Run finished: outcome={trace.outcome.value}, steps={trace.steps}, "
                f"arrived={int(swarm.arrived.sum())}/{swarm.size}, "
                f"mean command time={trace.mean_command_time * 1e3:.3f} ms")
    return trace


class EquilibriumResult(NamedTuple):
    positions: np.ndarray
    residual: float
    success: bool


def find_equilibrium(cfg: ScenarioConfig, controller: Optional[ChainController] = None,
                     tol: float = 1e-12) -> EquilibriumResult:
    """Positions near cfg.positions where every agent's command vanishes."""
    controller = controller or ChainController(cfg.chain, cfg.params, cfg.logic, cfg.avoidance_sign)
    v_max = cfg.v_max
    arrived = np.zeros(len(v_max), dtype=bool)
    active = list(range(len(v_max)))

    def residual(x: np.ndarray) -> np.ndarray:
        swarm = SwarmState(x.reshape(-1, 2), v_max, arrived)
        try:
            return compute_commands(controller, swarm, active).ravel()
        except TubeSwarmError:
            return np.full(x.shape, 1e3)

    solution = root(residual, cfg.positions.ravel(), method="hybr", tol=tol)
    positions = solution.x.reshape(-1, 2)
    norm = float(np.max(np.abs(residual(solution.x))))
    if not solution.success:
        logger.warning(f"Equilibrium search did not converge: {solution.message}")
    logger.info(f"Equilibrium residual {norm:.3e}")
    return EquilibriumResult(positions, norm, bool(solution.success))
