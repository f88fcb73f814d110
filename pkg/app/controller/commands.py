import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from app.errors import DomainViolation, OutsideTube, SafetyBreach, TubeBreach
from app.geometry import TrapezoidTube, contains, section_clearance
from app.geometry.polygon import rot_cw, unit
from app.potentials import (
    BarrierParams, ExtendedBoundary, b_coefficient, barrier_vm, keeping_potential,
    keeping_potential_gradient, line_integral_lyapunov, modified_keeping_term, sat_vec,
)
from .models import AgentState, ControllerParams, ForceBreakdown, SwarmState

logger = logging.getLogger(__name__)


def neighbor_set(agent: AgentState, swarm: SwarmState, r_s: float, r_a: float) -> List[int]:
    """Indices j != i of non-arrived agents within r_a + r_s."""
    offsets = swarm.positions - agent.p
    dist = np.hypot(offsets[:, 0], offsets[:, 1])
    mask = (dist <= r_a + r_s) & ~swarm.arrived
    mask[agent.id] = False
    return [int(j) for j in np.flatnonzero(mask)]


def avoidance_sum(agent: AgentState, swarm: SwarmState, barrier: BarrierParams) -> np.ndarray:
    """Sum over neighbors of b_ij (p_i - p_j)."""
    total = np.zeros(2)
    for j in neighbor_set(agent, swarm, barrier.r_s, barrier.r_a):
        p_j = swarm.positions[j]
        try:
            total += b_coefficient(agent.p, p_j, barrier) * (agent.p - p_j)
        except DomainViolation as e:
            raise SafetyBreach(str(e)).with_context(agents=(agent.id, j)) from e
    return total


def line_approaching_error(tube: TrapezoidTube, p: np.ndarray) -> np.ndarray:
    """P_t (p - p_fr): the component of the offset to the finishing line along the axis."""
    return tube.t_c * float(np.dot(tube.t_c, p - tube.p_fr))


def controller1(tube: TrapezoidTube, agent: AgentState, swarm: SwarmState, params: ControllerParams,
                extended: ExtendedBoundary, barrier: Optional[BarrierParams] = None,
                avoidance_sign: float = 1.0) -> np.ndarray:
    """Gradient-form command on a single trapezoid with panel tube keeping."""
    if not contains(tube, agent.p):
        raise OutsideTube(f"agent {agent.id} at {agent.p.tolist()} is outside the tube")
    barrier = barrier or params.barrier_params()

    error = line_approaching_error(tube, agent.p)
    line_term = tube.t_c * float(np.dot(tube.t_c, sat_vec(params.k1 * error, agent.v_max)))
    avoidance = avoidance_sign * avoidance_sum(agent, swarm, barrier)
    keeping = (
        keeping_potential_gradient(agent.p, extended.left_panel(params.r_s, params.k3, params.panel_order))
        + keeping_potential_gradient(agent.p, extended.right_panel(params.r_s, params.k3, params.panel_order))
    )
    return -sat_vec(line_term - avoidance + keeping, agent.v_max)


def force_breakdown(tube: TrapezoidTube, agent: AgentState, swarm: SwarmState, params: ControllerParams,
                    r_s_prime: float, barrier: Optional[BarrierParams] = None) -> ForceBreakdown:
    barrier = barrier or params.barrier_params()
    d_t = section_clearance(tube, agent.p)
    if d_t <= r_s_prime:
        raise TubeBreach(
            f"agent {agent.id} has section clearance {d_t:.6g} <= r_s' = {r_s_prime:.6g}"
        ).with_context(agents=(agent.id,))
    return ForceBreakdown(
        f1=agent.v_max * tube.t_c,
        f2=avoidance_sum(agent, swarm, barrier),
        f3=-modified_keeping_term(tube, agent.p, r_s_prime, params),
    )


def controller2(tube: TrapezoidTube, agent: AgentState, swarm: SwarmState, params: ControllerParams,
                r_s_prime: float, barrier: Optional[BarrierParams] = None) -> np.ndarray:
    """Modified command: constant line approaching plus the projected tube-keeping term."""
    forces = force_breakdown(tube, agent, swarm, params, r_s_prime, barrier)
    return -sat_vec(-forces.f1 - forces.f2 - forces.f3, agent.v_max)


def arrival_check(p: np.ndarray, finishing_line: Sequence[np.ndarray], eps_0: float) -> bool:
    """True once p is within eps_0 of the finishing line [p_fr, p_fl] or past it."""
    p_fr, p_fl = (np.asarray(v, dtype=float) for v in finishing_line)
    t_c = unit(rot_cw(p_fl - p_fr))
    return -float(np.dot(t_c, p - p_fr)) <= eps_0


def agent_lyapunov(tube: TrapezoidTube, extended: ExtendedBoundary, agent: AgentState, swarm: SwarmState,
                   params: ControllerParams, barrier: BarrierParams, active: Sequence[int]) -> float:
    """V_l + 1/2 sum_j V_m + V_tl + V_tr for one agent, over the given active set."""
    value = line_integral_lyapunov(line_approaching_error(tube, agent.p), params.k1, agent.v_max)
    for j in active:
        if j == agent.id:
            continue
        p_j = swarm.positions[j]
        dist = math.hypot(agent.p[0] - p_j[0], agent.p[1] - p_j[1])
        if dist < barrier.r_a + barrier.r_s:
            try:
                value += 0.5 * barrier_vm(dist, barrier)
            except DomainViolation as e:
                raise SafetyBreach(str(e)).with_context(agents=(agent.id, j)) from e
    value += keeping_potential(agent.p, extended.left_panel(params.r_s, params.k3, params.panel_order))
    value += keeping_potential(agent.p, extended.right_panel(params.r_s, params.k3, params.panel_order))
    return value


def total_lyapunov(tube: TrapezoidTube, extended: ExtendedBoundary, swarm: SwarmState,
                   params: ControllerParams, active: Optional[Sequence[int]] = None) -> float:
    """Total V over the active agents (default: every agent not yet arrived)."""
    if active is None:
        active = [i for i in range(swarm.size) if not swarm.arrived[i]]
    barrier = params.barrier_params()
    return sum(agent_lyapunov(tube, extended, swarm.agent(i), swarm, params, barrier, active) for i in active)

