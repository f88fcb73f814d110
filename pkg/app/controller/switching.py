import logging
from typing import Optional

import numpy as np

from app.errors import Outside, TubeSwarmError
from app.geometry import QuadrangleChain, Region, locate
from app.potentials import ExtendedBoundary, extend_boundaries
from .commands import controller1, controller2, force_breakdown
from .models import ActiveRegion, AgentState, ControllerParams, ForceBreakdown, Logic, SwarmState

logger = logging.getLogger(__name__)


class ChainController:
    """Applies one control logic over a quadrangle chain.

    Region radii are r_s times the factors computed with the chain, so the
    controller itself holds no per-agent state.
    """

    def __init__(self, chain: QuadrangleChain, params: ControllerParams, logic: Logic = Logic.MODIFIED,
                 avoidance_sign: float = 1.0):
        self.chain = chain
        self.params = params
        self.logic = Logic(logic)
        self.avoidance_sign = avoidance_sign
        self.barrier = params.barrier_params()
        self.extended: Optional[ExtendedBoundary] = None
        if self.logic is Logic.SINGLE_TRAPEZOID_V1:
            self.extended = extend_boundaries(
                self.single_tube, params.lambda0, d=params.r_s, lambda_cap=params.lambda_cap,
                order=params.panel_order,
            )
            logger.info(f"Extended tube boundaries with lambda={self.extended.lam}")

    @property
    def single_tube(self):
        return self.chain.decomposition(1).inscribed

    @property
    def finishing_line(self) -> np.ndarray:
        return self.chain.finishing_base

    def _region(self, p: np.ndarray, direct: bool) -> ActiveRegion:
        q, region = locate(self.chain, p)
        if q is None:
            raise Outside(f"point {np.asarray(p).tolist()} is outside every quadrangle")
        decomposition = self.chain.decomposition(q)
        factors = self.chain.region_factors(q)
        r_s = self.params.r_s
        if direct:
            return ActiveRegion(q, region, decomposition.circumscribed, r_s * factors.direct)
        if region is Region.BOTTOM:
            return ActiveRegion(q, region, decomposition.bottom, r_s * factors.bottom)
        return ActiveRegion(q, region, decomposition.inscribed, r_s * factors.inscribed)

    def active_region(self, p: np.ndarray) -> ActiveRegion:
        """Trapezoid and revised radius the active logic uses at p."""
        return self._region(p, direct=self.logic is Logic.DIRECT)

    def switch_direct(self, agent: AgentState, swarm: SwarmState) -> np.ndarray:
        """controller2 on the circumscribed trapezoid of the agent's quadrangle."""
        active = self._region(agent.p, direct=True)
        return controller2(active.tube, agent, swarm, self.params, active.r_s_prime, self.barrier)

    def switch_modified(self, agent: AgentState, swarm: SwarmState) -> np.ndarray:
        """controller2 on the inscribed or bottom trapezoid, by region."""
        active = self._region(agent.p, direct=False)
        return controller2(active.tube, agent, swarm, self.params, active.r_s_prime, self.barrier)

    def command(self, agent: AgentState, swarm: SwarmState) -> np.ndarray:
        try:
            if self.logic is Logic.SINGLE_TRAPEZOID_V1:
                return controller1(self.single_tube, agent, swarm, self.params, self.extended, self.barrier,
                                   self.avoidance_sign)
            if self.logic is Logic.DIRECT:
                return self.switch_direct(agent, swarm)
            return self.switch_modified(agent, swarm)
        except TubeSwarmError as e:
            if not e.agents:
                e.with_context(agents=(agent.id,))
            raise

    def forces(self, agent: AgentState, swarm: SwarmState) -> ForceBreakdown:
        if self.logic is Logic.SINGLE_TRAPEZOID_V1:
            raise ValueError("force breakdown is defined for the modified controller only")
        active = self.active_region(agent.p)
        return force_breakdown(active.tube, agent, swarm, self.params, active.r_s_prime, self.barrier)
