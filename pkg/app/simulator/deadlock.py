import logging
from typing import List, Optional

import numpy as np

from .models import DeadlockEvent, SimulationTrace

logger = logging.getLogger(__name__)


def detect_deadlock(trace: SimulationTrace, window: float = 2.0, v_eps: Optional[float] = None) -> List[DeadlockEvent]:
    """Agents whose commanded speed stays below v_eps for at least `window` seconds while not arrived."""
    if v_eps is None:
        v_eps = 1e-3 * float(np.max(trace.v_max))
    if not trace.commands:
        return []

    commands = np.asarray(trace.commands)
    speeds = np.hypot(commands[..., 0], commands[..., 1])
    waiting = ~np.asarray(trace.arrived[:-1])
    slow = (speeds < v_eps) & waiting
    needed = int(round(window / trace.dt))

    events = []
    for agent in range(slow.shape[1]):
        start = None
        for k, flag in enumerate(np.append(slow[:, agent], False)):
            if flag and start is None:
                start = k
            elif not flag and start is not None:
                if k - start >= needed:
                    events.append(DeadlockEvent(agent, trace.times[start], trace.times[k]))
                start = None
    for event in events:
        logger.info(f"Deadlock: agent {event.agent} stalled from t={event.start:.3f} to t={event.end:.3f}")
    return events
