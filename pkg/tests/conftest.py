import json
import math

import numpy as np
import pytest

from app.controller import ControllerParams
from app.geometry import build_chain, build_trapezoid


@pytest.fixture
def unit_square():
    return build_trapezoid((1, 1), (0, 1), (0, 0), (1, 0))


@pytest.fixture
def wide_trapezoid():
    """Legs at 45 degrees, bases y=0 (narrow) and y=1 (wide)."""
    return build_trapezoid((2, 1), (-2, 1), (-1, 0), (1, 0))


@pytest.fixture
def corridor():
    """Rectangle 2 wide along +x from x=0 to x=20."""
    return build_trapezoid((20, -1), (20, 1), (0, 1), (0, -1))


@pytest.fixture
def straight_chain():
    return build_chain([[(0, 0), (0, 2)], [(4, 0), (4, 2)], [(8, 0), (8, 2)], [(12, 0), (12, 2)]])


@pytest.fixture
def sharp_chain():
    """Rectangle, then a 45 degree turn, then another 45 degree turn to +y."""
    return build_chain([[(-6, 0), (-6, 2)], [(-3, 0), (-3, 2)], [(2, 0), (0, 2)], [(2, 5), (0, 5)]])


@pytest.fixture
def params():
    return ControllerParams(r_s=0.2, r_a=0.8)


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def write_scenario(path, tube, agents, params, sim):
    payload = {
        "version": "tubeswarm/1",
        "tube": tube,
        "agents": [{"position": list(p), "v_max": v} for p, v in agents],
        "params": params,
        "sim": sim,
    }
    path.write_text(json.dumps(payload, indent=2))
    return str(path)
