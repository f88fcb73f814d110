"""Log-source panels along the tube legs.

phi(p) = integral over the panel of ln(|p - q| - d) dq, evaluated with composite
Gauss-Legendre quadrature. Sub-intervals double in length away from the foot of the
perpendicular from p, starting at the near-field scale sqrt(h (h - d)).
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.special import roots_legendre

from app.errors import ConstraintUnsatisfiable, LogDomain
from app.geometry import TrapezoidTube, cross_section
from app.geometry.polygon import as_point, segment_distance

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 32
LOG_FLOOR = 1e-12


@lru_cache(maxsize=16)
def _legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_legendre(order)
    return nodes, weights


@dataclass(frozen=True, eq=False)
class PanelField:
    a: np.ndarray
    b: np.ndarray
    d: float = 0.0
    k3: float = 1.0
    order: int = DEFAULT_ORDER

    def __post_init__(self):
        object.__setattr__(self, "a", as_point(self.a))
        object.__setattr__(self, "b", as_point(self.b))
        if np.allclose(self.a, self.b, rtol=0.0, atol=1e-15):
            raise ValueError("panel endpoints coincide")
        if self.d < 0:
            raise ValueError("panel threshold distance must be nonnegative")
        if self.order < 16:
            raise ValueError("quadrature order must be at least 16")

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.b - self.a))


def _breakpoints(x0: float, length: float, delta0: float) -> np.ndarray:
    points = [x0]
    step, x = delta0, x0
    while x < length:
        x = min(x + step, length)
        points.append(x)
        step *= 2.0
    step, x = delta0, x0
    while x > 0.0:
        x = max(x - step, 0.0)
        points.insert(0, x)
        step *= 2.0
    return np.array(points)


def _nodes(p: np.ndarray, field: PanelField):
    """Quadrature points on the panel and their weights (already scaled to arc length)."""
    length = field.length
    u = (field.b - field.a) / length
    h = segment_distance(p, field.a, field.b)
    if h - field.d <= LOG_FLOOR:
        raise LogDomain(f"point {p.tolist()} is within {field.d:.6g} of the panel")

    x0 = min(max(float(np.dot(p - field.a, u)), 0.0), length)
    delta0 = max(math.sqrt(h * (h - field.d)), 1e-9 * length)
    edges = _breakpoints(x0, length, delta0)
    lo, hi = edges[:-1], edges[1:]
    lo, hi = lo[hi > lo], hi[hi > lo]

    nodes, weights = _legendre(field.order)
    half = 0.5 * (hi - lo)
    xs = (0.5 * (hi + lo))[:, None] + half[:, None] * nodes[None, :]
    ws = half[:, None] * weights[None, :]
    xs, ws = xs.ravel(), ws.ravel()
    return field.a[None, :] + xs[:, None] * u[None, :], ws


def panel_potential(p: np.ndarray, field: PanelField) -> float:
    p = np.asarray(p, dtype=float)
    q, w = _nodes(p, field)
    r = np.hypot(p[0] - q[:, 0], p[1] - q[:, 1])
    return float(np.dot(w, np.log(r - field.d)))


def panel_gradient(p: np.ndarray, field: PanelField) -> np.ndarray:
    """d phi / dp, differentiated under the integral on the same nodes."""
    p = np.asarray(p, dtype=float)
    q, w = _nodes(p, field)
    diff = p[None, :] - q
    r = np.hypot(diff[:, 0], diff[:, 1])
    return (w / (r * (r - field.d))) @ diff


@dataclass(frozen=True, eq=False)
class ExtendedBoundary:
    """Leg panels [p_sle, p_fle] and [p_sre, p_fre] extended past the starting base."""
    p_fle: np.ndarray
    p_sle: np.ndarray
    p_fre: np.ndarray
    p_sre: np.ndarray
    lam: float

    def left_panel(self, d: float, k3: float = 1.0, order: int = DEFAULT_ORDER) -> PanelField:
        return PanelField(self.p_sle, self.p_fle, d=d, k3=k3, order=order)

    def right_panel(self, d: float, k3: float = 1.0, order: int = DEFAULT_ORDER) -> PanelField:
        return PanelField(self.p_sre, self.p_fre, d=d, k3=k3, order=order)


def extended_boundary(tube: TrapezoidTube, lam: float) -> ExtendedBoundary:
    """Extend both legs beyond the starting base by `lam` times their length."""
    if lam < 0:
        raise ValueError("extension factor must be nonnegative")
    return ExtendedBoundary(
        p_fle=tube.p_fl,
        p_sle=tube.p_sl + lam * (tube.p_sl - tube.p_fl),
        p_fre=tube.p_fr,
        p_sre=tube.p_sr + lam * (tube.p_sr - tube.p_fr),
        lam=lam,
    )


def keeping_potential(p: np.ndarray, field: PanelField) -> float:
    """V_t = -k3 phi; grows as the wall gets closer."""
    return -field.k3 * panel_potential(p, field)


def keeping_potential_gradient(p: np.ndarray, field: PanelField) -> np.ndarray:
    return -field.k3 * panel_gradient(p, field)


def interior_grid(tube: TrapezoidTube, per_side: int = 50, margin: float = 0.0) -> np.ndarray:
    """Cell centers of a per_side x per_side grid in section coordinates.

    Nodes within `margin` of a leg line are dropped.
    """
    fractions = (np.arange(per_side) + 0.5) / per_side
    height = tube.height
    points = []
    for along in fractions:
        section = cross_section(tube, tube.p_sr + along * height * tube.t_c)
        for across in fractions:
            p = section.p_l + across * (section.p_r - section.p_l)
            if min(np.dot(tube.n_l, p - tube.p_fl), np.dot(tube.n_r, p - tube.p_fr)) > margin:
                points.append(p)
    return np.array(points).reshape(-1, 2)


def direction_margins(tube: TrapezoidTube, extended: ExtendedBoundary, points: np.ndarray,
                      d: float, order: int = DEFAULT_ORDER) -> np.ndarray:
    """t_c . (-dV_tl/dp) and t_c . (-dV_tr/dp) at each point, shape (k, 2), with k3 = 1."""
    left = extended.left_panel(d, order=order)
    right = extended.right_panel(d, order=order)
    margins = np.empty((len(points), 2))
    for i, p in enumerate(points):
        margins[i, 0] = -float(np.dot(tube.t_c, keeping_potential_gradient(p, left)))
        margins[i, 1] = -float(np.dot(tube.t_c, keeping_potential_gradient(p, right)))
    return margins


def extend_boundaries(tube: TrapezoidTube, lambda0: float, d: float = 0.0, lambda_cap: float = 64.0,
                      per_side: int = 50, order: int = DEFAULT_ORDER) -> ExtendedBoundary:
    """Double the extension from lambda0 until both directional constraints hold on the grid."""
    if lambda0 < 1:
        raise ValueError(f"lambda0 must be at least 1, got {lambda0}")
    points = interior_grid(tube, per_side, margin=d)
    lam = float(lambda0)
    while lam <= lambda_cap:
        extended = extended_boundary(tube, lam)
        worst = float(direction_margins(tube, extended, points, d, order).min()) if len(points) else 0.0
        if worst >= 0.0:
            logger.debug(f"Directional constraints hold with lambda={lam}")
            return extended
        logger.debug(f"Directional constraints fail with lambda={lam} (worst {worst:.3e})")
        lam *= 2.0
    raise ConstraintUnsatisfiable(
        f"directional constraints still fail at the extension cap lambda={lambda_cap}")
