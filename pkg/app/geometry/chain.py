import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from app.errors import GeometryError, InvalidChain
from .models import Location, QuadrangleChain, QuadrangleDecomposition, Region, RegionFactors, TrapezoidTube
from .polygon import (
    as_point, convex_polygons_overlap, cross2, is_convex, line_intersection, point_in_convex_polygon,
    polyline_distance, rot_cw, signed_area, unit,
)
from .trapezoid import PARALLEL_TOL_RAD, build_trapezoid, contains, revised_safety_radius

logger = logging.getLogger(__name__)

AXIS_TOL_RAD = 1e-9
DEPTH_TOL = 1e-12


def _angle_between(a: np.ndarray, b: np.ndarray) -> float:
    return math.atan2(abs(cross2(a, b)), float(np.dot(a, b)))


def _inward_normal(a: np.ndarray, b: np.ndarray, centroid: np.ndarray) -> np.ndarray:
    n = unit(rot_cw(b - a))
    return n if np.dot(n, centroid - a) >= 0 else -n


def _trapezoid(p_fr, p_fl, p_sl, p_sr, what: str) -> TrapezoidTube:
    try:
        return build_trapezoid(p_fr, p_fl, p_sl, p_sr)
    except GeometryError as e:
        raise InvalidChain(f"{what}: {e}") from e


def _decompose(bases: np.ndarray, axes: np.ndarray, q: int) -> QuadrangleDecomposition:
    (f_r, f_l), (a_r, a_l) = bases[q], bases[q - 1]
    t = axes[q - 1]
    depth_l = float(np.dot(t, a_l - f_r))
    depth_r = float(np.dot(t, a_r - f_r))

    same_axis = q == 1 or _angle_between(t, axes[q - 2]) <= AXIS_TOL_RAD
    if same_axis or abs(depth_l - depth_r) <= DEPTH_TOL:
        quad = _trapezoid(f_r, f_l, a_l, a_r, f"quadrangle {q}")
        return QuadrangleDecomposition(inscribed=quad, circumscribed=quad, bottom=None,
                                       p_sl_prime=a_l, p_sr_prime=a_r)

    if depth_l > depth_r:
        # left previous vertex is deeper: the inscribed base runs from it across to the right leg
        p_sr_prime = f_r + (depth_l / depth_r) * (a_r - f_r)
        p_sl_prime = a_l
        circ_sl = f_l + (depth_r / depth_l) * (a_l - f_l)
        circ_sr = a_r
    else:
        p_sl_prime = f_l + (depth_r / depth_l) * (a_l - f_l)
        p_sr_prime = a_r
        circ_sl = a_l
        circ_sr = f_r + (depth_l / depth_r) * (a_r - f_r)

    inscribed = _trapezoid(f_r, f_l, p_sl_prime, p_sr_prime, f"inscribed trapezoid of quadrangle {q}")
    circumscribed = _trapezoid(f_r, f_l, circ_sl, circ_sr, f"circumscribed trapezoid of quadrangle {q}")
    bottom = _bottom_trapezoid(q, f_r, f_l, a_r, a_l, depth_l > depth_r, p_sl_prime, p_sr_prime, axes[q - 2])
    return QuadrangleDecomposition(inscribed=inscribed, circumscribed=circumscribed, bottom=bottom,
                                   p_sl_prime=p_sl_prime, p_sr_prime=p_sr_prime)


def _bottom_trapezoid(q: int, f_r, f_l, a_r, a_l, left_deeper: bool,
                      p_sl_prime, p_sr_prime, previous_axis: np.ndarray) -> TrapezoidTube:
    """Trapezoid between the previous base and the line orthogonal to the previous axis
    through the inscribed starting vertex that lies on a leg."""
    u = previous_axis
    across = rot_cw(u)
    if left_deeper:
        leg_point, shallow, deep, deep_end = p_sr_prime, a_r, a_l, f_l
    else:
        leg_point, shallow, deep, deep_end = p_sl_prime, a_l, a_r, f_r

    if np.dot(u, leg_point - shallow) <= DEPTH_TOL:
        raise InvalidChain(f"bottom trapezoid of quadrangle {q} does not advance along the previous axis")
    try:
        x = line_intersection(leg_point, across, deep, deep_end)
    except ValueError as e:
        raise InvalidChain(f"bottom trapezoid of quadrangle {q}: {e}") from e
    along = float(np.dot(x - deep, deep_end - deep) / np.dot(deep_end - deep, deep_end - deep))
    if along < -1e-9 or along > 1 + 1e-9:
        raise InvalidChain(f"bottom trapezoid of quadrangle {q} leaves its quadrangle")

    if left_deeper:
        return _trapezoid(leg_point, x, a_l, a_r, f"bottom trapezoid of quadrangle {q}")
    return _trapezoid(x, leg_point, a_l, a_r, f"bottom trapezoid of quadrangle {q}")


def _circumscribed_factor(decomposition: Optional[QuadrangleDecomposition]) -> float:
    if decomposition is None:
        return 0.0
    return revised_safety_radius(decomposition.circumscribed, 1.0)


def _region_factors(decompositions: List[QuadrangleDecomposition]) -> List[RegionFactors]:
    n = len(decompositions)
    factors = []
    for q in range(1, n + 1):
        own = _circumscribed_factor(decompositions[q - 1])
        previous = _circumscribed_factor(decompositions[q - 2]) if q > 1 else 0.0
        following = _circumscribed_factor(decompositions[q]) if q < n else 0.0
        bottom = decompositions[q - 1].bottom
        factors.append(RegionFactors(
            direct=own,
            inscribed=max(own, following),
            bottom=None if bottom is None else max(previous, own, revised_safety_radius(bottom, 1.0)),
        ))
    return factors


def build_chain(bases: Sequence[Sequence[Sequence[float]]]) -> QuadrangleChain:
    """Build a connected quadrangle tube from its ordered bases [(p_fr,q, p_fl,q)], q = 0..N.

    Travel runs from base 0 to base N, with p_fr on the right-hand side.
    Decompositions and revised-radius factors are computed here once.
    """
    try:
        points = np.array([[as_point(base[0]), as_point(base[1])] for base in bases])
    except (ValueError, TypeError, IndexError) as e:
        raise InvalidChain(f"bases must be a list of [p_fr, p_fl] point pairs: {e}") from e
    if len(points) < 2:
        raise InvalidChain("a chain needs at least two bases")

    n = len(points) - 1
    axes = np.array([unit(rot_cw(points[q][1] - points[q][0])) for q in range(1, n + 1)])

    if _angle_between(points[1][1] - points[1][0], points[0][1] - points[0][0]) > PARALLEL_TOL_RAD:
        raise InvalidChain("the first quadrangle must be a trapezoid")

    quads = []
    for q in range(1, n + 1):
        (f_r, f_l), (a_r, a_l) = points[q], points[q - 1]
        t = axes[q - 1]
        if np.dot(t, a_r - f_r) >= -DEPTH_TOL or np.dot(t, a_l - f_r) >= -DEPTH_TOL:
            raise InvalidChain(f"base {q} is not ahead of base {q - 1}")
        quad = np.array([f_r, f_l, a_l, a_r])
        if abs(signed_area(quad)) <= 1e-12 or not is_convex(quad):
            raise InvalidChain(f"quadrangle {q} is not convex with positive area")
        quads.append(quad)

    for i in range(n):
        for j in range(i + 2, n):
            if convex_polygons_overlap(quads[i], quads[j]):
                raise InvalidChain(f"quadrangles {i + 1} and {j + 1} overlap")

    left_normals, right_normals = [], []
    for q, quad in enumerate(quads, start=1):
        centroid = quad.mean(axis=0)
        left_normals.append(_inward_normal(points[q - 1][1], points[q][1], centroid))
        right_normals.append(_inward_normal(points[q - 1][0], points[q][0], centroid))

    decompositions = [_decompose(points, axes, q) for q in range(1, n + 1)]
    chain = QuadrangleChain(
        bases=points,
        t_c=axes,
        n_l=np.array(left_normals),
        n_r=np.array(right_normals),
        decompositions=decompositions,
        factors=_region_factors(decompositions),
    )
    logger.debug(f"Built chain with {n} quadrangles, "
                 f"{sum(d.bottom is not None for d in decompositions)} bottom trapezoids")
    return chain


def decompose_quadrangle(chain: QuadrangleChain, q: int) -> QuadrangleDecomposition:
    return chain.decomposition(q)


def locate(chain: QuadrangleChain, p: Sequence[float]) -> Location:
    """Quadrangle and region of p. Shared bases belong to the later quadrangle."""
    p = np.asarray(p, dtype=float)
    for q in range(chain.n, 0, -1):
        if not point_in_convex_polygon(p, chain.quadrangle(q)):
            continue
        decomposition = chain.decomposition(q)
        if decomposition.bottom is None or contains(decomposition.inscribed, p):
            return Location(q, Region.INSCRIBED)
        return Location(q, Region.BOTTOM)
    return Location(None, Region.OUTSIDE)


def chain_boundary_distance(chain: QuadrangleChain, p: Sequence[float]) -> float:
    """Euclidean distance from p to the nearer of the two leg polylines."""
    p = np.asarray(p, dtype=float)
    return min(polyline_distance(p, chain.left_wall), polyline_distance(p, chain.right_wall))
