"""Small planar helpers shared by the tube constructions.

Polygons are (k, 2) arrays of vertices in order; orientation may be either way.
"""
import math
from typing import Sequence

import numpy as np

Point2 = np.ndarray


def as_point(value: Sequence[float]) -> Point2:
    point = np.asarray(value, dtype=float).reshape(2)
    if not np.all(np.isfinite(point)):
        raise ValueError(f"point must have finite coordinates, got {value!r}")
    return point


def cross2(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def rot_cw(v: np.ndarray) -> np.ndarray:
    """Rotate by -90 degrees: (x, y) -> (y, -x)."""
    return np.array([v[1], -v[0]])


def unit(v: np.ndarray) -> np.ndarray:
    return v / math.hypot(v[0], v[1])


def norm(v: np.ndarray) -> float:
    return math.hypot(v[0], v[1])


def signed_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def is_convex(vertices: np.ndarray, tol: float = 1e-12) -> bool:
    """Strictly convex within `tol` (collinear triples count as non-convex)."""
    k = len(vertices)
    signs = []
    for i in range(k):
        a, b, c = vertices[i], vertices[(i + 1) % k], vertices[(i + 2) % k]
        signs.append(cross2(b - a, c - b))
    signs = np.array(signs)
    return bool(np.all(signs > tol) or np.all(signs < -tol))


def point_in_convex_polygon(p: np.ndarray, vertices: np.ndarray, tol: float = 1e-12) -> bool:
    """Boundary-inclusive membership test; `tol` is scaled by edge length."""
    orientation = 1.0 if signed_area(vertices) > 0 else -1.0
    k = len(vertices)
    for i in range(k):
        a, b = vertices[i], vertices[(i + 1) % k]
        edge = b - a
        if orientation * cross2(edge, p - a) < -tol * norm(edge):
            return False
    return True


def segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    ab = b - a
    length_sq = float(np.dot(ab, ab))
    if length_sq == 0.0:
        return norm(p - a)
    t = min(1.0, max(0.0, float(np.dot(p - a, ab)) / length_sq))
    return norm(p - (a + t * ab))


def polyline_distance(p: np.ndarray, points: np.ndarray) -> float:
    return min(segment_distance(p, points[i], points[i + 1]) for i in range(len(points) - 1))


def convex_polygons_overlap(first: np.ndarray, second: np.ndarray, tol: float = 1e-9) -> bool:
    """Separating-axis test. Polygons that only touch along an edge or vertex do not overlap."""
    for polygon in (first, second):
        k = len(polygon)
        for i in range(k):
            edge = polygon[(i + 1) % k] - polygon[i]
            axis = unit(np.array([-edge[1], edge[0]]))
            a = first @ axis
            b = second @ axis
            if a.max() <= b.min() + tol or b.max() <= a.min() + tol:
                return False
    return True


def line_intersection(p: np.ndarray, direction: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Intersection of the line p + s*direction with the line through a and b."""
    ab = b - a
    denom = cross2(direction, ab)
    if abs(denom) < 1e-15:
        raise ValueError("lines are parallel")
    s = cross2(a - p, ab) / denom
    return p + s * direction
