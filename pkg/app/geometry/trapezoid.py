import math
from typing import Sequence

import numpy as np

from app.errors import DegenerateLegAngle, DegenerateTube, NonParallelBases, OutOfSlab, OutsideTube
from .models import CrossSection, SectionDerivatives, TrapezoidTube
from .polygon import as_point, cross2, is_convex, norm, rot_cw, signed_area, unit

PARALLEL_TOL_RAD = 1e-6
AREA_TOL = 1e-12
HALFPLANE_TOL = 1e-12
MIN_COS = 1e-9


def _inward_normal(a: np.ndarray, b: np.ndarray, centroid: np.ndarray) -> np.ndarray:
    n = unit(rot_cw(b - a))
    if np.dot(n, centroid - a) < 0:
        n = -n
    return n


def build_trapezoid(p_fr: Sequence[float], p_fl: Sequence[float],
                    p_sl: Sequence[float], p_sr: Sequence[float]) -> TrapezoidTube:
    """Build a trapezoid tube from its finishing (fr, fl) and starting (sl, sr) vertices."""
    p_fr, p_fl, p_sl, p_sr = (as_point(v) for v in (p_fr, p_fl, p_sl, p_sr))

    finishing = p_fl - p_fr
    starting = p_sl - p_sr
    if norm(finishing) <= AREA_TOL or norm(starting) <= AREA_TOL:
        raise DegenerateTube("zero-length base")

    angle = math.atan2(abs(cross2(finishing, starting)), float(np.dot(finishing, starting)))
    if angle > PARALLEL_TOL_RAD and abs(angle - math.pi) > PARALLEL_TOL_RAD:
        raise NonParallelBases(f"bases differ by {angle:.3e} rad")

    vertices = np.array([p_fr, p_fl, p_sl, p_sr])
    if abs(signed_area(vertices)) <= AREA_TOL or not is_convex(vertices):
        raise DegenerateTube("trapezoid is not convex with positive area (crossing legs?)")

    t_c = unit(rot_cw(finishing))
    if np.dot(t_c, p_fr - p_sr) < 0:
        t_c = -t_c
    if np.dot(t_c, p_fr - p_sr) <= AREA_TOL:
        raise DegenerateTube("trapezoid has zero height")

    centroid = vertices.mean(axis=0)
    n_l = _inward_normal(p_fl, p_sl, centroid)
    n_r = _inward_normal(p_fr, p_sr, centroid)
    return TrapezoidTube(p_fr=p_fr, p_fl=p_fl, p_sl=p_sl, p_sr=p_sr, t_c=t_c, n_l=n_l, n_r=n_r)


def contains(tube: TrapezoidTube, x: Sequence[float], tol: float = HALFPLANE_TOL) -> bool:
    p = np.asarray(x, dtype=float)
    return bool(
        np.dot(tube.t_c, p - tube.p_fr) <= tol
        and np.dot(tube.t_c, p - tube.p_sr) >= -tol
        and np.dot(tube.n_l, p - tube.p_fl) >= -tol
        and np.dot(tube.n_r, p - tube.p_fr) >= -tol
    )


def in_slab(tube: TrapezoidTube, p: np.ndarray, tol: float = 1e-9) -> bool:
    return bool(np.dot(tube.t_c, p - tube.p_fr) <= tol and np.dot(tube.t_c, p - tube.p_sr) >= -tol)


def cross_section(tube: TrapezoidTube, p: Sequence[float]) -> CrossSection:
    p = np.asarray(p, dtype=float)
    if not in_slab(tube, p):
        raise OutOfSlab(f"point {p.tolist()} is outside the base-to-base slab")

    lam_l = np.dot(tube.t_c, p - tube.p_fl) / np.dot(tube.t_c, tube.p_sl - tube.p_fl)
    lam_r = np.dot(tube.t_c, p - tube.p_fr) / np.dot(tube.t_c, tube.p_sr - tube.p_fr)
    p_l = tube.p_fl + lam_l * (tube.p_sl - tube.p_fl)
    p_r = tube.p_fr + lam_r * (tube.p_sr - tube.p_fr)
    return CrossSection(p_l=p_l, p_r=p_r, r_t=0.5 * norm(p_r - p_l), m=0.5 * (p_l + p_r))


def section_clearance(tube: TrapezoidTube, p: Sequence[float]) -> float:
    """d_t = r_t(p) - |p - m(p)|, the clearance measured along the cross section."""
    p = np.asarray(p, dtype=float)
    section = cross_section(tube, p)
    return section.r_t - norm(p - section.m)


def tube_width(tube: TrapezoidTube) -> float:
    return 0.5 * min(norm(tube.p_fl - tube.p_fr), norm(tube.p_sl - tube.p_sr))


def boundary_distance(tube: TrapezoidTube, p: Sequence[float]) -> float:
    p = np.asarray(p, dtype=float)
    if not contains(tube, p):
        raise OutsideTube(f"point {p.tolist()} is outside the tube")
    return float(min(np.dot(tube.n_l, p - tube.p_fl), np.dot(tube.n_r, p - tube.p_fr)))


def leg_cosines(tube: TrapezoidTube) -> tuple:
    """Cosines of the angles between each leg and the axis."""
    left = tube.p_sl - tube.p_fl
    right = tube.p_sr - tube.p_fr
    return (-float(np.dot(tube.t_c, left)) / norm(left), -float(np.dot(tube.t_c, right)) / norm(right))


def revised_safety_radius(tube: TrapezoidTube, r_s: float) -> float:
    cos_min = min(leg_cosines(tube))
    if cos_min <= MIN_COS:
        raise DegenerateLegAngle(f"leg is orthogonal to the tube axis (cos = {cos_min:.3e})")
    return r_s / cos_min


def section_derivatives(tube: TrapezoidTube) -> SectionDerivatives:
    left = tube.p_sl - tube.p_fl
    right = tube.p_sr - tube.p_fr
    e_l = left / np.dot(tube.t_c, left)
    e_r = right / np.dot(tube.t_c, right)
    w_hat = unit(tube.p_fr - tube.p_fl)
    return SectionDerivatives(
        e_l=e_l,
        e_r=e_r,
        midline_jacobian=0.5 * np.outer(e_l + e_r, tube.t_c),
        half_width_gradient=0.5 * float(np.dot(w_hat, e_r - e_l)) * tube.t_c,
    )
