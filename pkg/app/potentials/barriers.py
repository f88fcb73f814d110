import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Tuple

import numpy as np

from app.errors import DomainViolation
from app.geometry import TrapezoidTube, cross_section, section_derivatives
from app.geometry.polygon import rot_cw
from .smoothing import SatSmoothParams, SmoothBumpParams, s_smooth, s_smooth_prime, sigma, sigma_prime


@lru_cache(maxsize=256)
def _bump(d1: float, d2: float) -> SmoothBumpParams:
    return SmoothBumpParams(d1, d2)


@lru_cache(maxsize=64)
def _sat(eps_s: float) -> SatSmoothParams:
    return SatSmoothParams(eps_s)


@dataclass(frozen=True)
class BarrierParams:
    """Agent-agent barrier with safety radius r_s and avoidance radius r_a."""
    k2: float
    r_s: float
    r_a: float
    eps_m: float
    eps_s: float
    bump: SmoothBumpParams = field(init=False, repr=False)
    sat: SatSmoothParams = field(init=False, repr=False)

    def __post_init__(self):
        if not self.r_a > self.r_s > 0:
            raise ValueError(f"need r_a > r_s > 0, got r_s={self.r_s}, r_a={self.r_a}")
        if self.k2 <= 0 or self.eps_m <= 0:
            raise ValueError("k2 and eps_m must be positive")
        object.__setattr__(self, "bump", _bump(2.0 * self.r_s, self.r_a + self.r_s))
        object.__setattr__(self, "sat", _sat(self.eps_s))


def _barrier(x: float, inner: float, gain: float, eps: float,
             bump: SmoothBumpParams, sat: SatSmoothParams) -> Tuple[float, float]:
    """gain * sigma(x) / ((1 + eps) x - inner s(x / inner)) and its derivative in x."""
    if x >= bump.d2:
        return 0.0, 0.0
    denominator = (1.0 + eps) * x - inner * s_smooth(x / inner, sat)
    denominator_prime = (1.0 + eps) - s_smooth_prime(x / inner, sat)
    value = sigma(x, bump)
    value_prime = sigma_prime(x, bump)
    return (
        gain * value / denominator,
        gain * (value_prime * denominator - value * denominator_prime) / (denominator * denominator),
    )


def barrier_vm(dist: float, params: BarrierParams) -> float:
    if dist <= 2.0 * params.r_s:
        raise DomainViolation(f"agent distance {dist:.6g} is within 2 r_s = {2.0 * params.r_s:.6g}")
    return _barrier(dist, 2.0 * params.r_s, params.k2, params.eps_m, params.bump, params.sat)[0]


def barrier_vm_prime(dist: float, params: BarrierParams) -> float:
    if dist <= 2.0 * params.r_s:
        raise DomainViolation(f"agent distance {dist:.6g} is within 2 r_s = {2.0 * params.r_s:.6g}")
    return _barrier(dist, 2.0 * params.r_s, params.k2, params.eps_m, params.bump, params.sat)[1]


def b_coefficient(p_i: np.ndarray, p_j: np.ndarray, params: BarrierParams) -> float:
    """b_ij = -(dV_m/d|p_i - p_j|) / |p_i - p_j|, zero outside the avoidance range."""
    dist = math.hypot(p_i[0] - p_j[0], p_i[1] - p_j[1])
    if dist >= params.r_a + params.r_s:
        return 0.0
    return -barrier_vm_prime(dist, params) / dist


def barrier_vt(d_t: float, r_s_prime: float, r_a: float, k3: float,
               eps_t: float, eps_s: float) -> Tuple[float, float]:
    """Tube-keeping barrier V_t(d_t) and dV_t/dd_t."""
    if r_a <= r_s_prime:
        raise ValueError(f"r_a={r_a} must exceed the revised safety radius {r_s_prime}")
    if d_t <= r_s_prime:
        raise DomainViolation(f"section clearance {d_t:.6g} is within r_s' = {r_s_prime:.6g}")
    return _barrier(d_t, r_s_prime, k3, eps_t, _bump(r_s_prime, r_a), _sat(eps_s))


def clearance_gradient(tube: TrapezoidTube, p: np.ndarray) -> Tuple[float, np.ndarray]:
    """d_t(p) and its gradient, using the affine cross-section derivatives.

    The gradient of |p - m(p)| is taken as zero when p lies on the midline.
    """
    section = cross_section(tube, p)
    derivatives = section_derivatives(tube)
    offset = p - section.m
    distance = math.hypot(offset[0], offset[1])
    d_t = section.r_t - distance
    if distance == 0.0:
        return d_t, derivatives.half_width_gradient.copy()
    g = offset / distance
    slope = 0.5 * (derivatives.e_l + derivatives.e_r)
    return d_t, derivatives.half_width_gradient - g + tube.t_c * float(np.dot(slope, g))


def keeping_gradient(tube: TrapezoidTube, p: np.ndarray, r_s_prime: float, params) -> np.ndarray:
    """c_i = dV_t/dp before projection; `params` needs k3, eps_t, eps_s and r_a."""
    p = np.asarray(p, dtype=float)
    d_t, grad = clearance_gradient(tube, p)
    _, v_prime = barrier_vt(d_t, r_s_prime, params.r_a, params.k3, params.eps_t, params.eps_s)
    if v_prime == 0.0:
        return np.zeros(2)
    return v_prime * grad


def modified_keeping_term(tube: TrapezoidTube, p: np.ndarray, r_s_prime: float, params) -> np.ndarray:
    """(I - t_c t_c^T) c_i, exactly orthogonal to the tube axis.

    It points toward the nearer wall; controllers subtract it.
    """
    c = keeping_gradient(tube, p, r_s_prime, params)
    n = rot_cw(tube.t_c)
    return n * float(np.dot(n, c))
