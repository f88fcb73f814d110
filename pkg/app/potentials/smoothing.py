"""Saturation, smooth step and line-integral Lyapunov helpers."""
import math
from dataclasses import dataclass, field

import numpy as np


def kappa(v: np.ndarray, v_max: float) -> float:
    if v_max <= 0:
        raise ValueError("v_max must be positive")
    speed = math.hypot(v[0], v[1])
    return 1.0 if speed <= v_max else v_max / speed


def sat_vec(v: np.ndarray, v_max: float) -> np.ndarray:
    """Scale v down to norm v_max, keeping its direction."""
    v = np.asarray(v, dtype=float)
    return kappa(v, v_max) * v


@dataclass(frozen=True)
class SmoothBumpParams:
    """Cubic step that is 1 below d1, 0 above d2 and C1 in between."""
    d1: float
    d2: float
    a: float = field(init=False)
    b: float = field(init=False)
    c: float = field(init=False)
    d: float = field(init=False)

    def __post_init__(self):
        if not 0 < self.d1 < self.d2:
            raise ValueError(f"need 0 < d1 < d2, got d1={self.d1}, d2={self.d2}")
        cube = (self.d1 - self.d2) ** 3
        object.__setattr__(self, "a", -2.0 / cube)
        object.__setattr__(self, "b", 3.0 * (self.d1 + self.d2) / cube)
        object.__setattr__(self, "c", -6.0 * self.d1 * self.d2 / cube)
        object.__setattr__(self, "d", self.d2 ** 2 * (3.0 * self.d1 - self.d2) / cube)


def sigma(x: float, params: SmoothBumpParams) -> float:
    if x <= params.d1:
        return 1.0
    if x >= params.d2:
        return 0.0
    return ((params.a * x + params.b) * x + params.c) * x + params.d


def sigma_prime(x: float, params: SmoothBumpParams) -> float:
    if x <= params.d1 or x >= params.d2:
        return 0.0
    return (3.0 * params.a * x + 2.0 * params.b) * x + params.c


@dataclass(frozen=True)
class SatSmoothParams:
    """Smoothed min(x, 1): identity up to x1, a circular arc up to x2, then 1."""
    eps_s: float
    x1: float = field(init=False)
    x2: float = field(init=False)

    def __post_init__(self):
        if not 0 < self.eps_s < 0.1:
            raise ValueError(f"eps_s must lie in (0, 0.1), got {self.eps_s}")
        x2 = 1.0 + self.eps_s / math.tan(math.radians(67.5))
        object.__setattr__(self, "x2", x2)
        object.__setattr__(self, "x1", x2 - math.sin(math.radians(45.0)) * self.eps_s)


def s_smooth(x: float, params: SatSmoothParams) -> float:
    if x <= params.x1:
        return x
    if x >= params.x2:
        return 1.0
    dx = x - params.x2
    return (1.0 - params.eps_s) + math.sqrt(max(params.eps_s ** 2 - dx * dx, 0.0))


def s_smooth_prime(x: float, params: SatSmoothParams) -> float:
    if x <= params.x1:
        return 1.0
    if x >= params.x2:
        return 0.0
    dx = x - params.x2
    return -dx / math.sqrt(params.eps_s ** 2 - dx * dx)


def line_integral_lyapunov(y: np.ndarray, k1: float, a: float) -> float:
    """Closed form of the line integral of sat(k1 x, a) from 0 to y."""
    if k1 <= 0 or a <= 0:
        raise ValueError("k1 and a must be positive")
    r = math.hypot(y[0], y[1])
    if k1 * r <= a:
        return 0.5 * k1 * r * r
    return a * a / (2.0 * k1) + a * (r - a / k1)
