from dataclasses import dataclass, field
from enum import Enum
from typing import List, NamedTuple, Optional

import numpy as np

from app.errors import InvalidIndex


class Region(str, Enum):
    INSCRIBED = "inscribed"
    BOTTOM = "bottom"
    OUTSIDE = "outside"


@dataclass(frozen=True, eq=False)
class TrapezoidTube:
    """Trapezoid virtual tube.

    Vertices are named finishing-right, finishing-left, starting-left, starting-right.
    `t_c` points from the starting base toward the finishing base, and the leg normals
    `n_l`, `n_r` point into the tube.
    """
    p_fr: np.ndarray
    p_fl: np.ndarray
    p_sl: np.ndarray
    p_sr: np.ndarray
    t_c: np.ndarray
    n_l: np.ndarray
    n_r: np.ndarray

    @property
    def height(self) -> float:
        return float(np.dot(self.t_c, self.p_fr - self.p_sr))

    @property
    def vertices(self) -> np.ndarray:
        return np.array([self.p_fr, self.p_fl, self.p_sl, self.p_sr])

    @property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)


@dataclass(frozen=True, eq=False)
class CrossSection:
    p_l: np.ndarray
    p_r: np.ndarray
    r_t: float
    m: np.ndarray


class SectionDerivatives(NamedTuple):
    """Constant derivatives of the cross section with respect to p.

    dp_l/dp = e_l t_c^T and dp_r/dp = e_r t_c^T; the midline Jacobian and the
    half-width gradient follow from those two.
    """
    e_l: np.ndarray
    e_r: np.ndarray
    midline_jacobian: np.ndarray
    half_width_gradient: np.ndarray


@dataclass(frozen=True, eq=False)
class QuadrangleDecomposition:
    inscribed: TrapezoidTube
    circumscribed: TrapezoidTube
    bottom: Optional[TrapezoidTube]
    p_sl_prime: np.ndarray
    p_sr_prime: np.ndarray


@dataclass(frozen=True, eq=False)
class RegionFactors:
    """Revised-radius multipliers (radius = r_s * factor) for the regions of one quadrangle."""
    direct: float
    inscribed: float
    bottom: Optional[float]


@dataclass(frozen=True, eq=False)
class QuadrangleChain:
    """Connected quadrangle tube given by its ordered bases [(p_fr,q, p_fl,q)], q = 0..N.

    Quadrangle q (1-based) runs from base q-1 to base q.
    """
    bases: np.ndarray
    t_c: np.ndarray
    n_l: np.ndarray
    n_r: np.ndarray
    decompositions: List[QuadrangleDecomposition] = field(default_factory=list)
    factors: List[RegionFactors] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.bases) - 1

    def check_index(self, q: int) -> int:
        if not isinstance(q, (int, np.integer)) or not 1 <= q <= self.n:
            raise InvalidIndex(f"quadrangle index {q!r} outside 1..{self.n}")
        return int(q)

    def quadrangle(self, q: int) -> np.ndarray:
        """Vertices (p_fr,q, p_fl,q, p_fl,q-1, p_fr,q-1) of quadrangle q."""
        q = self.check_index(q)
        return np.array([self.bases[q][0], self.bases[q][1], self.bases[q - 1][1], self.bases[q - 1][0]])

    def axis(self, q: int) -> np.ndarray:
        return self.t_c[self.check_index(q) - 1]

    def decomposition(self, q: int) -> QuadrangleDecomposition:
        return self.decompositions[self.check_index(q) - 1]

    def region_factors(self, q: int) -> RegionFactors:
        return self.factors[self.check_index(q) - 1]

    @property
    def left_wall(self) -> np.ndarray:
        return self.bases[:, 1]

    @property
    def right_wall(self) -> np.ndarray:
        return self.bases[:, 0]

    @property
    def finishing_base(self) -> np.ndarray:
        return self.bases[-1]


class Location(NamedTuple):
    q: Optional[int]
    region: Region
