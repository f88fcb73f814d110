"""Independent checks of the geometry, potentials and closed loop.

Geometric predicates here are recomputed from cross products rather than taken
from app.geometry, and derivatives are checked against central differences.
"""
import logging
import math
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.integrate import quad

from app.controller import ControllerParams, Logic
from app.errors import NonFinite, TubeSwarmError, WrongLogic
from app.geometry import (
    QuadrangleChain, Region, TrapezoidTube, build_trapezoid, leg_cosines, locate, revised_safety_radius,
    section_clearance,
)
from app.potentials import (
    BarrierParams, ExtendedBoundary, PanelField, b_coefficient, barrier_vm, barrier_vt, direction_margins,
    interior_grid, keeping_gradient, line_integral_lyapunov, panel_gradient, panel_potential,
)
from .models import OracleReport, tolerances

logger = logging.getLogger(__name__)


def _cross(a, b) -> float:
    return a[0] * b[1] - a[1] * b[0]


def _line_distance(p, a, b) -> float:
    return abs(_cross(b - a, p - a)) / math.hypot(*(b - a))


def _inside(p, vertices, band: float = 0.0) -> bool:
    """Convex polygon membership from edge cross products, either orientation."""
    k = len(vertices)
    signs = [_cross(vertices[(i + 1) % k] - vertices[i], p - vertices[i]) / math.hypot(*(vertices[(i + 1) % k] - vertices[i]))
             for i in range(k)]
    return all(s >= -band for s in signs) or all(s <= band for s in signs)


def _sample_polygon(vertices: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    lo, hi = vertices.min(axis=0), vertices.max(axis=0)
    points = []
    while len(points) < n:
        batch = rng.uniform(lo, hi, size=(max(n, 64), 2))
        points.extend(p for p in batch if _inside(p, vertices))
    return np.array(points[:n])


def _report(name: str, cases: int, abs_errors: Sequence[float], rel_errors: Sequence[float],
            worst: Optional[Sequence[float]], passed: bool, detail: str = "") -> OracleReport:
    report = OracleReport(
        name=name,
        cases=cases,
        max_abs_error=float(max(abs_errors, default=0.0)),
        max_rel_error=float(max(rel_errors, default=0.0)),
        worst_case=None if worst is None else [float(v) for v in np.ravel(worst)],
        passed=passed,
        detail=detail,
    )
    logger.info(report.summary_line())
    return report


def fd_gradient_oracle(func: Callable[[np.ndarray], float], point: Sequence[float],
                       step: float = tolerances.fd_step) -> np.ndarray:
    """Central-difference gradient of a scalar function."""
    x0 = np.atleast_1d(np.asarray(point, dtype=float))
    grad = np.zeros_like(x0)
    for j in range(len(x0)):
        x = x0.copy()
        try:
            x[j] = x0[j] + step
            f_plus = func(x)
            x[j] = x0[j] - step
            f_minus = func(x)
        except TubeSwarmError as e:
            raise NonFinite(f"function undefined within {step} of {x0.tolist()}: {e}") from e
        if not (math.isfinite(f_plus) and math.isfinite(f_minus)):
            raise NonFinite(f"function is not finite within {step} of {x0.tolist()}")
        grad[j] = (f_plus - f_minus) / (2.0 * step)
    return grad


def _compare(name: str, cases, rel: float = tolerances.gradient_rel,
             abs_floor: float = tolerances.gradient_abs) -> OracleReport:
    """cases: iterable of (input, analytic, finite-difference) triples."""
    abs_errors, rel_errors, worst, worst_excess, passed, count = [], [], None, -math.inf, True, 0
    for x, analytic, numeric in cases:
        count += 1
        err = float(np.linalg.norm(np.atleast_1d(analytic) - np.atleast_1d(numeric)))
        scale = float(np.linalg.norm(np.atleast_1d(numeric)))
        abs_errors.append(err)
        rel_errors.append(err / scale if scale > 0 else err)
        excess = err - (rel * scale + abs_floor)
        if excess > worst_excess:
            worst_excess, worst = excess, x
        if excess > 0:
            passed = False
    return _report(name, count, abs_errors, rel_errors, worst, passed)


def _default_tube() -> TrapezoidTube:
    return build_trapezoid((4.0, 2.0), (0.0, 2.0), (1.0, -2.0), (3.0, -2.0))


def gradient_oracle_suite(n: int = 1000, seed: int = 0, tube: Optional[TrapezoidTube] = None,
                          params=None) -> List[OracleReport]:
    """b_ij, panel gradient, dV_t/dd_t and c_i against central differences."""
    rng = np.random.default_rng(seed)
    params = params or ControllerParams(r_s=0.5, r_a=0.8)
    tube = tube or _default_tube()
    barrier = BarrierParams(k2=params.k2, r_s=params.r_s, r_a=params.r_a, eps_m=params.eps_m, eps_s=params.eps_s)
    step = tolerances.fd_step
    reports = []

    def b_cases():
        for dist in rng.uniform(2 * params.r_s + 1e-3, params.r_a + params.r_s - 1e-3, n):
            p_j = np.zeros(2)
            p_i = np.array([dist, 0.0])
            numeric = -fd_gradient_oracle(lambda x: barrier_vm(x[0], barrier), [dist], step)[0] / dist
            yield [dist], b_coefficient(p_i, p_j, barrier), numeric
    reports.append(_compare("b_coefficient", b_cases()))

    field = PanelField(tube.p_sl + 2.0 * (tube.p_sl - tube.p_fl), tube.p_fl, d=params.r_s, order=params.panel_order)

    def panel_cases():
        a, b = field.a, field.b
        count = 0
        while count < n:
            t = rng.uniform(-0.5, 1.5)
            offset = rng.uniform(field.d + 0.05, 5.0) * rng.choice([-1.0, 1.0])
            normal = np.array([-(b - a)[1], (b - a)[0]]) / field.length
            p = a + t * (b - a) + offset * normal
            if _segment_gap(p, a, b) <= field.d + 0.05:
                continue
            count += 1
            yield p, panel_gradient(p, field), fd_gradient_oracle(lambda x: panel_potential(x, field), p, step)
    reports.append(_compare("panel_gradient", panel_cases(), rel=tolerances.panel_gradient_rel))

    r_s_prime = revised_safety_radius(tube, params.r_s)
    r_a = max(params.r_a, r_s_prime + 0.3)

    def vt_cases():
        for d_t in rng.uniform(r_s_prime + 1e-3, r_a - 1e-3, n):
            analytic = barrier_vt(d_t, r_s_prime, r_a, params.k3, params.eps_t, params.eps_s)[1]
            numeric = fd_gradient_oracle(
                lambda x: barrier_vt(x[0], r_s_prime, r_a, params.k3, params.eps_t, params.eps_s)[0], [d_t], step)
            yield [d_t], analytic, numeric
    reports.append(_compare("barrier_vt_derivative", vt_cases()))

    keeping = params.copy(update={"r_a": r_a})

    def c_cases():
        count = 0
        for p in _points_in(tube, rng):
            along = float(np.dot(tube.t_c, p - tube.p_sr))
            if not 1e-4 < along < tube.height - 1e-4:
                continue
            d_t = section_clearance(tube, p)
            if not r_s_prime + 1e-3 < d_t < r_a - 1e-3:
                continue
            count += 1
            numeric = fd_gradient_oracle(
                lambda x: barrier_vt(section_clearance(tube, x), r_s_prime, r_a, keeping.k3, keeping.eps_t,
                                     keeping.eps_s)[0], p, step)
            yield p, keeping_gradient(tube, p, r_s_prime, keeping), numeric
            if count >= n:
                return
    reports.append(_compare("keeping_gradient", c_cases()))
    return reports


def _segment_gap(p, a, b) -> float:
    ab = b - a
    t = min(1.0, max(0.0, float(np.dot(p - a, ab) / np.dot(ab, ab))))
    return math.hypot(*(p - (a + t * ab)))


def _points_in(tube: TrapezoidTube, rng: np.random.Generator):
    while True:
        yield from _sample_polygon(tube.vertices, 256, rng)


def line_integral_oracle(n: int = 500, seed: int = 0) -> OracleReport:
    """Closed-form line-integral Lyapunov value against adaptive quadrature along the ray."""
    rng = np.random.default_rng(seed)
    abs_errors, rel_errors, worst, passed = [], [], None, True
    for _ in range(n):
        y = rng.uniform(-5.0, 5.0, 2)
        k1, a = rng.uniform(0.2, 3.0, 2)
        r = math.hypot(*y)
        knee = a / k1
        integrand = lambda s: min(k1 * s, a)
        numeric = quad(integrand, 0.0, r, points=[knee] if 0.0 < knee < r else None,
                       epsabs=1e-13, epsrel=1e-13)[0]
        closed = line_integral_lyapunov(y, k1, a)
        err = abs(closed - numeric)
        abs_errors.append(err)
        rel_errors.append(err / max(abs(numeric), 1e-300))
        if err > tolerances.quadrature * max(1.0, abs(numeric)):
            passed, worst = False, [y[0], y[1], k1, a]
    return _report("line_integral_lyapunov", n, abs_errors, rel_errors, worst, passed)


def prop1_oracle(tube: TrapezoidTube, r_s: float, n_samples: int = 10000, seed: int = 0,
                 r_s_prime: Optional[float] = None, two_way: Optional[bool] = None) -> OracleReport:
    """Compare the section-clearance test d_t > r_s' with true wall distance > r_s.

    Unsafe disagreements (section test passes, wall distance does not) always fail.
    Conservative ones fail only when two_way, which defaults to equal leg angles.
    """
    rng = np.random.default_rng(seed)
    if r_s_prime is None:
        r_s_prime = revised_safety_radius(tube, r_s)
    if two_way is None:
        cos_l, cos_r = leg_cosines(tube)
        two_way = abs(cos_l - cos_r) <= 1e-12
    band = tolerances.geometry_band

    unsafe = conservative = 0
    worst = None
    for p in _sample_polygon(tube.vertices, n_samples, rng):
        d_t = section_clearance(tube, p)
        wall = min(_line_distance(p, tube.p_fl, tube.p_sl), _line_distance(p, tube.p_fr, tube.p_sr))
        if abs(d_t - r_s_prime) <= band or abs(wall - r_s) <= band:
            continue
        section_safe, wall_safe = d_t > r_s_prime, wall > r_s
        if section_safe and not wall_safe:
            unsafe += 1
            worst = p
        elif wall_safe and not section_safe:
            conservative += 1
            worst = p if worst is None else worst
    passed = unsafe == 0 and (not two_way or conservative == 0)
    return _report("prop1", n_samples, [], [], worst, passed,
                   detail=f"unsafe={unsafe} conservative={conservative} two_way={two_way}")


def direction_constraint_sampler(tube: TrapezoidTube, extended: ExtendedBoundary, per_side: int = 50,
                                 d: float = 0.0, order: int = 32) -> OracleReport:
    """t_c . (-dV_tl/dp) >= 0 and t_c . (-dV_tr/dp) >= 0 on an interior grid."""
    points = interior_grid(tube, per_side, margin=d)
    margins = direction_margins(tube, extended, points, d, order)
    worst = None
    if len(points):
        index = int(np.argmin(margins.min(axis=1)))
        worst = points[index]
    lowest = float(margins.min()) if len(points) else 0.0
    passed = lowest >= -tolerances.direction
    return _report("direction_constraints", len(points), [max(-lowest, 0.0)], [], worst, passed,
                   detail=f"lambda={extended.lam} min_projection={lowest:.3e}")


def lyapunov_monotonicity_check(trace) -> OracleReport:
    """Every sampled discrete V-dot of a gradient-form run is at most the tolerance."""
    if trace.logic is not Logic.SINGLE_TRAPEZOID_V1:
        raise WrongLogic(f"Lyapunov monotonicity applies to single_trapezoid_v1 runs, not {trace.logic.value}")
    derivatives = [sample.derivative for sample in trace.lyapunov]
    worst = None
    if derivatives:
        top = int(np.argmax(derivatives))
        worst = [trace.lyapunov[top].t, derivatives[top]]
    passed = bool(derivatives) and max(derivatives) <= tolerances.lyapunov
    return _report("lyapunov_monotonicity", len(derivatives), [max(derivatives, default=0.0)], [], worst, passed,
                   detail="" if derivatives else "no samples")


def prop2_check(chain: QuadrangleChain) -> OracleReport:
    """Quadrangles whose axis matches the previous one have no bottom and equal trapezoids."""
    errors, worst, passed, cases = [], None, True, 0
    for q in range(2, chain.n + 1):
        a, b = chain.t_c[q - 1], chain.t_c[q - 2]
        if math.atan2(abs(_cross(a, b)), float(np.dot(a, b))) > 1e-9:
            continue
        cases += 1
        decomposition = chain.decomposition(q)
        gap = float(np.max(np.linalg.norm(decomposition.inscribed.vertices - decomposition.circumscribed.vertices,
                                          axis=1)))
        errors.append(gap)
        if decomposition.bottom is not None or gap > tolerances.geometry_band:
            passed, worst = False, [q]
    return _report("prop2", cases, errors, [], worst, passed)


def containment_check(chain: QuadrangleChain, q: int, n: int = 5000, seed: int = 0) -> OracleReport:
    """inscribed within the quadrangle within circumscribed; bottom within the quadrangle."""
    rng = np.random.default_rng(seed)
    decomposition = chain.decomposition(q)
    quad_vertices = chain.quadrangle(q)
    corners = np.vstack([decomposition.circumscribed.vertices, quad_vertices])
    band = tolerances.geometry_band
    failures, worst = 0, None
    for p in rng.uniform(corners.min(axis=0), corners.max(axis=0), size=(n, 2)):
        in_quad = _inside(p, quad_vertices, band)
        if _inside(p, decomposition.inscribed.vertices) and not in_quad:
            failures, worst = failures + 1, p
        if _inside(p, quad_vertices) and not _inside(p, decomposition.circumscribed.vertices, band):
            failures, worst = failures + 1, p
        if decomposition.bottom is not None and _inside(p, decomposition.bottom.vertices) and not in_quad:
            failures, worst = failures + 1, p
    return _report(f"containment[q={q}]", n, [], [], worst, failures == 0, detail=f"failures={failures}")


def locate_partition_check(chain: QuadrangleChain, n: int = 5000, seed: int = 0) -> OracleReport:
    """locate agrees with brute-force membership: latest containing quadrangle, then region."""
    rng = np.random.default_rng(seed)
    points = chain.bases.reshape(-1, 2)
    lo, hi = points.min(axis=0), points.max(axis=0)
    mismatches, worst = 0, None
    for p in rng.uniform(lo, hi, size=(n, 2)):
        owners = [q for q in range(1, chain.n + 1) if _inside(p, chain.quadrangle(q))]
        q, region = locate(chain, p)
        if not owners:
            ok = q is None and region is Region.OUTSIDE
        else:
            expected_q = max(owners)
            decomposition = chain.decomposition(expected_q)
            in_inscribed = decomposition.bottom is None or _inside(p, decomposition.inscribed.vertices)
            expected = Region.INSCRIBED if in_inscribed else Region.BOTTOM
            ok = q == expected_q and region is expected
        if not ok:
            mismatches, worst = mismatches + 1, p
    return _report("locate_partition", n, [], [], worst, mismatches == 0, detail=f"mismatches={mismatches}")
