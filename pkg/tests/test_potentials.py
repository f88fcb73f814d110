import math

import numpy as np
import pytest

from app.controller import ControllerParams
from app.errors import ConstraintUnsatisfiable, DomainViolation, LogDomain
from app.geometry import build_trapezoid, revised_safety_radius
from app.potentials import (
    BarrierParams, PanelField, SatSmoothParams, SmoothBumpParams, b_coefficient, barrier_vm, barrier_vt,
    direction_margins, extend_boundaries, interior_grid, kappa, keeping_gradient, line_integral_lyapunov,
    modified_keeping_term, panel_gradient, panel_potential, s_smooth, sat_vec, sigma, sigma_prime,
)
from app.verification import gradient_oracle_suite, line_integral_oracle


@pytest.fixture
def barrier():
    return BarrierParams(k2=1.0, r_s=0.5, r_a=0.8, eps_m=1e-6, eps_s=1e-6)


@pytest.fixture
def panel():
    return PanelField((0, -1), (0, 1))


def test_sat_vec_and_kappa():
    np.testing.assert_allclose(sat_vec((1, 0), 2), [1, 0])
    np.testing.assert_allclose(sat_vec((3, 4), 2.5), [1.5, 2.0])
    np.testing.assert_allclose(sat_vec((0, 0), 1), [0, 0])
    assert kappa(np.array([3.0, 4.0]), 2.5) == pytest.approx(0.5)
    assert kappa(np.array([0.1, 0.0]), 1) == 1.0
    assert kappa(np.array([0.0, 5.0]), 1) == pytest.approx(0.2)


def test_sigma_knots_and_midpoint():
    params = SmoothBumpParams(1.0, 2.0)
    assert sigma(1.0, params) == pytest.approx(1.0, abs=1e-9)
    assert sigma(2.0, params) == pytest.approx(0.0, abs=1e-9)
    assert sigma(1.5, params) == pytest.approx(0.5, abs=1e-12)
    assert sigma_prime(1.0 + 1e-12, params) == pytest.approx(0.0, abs=1e-9)
    assert sigma_prime(2.0 - 1e-12, params) == pytest.approx(0.0, abs=1e-9)
    values = [sigma(x, params) for x in np.linspace(1.0, 2.0, 1000)]
    assert all(b <= a + 1e-15 for a, b in zip(values, values[1:]))
    with pytest.raises(ValueError):
        SmoothBumpParams(2.0, 1.0)


def test_s_smooth_branches():
    params = SatSmoothParams(1e-6)
    assert s_smooth(0.5, params) == 0.5
    assert s_smooth(2.0, params) == 1.0
    assert s_smooth(params.x2, params) == pytest.approx(1.0, abs=1e-12)
    assert s_smooth(params.x1, params) == pytest.approx(params.x1, abs=1e-9)
    assert 0 < params.x1 < params.x2
    with pytest.raises(ValueError):
        SatSmoothParams(0.2)


def test_line_integral_lyapunov():
    assert line_integral_lyapunov(np.zeros(2), 1.0, 1.0) == 0.0
    assert line_integral_lyapunov(np.array([1.0, 0.0]), 1.0, 2.0) == pytest.approx(0.5)
    assert line_integral_lyapunov(np.array([3.0, 0.0]), 1.0, 1.0) == pytest.approx(2.5)


def test_line_integral_matches_quadrature():
    report = line_integral_oracle(n=500, seed=3)
    assert report.passed, report.summary_line()


def test_barrier_vm(barrier):
    assert barrier_vm(1.3, barrier) == 0.0
    expected = (20.0 / 27.0) / (1.1 * (1.0 + 1e-6) - 1.0)
    assert barrier_vm(1.1, barrier) == pytest.approx(expected, rel=1e-9)
    assert barrier_vm(1.1, barrier) == pytest.approx(7.407, rel=1e-3)
    with pytest.raises(DomainViolation):
        barrier_vm(1.0, barrier)


def test_barrier_vm_blows_up_at_contact(barrier):
    near = barrier_vm(1.0 + 1e-9, barrier)
    assert near > 5e5
    assert near > 100 * barrier_vm(1.0 + 1e-3, barrier)
    tight = BarrierParams(k2=1.0, r_s=0.2, r_a=0.4, eps_m=1e-6, eps_s=1e-6)
    assert barrier_vm(0.4 + 1e-9, tight) > 1e6


def test_barriers_vanish_beyond_outer_knot_and_are_positive_inside(barrier):
    for dist in np.linspace(1.0 + 1e-3, 1.3 - 1e-3, 200):
        assert barrier_vm(dist, barrier) > 0
    for dist in np.linspace(1.3, 3.0, 50):
        assert barrier_vm(dist, barrier) == 0.0
    assert barrier_vt(0.9, 0.5, 0.8, 1.0, 1e-6, 1e-6) == (0.0, 0.0)
    assert barrier_vt(0.6, 0.5, 0.8, 1.0, 1e-6, 1e-6)[0] > 0


def test_b_coefficient(barrier):
    assert b_coefficient(np.zeros(2), np.array([1.4, 0.0]), barrier) == 0.0
    p_i, p_j = np.array([0.3, 0.2]), np.array([1.4, 0.3])
    assert b_coefficient(p_i, p_j, barrier) == b_coefficient(p_j, p_i, barrier)
    assert b_coefficient(p_i, p_j, barrier) > 0


def test_barrier_vt_grows_near_revised_radius():
    values = [barrier_vt(0.5 + gap, 0.5, 0.8, 1.0, 1e-6, 1e-6)[0] for gap in (1e-1, 1e-2, 1e-4, 1e-7)]
    assert all(b > a for a, b in zip(values, values[1:]))
    with pytest.raises(DomainViolation):
        barrier_vt(0.5, 0.5, 0.8, 1.0, 1e-6, 1e-6)


def test_panel_far_field(panel):
    assert panel_potential((100, 0), panel) == pytest.approx(2 * math.log(100), abs=1e-3)


def test_panel_symmetry(panel):
    assert panel_potential((0.7, 0.4), panel) == pytest.approx(panel_potential((0.7, -0.4), panel), rel=1e-12)
    assert abs(panel_gradient((1, 0), panel)[1]) < 1e-10
    assert panel_gradient((1, 0), panel)[0] > 0


def test_panel_gradient_parallel_beyond_endpoint(panel):
    gradient = panel_gradient((0, 2), panel)
    assert abs(gradient[0]) < 1e-10
    assert gradient[1] > 0


def test_panel_log_domain():
    field = PanelField((0, -1), (0, 1), d=0.5)
    with pytest.raises(LogDomain):
        panel_potential((0.5, 0.0), field)
    with pytest.raises(ValueError):
        PanelField((0, 0), (0, 0))


def test_gradient_oracle_suite_passes():
    reports = gradient_oracle_suite(n=1000, seed=0)
    assert [report.name for report in reports] == [
        "b_coefficient", "panel_gradient", "barrier_vt_derivative", "keeping_gradient"]
    for report in reports:
        assert report.passed, report.summary_line()
        assert report.cases == 1000


def test_modified_keeping_term(corridor):
    params = ControllerParams(r_s=0.2, r_a=0.8)
    r_s_prime = revised_safety_radius(corridor, params.r_s)
    np.testing.assert_allclose(modified_keeping_term(corridor, np.array([5.0, 0.0]), r_s_prime, params), 0.0)

    wide = ControllerParams(r_s=0.2, r_a=0.3)
    np.testing.assert_allclose(modified_keeping_term(corridor, np.array([5.0, 0.5]), r_s_prime, wide), 0.0)

    near_left = np.array([5.0, 0.6])
    term = modified_keeping_term(corridor, near_left, r_s_prime, params)
    assert abs(np.dot(term, corridor.t_c)) <= 1e-12
    # the term is a gradient of the barrier, so it points at the wall the agent is pushed away from
    assert np.dot(-term, corridor.n_l) > 0
    c = keeping_gradient(corridor, near_left, r_s_prime, params)
    projector = np.eye(2) - np.outer(corridor.t_c, corridor.t_c)
    np.testing.assert_allclose(projector @ (projector @ c), projector @ c, atol=1e-15)


def test_modified_keeping_term_is_zero_on_trapezoid_midline(wide_trapezoid):
    params = ControllerParams(r_s=0.2, r_a=2.0)
    r_s_prime = revised_safety_radius(wide_trapezoid, params.r_s)
    term = modified_keeping_term(wide_trapezoid, np.array([0.0, 0.5]), r_s_prime, params)
    np.testing.assert_allclose(term, 0.0, atol=1e-15)


def test_extend_boundaries_on_long_thin_rectangle(corridor):
    extended = extend_boundaries(corridor, 3.0, d=0.2, per_side=20)
    assert extended.lam == 3.0
    points = interior_grid(corridor, 20, margin=0.2)
    assert np.all(direction_margins(corridor, extended, points, 0.2) >= 0.0)
    doubled = extend_boundaries(corridor, 2 * extended.lam, d=0.2, per_side=20)
    assert doubled.lam == 2 * extended.lam
    np.testing.assert_allclose(extended.p_fle, corridor.p_fl)
    np.testing.assert_allclose(extended.p_sle, corridor.p_sl + 3.0 * (corridor.p_sl - corridor.p_fl))


def test_extend_boundaries_gives_up_on_converging_legs():
    narrowing = build_trapezoid((4, -1), (4, 1), (0, 5), (0, -5))
    with pytest.raises(ConstraintUnsatisfiable):
        extend_boundaries(narrowing, 3.0, d=0.2, lambda_cap=12.0, per_side=20)
