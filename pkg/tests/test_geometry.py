import math

import numpy as np
import pytest

from app.errors import DegenerateTube, InvalidChain, InvalidIndex, NonParallelBases, OutOfSlab, OutsideTube
from app.geometry import (
    Region, boundary_distance, build_chain, build_trapezoid, chain_boundary_distance, contains, cross_section,
    decompose_quadrangle, locate, revised_safety_radius, section_derivatives, tube_width,
)
from app.geometry.polygon import signed_area
from app.verification import containment_check, locate_partition_check, prop2_check


def test_unit_square_axis_and_normals(unit_square):
    np.testing.assert_allclose(unit_square.t_c, [0, 1], atol=1e-15)
    np.testing.assert_allclose(unit_square.n_l, [1, 0], atol=1e-15)
    np.testing.assert_allclose(unit_square.n_r, [-1, 0], atol=1e-15)


def test_leg_normals_of_45_degree_trapezoid(wide_trapezoid):
    np.testing.assert_allclose(wide_trapezoid.n_l, np.array([1, 1]) / math.sqrt(2), atol=1e-12)
    np.testing.assert_allclose(wide_trapezoid.n_r, np.array([-1, 1]) / math.sqrt(2), atol=1e-12)
    assert abs(np.dot(wide_trapezoid.n_l, wide_trapezoid.p_sl - wide_trapezoid.p_fl)) <= 1e-9
    assert abs(np.dot(wide_trapezoid.t_c, wide_trapezoid.p_sr - wide_trapezoid.p_sl)) <= 1e-9


def test_build_trapezoid_rejects_degenerate_input():
    with pytest.raises(DegenerateTube):
        build_trapezoid((1, 1), (1, 1), (0, 0), (1, 0))
    with pytest.raises(NonParallelBases):
        build_trapezoid((1, 1), (0, 1.5), (0, 0), (1, 0))


def test_contains_is_boundary_inclusive(unit_square):
    assert contains(unit_square, unit_square.centroid)
    assert contains(unit_square, unit_square.p_fr)
    assert not contains(unit_square, np.array([0.0, 0.5]) - 1e-6 * unit_square.n_l)


def test_cross_section(unit_square, wide_trapezoid):
    section = cross_section(unit_square, (0.3, 0.5))
    np.testing.assert_allclose(section.p_l, [0, 0.5])
    np.testing.assert_allclose(section.p_r, [1, 0.5])
    assert section.r_t == pytest.approx(0.5)
    np.testing.assert_allclose(section.m, [0.5, 0.5])

    section = cross_section(wide_trapezoid, (0, 0.5))
    np.testing.assert_allclose(section.p_l, [-1.5, 0.5])
    np.testing.assert_allclose(section.p_r, [1.5, 0.5])
    assert section.r_t == pytest.approx(1.5)

    finishing = cross_section(wide_trapezoid, (0.7, 1.0))
    np.testing.assert_allclose(finishing.p_l, wide_trapezoid.p_fl, atol=1e-12)
    np.testing.assert_allclose(finishing.p_r, wide_trapezoid.p_fr, atol=1e-12)

    with pytest.raises(OutOfSlab):
        cross_section(unit_square, (0.5, 2.0))


def test_cross_section_midpoint_property_on_samples(wide_trapezoid):
    rng = np.random.default_rng(1)
    checked = 0
    while checked < 10000:
        p = rng.uniform((-2, 0), (2, 1))
        if not contains(wide_trapezoid, p):
            continue
        section = cross_section(wide_trapezoid, p)
        assert np.linalg.norm(section.p_l - section.m) == pytest.approx(section.r_t, abs=1e-9)
        assert np.linalg.norm(section.p_r - section.m) == pytest.approx(section.r_t, abs=1e-9)
        checked += 1


def test_tube_width(unit_square, wide_trapezoid):
    assert tube_width(unit_square) == pytest.approx(0.5)
    assert tube_width(wide_trapezoid) == pytest.approx(1.0)
    assert tube_width(build_trapezoid((4, -1), (4, 1), (0, 1), (0, -1))) == pytest.approx(1.0)


def test_boundary_distance(unit_square, wide_trapezoid):
    assert boundary_distance(unit_square, (0.5, 0.5)) == pytest.approx(0.5)
    assert boundary_distance(unit_square, (0.2, 0.5)) == pytest.approx(0.2)
    assert boundary_distance(wide_trapezoid, (0, 0.5)) == pytest.approx(1.5 * math.cos(math.pi / 4))
    with pytest.raises(OutsideTube):
        boundary_distance(unit_square, (2.0, 0.5))


def test_revised_safety_radius(unit_square, wide_trapezoid):
    assert revised_safety_radius(unit_square, 0.5) == pytest.approx(0.5)
    assert revised_safety_radius(wide_trapezoid, 0.5) == pytest.approx(0.5 * math.sqrt(2))
    mixed = build_trapezoid((2 + math.sqrt(3), 1), (0, 1), (0, 0), (2, 0))
    assert revised_safety_radius(mixed, 0.2) == pytest.approx(0.4)


def test_section_derivatives_match_finite_differences(wide_trapezoid):
    derivatives = section_derivatives(wide_trapezoid)
    p, h = np.array([0.3, 0.4]), 1e-6
    for k in range(2):
        step = np.zeros(2)
        step[k] = h
        ahead, behind = cross_section(wide_trapezoid, p + step), cross_section(wide_trapezoid, p - step)
        np.testing.assert_allclose((ahead.m - behind.m) / (2 * h), derivatives.midline_jacobian[:, k], atol=1e-7)
        assert (ahead.r_t - behind.r_t) / (2 * h) == pytest.approx(derivatives.half_width_gradient[k], abs=1e-7)


def test_build_chain_rejects_invalid_chains():
    with pytest.raises(InvalidChain):
        build_chain([[(0, 0), (0, 2)], [(4, 0), (3, 2)]])
    with pytest.raises(InvalidChain):
        build_chain([[(0, 0), (0, 2)], [(4, 0), (4, 2)], [(2, 0), (2, 2)]])
    with pytest.raises(InvalidChain):
        build_chain([[(0, 0), (0, 2)]])


def test_decompose_first_quadrangle_is_itself(sharp_chain):
    decomposition = decompose_quadrangle(sharp_chain, 1)
    assert decomposition.bottom is None
    np.testing.assert_allclose(decomposition.inscribed.vertices, sharp_chain.quadrangle(1))
    np.testing.assert_allclose(decomposition.circumscribed.vertices, sharp_chain.quadrangle(1))
    with pytest.raises(InvalidIndex):
        decompose_quadrangle(sharp_chain, 0)


def test_decompose_turn(sharp_chain):
    decomposition = decompose_quadrangle(sharp_chain, 3)
    np.testing.assert_allclose(decomposition.inscribed.vertices, [[2, 5], [0, 5], [0, 2], [2, 2]], atol=1e-12)
    np.testing.assert_allclose(decomposition.bottom.vertices, [[2, 2], [0, 4], [0, 2], [2, 0]], atol=1e-12)
    inscribed_area = abs(signed_area(decomposition.inscribed.vertices))
    assert inscribed_area < abs(signed_area(sharp_chain.quadrangle(3)))
    assert inscribed_area < abs(signed_area(decomposition.circumscribed.vertices))
    for q in (2, 3):
        assert containment_check(sharp_chain, q, n=5000).passed


def test_region_factors_of_turns(sharp_chain):
    factors = sharp_chain.region_factors(2)
    assert factors.direct == pytest.approx(math.sqrt(2))
    assert factors.bottom == pytest.approx(math.sqrt(2))
    assert sharp_chain.region_factors(1).inscribed == pytest.approx(math.sqrt(2))


def test_straight_chain_has_no_bottom(straight_chain):
    report = prop2_check(straight_chain)
    assert report.passed and report.cases == 2


def test_prop2_on_random_collinear_chains():
    rng = np.random.default_rng(7)
    for _ in range(50):
        x, bases = 0.0, []
        for _ in range(3):
            half, shift = rng.uniform(1.0, 3.0), rng.uniform(-0.5, 0.5)
            bases.append([(x, shift - half), (x, shift + half)])
            x += rng.uniform(2.0, 5.0)
        theta = rng.uniform(0, 2 * math.pi)
        c, s = math.cos(theta), math.sin(theta)
        rotated = [[(c * px - s * py, s * px + c * py) for px, py in base] for base in bases]
        report = prop2_check(build_chain(rotated))
        assert report.passed and report.cases == 1


def test_locate(straight_chain, sharp_chain):
    assert locate(straight_chain, (2, 1)) == (1, Region.INSCRIBED)
    assert locate(straight_chain, (4, 1)) == (2, Region.INSCRIBED)
    assert locate(straight_chain, (-1, 1)) == (None, Region.OUTSIDE)
    assert locate(sharp_chain, (-3, 1)) == (2, Region.BOTTOM)
    assert locate(sharp_chain, (1, 3)) == (3, Region.INSCRIBED)


def test_locate_is_a_partition(sharp_chain, straight_chain):
    assert locate_partition_check(sharp_chain, n=5000).passed
    assert locate_partition_check(straight_chain, n=2000).passed


def test_chain_boundary_distance(sharp_chain):
    assert chain_boundary_distance(sharp_chain, (-4, 0.5)) == pytest.approx(0.5)
    assert chain_boundary_distance(sharp_chain, (1.5, 3.0)) == pytest.approx(0.5)
