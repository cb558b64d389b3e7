import math

import numpy as np
import pytest

from conetwist.algebra import su2_rotation
from conetwist.cone import (
    PathSpec, develop_path, double_polygon, double_square, equator_curve, flat_polyline_curve,
    football, football_circle, football_length_bound, generated_group, holonomy_of_complex,
    is_splittable, polygon_vertices, straight_curve, winding_along,
)
from conetwist.errors import DegenerateError, PreconditionError
from conetwist.groups import chars_distance, fingerprint, relation_defect

Y0 = 0.291


@pytest.fixture(scope="module")
def square():
    return double_square()


@pytest.mark.parametrize("alpha", [1.0, math.pi, 4.5, 7.5])
def test_football_area_and_defects(alpha):
    cx = football(alpha)
    # a lune of angle alpha has area 2 alpha
    assert abs(cx.area() - 2 * alpha) < 1e-12
    assert cx.gauss_bonnet_defect() < 1e-12
    assert cx.edge_length_defect() < 1e-12
    assert cx.cone_angle_defect() < 1e-12


def test_double_square_area_from_gauss_bonnet(square):
    # 4 pi - sum (2 pi - theta_i) with theta_i = 4 pi / 3
    assert abs(square.area() - 4 * math.pi / 3) < 1e-12
    assert square.gauss_bonnet_defect() < 1e-12


def test_double_square_holonomy(square):
    rep = holonomy_of_complex(square)
    assert relation_defect(rep) < 1e-12
    for m in rep.mats:
        assert abs(np.trace(m) - 2 * math.cos(2 * math.pi / 3)) < 1e-12
    group = generated_group(rep.mats)
    assert len(group) == 24


def test_football_holonomy_traces():
    alpha = 2.2
    rep = holonomy_of_complex(football(alpha))
    tr = np.trace(rep.mats, axis1=1, axis2=2)
    assert abs(tr[1] - 2) < 1e-12
    assert np.abs(np.abs(tr[[0, 2]]) - 2 * abs(math.cos(alpha / 2))).max() < 1e-12


def test_global_rotation_gives_same_character(square, rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    u = su2_rotation(q[1:] / np.linalg.norm(q[1:]), 2 * math.acos(q[0]))
    moved = square.transformed(u)
    a, b = holonomy_of_complex(square), holonomy_of_complex(moved)
    assert np.abs(fingerprint(a) - fingerprint(b)).max() < 1e-10


def test_rotated_start_gives_same_winding(square):
    path = straight_curve(square, 1, 1)
    w0 = winding_along(square, path).winding
    for k in (1, 3, len(path.crossings) - 1):
        assert abs(winding_along(square, path.rotated(k)).winding - w0) < 1e-10


def test_contractible_path_has_trivial_holonomy(square):
    pts = [[0.6, 0.2, 0.2], [0.2, 0.6, 0.2], [0.2, 0.2, 0.6]]
    path = PathSpec(tuple((0, pts[k], pts[(k + 1) % 3]) for k in range(3)))
    assert np.abs(develop_path(square, path).holonomy - np.eye(2)).max() < 1e-15


def test_path_through_vertex_is_rejected(square):
    path = PathSpec(((0, [1.0, 0.0, 0.0], [0.2, 0.4, 0.4]), (0, [0.2, 0.4, 0.4], [1.0, 0.0, 0.0])))
    with pytest.raises(PreconditionError):
        develop_path(square, path)


@pytest.mark.parametrize("p,q,angle", [(1, 0, math.pi), (0, 1, math.pi), (1, 1, 4 * math.pi / 3),
                                        (1, 3, 8 * math.pi / 3)])
def test_straight_curve_cone_angles(square, p, q, angle):
    w = winding_along(square, straight_curve(square, p, q))
    assert abs(abs(w.winding) - angle) < 1e-9
    # the winding agrees with the rotation angle of the holonomy modulo 2 pi
    r = w.winding % (2 * math.pi)
    assert min(abs(r - w.rotation_angle), abs(r - (2 * math.pi - w.rotation_angle))) < 1e-9


def test_central_holonomy_is_degenerate(square):
    with pytest.raises(DegenerateError):
        winding_along(square, straight_curve(square, 1, 2))


def test_equator_is_splittable(square):
    s = is_splittable(square, equator_curve(square))
    assert s.splittable and s.sign == 1 and s.block_sign == -1
    assert abs(s.cone_angle - math.pi) < 1e-9


def test_homotopy_across_cone_point_changes_winding_by_2pi(square):
    base = winding_along(square, flat_polyline_curve(square, [(-0.3, Y0), (3.7, Y0)])).winding
    bump = [(-0.3, Y0), (0.0, -2.3), (0.3, Y0), (3.7, Y0)]
    moved = winding_along(square, flat_polyline_curve(square, bump)).winding
    assert abs(abs(moved - base) - 2 * math.pi) < 1e-9


@pytest.mark.parametrize("alpha", [1.3, 3.0, 5.0, 7.5])
def test_football_waist(alpha):
    cx = football(alpha)
    w = winding_along(cx, football_circle(cx, 1.0))
    assert abs(abs(w.winding) - alpha) < 1e-9
    s = is_splittable(cx, football_circle(cx, 0.8, wiggle=0.05))
    assert s.splittable and abs(s.cone_angle - alpha) < 1e-9


def test_football_two_pi_is_degenerate():
    cx = football(2 * math.pi)
    with pytest.raises(DegenerateError):
        winding_along(cx, football_circle(cx, 1.0))


@pytest.mark.parametrize("alpha,r", [(1.0, 0.4), (5.0, 1.2), (7.5, 0.9)])
def test_football_length(alpha, r):
    lb = football_length_bound(alpha, r)
    assert abs(lb.length - alpha * math.sin(r)) < 1e-12
    assert abs(lb.curvature - 1 / math.tan(r)) < 1e-12
    assert (lb.length <= lb.bound) == (alpha <= 2 * math.pi)


def test_polygon_closure_is_checked():
    with pytest.raises(PreconditionError):
        polygon_vertices([2.0] * 4, [0.5] * 4)
    with pytest.raises(PreconditionError):
        polygon_vertices([2.0, 2.0], [0.5, 0.5])


def test_triangle_double():
    # equilateral triangle with angle 1.5: cos a = cos A / (1 - cos A)
    big = 1.5
    side = math.acos(math.cos(big) / (1 - math.cos(big)))
    cx = double_polygon([big] * 3, [side] * 3)
    assert abs(cx.area() - 2 * (3 * big - math.pi)) < 1e-12
    rep = holonomy_of_complex(cx)
    assert relation_defect(rep) < 1e-12
    for m in rep.mats:
        assert abs(abs(np.trace(m)) - 2 * abs(math.cos(big))) < 1e-12
    assert chars_distance(rep, holonomy_of_complex(cx.transformed(su2_rotation([1, 0, 0], 0.3)))) < 1e-10
