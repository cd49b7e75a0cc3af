"""Base placement, the forward map, and the cosine-surface primitives."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pothenot import (
    CosTriple,
    DegenerateBase,
    VertexCollision,
    forward_map,
    forward_map_many,
    pillow_gradient,
    pillow_value,
    special_points,
    triangle_from_angles,
    triangle_from_sides,
)
from pothenot.geometry import (
    PILLOW_VERTICES,
    euler_volume_squared,
    limit_set_membership,
    observer_distances,
    triangle_from_landmarks,
)


@st.composite
def triangle_sides(draw):
    """Side triples with a healthy margin from degeneracy."""
    alpha = draw(st.floats(min_value=0.2, max_value=2.6))
    beta = draw(st.floats(min_value=0.2, max_value=2.6))
    gamma = math.pi - alpha - beta
    if gamma < 0.2:
        alpha, beta = 0.45 * alpha, 0.45 * beta
        gamma = math.pi - alpha - beta
    scale = draw(st.floats(min_value=0.1, max_value=50.0))
    return tuple(2.0 * scale * math.sin(t) for t in (alpha, beta, gamma))


class TestConstruction:
    def test_sides_round_trip(self):
        base = triangle_from_sides(3.0, 4.0, 5.0)
        assert base.sides == (3.0, 4.0, 5.0)
        d1 = math.dist(base.b, base.c)
        d2 = math.dist(base.a, base.c)
        d3 = math.dist(base.a, base.b)
        assert np.allclose((d1, d2, d3), (3.0, 4.0, 5.0), rtol=1e-13, atol=0)

    def test_vertices_on_circumcircle(self):
        base = triangle_from_sides(2.0, math.sqrt(2.0), math.sqrt(2.0))
        for v in base.vertices:
            assert math.hypot(*v) == pytest.approx(base.circumradius, rel=1e-13)

    def test_angle_sum_and_cosine_identity(self):
        base = triangle_from_sides(0.9, 1.7, 2.1)
        assert base.alpha + base.beta + base.gamma == pytest.approx(math.pi, abs=1e-12)
        x0, y0, z0 = base.angle_cosines
        ident = x0 * x0 + y0 * y0 + z0 * z0 + 2.0 * x0 * y0 * z0
        assert ident == pytest.approx(1.0, abs=1e-12)

    def test_kind(self, equilateral_base, right_base, obtuse_base):
        assert equilateral_base.kind() == "acute"
        assert right_base.kind() == "right"
        assert obtuse_base.kind() == "obtuse"
        assert obtuse_base.largest_angle_index() == 0

    @pytest.mark.parametrize("sides", [(1, 1, 2), (1, 2, 5), (0, 1, 1),
                                       (-1, 2, 2), (1, 1, float("nan"))])
    def test_degenerate_sides_rejected(self, sides):
        with pytest.raises(DegenerateBase):
            triangle_from_sides(*sides)

    def test_from_angles_matches_sides(self):
        base = triangle_from_angles(60.0, 60.0, degrees=True, circumradius=math.sqrt(3) / 3)
        assert np.allclose(base.sides, (1.0, 1.0, 1.0), rtol=1e-12)
        with pytest.raises(DegenerateBase):
            triangle_from_angles(2.0, 2.0)

    def test_from_landmarks(self):
        pts = [(5.0, 1.0), (8.0, 1.0), (5.0, 5.0)]
        base = triangle_from_landmarks(pts)
        assert base.sides == pytest.approx((5.0, 4.0, 3.0))


def test_forward_map_circumcenter_of_equilateral(equilateral_base):
    # Every side subtends the central angle 2*pi/3 at the circumcenter.
    a = forward_map(equilateral_base, (0.0, 0.0))
    assert np.allclose(tuple(a), (-0.5, -0.5, -0.5), atol=1e-15)


def test_forward_map_vertex_guard(equilateral_base):
    with pytest.raises(VertexCollision):
        forward_map(equilateral_base, equilateral_base.a)


def test_forward_map_many_matches_scalar(obtuse_base):
    rng = np.random.default_rng(5)
    pts = rng.uniform(-2.0, 2.0, size=(64, 2))
    vals = forward_map_many(obtuse_base, pts)
    for p, row in zip(pts, vals):
        if min(observer_distances(obtuse_base, p)) < 1e-6:
            continue
        assert np.allclose(row, tuple(forward_map(obtuse_base, p)), atol=1e-14)


@settings(deadline=None, max_examples=80)
@given(sides=triangle_sides(),
       x=st.floats(min_value=-4.0, max_value=4.0),
       y=st.floats(min_value=-4.0, max_value=4.0))
def test_forward_image_lies_on_pillowcase(sides, x, y):
    base = triangle_from_sides(*sides)
    p = (x * base.circumradius, y * base.circumradius)
    if min(observer_distances(base, p)) < 1e-3 * base.circumradius:
        return
    a = forward_map(base, p)
    assert abs(pillow_value(a)) < 1e-12


def test_cos_triple_validation():
    with pytest.raises(ValueError):
        CosTriple(1.5, 0.0, 0.0)
    with pytest.raises(ValueError):
        CosTriple(float("nan"), 0.0, 0.0)


def test_pillow_vertices_are_singular():
    for v in PILLOW_VERTICES:
        assert pillow_value(v) == 0.0
        assert pillow_gradient(v) == (0.0, 0.0, 0.0)


def test_pillow_sign_convention():
    assert pillow_value((0.0, 0.0, 0.0)) == 1.0
    assert pillow_value((1.0, -1.0, 0.9)) < 0.0


def test_euler_volume_vanishes_exactly_on_surface(equilateral_base):
    a = forward_map(equilateral_base, (0.3, -1.2))
    assert abs(euler_volume_squared(1.0, 2.0, 3.0, a)) < 1e-12
    assert euler_volume_squared(1.0, 1.0, 1.0, (0.0, 0.0, 0.0)) > 0.0


class TestSpecialPoints:
    def test_all_seven_on_surface(self, canonical_bases):
        for base in canonical_bases:
            sp = special_points(base)
            for trip in (*sp.tildes(), *sp.hats(), sp.orthocenter):
                assert abs(pillow_value(trip)) < 1e-12

    def test_tilde_realized_on_opposite_arc(self, obtuse_base):
        # Midpoint of the circumcircle arc BC not containing A.
        base = obtuse_base
        mid_bc = 0.5 * (base.vertices[1] + base.vertices[2])
        direction = mid_bc / np.hypot(*mid_bc)
        observer = -direction * base.circumradius
        a = forward_map(base, observer)
        tilde_a = special_points(base).tilde_a
        assert np.allclose(tuple(a), tuple(tilde_a), atol=1e-12)

    def test_orthocenter_triple_is_flipped_base_triple(self, equilateral_base):
        sp = special_points(equilateral_base)
        x0, y0, z0 = equilateral_base.angle_cosines
        assert tuple(sp.orthocenter) == (-x0, -y0, -z0)


class TestLimitSets:
    def test_straight_approach_limits_lie_in_patch(self, right_base):
        # Walking into vertex A along direction d drives a1 to x0 while the
        # other two cosines tend to the angles d makes with the A-edges.
        base = right_base
        av, bv, cv = (np.array(v) for v in (base.a, base.b, base.c))
        ca = (cv - av) / np.linalg.norm(cv - av)
        ba = (bv - av) / np.linalg.norm(bv - av)
        for t in (0.3, 1.1, 2.0, 4.4):
            d = np.array([math.cos(t), math.sin(t)])
            a = (base.x0, float(d @ ca), float(d @ ba))
            assert limit_set_membership(base, a, "A")
            assert not limit_set_membership(base, a, "B")

    def test_patch_interior_accepted(self, right_base):
        assert limit_set_membership(right_base, (right_base.x0, 0.0, 0.0), "A")

    def test_off_plane_triple_rejected(self, right_base):
        a = forward_map(right_base, (0.0, 0.0))
        assert not limit_set_membership(right_base, a, "A")

    def test_bad_vertex_name(self, right_base):
        with pytest.raises(ValueError):
            limit_set_membership(right_base, (0.0, 0.0, 0.0), "D")
