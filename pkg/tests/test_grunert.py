"""The eliminated quartic, back substitution, and the on-surface solver."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pothenot import (
    IdenticallyZero,
    Inconsistent,
    NotOnSurface,
    forward_map,
    lambda_coeffs,
    pillow_value,
    quartic_roots,
    solve_on_pillowcase,
    special_points,
    triangle_from_sides,
)
from pothenot.geometry import observer_distances
from pothenot.grunert import LambdaCoeffs, grunert_residual, trilaterate

SQ = math.sqrt


def synthetic_coeffs(*signed):
    """LambdaCoeffs from plain polynomial coefficients, l0 first."""
    mags = [abs(v) for v in signed]
    return LambdaCoeffs(*signed, *mags)


class TestQuarticRoots:
    def test_simple_and_double_roots(self):
        # (u - 1)^2 (u - 4) (u + 2) = u^4 - 4u^3 - 3u^2 + 14u - 8
        c = synthetic_coeffs(-8.0, 14.0, -3.0, -4.0, 1.0)
        roots = quartic_roots(c)
        assert [m for _, m in roots] == [2, 1]
        assert roots[0][0] == pytest.approx(1.0, abs=1e-6)
        assert roots[1][0] == pytest.approx(4.0, abs=1e-9)

    def test_negative_roots_dropped(self):
        # (u + 1)(u + 3) has no admissible root.
        c = synthetic_coeffs(3.0, 4.0, 1.0, 0.0, 0.0)
        assert quartic_roots(c) == []

    def test_degree_drop(self):
        # Leading coefficients at rounding scale are treated as zero.
        c = LambdaCoeffs(l0=2.0, l1=-3.0, l2=1.0, l3=1e-14, l4=1e-16,
                         m0=2.0, m1=3.0, m2=1.0, m3=1.0, m4=1.0)
        roots = quartic_roots(c)
        assert len(roots) == 2
        assert roots[0][0] == pytest.approx(1.0, abs=1e-9)
        assert roots[1][0] == pytest.approx(2.0, abs=1e-9)

    def test_identically_zero(self):
        c = LambdaCoeffs(0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0)
        with pytest.raises(IdenticallyZero):
            quartic_roots(c)

    def test_constant_polynomial_has_no_roots(self):
        c = synthetic_coeffs(5.0, 0.0, 0.0, 0.0, 0.0)
        assert quartic_roots(c) == []


class TestLambdaCoeffs:
    def test_leading_coefficient_tracks_surface_residual(self):
        # l4 = 16 f^2 for any target, on the surface or off it.
        base = triangle_from_sides(0.8, 1.1, 1.5)
        rng = np.random.default_rng(11)
        for _ in range(200):
            a = tuple(rng.uniform(-0.95, 0.95, size=3))
            c = lambda_coeffs(base, a)
            f = pillow_value(a)
            assert c.l4 == pytest.approx(16.0 * f * f, rel=1e-10, abs=1e-300)

    def test_top_coefficients_vanish_on_surface(self, obtuse_base):
        rng = np.random.default_rng(3)
        for _ in range(200):
            theta, sigma = rng.uniform(-math.pi, math.pi, size=2)
            a = (math.cos(theta), math.cos(sigma), math.cos(theta - sigma))
            c = lambda_coeffs(obtuse_base, a)
            assert c.negligible(4, 1e-10)
            assert c.negligible(3, 1e-10)

    def test_constant_term_vanishes_iff_first_plane(self, obtuse_base):
        # l0 factors as (4 a1^2 d2^2 d3^2 - q1^2)^2, zero exactly on the
        # pair of planes a1 = +-x0 regardless of a2, a3.
        rng = np.random.default_rng(7)
        x0 = obtuse_base.x0
        for _ in range(200):
            a2, a3 = rng.uniform(-0.9, 0.9, size=2)
            for a1 in (x0, -x0):
                on = lambda_coeffs(obtuse_base, (a1, a2, a3))
                assert on.negligible(0, 1e-10)
            off = lambda_coeffs(obtuse_base, (x0 + 0.3, a2, a3))
            assert not off.negligible(0, 1e-10)

    def test_double_sign_flip_invariance(self, obtuse_base):
        rng = np.random.default_rng(19)
        for _ in range(100):
            a = rng.uniform(-0.9, 0.9, size=3)
            c = lambda_coeffs(obtuse_base, tuple(a))
            ref, mags = c.values(), c.magnitudes()
            for flip in ((1, -1, -1), (-1, 1, -1), (-1, -1, 1)):
                got = lambda_coeffs(obtuse_base, tuple(a * flip)).values()
                assert np.all(np.abs(got - ref) <= 1e-12 * mags)


def _assert_solutions(result, expected, tol=1e-9):
    """Solutions sorted by s1 must match the expected distance triples."""
    assert result.kind == "finite"
    assert len(result.solutions) == len(expected)
    for sol, exp in zip(result.solutions, expected):
        assert np.allclose(sol.distances, exp, rtol=0, atol=tol)


class TestWorkedExamples:
    def test_equilateral_two_solution_target(self, equilateral_base):
        result = solve_on_pillowcase(
            equilateral_base, (0.7, SQ(85) / 10, SQ(85) / 10))
        _assert_solutions(result, [
            ((SQ(51) - 3 * SQ(3)) / 6, SQ(15) / 3, SQ(15) / 3),
            ((SQ(51) + 3 * SQ(3)) / 6, SQ(15) / 3, SQ(15) / 3),
        ])

    def test_equilateral_single_solution_targets(self, equilateral_base):
        s, t = SQ(2) / 2, (1 + SQ(3)) / 2
        cases = [
            ((0.0, s, s), (t, s, s)),
            ((s, s, 0.0), (s, s, t)),
            ((s, 0.0, s), (s, t, s)),
            ((-0.7, SQ(15) / 10, SQ(15) / 10),
             ((SQ(51) + 17 * SQ(3)) / 34, SQ(85) / 17, SQ(85) / 17)),
        ]
        for target, expected in cases:
            result = solve_on_pillowcase(equilateral_base, target)
            _assert_solutions(result, [expected])

    def test_right_base_targets(self, right_base):
        q = SQ(6) / 3
        cases = [
            ((0.5, 1.0, 0.5), (q, 2 * q, q + SQ(2))),
            ((0.5, 0.5, 1.0), (q, q + SQ(2), 2 * q)),
            ((-0.5, 0.5, 0.5), (1 + SQ(3) / 3, 2 * SQ(3) / 3, 2 * SQ(3) / 3)),
        ]
        for target, expected in cases:
            result = solve_on_pillowcase(right_base, target)
            _assert_solutions(result, [expected])

    def test_obtuse_base_targets(self, obtuse_base):
        result = solve_on_pillowcase(obtuse_base, (0.0, SQ(2) / 2, SQ(2) / 2))
        _assert_solutions(result, [
            ((SQ(3) - 1) / 2, SQ(6) / 2, SQ(6) / 2),
            ((SQ(3) + 1) / 2, SQ(6) / 2, SQ(6) / 2),
        ])
        cases = [
            ((0.0, 1.0, 0.0), (0.5, SQ(3) / 2, 1.5)),
            ((0.0, 0.0, 1.0), (0.5, 1.5, SQ(3) / 2)),
            ((-0.7, SQ(15) / 10, SQ(15) / 10),
             ((3 * SQ(17) + 17) / 34, SQ(255) / 17, SQ(255) / 17)),
        ]
        for target, expected in cases:
            result = solve_on_pillowcase(obtuse_base, target)
            _assert_solutions(result, [expected])


class TestSolveEdges:
    def test_off_surface_rejected(self, equilateral_base):
        with pytest.raises(NotOnSurface):
            solve_on_pillowcase(equilateral_base, (0.0, 0.0, 0.0))
        with pytest.raises(NotOnSurface):
            solve_on_pillowcase(equilateral_base, (0.71, SQ(85) / 10, SQ(85) / 10))

    def test_pillow_vertex_has_no_observer(self, right_base):
        result = solve_on_pillowcase(right_base, (1.0, -1.0, -1.0))
        assert result.count == 0
        assert "vertex" in result.note

    def test_tilde_triple_gives_arc(self, canonical_bases):
        for base in canonical_bases:
            sp = special_points(base)
            result = solve_on_pillowcase(base, sp.tilde_b)
            assert result.kind == "infinite_arc"
            assert result.count == math.inf
            assert result.arc_vertex == "B"

    def test_orthocenter_acute_vs_obtuse(self, equilateral_base, obtuse_base):
        sp = special_points(equilateral_base)
        result = solve_on_pillowcase(equilateral_base, sp.orthocenter)
        assert result.count == 1
        h = equilateral_base.orthocenter()
        assert sol_distance(result.solutions[0].point, h) < 1e-12

        sp = special_points(obtuse_base)
        result = solve_on_pillowcase(obtuse_base, sp.orthocenter)
        assert result.count == 0

    def test_solution_residuals_reported(self, equilateral_base):
        result = solve_on_pillowcase(equilateral_base, (0.7, SQ(85) / 10, SQ(85) / 10))
        for sol in result.solutions:
            assert sol.residual == grunert_residual(
                equilateral_base, (0.7, SQ(85) / 10, SQ(85) / 10), sol.distances)
            assert sol.residual < 1e-12


def sol_distance(p, q):
    return math.hypot(p.x - q.x, p.y - q.y)


class TestTrilaterate:
    def test_recovers_point(self, obtuse_base):
        target = (0.4, -1.3)
        s = observer_distances(obtuse_base, target)
        p = trilaterate(obtuse_base, s)
        assert math.hypot(p.x - target[0], p.y - target[1]) < 1e-12

    def test_impossible_distances(self, obtuse_base):
        with pytest.raises(Inconsistent):
            trilaterate(obtuse_base, (50.0, 1.0, 1.0))


@st.composite
def observers(draw):
    sides = sorted(draw(st.tuples(*[st.floats(min_value=0.5, max_value=3.0)] * 3)))
    if sides[2] >= 0.95 * (sides[0] + sides[1]):
        sides[2] = 0.9 * (sides[0] + sides[1])
    base = triangle_from_sides(*sides)
    r = draw(st.floats(min_value=0.05, max_value=8.0))
    t = draw(st.floats(min_value=-math.pi, max_value=math.pi))
    point = (r * base.circumradius * math.cos(t),
             r * base.circumradius * math.sin(t))
    return base, point


@settings(deadline=None, max_examples=120)
@given(observers())
def test_solve_round_trip(case):
    """Forward-mapping an observer and solving must recover the observer."""
    base, point = case
    r = base.circumradius
    if min(observer_distances(base, point)) < 1e-3 * r:
        return
    if abs(math.hypot(*point) - r) < 1e-3 * r:
        return
    a = forward_map(base, point)
    result = solve_on_pillowcase(base, a)
    assert result.kind == "finite"
    assert 1 <= len(result.solutions) <= 2
    gap = min(math.hypot(s.point.x - point[0], s.point.y - point[1])
              for s in result.solutions)
    assert gap < 1e-6 * r
    for s in result.solutions:
        mapped = forward_map(base, s.point)
        assert max(abs(m - t) for m, t in zip(mapped, a)) < 1e-7
