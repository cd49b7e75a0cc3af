"""Brute-force counting oracle and the three-way region sweep."""

import math

import numpy as np
import pytest

from pothenot import (
    BoundaryHit,
    NotOnSurface,
    OracleConfig,
    forward_map,
    oracle_count,
    oracle_count_auto,
    region_sweep,
    solve_on_pillowcase,
    special_points,
)

# Small bank for unit tests; the default is sized for adversarial targets
# and is overkill for the worked examples here.
FAST = OracleConfig(grid_n=72, ring_n=180, polar_radial=16, polar_angular=32)


def _match_points(found, expected, radius):
    assert len(found) == len(expected)
    for p in expected:
        assert min(math.hypot(p.x - q.x, p.y - q.y) for q in found) < radius


class TestOracleCount:
    def test_two_solution_target(self, equilateral_base):
        a = (0.7, math.sqrt(85) / 10, math.sqrt(85) / 10)
        report = oracle_count(equilateral_base, a, FAST)
        assert report.count == 2
        assert not report.curve
        solved = solve_on_pillowcase(equilateral_base, a)
        _match_points(report.points, [s.point for s in solved.solutions],
                      1e-6 * equilateral_base.circumradius)
        assert all(m <= 1e-12 for m in report.misfits)

    def test_one_solution_target(self, equilateral_base):
        a = (-0.7, math.sqrt(15) / 10, math.sqrt(15) / 10)
        report = oracle_count(equilateral_base, a, FAST)
        assert report.count == 1
        solved = solve_on_pillowcase(equilateral_base, a)
        _match_points(report.points, [s.point for s in solved.solutions],
                      1e-6 * equilateral_base.circumradius)

    def test_zero_solution_target(self, obtuse_base):
        # A sample from one of the count-zero octants.
        theta, sigma = 2.9, -2.9
        a = (math.cos(theta), math.cos(sigma), math.cos(theta - sigma))
        label_count = solve_on_pillowcase(obtuse_base, a).count
        report = oracle_count(obtuse_base, a, FAST)
        assert report.count == label_count == 0

    def test_tilde_is_reported_as_a_curve(self, equilateral_base):
        sp = special_points(equilateral_base)
        report = oracle_count(equilateral_base, sp.tilde_a, FAST)
        assert report.curve
        assert report.count == math.inf
        assert "circumcircle" in report.note

    def test_grid_doubling_stability(self, obtuse_base):
        a = (0.0, math.sqrt(2) / 2, math.sqrt(2) / 2)
        coarse = oracle_count(obtuse_base, a, FAST)
        fine = oracle_count(obtuse_base, a, OracleConfig(
            grid_n=144, ring_n=360, polar_radial=24, polar_angular=48))
        assert coarse.count == fine.count == 2

    def test_rejects_off_surface(self, equilateral_base):
        with pytest.raises(NotOnSurface):
            oracle_count(equilateral_base, (0.2, 0.3, 0.4), FAST)

    def test_boundary_hit_then_auto_recovery(self, equilateral_base):
        r = equilateral_base.circumradius
        a = forward_map(equilateral_base, (60.0 * r, 80.0 * r))
        with pytest.raises(BoundaryHit):
            oracle_count(equilateral_base, a, FAST)
        report = oracle_count_auto(equilateral_base, a, FAST)
        expected = solve_on_pillowcase(equilateral_base, a).count
        assert report.count == expected

    def test_config_validation(self):
        with pytest.raises(ValueError):
            OracleConfig(grid_n=40)
        with pytest.raises(ValueError):
            OracleConfig(search_radius_factor=0.0)


class TestRegionSweep:
    def test_equilateral_three_way_agreement(self, equilateral_base):
        report = region_sweep(equilateral_base, samples_per_octant=12, seed=3)
        assert report.ok
        assert report.mismatch_count == 0
        assert len(report.rows) == 8
        assert all(row.samples == 12 for row in report.rows)
        assert not report.unobserved_octants

        by_region = {row.region: row.predicted for row in report.rows}
        assert by_region["octant(+++)"] == 2.0
        assert by_region["octant(---)"] == 1.0
        assert by_region["octant(+--)"] == 0.0

        text = report.table()
        assert text.splitlines()[0].startswith("region")
        assert "octant(+++)" in text

    def test_obtuse_split_components_are_swept(self, obtuse_base):
        report = region_sweep(obtuse_base, samples_per_octant=10, seed=7)
        assert report.ok
        regions = {row.region for row in report.rows}
        assert "octant(+--) near" in regions
        assert "octant(+--) far" in regions
        assert not any(r.startswith("octant(-++)") for r in regions)
        assert report.unobserved_octants == ("-++",)
        assert report.draws >= 8192
        assert report.sides == obtuse_base.sides
        assert report.seed == 7
