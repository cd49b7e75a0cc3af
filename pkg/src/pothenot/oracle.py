"""Brute-force verification of solution counts by dense multi-start search.

Nothing here touches the quartic algebra: the misfit
``m(D) = |F(D) - a|^2`` is minimized in cosine space from a large bank of
starting points, converged minima are clustered, and the cluster count is
the independently observed number of solutions.  Tilde targets reveal
themselves as long strings of minima along the circumcircle and are
reported as a curve rather than enumerated.

Two numerical traps need explicit handling.  Minima can sit outside the
search disc for targets close to (1,1,1), where observers escape to
infinity; those runs raise ``BoundaryHit`` and the caller retries with a
larger disc.  And each base vertex is a misfit funnel for targets close to
that vertex's coincidence plane: the misfit infimum along a path into the
vertex tends to zero without being attained, so converged points next to a
vertex are accepted only under a much stricter residual threshold than the
configured one (a genuine zero reaches the floating-point floor; the funnel
stalls around the square of the target's distance to the plane).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import BoundaryHit, EmptyRegion, Inconsistent, NotOnSurface
from .geometry import (
    BaseTriangle,
    CosTriple,
    PlanarPoint,
    as_triple,
    forward_map_many,
    pillow_value,
    special_points,
)
from .grunert import solve_on_pillowcase
from .regions import CountPrediction, classify, count_prediction
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "OracleConfig",
    "OracleReport",
    "SweepReport",
    "SweepRow",
    "oracle_count",
    "oracle_count_auto",
    "region_sweep",
]

# Funnel guard constants (see module docstring).  Distances scale with R.
_VERTEX_HARD = 10.0
_FUNNEL_RADIUS = 1e-3
_FUNNEL_PLANE_BAND = 1e-6
_FUNNEL_RESIDUAL = 1e-22
_BOUNDARY_FRACTION = 0.9
_CURVE_MIN_CLUSTERS = 20
_MAX_RADIUS_FACTOR = 60000.0

# Within about 1e-4 of a coincidence plane the true solution count of a
# double-rounded surface sample is decided by its own ~1e-16 off-surface
# rounding (one solution sits near a base vertex and exists only on one
# side), so sweep draws keep a wide berth.  The pillow-vertex berth also
# bounds the observer distance, keeping every draw inside the default
# search radius.
_SWEEP_PLANE_MARGIN = 1e-3
_SWEEP_CORNER_MARGIN = 1e-3


@dataclass(frozen=True)
class OracleConfig:
    """Search parameters for the brute-force counter."""

    search_radius_factor: float = 50.0
    grid_n: int = 400
    refine_tol: float = 1e-12
    cluster_scale: float = 1e-5
    max_starts: int = 250_000
    max_iter: int = 80
    ring_n: int = 720
    polar_radial: int = 48
    polar_angular: int = 96

    def __post_init__(self):
        if self.grid_n < 50:
            raise ValueError("grid_n must be at least 50")
        for name in ("search_radius_factor", "refine_tol", "cluster_scale"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class OracleReport:
    """Observed solutions for one target triple."""

    count: float
    points: tuple[PlanarPoint, ...]
    misfits: tuple[float, ...]
    curve: bool
    note: str


@lru_cache(maxsize=32)
def _bank(base: BaseTriangle, factor: float, grid_n: int, ring_n: int,
          polar_radial: int, polar_angular: int
          ) -> tuple[np.ndarray, np.ndarray, tuple[int, int]]:
    """Start bank and its forward images, cached per base and geometry.

    Returns (starts (n,2), cosine images (n,3), grid shape).  Layout is
    grid block first, then circumcircle ring, then log-polar shell; the
    shape of the grid block is needed for neighbor comparisons.
    """
    r = factor * base.circumradius
    axis = np.linspace(-r, r, grid_n)
    gx, gy = np.meshgrid(axis, axis, indexing="ij")
    grid = np.stack([gx.ravel(), gy.ravel()], axis=1)

    ring_t = np.linspace(-math.pi, math.pi, ring_n, endpoint=False)
    ring = base.circumradius * np.stack([np.cos(ring_t), np.sin(ring_t)], axis=1)

    radii = np.geomspace(1e-3 * base.circumradius, r, polar_radial)
    angles = np.linspace(-math.pi, math.pi, polar_angular, endpoint=False)
    rr, aa = np.meshgrid(radii, angles, indexing="ij")
    polar = np.stack([(rr * np.cos(aa)).ravel(), (rr * np.sin(aa)).ravel()], axis=1)

    starts = np.concatenate([grid, ring, polar], axis=0)
    # Nudge starts off the vertices so the forward map stays finite.
    guard = 1e-7 * base.circumradius
    for v in base.vertices:
        d = starts - v
        close = np.hypot(d[:, 0], d[:, 1]) < guard
        starts[close] += guard
    images = forward_map_many(base, starts)
    return starts, images, (grid_n, grid_n)


def _ray_frame(base: BaseTriangle, pts: np.ndarray):
    """Ray components and norms from each point to the three vertices."""
    vx = base.vertices[:, 0]
    vy = base.vertices[:, 1]
    rx = vx[None, :] - pts[:, 0:1]
    ry = vy[None, :] - pts[:, 1:2]
    nn = np.sqrt(rx * rx + ry * ry)
    np.maximum(nn, 1e-300, out=nn)
    return rx, ry, nn


_PAIRS = ((1, 2), (0, 2), (0, 1))


def _forward_vals(base: BaseTriangle, pts: np.ndarray) -> np.ndarray:
    rx, ry, nn = _ray_frame(base, pts)
    ux, uy = rx / nn, ry / nn
    vals = np.empty((len(pts), 3))
    for i, (p, q) in enumerate(_PAIRS):
        vals[:, i] = ux[:, p] * ux[:, q] + uy[:, p] * uy[:, q]
    return vals


def _misfit(base: BaseTriangle, pts: np.ndarray, targets: np.ndarray) -> np.ndarray:
    diff = _forward_vals(base, pts) - targets
    return diff[:, 0] ** 2 + diff[:, 1] ** 2 + diff[:, 2] ** 2


def _residual_jacobian(base: BaseTriangle, pts: np.ndarray
                       ) -> tuple[np.ndarray, np.ndarray]:
    """Cosine values and the analytic (n,3,2) Jacobian of the forward map."""
    rx, ry, nn = _ray_frame(base, pts)
    ux, uy = rx / nn, ry / nn
    inv2 = 1.0 / (nn * nn)
    n = len(pts)
    vals = np.empty((n, 3))
    jac = np.empty((n, 3, 2))
    for i, (p, q) in enumerate(_PAIRS):
        c = ux[:, p] * ux[:, q] + uy[:, p] * uy[:, q]
        vals[:, i] = c
        ipq = 1.0 / (nn[:, p] * nn[:, q])
        tp = c * inv2[:, p]
        tq = c * inv2[:, q]
        jac[:, i, 0] = -(rx[:, p] + rx[:, q]) * ipq + rx[:, p] * tp + rx[:, q] * tq
        jac[:, i, 1] = -(ry[:, p] + ry[:, q]) * ipq + ry[:, p] * tp + ry[:, q] * tq
    return vals, jac


def _gauss_newton(base: BaseTriangle, starts: np.ndarray, targets: np.ndarray,
                  refine_tol: float, max_iter: int, lam0: float = 1e-8
                  ) -> tuple[np.ndarray, np.ndarray]:
    """Damped Gauss-Newton descent of the misfit, vectorized over rows.

    Rows freeze out of the active set once they either hit the
    floating-point floor of the misfit (well below the counting
    tolerance, so cluster members end up spatially tight) or stall with
    a maxed-out damping factor.
    """
    floor = min(1e-24, refine_tol)
    n = len(starts)
    pts_out = starts.copy()
    m_out = _misfit(base, starts, targets)

    act_idx = np.arange(n)
    pts = starts.copy()
    tg = targets
    m = m_out.copy()
    lam = np.full(n, lam0)

    with np.errstate(all="ignore"):
        for _ in range(max_iter):
            vals, jac = _residual_jacobian(base, pts)
            r0 = vals[:, 0] - tg[:, 0]
            r1 = vals[:, 1] - tg[:, 1]
            r2 = vals[:, 2] - tg[:, 2]
            j00, j10, j20 = jac[:, 0, 0], jac[:, 1, 0], jac[:, 2, 0]
            j01, j11, j21 = jac[:, 0, 1], jac[:, 1, 1], jac[:, 2, 1]
            g0 = j00 * r0 + j10 * r1 + j20 * r2
            g1 = j01 * r0 + j11 * r1 + j21 * r2
            h00 = j00 * j00 + j10 * j10 + j20 * j20 + lam
            h01 = j00 * j01 + j10 * j11 + j20 * j21
            h11 = j01 * j01 + j11 * j11 + j21 * j21 + lam
            det = h00 * h11 - h01 * h01
            det = np.where(np.abs(det) < 1e-300, 1e-300, det)
            trial = pts + np.stack(
                [-(h11 * g0 - h01 * g1) / det, -(h00 * g1 - h01 * g0) / det],
                axis=1)
            m_trial = _misfit(base, trial, tg)
            better = m_trial < m
            pts[better] = trial[better]
            m = np.where(better, m_trial, m)
            lam = np.where(better, lam * 0.3, lam * 9.0)
            lam = np.clip(lam, 1e-18, 1e7)

            frozen = (m <= floor) | (lam >= 1e6)
            if np.any(frozen):
                pts_out[act_idx[frozen]] = pts[frozen]
                m_out[act_idx[frozen]] = m[frozen]
                live = ~frozen
                if not np.any(live):
                    return pts_out, m_out
                act_idx = act_idx[live]
                pts, tg, m, lam = pts[live], tg[live], m[live], lam[live]

    pts_out[act_idx] = pts
    m_out[act_idx] = m
    return pts_out, m_out


def _local_min_rows(mis: np.ndarray, grid_shape: tuple[int, int],
                    ring_n: int, polar_shape: tuple[int, int],
                    ring_cap: int | None = None) -> np.ndarray:
    """Flat bank indices of neighborhood minima, for one misfit row.

    All three cosines are arc-wise constant along the circumcircle, so
    ring misfits tie in runs up to rounding ripple and the neighbor test
    marks about every other ring point.  ``ring_cap`` thins those to an
    evenly spaced subset; leave it None where the full ring matters, as
    it does for detecting a whole arc of solutions.
    """
    gN = grid_shape[0] * grid_shape[1]
    picks = []

    g = mis[:gN].reshape(grid_shape)
    inner = g[1:-1, 1:-1]
    mask = ((inner <= g[:-2, 1:-1]) & (inner <= g[2:, 1:-1])
            & (inner <= g[1:-1, :-2]) & (inner <= g[1:-1, 2:]))
    ii, jj = np.nonzero(mask)
    picks.append((ii + 1) * grid_shape[1] + (jj + 1))

    ring = mis[gN:gN + ring_n]
    mask = (ring <= np.roll(ring, 1)) & (ring <= np.roll(ring, -1))
    idx = np.nonzero(mask)[0]
    if ring_cap is not None and len(idx) > ring_cap:
        idx = idx[np.linspace(0, len(idx) - 1, ring_cap).astype(int)]
    picks.append(idx + gN)

    p = mis[gN + ring_n:].reshape(polar_shape)
    inner = p[1:-1, :]
    mask = ((inner <= p[:-2, :]) & (inner <= p[2:, :])
            & (inner <= np.roll(p, 1, axis=1)[1:-1, :])
            & (inner <= np.roll(p, -1, axis=1)[1:-1, :]))
    ii, jj = np.nonzero(mask)
    picks.append((ii + 1) * polar_shape[1] + jj + gN + ring_n)

    return np.concatenate(picks)


def _candidate_indices(mis: np.ndarray, grid_shape: tuple[int, int],
                       ring_n: int, polar_shape: tuple[int, int],
                       top_k: int, plateau: float | None = None,
                       ring_cap: int | None = None) -> np.ndarray:
    local = _local_min_rows(mis, grid_shape, ring_n, polar_shape, ring_cap)
    if plateau is not None and plateau > 0.04:
        # Far from the base all three cosines tend to 1, so the misfit
        # flattens onto this value and its ripples mint spurious minima.
        # A start that is not visibly below the plateau cannot be inside
        # any solution basin.
        local = local[mis[local] < 0.98 * plateau]
    k = min(top_k, len(mis))
    top = np.argpartition(mis, k - 1)[:k]
    return np.unique(np.concatenate([local, top]))


def _cluster(points: np.ndarray, misfits: np.ndarray, radius: float
             ) -> tuple[np.ndarray, np.ndarray]:
    if len(points) == 0:
        return np.empty((0, 2)), np.empty(0)
    order = np.argsort(misfits, kind="stable")
    pts = points[order]
    mis = misfits[order]
    alive = np.ones(len(pts), dtype=bool)
    kept: list[int] = []
    r2 = radius * radius
    for i in range(len(pts)):
        if not alive[i]:
            continue
        kept.append(i)
        d2 = (pts[:, 0] - pts[i, 0]) ** 2 + (pts[:, 1] - pts[i, 1]) ** 2
        alive &= d2 > r2
        alive[i] = False
    arr = pts[kept]
    mis = mis[kept]
    order = np.lexsort((arr[:, 1], arr[:, 0]))
    return arr[order], mis[order]


def _tighten_clusters(base: BaseTriangle, target: np.ndarray,
                      clusters: np.ndarray, cluster_mis: np.ndarray,
                      radius: float) -> tuple[np.ndarray, np.ndarray]:
    """Re-polish cluster representatives and merge survivors.

    Rows that stall in a nearly flat misfit valley (solutions close to
    the circumcircle) can freeze a little apart even though they chase
    the same zero.  A fresh descent with negligible initial damping
    takes full Newton steps along the flat direction and collapses such
    pairs; genuinely distinct zeros stay separated.
    """
    if len(clusters) < 2:
        return clusters, cluster_mis
    tg = np.tile(target, (len(clusters), 1))
    pts, mis = _gauss_newton(base, clusters.copy(), tg, 0.0, 40, lam0=1e-16)
    worse = mis > cluster_mis
    pts[worse] = clusters[worse]
    mis[worse] = cluster_mis[worse]
    return _cluster(pts, mis, radius)


def _apply_vertex_guard(base: BaseTriangle, a: CosTriple, pts: np.ndarray,
                        mis: np.ndarray, refine_tol: float, tol: Tolerances
                        ) -> tuple[np.ndarray, np.ndarray]:
    """Drop funnel artifacts next to base vertices; keep genuine zeros."""
    if len(pts) == 0:
        return pts, mis
    r = base.circumradius
    plane_dist = np.abs(a.as_array() - np.array(base.angle_cosines))
    keep = np.ones(len(pts), dtype=bool)
    vdist = np.stack([np.hypot(pts[:, 0] - v[0], pts[:, 1] - v[1])
                      for v in base.vertices], axis=1)     # (n,3)
    nearest = np.argmin(vdist, axis=1)
    dmin = vdist[np.arange(len(pts)), nearest]

    keep &= dmin > _VERTEX_HARD * tol.vertex_scale * r
    suspect = keep & (dmin <= _FUNNEL_RADIUS * r)
    if np.any(suspect):
        idx = np.nonzero(suspect)[0]
        targets = np.tile(a.as_array(), (len(idx), 1))
        # Freeze threshold zero: polish to the floating-point floor, so a
        # genuine zero separates cleanly from a funnel artifact.
        polished, polished_m = _gauss_newton(base, pts[idx], targets,
                                             0.0, 25)
        pts[idx] = polished
        mis[idx] = polished_m
        for row, k in enumerate(idx):
            near_plane = plane_dist[nearest[k]] <= _FUNNEL_PLANE_BAND
            if near_plane:
                keep[k] = False
            elif polished_m[row] > _FUNNEL_RESIDUAL:
                keep[k] = False
    return pts[keep], mis[keep]


def oracle_count(base: BaseTriangle, a: "CosTriple | list[float]",
                 cfg: OracleConfig = OracleConfig(),
                 tol: Tolerances = DEFAULT) -> OracleReport:
    """Count and locate all observers for one surface triple by search.

    Raises
    ------
    NotOnSurface
        If the triple is off the pillowcase.
    BoundaryHit
        If a minimum sits at the edge of the search disc, so the count is
        inconclusive at this radius.
    """
    a = as_triple(a)
    if abs(pillow_value(a)) > tol.surface:
        raise NotOnSurface("oracle requires an on-surface target")

    starts, images, grid_shape = _bank(
        base, cfg.search_radius_factor, cfg.grid_n, cfg.ring_n,
        cfg.polar_radial, cfg.polar_angular,
    )
    target = a.as_array()
    diff = images - target
    mis0 = np.einsum("ni,ni->n", diff, diff)
    cand = _candidate_indices(mis0, grid_shape, cfg.ring_n,
                              (cfg.polar_radial, cfg.polar_angular), top_k=400)
    if len(cand) > cfg.max_starts:
        cand = cand[np.argsort(mis0[cand], kind="stable")[:cfg.max_starts]]

    targets = np.tile(target, (len(cand), 1))
    pts, mis = _gauss_newton(base, starts[cand], targets,
                             cfg.refine_tol, cfg.max_iter)

    radius = cfg.search_radius_factor * base.circumradius
    best_idx = int(np.argmin(mis))
    best_m = float(mis[best_idx])
    best_norm = float(np.hypot(*pts[best_idx]))

    conv = mis <= cfg.refine_tol
    pts_c, mis_c = pts[conv], mis[conv]
    pts_c, mis_c = _apply_vertex_guard(base, a, pts_c.copy(), mis_c.copy(),
                                       cfg.refine_tol, tol)
    cluster_radius = cfg.cluster_scale * base.circumradius
    clusters, cluster_mis = _cluster(pts_c, mis_c, cluster_radius)
    clusters, cluster_mis = _tighten_clusters(base, target, clusters,
                                              cluster_mis, cluster_radius)

    if len(clusters) == 0 and best_m <= 1e-6 and best_norm >= _BOUNDARY_FRACTION * radius:
        raise BoundaryHit(
            f"misfit still {best_m:.2e} at {best_norm / base.circumradius:.0f}R; "
            "solutions may lie outside the search disc"
        )

    norms = np.hypot(clusters[:, 0], clusters[:, 1]) if len(clusters) else np.empty(0)
    on_circle = np.abs(norms - base.circumradius) <= 1e-6 * base.circumradius
    if int(on_circle.sum()) >= _CURVE_MIN_CLUSTERS:
        off = ~on_circle
        return OracleReport(
            count=math.inf,
            points=tuple(PlanarPoint(float(p[0]), float(p[1])) for p in clusters[off]),
            misfits=tuple(float(m) for m in cluster_mis[off]),
            curve=True,
            note=f"{int(on_circle.sum())} minima along the circumcircle"
                 + (f"; {int(off.sum())} isolated" if off.any() else ""),
        )

    if len(clusters) and float(norms.max()) >= _BOUNDARY_FRACTION * radius:
        raise BoundaryHit(
            f"a minimum sits at {norms.max() / base.circumradius:.0f}R, "
            "near the search boundary"
        )

    note = (f"best misfit {best_m:.2e}; farthest refined point "
            f"{best_norm / base.circumradius:.1f}R of {cfg.search_radius_factor:.0f}R")
    return OracleReport(
        count=float(len(clusters)),
        points=tuple(PlanarPoint(float(p[0]), float(p[1])) for p in clusters),
        misfits=tuple(float(m) for m in cluster_mis),
        curve=False,
        note=note,
    )


def oracle_count_auto(base: BaseTriangle, a: "CosTriple | list[float]",
                      cfg: OracleConfig = OracleConfig(),
                      tol: Tolerances = DEFAULT) -> OracleReport:
    """oracle_count with automatic disc enlargement on BoundaryHit."""
    factor = cfg.search_radius_factor
    while True:
        try:
            return oracle_count(
                base, a,
                OracleConfig(search_radius_factor=factor, grid_n=cfg.grid_n,
                             refine_tol=cfg.refine_tol,
                             cluster_scale=cfg.cluster_scale,
                             max_starts=cfg.max_starts, max_iter=cfg.max_iter,
                             ring_n=cfg.ring_n, polar_radial=cfg.polar_radial,
                             polar_angular=cfg.polar_angular),
                tol,
            )
        except BoundaryHit:
            factor *= 4.0
            if factor > _MAX_RADIUS_FACTOR:
                raise


# ---------------------------------------------------------------------------
# Region sweep: classifier vs solver vs oracle over random surface samples.


@dataclass
class SweepRow:
    region: str
    predicted: float | None
    samples: int = 0
    solver_mismatches: int = 0
    oracle_mismatches: int = 0
    examples: list = field(default_factory=list)


@dataclass
class SweepReport:
    sides: tuple[float, float, float]
    seed: int
    samples_per_octant: int
    rows: list[SweepRow]
    draws: int
    unobserved_octants: tuple[str, ...]

    @property
    def mismatch_count(self) -> int:
        return sum(r.solver_mismatches + r.oracle_mismatches for r in self.rows)

    @property
    def ok(self) -> bool:
        return self.mismatch_count == 0

    def table(self) -> str:
        lines = ["region                 predicted  samples  solver-bad  oracle-bad"]
        for r in sorted(self.rows, key=lambda r: r.region):
            pred = "n/a" if r.predicted is None else (
                "inf" if math.isinf(r.predicted) else str(int(r.predicted)))
            lines.append(f"{r.region:<22} {pred:>9}  {r.samples:>7}  "
                         f"{r.solver_mismatches:>10}  {r.oracle_mismatches:>10}")
        if self.unobserved_octants:
            lines.append("octants with no samples: "
                         + ", ".join(self.unobserved_octants))
        return "\n".join(lines)


_SWEEP_CFG = OracleConfig(grid_n=96, ring_n=360, polar_radial=32,
                          polar_angular=64, max_iter=60)


def _draw_surface_samples(base: BaseTriangle, per_octant: int, seed: int,
                          tol: Tolerances) -> tuple[dict, int]:
    """Random on-surface samples binned by octant/component key."""
    rng = np.random.default_rng(seed)
    x0, y0, z0 = base.angle_cosines
    planes = np.array([x0, y0, z0])
    sp = special_points(base)
    avoid = np.array([p.as_array()
                      for p in (*sp.tildes(), *sp.hats(), sp.orthocenter)])
    corners = np.array([(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)],
                       dtype=float)
    kind = base.kind(tol)
    m = base.largest_angle_index()
    p0 = planes.copy()

    buckets: dict[tuple, list] = {}
    draws = 0
    needed_components = per_octant
    for batch in range(600):
        theta = rng.uniform(-math.pi, math.pi, size=8192)
        sigma = rng.uniform(-math.pi, math.pi, size=8192)
        draws += len(theta)
        a = np.stack([np.cos(theta), np.cos(sigma), np.cos(theta - sigma)], axis=1)
        dist = a - planes
        ok = np.all(np.abs(dist) > _SWEEP_PLANE_MARGIN, axis=1)
        ok &= np.all(np.abs(a[:, None, :] - avoid[None, :, :]).max(axis=2)
                     > 10.0 * tol.point, axis=1)
        ok &= np.all(np.abs(a[:, None, :] - corners[None, :, :]).max(axis=2)
                     > _SWEEP_CORNER_MARGIN, axis=1)
        a, dist = a[ok], dist[ok]
        signs = np.where(dist > 0, 1, -1)
        comp = np.zeros(len(a), dtype=int)  # 0 whole, 1 near, 2 far
        if kind == "obtuse":
            split = (signs[:, m] > 0) & (np.delete(signs, m, axis=1) < 0).all(axis=1)
            if np.any(split):
                grad = np.stack([
                    2.0 * (a[:, 1] * a[:, 2] - a[:, 0]),
                    2.0 * (a[:, 0] * a[:, 2] - a[:, 1]),
                    2.0 * (a[:, 0] * a[:, 1] - a[:, 2]),
                ], axis=1)
                inward = np.einsum("ni,ni->n", grad, a - p0)
                comp[split & (inward < 0)] = 2
                comp[split & (inward >= 0)] = 1
        keys = signs[:, 0] * 18 + signs[:, 1] * 6 + signs[:, 2] * 2 + comp
        for key_code in np.unique(keys):
            rows = np.flatnonzero(keys == key_code)
            first = rows[0]
            key = (tuple(int(v) for v in signs[first]), int(comp[first]))
            bucket = buckets.setdefault(key, [])
            limit = needed_components if key[1] else per_octant
            room = limit - len(bucket)
            if room > 0:
                bucket.extend(a[rows[:room]])
        done = True
        for key, bucket in buckets.items():
            limit = needed_components if key[1] else per_octant
            if len(bucket) < limit:
                done = False
        split_keys = [k for k in buckets if k[1]]
        # A barely obtuse base has a split component of near-zero chart
        # measure; stop waiting for it once enough draws have gone by.
        if kind == "obtuse" and len(split_keys) < 2 and batch < 150:
            done = False
        if done and len(buckets) >= (7 if kind != "acute" else 8):
            break
    return buckets, draws


def _batch_oracle_counts(base: BaseTriangle, targets: np.ndarray,
                         tol: Tolerances) -> np.ndarray:
    """Oracle counts for many targets of one base, sharing the start bank."""
    cfg = _SWEEP_CFG
    starts, images, grid_shape = _bank(
        base, cfg.search_radius_factor, cfg.grid_n, cfg.ring_n,
        cfg.polar_radial, cfg.polar_angular,
    )
    polar_shape = (cfg.polar_radial, cfg.polar_angular)
    radius = cfg.search_radius_factor * base.circumradius
    img_sq = np.einsum("ni,ni->n", images, images)
    counts = np.full(len(targets), -1.0)
    retry: list[int] = []

    chunk = 128
    for lo in range(0, len(targets), chunk):
        block = targets[lo:lo + chunk]
        mis = (img_sq[None, :] - 2.0 * block @ images.T
               + np.einsum("ni,ni->n", block, block)[:, None])
        rows_starts = []
        rows_targets = []
        rows_owner = []
        plateaus = ((1.0 - block[:, 0]) ** 2 + (1.0 - block[:, 1]) ** 2
                    + (1.0 - block[:, 2]) ** 2)
        for r in range(len(block)):
            cand = _candidate_indices(mis[r], grid_shape, cfg.ring_n,
                                      polar_shape, top_k=32,
                                      plateau=float(plateaus[r]),
                                      ring_cap=24)
            rows_starts.append(starts[cand])
            rows_targets.append(np.tile(block[r], (len(cand), 1)))
            rows_owner.append(np.full(len(cand), lo + r))
        all_starts = np.concatenate(rows_starts)
        all_targets = np.concatenate(rows_targets)
        owner = np.concatenate(rows_owner)
        pts, mis_ref = _gauss_newton(base, all_starts, all_targets,
                                     cfg.refine_tol, cfg.max_iter)
        for r in range(len(block)):
            sel = owner == lo + r
            p, mm = pts[sel], mis_ref[sel]
            conv = mm <= cfg.refine_tol
            pc, mc = _apply_vertex_guard(
                base, as_triple(block[r]), p[conv].copy(), mm[conv].copy(),
                cfg.refine_tol, tol)
            cluster_radius = cfg.cluster_scale * base.circumradius
            clusters, cmis = _cluster(pc, mc, cluster_radius)
            clusters, cmis = _tighten_clusters(base, block[r], clusters,
                                               cmis, cluster_radius)
            norms = (np.hypot(clusters[:, 0], clusters[:, 1])
                     if len(clusters) else np.empty(0))
            best = float(mm.min()) if len(mm) else 1.0
            best_at = float(np.hypot(*p[int(np.argmin(mm))])) if len(mm) else 0.0
            boundary = ((len(clusters) and norms.max() >= _BOUNDARY_FRACTION * radius)
                        or (not len(clusters) and best <= 1e-6
                            and best_at >= _BOUNDARY_FRACTION * radius))
            if boundary:
                retry.append(lo + r)
            else:
                counts[lo + r] = float(len(clusters))

    for idx in retry:
        bigger = OracleConfig(search_radius_factor=200.0, grid_n=96,
                              ring_n=360, polar_radial=32, polar_angular=64)
        try:
            counts[idx] = oracle_count_auto(base, as_triple(targets[idx]),
                                            bigger, tol).count
        except BoundaryHit:
            counts[idx] = -1.0
    return counts


def region_sweep(base: BaseTriangle, samples_per_octant: int = 200,
                 seed: int = 0, tol: Tolerances = DEFAULT) -> SweepReport:
    """Compare classifier, solver, and oracle over random surface samples.

    Samples are drawn from the trigonometric chart, binned per octant (and
    per component for a split octant), and each retained sample is pushed
    through all three counters.  Mismatches are recorded, not raised.
    """
    buckets, draws = _draw_surface_samples(base, samples_per_octant, seed, tol)

    rows: dict[str, SweepRow] = {}
    all_samples: list[np.ndarray] = []
    labels = []
    for bucket in buckets.values():
        for a in bucket:
            all_samples.append(a)
    for a in all_samples:
        label = classify(base, as_triple(a), tol)
        try:
            pred = count_prediction(base, label, tol)
        except EmptyRegion:
            pred = CountPrediction(None, "sample observed in a region "
                                         "predicted empty")
        labels.append((label, pred))

    targets = np.array(all_samples) if all_samples else np.empty((0, 3))
    oracle_counts = _batch_oracle_counts(base, targets, tol)

    for a, (label, pred), ocount in zip(all_samples, labels, oracle_counts):
        key = label.describe()
        row = rows.setdefault(key, SweepRow(region=key, predicted=pred.count))
        row.samples += 1
        try:
            scount = solve_on_pillowcase(base, as_triple(a), tol).count
        except Inconsistent:
            scount = -1.0
        if pred.count is None or scount != pred.count:
            row.solver_mismatches += 1
            if len(row.examples) < 5:
                row.examples.append((tuple(a), pred.count, "solver", scount))
        if pred.count is None or ocount != pred.count:
            row.oracle_mismatches += 1
            if len(row.examples) < 5:
                row.examples.append((tuple(a), pred.count, "oracle", ocount))

    seen_octants = {key[0] for key in buckets.keys()}
    unobserved = []
    for signs in ((1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1),
                  (1, -1, -1), (-1, 1, -1), (-1, -1, 1), (-1, -1, -1)):
        if signs not in seen_octants:
            unobserved.append("".join("+" if s > 0 else "-" for s in signs))
    if base.kind(tol) == "obtuse":
        split_comps = {key[1] for key in buckets if key[1]}
        for comp, name in ((1, "near"), (2, "far")):
            if comp not in split_comps:
                unobserved.append(f"split {name} component")
    return SweepReport(
        sides=base.sides,
        seed=seed,
        samples_per_octant=samples_per_octant,
        rows=list(rows.values()),
        draws=draws,
        unobserved_octants=tuple(unobserved),
    )
