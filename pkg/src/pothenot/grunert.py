"""The Grunert distance system and its polynomial reduction.

An observer at distances ``s1, s2, s3`` from the vertices A, B, C satisfies
the three law-of-cosines equations

    s1^2 - 2*a3*s1*s2 + s2^2 = d3^2
    s1^2 - 2*a2*s1*s3 + s3^2 = d2^2
    s2^2 - 2*a1*s2*s3 + s3^2 = d1^2

Eliminating s2 and s3 leaves a quartic in u = s1^2 whose coefficients are
polynomials in the cosines and the squared sides.  On the pillowcase the two
leading coefficients vanish and the quartic degenerates to a quadratic, which
is what the solver uses.  Every candidate root is pushed through
back-substitution, residual filtering, trilateration, and a forward-map
re-verification before it is accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import IdenticallyZero, Inconsistent, NotOnSurface
from .geometry import (
    BaseTriangle,
    CosTriple,
    PILLOW_VERTICES,
    PlanarPoint,
    as_triple,
    forward_map,
    pillow_value,
)
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "LambdaCoeffs",
    "Solution",
    "SolutionSet",
    "grunert_residual",
    "lambda_coeffs",
    "quartic_roots",
    "solve_on_pillowcase",
    "trilaterate",
]


@dataclass(frozen=True)
class LambdaCoeffs:
    """Coefficients of the eliminated quartic in u = s1^2.

    ``l0`` through ``l4`` are the signed values.  ``m0`` through ``m4`` hold
    the same polynomials evaluated with every additive term replaced by its
    absolute value; they provide the scale against which a coefficient is
    judged to be zero (the coefficients are degree-8 polynomials in the
    inputs, so no absolute threshold is meaningful).
    """

    l0: float
    l1: float
    l2: float
    l3: float
    l4: float
    m0: float
    m1: float
    m2: float
    m3: float
    m4: float

    def values(self) -> np.ndarray:
        return np.array([self.l0, self.l1, self.l2, self.l3, self.l4])

    def magnitudes(self) -> np.ndarray:
        return np.array([self.m0, self.m1, self.m2, self.m3, self.m4])

    @property
    def scale(self) -> float:
        return max(self.m0, self.m1, self.m2, self.m3, self.m4, 1e-300)

    def negligible(self, k: int, rel: float) -> bool:
        return abs(self.values()[k]) <= rel * self.scale

    def poly_eval(self, u: float) -> float:
        return self.l0 + u * (self.l1 + u * (self.l2 + u * (self.l3 + u * self.l4)))


def _signed_and_abs(terms: Sequence[float]) -> tuple[float, float]:
    return float(sum(terms)), float(sum(abs(t) for t in terms))


def lambda_coeffs(base: BaseTriangle, a: "CosTriple | Sequence[float]") -> LambdaCoeffs:
    """Evaluate the five quartic coefficients at a cosine triple.

    The triple does not have to lie on the pillowcase; off-surface inputs
    simply give a nondegenerate quartic.
    """
    a1, a2, a3 = as_triple(a)
    d1sq, d2sq, d3sq = base.d1 ** 2, base.d2 ** 2, base.d3 ** 2

    f = pillow_value((a1, a2, a3))
    f_abs = 1.0 + 2.0 * abs(a1 * a2 * a3) + a1 * a1 + a2 * a2 + a3 * a3

    l4, m4 = 16.0 * f * f, 16.0 * f_abs * f_abs

    g_terms = [
        (2.0 * a2 * a2 * a3 * a3 - a1 * a2 * a3 - a2 * a2 - a3 * a3 + 1.0) * d1sq,
        -(a1 * a2 * a3 - a1 * a1 - a3 * a3 + 1.0) * d2sq,
        -(a1 * a2 * a3 - a1 * a1 - a2 * a2 + 1.0) * d3sq,
    ]
    g, g_abs = _signed_and_abs(g_terms)
    l3, m3 = 32.0 * f * g, 32.0 * f_abs * g_abs

    q1 = d1sq - d2sq - d3sq
    l2_terms = [
        16.0 * (d2sq * d2sq + 4.0 * d2sq * d3sq + d3sq * d3sq) * a1 ** 4,
        16.0 * (d1sq - d3sq) ** 2 * a2 ** 4,
        16.0 * (d1sq - d2sq) ** 2 * a3 ** 4,
        -32.0 * (d1sq * d2sq + d1sq * d3sq + d2sq * d2sq + 4.0 * d2sq * d3sq
                 + d3sq * d3sq) * a2 * a3 * a1 ** 3,
        -8.0 * (5.0 * d1sq - d2sq - 5.0 * d3sq) * q1 * a2 * a2,
        -8.0 * (5.0 * d1sq - 5.0 * d2sq - d3sq) * q1 * a3 * a3,
        16.0 * (3.0 * d1sq * d1sq - 4.0 * d1sq * d2sq - 4.0 * d1sq * d3sq
                + d2sq * d2sq + d3sq * d3sq) * a2 * a2 * a3 * a3,
        64.0 * (d1sq * d2sq + d1sq * d3sq + d2sq * d3sq) * (a1 * a2 * a3) ** 2,
        24.0 * q1 * q1,
        -8.0 * a1 * (1.0 - 2.0 * a2 * a2 - 2.0 * a3 * a3)
        * (a1 - 2.0 * a2 * a3) * d1sq * d1sq,
        8.0 * a1 * a1 * ((6.0 * d2sq + 6.0 * d3sq - 8.0 * a2 * a2 * d3sq
                          - 8.0 * a3 * a3 * d2sq) * d1sq
                         + 2.0 * a2 * a2 * d2sq * d2sq
                         + 4.0 * a2 * a2 * d2sq * d3sq
                         + 6.0 * a2 * a2 * d3sq * d3sq
                         + 6.0 * a3 * a3 * d2sq * d2sq
                         + 4.0 * a3 * a3 * d2sq * d3sq
                         + 2.0 * a3 * a3 * d3sq * d3sq
                         - 5.0 * d2sq * d2sq - 14.0 * d2sq * d3sq
                         - 5.0 * d3sq * d3sq),
        -16.0 * a1 * a2 * a3 * ((2.0 * d1sq * d2sq - 4.0 * d1sq * d3sq
                                 + 2.0 * d2sq * d3sq + 2.0 * d3sq * d3sq) * a2 * a2
                                + (2.0 * d1sq * d3sq + 2.0 * d2sq * d2sq
                                   + 2.0 * d2sq * d3sq - 4.0 * d1sq * d2sq) * a3 * a3
                                + 2.0 * d1sq * d2sq + 2.0 * d1sq * d3sq
                                - d2sq * d2sq - 10.0 * d2sq * d3sq
                                - d3sq * d3sq),
    ]
    l2, m2 = _signed_and_abs(l2_terms)

    l1_terms = [
        8.0 * q1 ** 3,
        8.0 * q1 * (d1sq * d2sq + d1sq * d3sq - d2sq * d2sq
                    - 6.0 * d2sq * d3sq - d3sq * d3sq) * a1 * a1,
        -8.0 * (d1sq - d3sq) * q1 * q1 * a2 * a2,
        -8.0 * (d1sq - d2sq) * q1 * q1 * a3 * a3,
        -32.0 * d2sq * d3sq * (d2sq + d3sq) * a1 ** 4,
        8.0 * q1 * (d1sq * d1sq - d2sq * d2sq + 6.0 * d2sq * d3sq
                    - d3sq * d3sq) * a1 * a2 * a3,
        -16.0 * d2sq * (d1sq * d1sq - 2.0 * d1sq * d2sq + d2sq * d2sq
                        + d3sq * d3sq) * (a1 * a3) ** 2,
        -16.0 * d3sq * (d1sq * d1sq - 2.0 * d1sq * d3sq + d2sq * d2sq
                        + d3sq * d3sq) * (a1 * a2) ** 2,
        32.0 * d2sq * d3sq * (d1sq + d2sq + d3sq) * a2 * a3 * a1 ** 3,
    ]
    l1, m1 = _signed_and_abs(l1_terms)

    l0_inner = 4.0 * a1 * a1 * d2sq * d3sq - q1 * q1
    l0 = l0_inner * l0_inner
    m0 = (4.0 * a1 * a1 * d2sq * d3sq + q1 * q1) ** 2

    return LambdaCoeffs(l0=l0, l1=l1, l2=l2, l3=l3, l4=l4,
                        m0=m0, m1=m1, m2=m2, m3=m3, m4=m4)


def quartic_roots(c: LambdaCoeffs, tol: Tolerances = DEFAULT) -> list[tuple[float, int]]:
    """Real nonnegative roots of the quartic, with multiplicities.

    Leading coefficients below the scaled zero threshold are dropped, so an
    on-surface triple is solved as the quadratic it really is.

    Raises
    ------
    IdenticallyZero
        If every coefficient is below the threshold (only surface points
        that make the whole polynomial collapse reach this).
    """
    eps = tol.lambda_rel * c.scale
    coeffs = c.values()
    degree = -1
    for k in range(4, -1, -1):
        if abs(coeffs[k]) > eps:
            degree = k
            break
    if degree < 0:
        raise IdenticallyZero("all quartic coefficients vanish at this triple")
    if degree == 0:
        return []

    # numpy wants highest degree first.
    roots = np.roots(coeffs[degree::-1])
    umax = max(1.0, float(np.max(np.abs(roots))) if roots.size else 1.0)
    imag_tol = 1e-7 * umax
    reals = sorted(float(r.real) for r in roots
                   if abs(r.imag) <= imag_tol and r.real >= -imag_tol)

    # Newton polish; harmless at multiple roots (residual is already flat).
    deriv = np.array([k * coeffs[k] for k in range(1, degree + 1)])
    polished = []
    for u in reals:
        u = max(u, 0.0)
        for _ in range(3):
            p = c.poly_eval(u)
            dp = float(np.polyval(deriv[::-1], u))
            if dp == 0.0:
                break
            step = p / dp
            if not math.isfinite(step) or abs(step) > 0.5 * umax:
                break
            u = max(u - step, 0.0)
        polished.append(u)

    cluster = 1e-7 * umax
    out: list[tuple[float, int]] = []
    for u in sorted(polished):
        if out and abs(u - out[-1][0]) <= cluster:
            prev_u, mult = out[-1]
            out[-1] = ((prev_u * mult + u) / (mult + 1), mult + 1)
        else:
            out.append((u, 1))
    return out


def grunert_residual(base: BaseTriangle, a: "CosTriple | Sequence[float]",
                     s: Sequence[float]) -> float:
    """Largest absolute defect of the three distance equations."""
    a1, a2, a3 = a
    s1, s2, s3 = s
    return max(
        abs(s1 * s1 - 2.0 * a3 * s1 * s2 + s2 * s2 - base.d3 ** 2),
        abs(s1 * s1 - 2.0 * a2 * s1 * s3 + s3 * s3 - base.d2 ** 2),
        abs(s2 * s2 - 2.0 * a1 * s2 * s3 + s3 * s3 - base.d1 ** 2),
    )


def trilaterate(base: BaseTriangle, s: Sequence[float],
                tol: Tolerances = DEFAULT) -> PlanarPoint:
    """Planar point at distances ``s = (s1, s2, s3)`` from A, B, C.

    Subtracting the A-circle equation from the B- and C-circle equations
    leaves two linear equations; the 2x2 system is regular for any
    non-degenerate base.

    Raises
    ------
    Inconsistent
        If the solved point fails to reproduce one of the distances.
    """
    s1, s2, s3 = s
    ax, ay = base.a
    bx, by = base.b
    cx, cy = base.c
    mat = np.array([[2.0 * (bx - ax), 2.0 * (by - ay)],
                    [2.0 * (cx - ax), 2.0 * (cy - ay)]])
    rhs = np.array([
        s1 * s1 - s2 * s2 + bx * bx + by * by - ax * ax - ay * ay,
        s1 * s1 - s3 * s3 + cx * cx + cy * cy - ax * ax - ay * ay,
    ])
    dx, dy = np.linalg.solve(mat, rhs)
    point = PlanarPoint(float(dx), float(dy))
    defect = max(
        abs(math.hypot(dx - ax, dy - ay) - s1),
        abs(math.hypot(dx - bx, dy - by) - s2),
        abs(math.hypot(dx - cx, dy - cy) - s3),
    )
    # Roundoff in the squared-distance system grows with the observer
    # distance, so the defect bound must carry the same scale.
    far = max(1.0, (max(s1, s2, s3) / base.max_side) ** 2)
    if defect > tol.accept(base.max_side) * base.circumradius * far:
        raise Inconsistent(
            f"distances {tuple(s)} admit no planar point (defect {defect:.3e})"
        )
    return point


@dataclass(frozen=True)
class Solution:
    """One accepted resection solution."""

    s1: float
    s2: float
    s3: float
    point: PlanarPoint
    residual: float

    @property
    def distances(self) -> tuple[float, float, float]:
        return (self.s1, self.s2, self.s3)


@dataclass(frozen=True)
class SolutionSet:
    """Outcome of solving the Grunert system at one surface triple.

    ``kind`` is ``"finite"`` or ``"infinite_arc"``.  For the arc case,
    ``arc_vertex`` names the vertex whose opposite circumcircle arc carries
    the solutions.  ``note`` carries a human-readable remark for edge cases
    (pillow vertices, rejected orthocenter triple).
    """

    kind: str
    solutions: tuple[Solution, ...] = ()
    arc_vertex: str | None = None
    note: str | None = None

    @property
    def count(self) -> float:
        if self.kind == "infinite_arc":
            return math.inf
        return float(len(self.solutions))


def _near(a: Sequence[float], b: Sequence[float], eps: float) -> bool:
    return all(abs(x - y) <= eps for x, y in zip(a, b))


def _back_substitute(base: BaseTriangle, a: CosTriple, u: float,
                     tol: Tolerances) -> list[tuple[float, float, float]]:
    """All positive (s1, s2, s3) branch combinations for one root u = s1^2."""
    guard = (tol.vertex_scale * base.circumradius) ** 2
    if u <= guard:
        return []
    s1 = math.sqrt(u)
    slack = tol.accept(base.max_side) * max(1.0, u / base.max_side ** 2)

    def branches(cosine: float, side: float) -> list[float]:
        rad = side * side - (1.0 - cosine * cosine) * u
        if rad < 0.0:
            if rad < -slack:
                return []
            rad = 0.0
        root = math.sqrt(rad)
        vals = {cosine * s1 + root, cosine * s1 - root}
        return [v for v in vals if v > 0.0]

    out = []
    for s2 in branches(a.a3, base.d3):
        for s3 in branches(a.a2, base.d2):
            out.append((s1, s2, s3))
    return out


def _polish_candidate(base: BaseTriangle, a: CosTriple,
                      s: tuple[float, float, float]
                      ) -> tuple[float, float, float]:
    """Newton-polish a distance triple against the original system.

    Roots recovered through the eliminated polynomial inherit its
    coefficient noise, which blows up near double roots; a few Newton
    steps on the three law-of-cosines equations (whose evaluation is
    exact to machine precision) restore full accuracy.
    """
    d1, d2, d3 = base.sides
    a1, a2, a3 = a
    vec = np.array(s, dtype=float)
    for _ in range(4):
        s1, s2, s3 = vec
        eqs = np.array([
            s2 * s2 - 2.0 * a1 * s2 * s3 + s3 * s3 - d1 * d1,
            s1 * s1 - 2.0 * a2 * s1 * s3 + s3 * s3 - d2 * d2,
            s1 * s1 - 2.0 * a3 * s1 * s2 + s2 * s2 - d3 * d3,
        ])
        if np.max(np.abs(eqs)) < 1e-14 * max(1.0, float(np.max(vec)) ** 2):
            break
        jac = np.array([
            [0.0, 2.0 * (s2 - a1 * s3), 2.0 * (s3 - a1 * s2)],
            [2.0 * (s1 - a2 * s3), 0.0, 2.0 * (s3 - a2 * s1)],
            [2.0 * (s1 - a3 * s2), 2.0 * (s2 - a3 * s1), 0.0],
        ])
        try:
            delta = np.linalg.solve(jac, -eqs)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(delta)):
            break
        trial = vec + delta
        if np.any(trial <= 0.0):
            trial = vec + 0.5 * delta
            if np.any(trial <= 0.0):
                break
        vec = trial
    return (float(vec[0]), float(vec[1]), float(vec[2]))


def solve_on_pillowcase(base: BaseTriangle, a: "CosTriple | Sequence[float]",
                        tol: Tolerances = DEFAULT) -> SolutionSet:
    """All observers realizing a cosine triple on the pillowcase.

    The input must satisfy the surface equation to within ``tol.surface``.
    Tilde triples yield the infinite-arc answer; the four pillow vertices
    yield an empty finite answer (no planar observer attains them); the
    sign-flipped base triple is handled by the explicit orthocenter branch.
    Everything else goes through the on-surface quadratic.

    Raises
    ------
    NotOnSurface
        If the surface residual exceeds the tolerance.
    """
    a = as_triple(a)
    f = pillow_value(a)
    if abs(f) > tol.surface:
        raise NotOnSurface(
            f"pillow value {f:.3e} exceeds tolerance {tol.surface:.1e}"
        )

    eps = tol.point
    for vertex in PILLOW_VERTICES:
        if _near(a, vertex, eps):
            return SolutionSet(kind="finite", note="pillow vertex, no planar observer")

    x0, y0, z0 = base.angle_cosines
    for name, tilde in (("A", (-x0, y0, z0)), ("B", (x0, -y0, z0)),
                        ("C", (x0, y0, -z0))):
        if _near(a, tilde, eps):
            return SolutionSet(
                kind="infinite_arc",
                arc_vertex=name,
                note=f"every point of the circumcircle arc opposite {name} solves it",
            )

    if _near(a, (-x0, -y0, -z0), eps):
        if base.kind(tol) == "acute":
            h = base.orthocenter()
            s = (h.distance_to(base.a), h.distance_to(base.b), h.distance_to(base.c))
            res = grunert_residual(base, a, s)
            sol = Solution(s1=s[0], s2=s[1], s3=s[2], point=h, residual=res)
            return SolutionSet(kind="finite", solutions=(sol,))
        return SolutionSet(
            kind="finite",
            note="sign-flipped base triple is attained only by acute bases",
        )

    coeffs = lambda_coeffs(base, a)
    lam_eps = tol.lambda_rel * coeffs.scale
    c2, c1, c0 = coeffs.l2, coeffs.l1, coeffs.l0

    roots: list[float] = []
    if abs(c2) <= lam_eps:
        if abs(c1) > lam_eps:
            roots.append(-c0 / c1)
        # constant nonzero quadratic: no roots; fully zero was handled above
    else:
        disc = c1 * c1 - 4.0 * c2 * c0
        disc_scale = c1 * c1 + 4.0 * abs(c2) * abs(c0)
        if disc < 0.0 and disc >= -1e-10 * disc_scale:
            disc = 0.0
        if disc >= 0.0:
            # Citardauq form for the small root keeps it accurate when
            # c1 dominates.
            sq = math.sqrt(disc)
            if c1 >= 0.0:
                qv = -(c1 + sq) / 2.0
            else:
                qv = -(c1 - sq) / 2.0
            roots.append(qv / c2)
            if qv != 0.0:
                roots.append(c0 / qv)
            else:
                roots.append(0.0)

    accept = tol.accept(base.max_side)
    candidates: list[Solution] = []
    for u in roots:
        if not math.isfinite(u) or u <= 0.0:
            continue
        for s in _back_substitute(base, a, u, tol):
            # A wrong sign branch misses by an O(1) amount; polish only
            # refines triples already consistent at the noise scale,
            # otherwise it can drag a bad branch onto a nearby solution.
            far = max(1.0, (max(s) / base.max_side) ** 2)
            if grunert_residual(base, a, s) > 1e4 * accept * far:
                continue
            s = _polish_candidate(base, a, s)
            res = grunert_residual(base, a, s)
            # Equation noise scales with the squared observer distance.
            if res > accept * max(1.0, (max(s) / base.max_side) ** 2):
                continue
            try:
                point = trilaterate(base, s, tol)
            except Inconsistent:
                continue
            try:
                mapped = forward_map(base, point, tol)
            except Exception:
                continue
            defect = max(abs(m - t) for m, t in zip(mapped, a))
            if defect > accept / base.max_side ** 2:
                continue
            candidates.append(Solution(s1=s[0], s2=s[1], s3=s[2],
                                       point=point, residual=res))

    sep = tol.sep_scale * base.circumradius
    kept: list[Solution] = []
    for sol in sorted(candidates, key=lambda c: c.residual):
        if all(sol.point.distance_to(k.point) > sep for k in kept):
            kept.append(sol)
    kept.sort(key=lambda c: c.s1)
    if len(kept) > 2:
        raise Inconsistent(
            f"{len(kept)} distinct candidates survived filtering; "
            "tolerances are inconsistent for this input"
        )
    return SolutionSet(kind="finite", solutions=tuple(kept))
