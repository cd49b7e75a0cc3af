"""Classification of cosine triples within the pillowcase decomposition.

Every triple falls into exactly one bucket: off the pillow, interior to it,
one of the four singular vertices, a special surface point (the three tilde
triples and the sign-flipped base triple), a point of one of the three
angle-coincidence ellipses, or a plain octant sample.  For each bucket the
solution count of the resection problem is known, and ``count_prediction``
returns it together with the clause that produced it.

The one-solution arc on an ellipse runs between the two hat points.  Which
of the two hat-to-hat arcs carries the solutions is decided by mapping the
midpoint of the reflected circumcircle arc through the forward map: that
reflected arc is exactly the locus of observers realizing the ellipse, so
its image picks the correct side.  (A popular shortcut, checking an angle
sum, fails for scalene and obtuse bases; see the tests.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AmbiguousBand, EmptyRegion, NotOnEllipse
from .geometry import (
    BaseTriangle,
    CosTriple,
    PILLOW_VERTICES,
    as_triple,
    forward_map,
    pillow_gradient,
    pillow_value,
)
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "CountPrediction",
    "RegionLabel",
    "arc_membership",
    "classify",
    "classify_and_count",
    "component_of",
    "count_prediction",
]

_ELLIPSES = ("A", "B", "C")


@dataclass(frozen=True)
class RegionLabel:
    """Where a cosine triple sits in the decomposition.

    kind is one of ``off_pillow``, ``interior_pillow``, ``pillow_vertex``,
    ``special_point``, ``on_ellipse``, ``surface_octant``.  The remaining
    fields are filled only when meaningful for the kind.
    """

    kind: str
    octant: tuple[int, int, int] | None = None
    component: str | None = None
    ellipse: str | None = None
    on_arc: bool | None = None
    special: str | None = None

    def describe(self) -> str:
        if self.kind == "surface_octant":
            signs = "".join("+" if s > 0 else "-" for s in self.octant)
            tag = "" if self.component in (None, "whole") else f" {self.component}"
            return f"octant({signs}){tag}"
        if self.kind == "on_ellipse":
            arc = {True: "on arc", False: "off arc", None: "right angle"}[self.on_arc]
            return f"ellipse(E_{self.ellipse}, {arc})"
        if self.kind == "special_point":
            return f"special({self.special})"
        return self.kind


@dataclass(frozen=True)
class CountPrediction:
    """Predicted number of observers, with the clause that decided it.

    ``count`` is 0, 1, 2, ``inf`` for the arc cases, or None when the input
    is an interior pillow point (spatial observers exist but counting them
    is out of scope here).
    """

    count: float | None
    provenance: str

    @property
    def supported(self) -> bool:
        return self.count is not None


def _wrap(angle: float) -> float:
    return angle % (2.0 * math.pi)


def _reflect(p: tuple[float, float], q1: tuple[float, float],
             q2: tuple[float, float]) -> tuple[float, float]:
    """Reflection of p across the line through q1 and q2."""
    dx, dy = q2[0] - q1[0], q2[1] - q1[1]
    norm = math.hypot(dx, dy)
    dx, dy = dx / norm, dy / norm
    wx, wy = p[0] - q1[0], p[1] - q1[1]
    proj = wx * dx + wy * dy
    return (q1[0] + 2.0 * proj * dx - wx, q1[1] + 2.0 * proj * dy - wy)


def _chart_angle(base: BaseTriangle, ellipse: str, a: CosTriple) -> float:
    """Angle parameter of an on-ellipse triple in that ellipse's chart.

    Each ellipse is traced by (cos t, cos(t - angle)) in the two free
    cosine slots; the pair determines t uniquely on the full circle.
    """
    if ellipse == "A":
        cs, other, w, ang = a.a2, a.a3, base.x0, base.alpha
    elif ellipse == "B":
        cs, other, w, ang = a.a1, a.a3, base.y0, base.beta
    else:
        cs, other, w, ang = a.a1, a.a2, base.z0, base.gamma
    sn = (other - cs * w) / math.sin(ang)
    return math.atan2(sn, cs)


@lru_cache(maxsize=128)
def _arc_chart(base: BaseTriangle, ellipse: str) -> tuple[float, float, float]:
    """Hat-point chart angles and the in-arc reference angle for an ellipse.

    The reference is the image of the midpoint of the reflected circumcircle
    arc, which realizes the ellipse pointwise.
    """
    alpha, beta, gamma = base.alpha, base.beta, base.gamma
    r = base.circumradius
    if ellipse == "A":
        end1, end2 = alpha - gamma, beta
        mid_angle = gamma - beta
        mirror = (base.b, base.c)
    elif ellipse == "B":
        end1, end2 = beta - gamma, alpha
        mid_angle = gamma + alpha
        mirror = (base.a, base.c)
    else:
        end1, end2 = gamma - beta, alpha
        mid_angle = gamma + math.pi
        mirror = (base.a, base.b)
    m1 = (r * math.cos(mid_angle), r * math.sin(mid_angle))
    m2 = _reflect(m1, mirror[0], mirror[1])
    ref = _chart_angle(base, ellipse, forward_map(base, m2))
    return end1, end2, ref


def arc_membership(base: BaseTriangle, a: "CosTriple | list[float]",
                   ellipse: str, tol: Tolerances = DEFAULT) -> str:
    """'on_theta' or 'off_theta' for a point of one of the three ellipses.

    Raises
    ------
    NotOnEllipse
        If the triple is not on the stated ellipse (plane or surface residual
        too large), or if the base angle at that vertex is right, in which
        case no arc carries solutions.
    """
    a = as_triple(a)
    if ellipse not in _ELLIPSES:
        raise ValueError(f"ellipse must be one of 'A','B','C', got {ellipse!r}")
    plane_value = {"A": base.x0, "B": base.y0, "C": base.z0}[ellipse]
    coord = {"A": a.a1, "B": a.a2, "C": a.a3}[ellipse]
    if abs(coord - plane_value) > tol.plane:
        raise NotOnEllipse(
            f"component differs from the base-angle cosine by {abs(coord - plane_value):.2e}"
        )
    if abs(pillow_value(a)) > tol.surface:
        raise NotOnEllipse("triple is not on the pillowcase")
    if abs(plane_value) <= tol.right_angle:
        raise NotOnEllipse(
            f"angle at {ellipse} is right; its ellipse carries no solutions"
        )
    end1, end2, ref = _arc_chart(base, ellipse)
    angle = _chart_angle(base, ellipse, a)
    span = _wrap(end2 - end1)
    ref_off = _wrap(ref - end1)
    off = _wrap(angle - end1)
    if ref_off < span:
        inside = tol.angle < off < span - tol.angle
    else:
        inside = span + tol.angle < off < 2.0 * math.pi - tol.angle
    return "on_theta" if inside else "off_theta"


def component_of(base: BaseTriangle, a: "CosTriple | list[float]",
                 tol: Tolerances = DEFAULT) -> str:
    """'near' or 'far' component of the split octant for an obtuse base.

    The segment from the base-angle triple (which lies outside the pillow)
    to the query point crosses the surface on its way exactly when the query
    sits on the far sheet; the crossing test is a cubic in the segment
    parameter.
    """
    a = np.asarray(as_triple(a).as_array())
    p0 = np.array(base.angle_cosines)
    v = a - p0

    # f(p0 + t v) is cubic in t; sample four nodes and fit exactly.
    ts = np.array([0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0])
    vals = [pillow_value(p0 + t * v) for t in ts]
    coeffs = np.polyfit(ts, vals, 3)
    roots = np.roots(coeffs)
    eps = 1e-9
    for r in roots:
        if abs(r.imag) <= 1e-9 and eps < r.real < 1.0 - eps:
            return "far"
    return "near"


def _is_split_pattern(signs: tuple[int, int, int], m: int) -> bool:
    return signs[m] > 0 and all(signs[i] < 0 for i in range(3) if i != m)


def classify(base: BaseTriangle, a: "CosTriple | list[float]",
             tol: Tolerances = DEFAULT) -> RegionLabel:
    """Locate a cosine triple in the pillowcase decomposition.

    Precedence: off-surface test, pillow vertices, tilde points, the
    sign-flipped base triple, ellipse bands, octant with component tag.

    Raises
    ------
    AmbiguousBand
        If the triple sits on two ellipse bands whose verdicts imply
        different counts (never observed for exact inputs; possible for
        borderline noisy ones).
    """
    a = as_triple(a)
    f = pillow_value(a)
    if abs(f) > tol.surface:
        kind = "interior_pillow" if f > 0.0 else "off_pillow"
        return RegionLabel(kind=kind)

    eps = tol.point
    for vertex in PILLOW_VERTICES:
        if all(abs(ai - vi) <= eps for ai, vi in zip(a, vertex)):
            return RegionLabel(kind="pillow_vertex")

    x0, y0, z0 = base.angle_cosines
    tildes = {"tilde_A": (-x0, y0, z0), "tilde_B": (x0, -y0, z0),
              "tilde_C": (x0, y0, -z0)}
    for name, point in tildes.items():
        if all(abs(ai - pi) <= eps for ai, pi in zip(a, point)):
            return RegionLabel(kind="special_point", special=name)
    if all(abs(ai + pi) <= eps for ai, pi in zip(a, (x0, y0, z0))):
        return RegionLabel(kind="special_point", special="orthocenter")

    deltas = (a.a1 - x0, a.a2 - y0, a.a3 - z0)
    on_planes = [name for name, d in zip(_ELLIPSES, deltas) if abs(d) <= tol.plane]
    if on_planes:
        verdicts: list[tuple[str, bool | None]] = []
        for name in on_planes:
            try:
                verdicts.append((name, arc_membership(base, a, name, tol) == "on_theta"))
            except NotOnEllipse:
                # right angle at that vertex: the ellipse carries count 0
                verdicts.append((name, None))
        counts = {0 if v in (False, None) else 1 for _, v in verdicts}
        if len(counts) > 1:
            raise AmbiguousBand(
                f"triple lies on ellipses {on_planes} with conflicting verdicts"
            )
        name, on_arc = verdicts[0]
        return RegionLabel(kind="on_ellipse", ellipse=name, on_arc=on_arc)

    signs = tuple(1 if d > 0.0 else -1 for d in deltas)
    component = None
    if base.kind(tol) == "obtuse":
        m = base.largest_angle_index()
        if _is_split_pattern(signs, m):
            component = component_of(base, a, tol)
        else:
            component = "whole"
    return RegionLabel(kind="surface_octant", octant=signs, component=component)


_ACUTE_TABLE = {
    (1, 1, 1): 2,
    (1, 1, -1): 1, (1, -1, 1): 1, (-1, 1, 1): 1, (-1, -1, -1): 1,
    (1, -1, -1): 0, (-1, 1, -1): 0, (-1, -1, 1): 0,
}


def _normalized_signs(base: BaseTriangle, octant: tuple[int, int, int]
                      ) -> tuple[int, int, int]:
    # Move the largest angle into the first slot; the tables below assume it.
    m = base.largest_angle_index()
    if m == 0:
        return octant
    signs = list(octant)
    signs[0], signs[m] = signs[m], signs[0]
    return tuple(signs)


def count_prediction(base: BaseTriangle, label: RegionLabel,
                     tol: Tolerances = DEFAULT) -> CountPrediction:
    """Solution count implied by a region label.

    Raises
    ------
    EmptyRegion
        If the label names the octant that is empty for a right or obtuse
        base; classify cannot produce it, so receiving one signals an
        inconsistency upstream.
    """
    kind = base.kind(tol)
    if label.kind == "off_pillow":
        return CountPrediction(0.0, "outside the pillow: not realizable")
    if label.kind == "interior_pillow":
        return CountPrediction(
            None, "interior pillow point: no planar observer; spatial counting unsupported"
        )
    if label.kind == "pillow_vertex":
        return CountPrediction(0.0, "pillow vertex: attained only in the limit")
    if label.kind == "special_point":
        if label.special.startswith("tilde"):
            return CountPrediction(
                math.inf, "tilde point: a whole circumcircle arc of observers"
            )
        if kind == "acute":
            return CountPrediction(1.0, "sign-flipped base triple: the orthocenter")
        if kind == "right":
            return CountPrediction(
                0.0, "sign-flipped base triple on a right-angle ellipse: none"
            )
        return CountPrediction(
            0.0, "sign-flipped base triple: unattained for an obtuse base"
        )
    if label.kind == "on_ellipse":
        vertex_cos = {"A": base.x0, "B": base.y0, "C": base.z0}[label.ellipse]
        if abs(vertex_cos) <= tol.right_angle or label.on_arc is None:
            return CountPrediction(
                0.0, f"ellipse at the right angle {label.ellipse}: no solutions"
            )
        if label.on_arc:
            return CountPrediction(1.0, "one-solution arc of the ellipse")
        return CountPrediction(0.0, "ellipse point off the one-solution arc")

    signs = _normalized_signs(base, label.octant)
    if kind == "acute":
        return CountPrediction(
            float(_ACUTE_TABLE[signs]), f"acute octant table at {signs}"
        )
    if signs == (-1, 1, 1):
        raise EmptyRegion(
            "octant (-,+,+) relative to the largest angle is empty for this base"
        )
    if kind == "right":
        return CountPrediction(
            float(_ACUTE_TABLE[signs]), f"right octant table at {signs}"
        )
    if signs == (1, -1, -1):
        component = label.component or "near"
        if component == "near":
            return CountPrediction(2.0, "near sheet of the split octant")
        return CountPrediction(0.0, "far sheet of the split octant")
    return CountPrediction(
        float(_ACUTE_TABLE[signs]), f"obtuse octant table at {signs}"
    )


def classify_and_count(base: BaseTriangle, a: "CosTriple | list[float]",
                       tol: Tolerances = DEFAULT
                       ) -> tuple[RegionLabel, CountPrediction]:
    label = classify(base, a, tol)
    return label, count_prediction(base, label, tol)
