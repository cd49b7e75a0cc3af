"""Base triangles, viewing-angle cosines, and the realizable surface.

An observer ``D`` in the plane of a triangle ``ABC`` sees the three sides
under angles whose cosines are

    a1 = cos(angle BDC),  a2 = cos(angle ADC),  a3 = cos(angle ADB).

The triple ``(a1, a2, a3)`` always lands on the zero set of

    pillow_value(a) = 1 + 2*a1*a2*a3 - a1^2 - a2^2 - a3^2

inside the cube ``[-1, 1]^3``.  That zero set (part of the classical Cayley
nodal cubic) is called the pillowcase here; the solid region where the value
is nonnegative is the pillow.  This module provides the base-triangle type
with its canonical placement, the forward map from observers to cosines, and
the handful of distinguished surface points attached to a base.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import DegenerateBase, VertexCollision
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "BaseTriangle",
    "CosTriple",
    "PlanarPoint",
    "SpecialPoints",
    "euler_volume_squared",
    "forward_map",
    "forward_map_many",
    "limit_set_membership",
    "pillow_value",
    "pillow_gradient",
    "special_points",
    "triangle_from_angles",
    "triangle_from_sides",
]

# The four singular vertices of the pillowcase: sign patterns with product +1.
PILLOW_VERTICES = (
    (1.0, 1.0, 1.0),
    (1.0, -1.0, -1.0),
    (-1.0, 1.0, -1.0),
    (-1.0, -1.0, 1.0),
)


@dataclass(frozen=True)
class PlanarPoint:
    """Point in the plane of the base triangle."""

    x: float
    y: float

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y

    def distance_to(self, other: "PlanarPoint | Sequence[float]") -> float:
        ox, oy = other
        return math.hypot(self.x - ox, self.y - oy)


@dataclass(frozen=True)
class CosTriple:
    """Cosines of the three viewing angles, each in ``[-1, 1]``.

    No surface constraint is imposed at construction; off-surface triples
    are legal inputs to the classifier.  Values overshooting the cube by at
    most 1e-12 (a common byproduct of dot-product rounding) are clamped.
    """

    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        for name in ("a1", "a2", "a3"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
            if abs(v) > 1.0:
                if abs(v) > 1.0 + 1e-12:
                    raise ValueError(f"{name}={v!r} is outside [-1, 1]")
                v = math.copysign(1.0, v)
            object.__setattr__(self, name, v)

    def __iter__(self) -> Iterator[float]:
        yield self.a1
        yield self.a2
        yield self.a3

    def as_array(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.a3], dtype=float)


def as_triple(a: "CosTriple | Sequence[float]") -> CosTriple:
    """Coerce a 3-sequence to a CosTriple."""
    if isinstance(a, CosTriple):
        return a
    a1, a2, a3 = a
    return CosTriple(float(a1), float(a2), float(a3))


def pillow_value(a: "CosTriple | Sequence[float]") -> float:
    """Defining value of the pillow at a cosine triple.

    Positive inside the solid pillow, zero on the pillowcase surface,
    negative outside.
    """
    a1, a2, a3 = a
    return 1.0 + 2.0 * a1 * a2 * a3 - a1 * a1 - a2 * a2 - a3 * a3


def pillow_gradient(a: "CosTriple | Sequence[float]") -> tuple[float, float, float]:
    a1, a2, a3 = a
    return (
        2.0 * (a2 * a3 - a1),
        2.0 * (a1 * a3 - a2),
        2.0 * (a1 * a2 - a3),
    )


def euler_volume_squared(x: float, y: float, z: float, a: "CosTriple | Sequence[float]") -> float:
    """Squared volume of a tetrahedron from three concurrent edge lengths.

    ``x, y, z`` are the edge lengths meeting at the apex and ``a`` holds the
    cosines of the three face angles between them.  The volume vanishes
    exactly when the apex is coplanar with the base, i.e. when the cosine
    triple lies on the pillowcase.
    """
    return (x * x * y * y * z * z / 36.0) * pillow_value(a)


@dataclass(frozen=True)
class BaseTriangle:
    """Base triangle with its canonical placement.

    Sides follow the opposite-vertex convention: ``d1 = |BC|``,
    ``d2 = |AC|``, ``d3 = |AB|``.  The placement puts all vertices on the
    circumcircle about the origin with ``A = (R, 0)`` and ``B`` reached from
    ``A`` counterclockwise.

    Attributes
    ----------
    d1, d2, d3 : float
        Side lengths.
    x0, y0, z0 : float
        Cosines of the angles at A, B, C.
    alpha, beta, gamma : float
        The angles themselves, radians.
    circumradius : float
        Radius of the circumscribed circle.
    a, b, c : tuple of float
        Canonical vertex coordinates.
    """

    d1: float
    d2: float
    d3: float
    x0: float
    y0: float
    z0: float
    alpha: float
    beta: float
    gamma: float
    circumradius: float
    a: tuple[float, float]
    b: tuple[float, float]
    c: tuple[float, float]

    @property
    def sides(self) -> tuple[float, float, float]:
        return (self.d1, self.d2, self.d3)

    @property
    def angle_cosines(self) -> tuple[float, float, float]:
        return (self.x0, self.y0, self.z0)

    @property
    def vertices(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c], dtype=float)

    @property
    def max_side(self) -> float:
        return max(self.d1, self.d2, self.d3)

    def largest_angle_index(self) -> int:
        """0, 1 or 2 for the vertex (A, B, C) carrying the largest angle."""
        cosines = (self.x0, self.y0, self.z0)
        return min(range(3), key=lambda i: cosines[i])

    def kind(self, tol: Tolerances = DEFAULT) -> str:
        """'acute', 'right' or 'obtuse', judged on the largest angle."""
        c = min(self.x0, self.y0, self.z0)
        if abs(c) <= tol.right_angle:
            return "right"
        return "obtuse" if c < 0.0 else "acute"

    def orthocenter(self) -> PlanarPoint:
        # With the circumcenter at the origin the orthocenter is A + B + C.
        return PlanarPoint(
            self.a[0] + self.b[0] + self.c[0],
            self.a[1] + self.b[1] + self.c[1],
        )


def triangle_from_sides(d1: float, d2: float, d3: float) -> BaseTriangle:
    """Build a base triangle from its three side lengths.

    Raises
    ------
    DegenerateBase
        If any side is not positive or the strict triangle inequality fails.
    """
    d1, d2, d3 = float(d1), float(d2), float(d3)
    if not all(math.isfinite(d) and d > 0.0 for d in (d1, d2, d3)):
        raise DegenerateBase(f"sides must be positive and finite, got {(d1, d2, d3)}")
    if d1 >= d2 + d3 or d2 >= d1 + d3 or d3 >= d1 + d2:
        raise DegenerateBase(f"sides {(d1, d2, d3)} violate the strict triangle inequality")

    x0 = (d2 * d2 + d3 * d3 - d1 * d1) / (2.0 * d2 * d3)
    y0 = (d1 * d1 + d3 * d3 - d2 * d2) / (2.0 * d1 * d3)
    z0 = (d1 * d1 + d2 * d2 - d3 * d3) / (2.0 * d1 * d2)
    alpha = math.acos(max(-1.0, min(1.0, x0)))
    beta = math.acos(max(-1.0, min(1.0, y0)))
    gamma = math.acos(max(-1.0, min(1.0, z0)))

    r = d1 / (2.0 * math.sin(alpha))
    # Central angles: the chord opposite a vertex subtends twice its angle.
    phi_b = 2.0 * gamma
    phi_c = 2.0 * gamma + 2.0 * alpha
    a = (r, 0.0)
    b = (r * math.cos(phi_b), r * math.sin(phi_b))
    c = (r * math.cos(phi_c), r * math.sin(phi_c))
    return BaseTriangle(
        d1=d1, d2=d2, d3=d3,
        x0=x0, y0=y0, z0=z0,
        alpha=alpha, beta=beta, gamma=gamma,
        circumradius=r, a=a, b=b, c=c,
    )


def triangle_from_angles(alpha: float, beta: float, *, circumradius: float = 1.0,
                         degrees: bool = False) -> BaseTriangle:
    """Build a base triangle from two angles, scaled to the given circumradius."""
    if degrees:
        alpha = math.radians(alpha)
        beta = math.radians(beta)
    gamma = math.pi - alpha - beta
    if min(alpha, beta, gamma) <= 0.0 or not math.isfinite(circumradius) or circumradius <= 0.0:
        raise DegenerateBase(
            f"angles {(alpha, beta)} (rad) do not define a triangle, or bad circumradius"
        )
    two_r = 2.0 * circumradius
    return triangle_from_sides(
        two_r * math.sin(alpha), two_r * math.sin(beta), two_r * math.sin(gamma)
    )


def triangle_from_landmarks(points: Sequence[Sequence[float]]) -> BaseTriangle:
    """Build a base triangle from three planar landmark coordinates."""
    (ax, ay), (bx, by), (cx, cy) = points
    d1 = math.hypot(bx - cx, by - cy)
    d2 = math.hypot(ax - cx, ay - cy)
    d3 = math.hypot(ax - bx, ay - by)
    return triangle_from_sides(d1, d2, d3)


def forward_map(base: BaseTriangle, point: "PlanarPoint | Sequence[float]",
                tol: Tolerances = DEFAULT) -> CosTriple:
    """Cosines of the viewing angles of an observer at ``point``.

    Raises
    ------
    VertexCollision
        If the observer is within ``tol.vertex_scale * R`` of a base vertex.
    """
    x, y = point
    ux, uy = base.a[0] - x, base.a[1] - y
    vx, vy = base.b[0] - x, base.b[1] - y
    wx, wy = base.c[0] - x, base.c[1] - y
    s1 = math.hypot(ux, uy)
    s2 = math.hypot(vx, vy)
    s3 = math.hypot(wx, wy)
    guard = tol.vertex_scale * base.circumradius
    if min(s1, s2, s3) < guard:
        raise VertexCollision(f"observer {tuple(point)} coincides with a base vertex")
    a1 = (vx * wx + vy * wy) / (s2 * s3)
    a2 = (ux * wx + uy * wy) / (s1 * s3)
    a3 = (ux * vx + uy * vy) / (s1 * s2)
    return CosTriple(a1, a2, a3)


def forward_map_many(base: BaseTriangle, points: np.ndarray) -> np.ndarray:
    """Vectorized forward map; ``points`` is ``(n, 2)``, result ``(n, 3)``.

    No vertex guard is applied; norms are floored at a tiny positive value
    so callers probing near a vertex get large-but-finite junk instead of
    NaN.  Cosines are not clamped.
    """
    pts = np.asarray(points, dtype=float)
    with np.errstate(all="ignore"):
        u = base.vertices[0] - pts
        v = base.vertices[1] - pts
        w = base.vertices[2] - pts
        n1 = np.maximum(np.hypot(u[..., 0], u[..., 1]), 1e-300)
        n2 = np.maximum(np.hypot(v[..., 0], v[..., 1]), 1e-300)
        n3 = np.maximum(np.hypot(w[..., 0], w[..., 1]), 1e-300)
        a1 = (v[..., 0] * w[..., 0] + v[..., 1] * w[..., 1]) / (n2 * n3)
        a2 = (u[..., 0] * w[..., 0] + u[..., 1] * w[..., 1]) / (n1 * n3)
        a3 = (u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1]) / (n1 * n2)
        return np.stack([a1, a2, a3], axis=-1)


def observer_distances(base: BaseTriangle, point: "PlanarPoint | Sequence[float]"
                       ) -> tuple[float, float, float]:
    """Distances from an observer to the vertices A, B, C."""
    x, y = point
    return (
        math.hypot(base.a[0] - x, base.a[1] - y),
        math.hypot(base.b[0] - x, base.b[1] - y),
        math.hypot(base.c[0] - x, base.c[1] - y),
    )


def _cos_diff(c1: float, c2: float) -> float:
    # cos|t1 - t2| from the cosines of t1, t2 in [0, pi]; avoids arccos jitter.
    s1 = math.sqrt(max(0.0, 1.0 - c1 * c1))
    s2 = math.sqrt(max(0.0, 1.0 - c2 * c2))
    return max(-1.0, min(1.0, c1 * c2 + s1 * s2))


@dataclass(frozen=True)
class SpecialPoints:
    """Distinguished surface points attached to a base triangle.

    Tilde points are realized by whole circumcircle arcs (infinitely many
    observers); hat points are the endpoints of the one-solution arcs on
    the angle-plane ellipses; the orthocenter triple is the image of the
    orthocenter for an acute base.
    """

    tilde_a: CosTriple
    tilde_b: CosTriple
    tilde_c: CosTriple
    hat_a: CosTriple
    hat_b: CosTriple
    hat_c: CosTriple
    orthocenter: CosTriple

    def tildes(self) -> tuple[CosTriple, CosTriple, CosTriple]:
        return (self.tilde_a, self.tilde_b, self.tilde_c)

    def hats(self) -> tuple[CosTriple, CosTriple, CosTriple]:
        return (self.hat_a, self.hat_b, self.hat_c)


def special_points(base: BaseTriangle) -> SpecialPoints:
    x0, y0, z0 = base.x0, base.y0, base.z0
    return SpecialPoints(
        tilde_a=CosTriple(-x0, y0, z0),
        tilde_b=CosTriple(x0, -y0, z0),
        tilde_c=CosTriple(x0, y0, -z0),
        hat_a=CosTriple(_cos_diff(y0, z0), y0, z0),
        hat_b=CosTriple(x0, _cos_diff(x0, z0), z0),
        hat_c=CosTriple(x0, y0, _cos_diff(x0, y0)),
        orthocenter=CosTriple(-x0, -y0, -z0),
    )


def limit_set_membership(base: BaseTriangle, a: "CosTriple | Sequence[float]",
                         vertex: str, tol: Tolerances = DEFAULT) -> bool:
    """Whether ``a`` is a limit of cosine triples of observers approaching a vertex.

    The limit set of vertex A is the solid elliptical patch cut out of the
    plane ``a1 = x0`` by the pillow, and cyclically for B and C.
    """
    a1, a2, a3 = a
    if vertex == "A":
        plane, p, q, w = a1 - base.x0, a2, a3, base.x0
    elif vertex == "B":
        plane, p, q, w = a2 - base.y0, a1, a3, base.y0
    elif vertex == "C":
        plane, p, q, w = a3 - base.z0, a1, a2, base.z0
    else:
        raise ValueError(f"vertex must be 'A', 'B' or 'C', got {vertex!r}")
    if abs(plane) > tol.plane:
        return False
    return p * p + q * q - 2.0 * w * p * q <= 1.0 - w * w + tol.plane
