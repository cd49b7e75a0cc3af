"""Shared numerical tolerances.

Absolute tolerances live in cosine space (dimensionless); length-like
tolerances are expressed as scales multiplying a base-dependent quantity,
so that everything degrades gracefully under rescaling of the triangle.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """Bundle of tolerances used by the solver, classifier and oracle.

    Attributes
    ----------
    surface : float
        Largest ``|pillow_value|`` accepted as "on the surface".
    plane : float
        Cosine-space half-width of the band around each angle plane.
    point : float
        Cosine-space radius around special points (tilde points,
        orthocenter cosines, pillow vertices).
    angle : float
        Angular guard at arc endpoints, radians.
    lambda_rel : float
        A quartic coefficient counts as vanishing below
        ``lambda_rel * max(coefficient magnitudes)``, where magnitudes are
        computed with every term replaced by its absolute value.
    poly_rel : float
        Relative residual bound for polynomial root acceptance.
    accept_scale : float
        Residual acceptance is ``accept_scale * max(side)**2`` unless
        ``accept_abs`` pins an absolute value.
    accept_abs : float | None
        Absolute override of the residual acceptance (squared-length units).
    sep_scale : float
        Two solutions closer than ``sep_scale * circumradius`` are merged.
    vertex_scale : float
        Observer closer than ``vertex_scale * circumradius`` to a base
        vertex counts as colliding with it.
    right_angle : float
        A base angle within this of ``pi/2`` (in cosine) is treated as right.
    """

    surface: float = 1e-9
    plane: float = 1e-9
    point: float = 1e-9
    angle: float = 1e-8
    lambda_rel: float = 1e-10
    poly_rel: float = 1e-9
    accept_scale: float = 1e-8
    accept_abs: float | None = None
    sep_scale: float = 1e-6
    vertex_scale: float = 1e-9
    right_angle: float = 1e-12

    def accept(self, max_side: float) -> float:
        """Residual acceptance threshold for a base with the given longest side."""
        if self.accept_abs is not None:
            return self.accept_abs
        return self.accept_scale * max_side * max_side

    def with_accept(self, value: float) -> "Tolerances":
        return replace(self, accept_abs=float(value))


DEFAULT = Tolerances()
