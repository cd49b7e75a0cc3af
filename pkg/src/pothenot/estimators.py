"""Estimator-style wrappers around the resection pipeline.

``AngleCosineTransformer`` turns observer positions into cosine triples for
a fixed landmark set; ``ResectionSolver`` inverts them.  Both follow the
fit/transform/predict conventions so they compose with sklearn pipelines
and parameter search utilities.
"""

from __future__ import annotations

import dataclasses

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .errors import NotOnSurface
from .geometry import PlanarPoint, as_triple, triangle_from_landmarks
from .grunert import SolutionSet, solve_on_pillowcase
from .tolerances import DEFAULT, Tolerances

__all__ = ["AngleCosineTransformer", "ResectionSolver"]


def _as_landmarks(X) -> np.ndarray:
    arr = np.asarray(X, dtype=float)
    if arr.shape != (3, 2):
        raise ValueError(f"expected three planar landmarks, got shape {arr.shape}")
    return arr


class AngleCosineTransformer(TransformerMixin, BaseEstimator):
    """Map planar observer positions to their angle-cosine triples.

    Fit on the three landmarks A, B, C (one (3, 2) array); transform takes
    (n, 2) observer positions and returns (n, 3) cosines of the angles
    subtended at each observer by BC, AC, and AB, in that order.
    """

    def fit(self, X, y=None):
        self.landmarks_ = _as_landmarks(X)
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "landmarks_")
        pts = np.atleast_2d(np.asarray(X, dtype=float))
        if pts.shape[1] != 2:
            raise ValueError("observers must be planar points")
        rays = self.landmarks_[None, :, :] - pts[:, None, :]
        norms = np.maximum(np.hypot(rays[..., 0], rays[..., 1]), 1e-300)
        unit = rays / norms[..., None]
        out = np.empty((len(pts), 3))
        for i, (p, q) in enumerate(((1, 2), (0, 2), (0, 1))):
            out[:, i] = np.einsum("nk,nk->n", unit[:, p], unit[:, q])
        return out


class ResectionSolver(BaseEstimator):
    """Recover observer positions from angle-cosine triples.

    Fit on the three landmarks; ``predict`` maps (n, 3) cosine triples to
    (n, 2) positions in the landmark coordinate frame.  Ambiguous rows
    (two admissible observers) yield the one nearer the first landmark;
    rows with no admissible observer, an infinite family, or an
    off-surface triple come back as NaN.  ``solve`` exposes the full
    solution set for a single triple.
    """

    def __init__(self, tol: Tolerances = DEFAULT):
        self.tol = tol

    def fit(self, X, y=None):
        self.landmarks_ = _as_landmarks(X)
        self.base_ = triangle_from_landmarks(self.landmarks_)
        # Rigid map from the internal frame back to the landmark frame.
        canonical = self.base_.vertices
        cc = canonical - canonical.mean(axis=0)
        uu = self.landmarks_ - self.landmarks_.mean(axis=0)
        u_svd, _, vt = np.linalg.svd(cc.T @ uu)
        self.rotation_ = (u_svd @ vt).T
        self.translation_ = (self.landmarks_.mean(axis=0)
                             - self.rotation_ @ canonical.mean(axis=0))
        return self

    def _to_user(self, point) -> np.ndarray:
        return self.rotation_ @ np.asarray(point, dtype=float) + self.translation_

    def solve(self, a) -> SolutionSet:
        """Full solution set for one triple, points in the landmark frame."""
        check_is_fitted(self, "base_")
        result = solve_on_pillowcase(self.base_, as_triple(a), self.tol)
        mapped = tuple(
            dataclasses.replace(
                sol, point=PlanarPoint(*self._to_user(tuple(sol.point))))
            for sol in result.solutions
        )
        return SolutionSet(kind=result.kind, solutions=mapped,
                           arc_vertex=result.arc_vertex, note=result.note)

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "base_")
        triples = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.full((len(triples), 2), np.nan)
        for i, row in enumerate(triples):
            try:
                result = self.solve(row)
            except (NotOnSurface, ValueError):
                continue
            if result.kind != "finite" or not result.solutions:
                continue
            best = min(result.solutions, key=lambda s: s.s1)
            out[i] = tuple(best.point)
        return out
