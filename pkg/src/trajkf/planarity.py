"""PCA plane fitting: classify 3-D point sets as planar and project them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .trajectory import TimedTrajectory

DEFAULT_F_ERROR = 5e-2


@dataclass(frozen=True, eq=False)
class PlanarityResult:
    """Best-fit plane of a point set and its flatness classification.

    fitting_error is sigma3 / (sigma1 + sigma2 + sigma3) over the singular
    values of the 3x3 covariance (1/N normalization) of the mean-centered
    points, so it lies in [0, 1/3]; is_planar holds iff it is below the
    threshold the fit was run with.
    """

    fitting_error: float
    is_planar: bool
    basis: np.ndarray      # (2, 3), orthonormal rows spanning the plane
    centroid: np.ndarray   # (3,)


def _fix_sign(v: np.ndarray) -> np.ndarray:
    # deterministic orientation: largest-magnitude component positive
    return -v if v[np.argmax(np.abs(v))] < 0 else v


def fit_plane(points, f_error: float = DEFAULT_F_ERROR) -> PlanarityResult:
    """Fit a plane through a 3-D point set by PCA.

    Point sets of size <= 2 (and exactly collinear sets) always lie in a
    plane and come back with fitting_error 0.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError("points must be an (N, 3) array")
    centroid = pts.mean(axis=0)
    centered = pts - centroid
    cov = centered.T @ centered / pts.shape[0]
    u, sigma, _ = np.linalg.svd(cov)
    total = sigma.sum()
    if pts.shape[0] < 3 or total == 0:
        fitting_error = 0.0
    else:
        fitting_error = float(sigma[2] / total)
    basis = np.vstack([_fix_sign(u[:, 0]), _fix_sign(u[:, 1])])
    basis.flags.writeable = False
    centroid.flags.writeable = False
    return PlanarityResult(fitting_error, fitting_error < f_error, basis, centroid)


def project_to_plane(traj: TimedTrajectory, result: PlanarityResult) -> TimedTrajectory:
    """Project a 3-D trajectory onto a fitted plane, yielding 2-D coordinates.

    Output coordinates are inner products of the centered points with the two
    basis vectors; frame rate and start frame are preserved.
    """
    if traj.dim != 3:
        raise ValueError("projection expects a 3-D trajectory")
    rel = traj.points - result.centroid
    coords = rel @ result.basis.T
    return TimedTrajectory(coords, traj.frame_rate, traj.start_frame)
