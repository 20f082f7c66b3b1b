"""Discrete curvature, torsion, and moving-frame computation.

Shape descriptors (arc-length parameterization) and rate descriptors (time
parameterization) are both derived from time derivatives of the sampled
trajectory, using the closed identities

    speed         v = |d1|
    curvature     kappa = |d1 x d2| / v^3          (shape, 1/length)
    torsion       |tau| = |<d1 x d2, d3>| / |d1 x d2|^2
    turn rate     K = kappa * v = |d1 x d2| / v^2  (1/s)
    twist rate    |T| = |tau| * v                  (1/s)

so that no intermediate arc-length resampling is needed.  For 2-D input the
cross product is the scalar x'y'' - y'x'' treated as a z-only vector.
Samples where the speed or the cross product degenerate are masked rather
than emitted as NaN.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .trajectory import DerivativeStack, speed

SPEED_EPS = 1e-6   # below this speed (units/s) descriptors are undefined
CROSS_EPS = 1e-9   # below this |d1 x d2| torsion and frames are undefined

BRANCH_PLANAR = "planar_curvature"
BRANCH_NONPLANAR = "harmonic_mean"


class CurveKind(str, Enum):
    """What a per-sample descriptor curve measures."""

    KAPPA_S_2D = "kappa_s_2d"
    KAPPA_S_3D = "kappa_s_3d"
    TAU_S = "tau_s"
    K_T_2D = "K_t_2d"
    K_T_3D = "K_t_3d"
    T_T = "T_t"
    H_T = "H_t"
    M_T = "M_t"


@dataclass(frozen=True, eq=False)
class DescriptorCurve:
    """Per-sample scalar descriptor aligned to trajectory samples.

    ``values[n]`` is meaningful only where ``valid_mask[n]``; masked entries
    are stored as 0 so the curve can feed peak selection directly.  ``branch``
    records which merit branch produced the curve, when applicable.
    """

    values: np.ndarray
    kind: CurveKind
    valid_mask: np.ndarray
    branch: str | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        mask = np.asarray(self.valid_mask, dtype=bool)
        if vals.shape != mask.shape or vals.ndim != 1:
            raise ValueError("values and valid_mask must be 1-D arrays of equal length")
        vals = np.where(mask, vals, 0.0)
        vals.flags.writeable = False
        mask = mask.copy()
        mask.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "valid_mask", mask)

    def __len__(self) -> int:
        return self.values.shape[0]

    def selection_values(self) -> np.ndarray:
        """Values with masked samples forced to 0, for peak finding."""
        return np.where(self.valid_mask, self.values, 0.0)


@dataclass(frozen=True, eq=False)
class FrenetFrame:
    """Per-sample tangent/normal/binormal unit vectors, masked where undefined."""

    t_vec: np.ndarray
    n_vec: np.ndarray
    b_vec: np.ndarray
    valid_mask: np.ndarray


def _cross(d1: np.ndarray, d2: np.ndarray) -> tuple[np.ndarray | None, np.ndarray]:
    """Cross product of derivative rows: (vector or None for 2-D, magnitude)."""
    if d1.shape[1] == 2:
        scalar = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
        return None, np.abs(scalar)
    vec = np.cross(d1, d2)
    return vec, np.linalg.norm(vec, axis=1)


def _require(d: DerivativeStack, order: int, what: str) -> None:
    if order >= 2 and d.d2 is None:
        raise ValueError(f"{what} needs second derivatives")
    if order >= 3 and d.d3 is None:
        raise ValueError(f"{what} needs third derivatives")


def curvature_s(d: DerivativeStack) -> DescriptorCurve:
    """Arc-length curvature per sample; masked where the speed degenerates."""
    _require(d, 2, "curvature")
    v = speed(d)
    _, cross_mag = _cross(d.d1, d.d2)
    mask = v >= SPEED_EPS
    vals = np.zeros_like(v)
    np.divide(cross_mag, v**3, out=vals, where=mask)
    kind = CurveKind.KAPPA_S_3D if d.dim == 3 else CurveKind.KAPPA_S_2D
    return DescriptorCurve(vals, kind, mask)


def curvature_t(d: DerivativeStack) -> DescriptorCurve:
    """Time-parameterized curvature (instantaneous turning rate, 1/s)."""
    _require(d, 2, "curvature")
    v = speed(d)
    _, cross_mag = _cross(d.d1, d.d2)
    mask = v >= SPEED_EPS
    vals = np.zeros_like(v)
    np.divide(cross_mag, v**2, out=vals, where=mask)
    kind = CurveKind.K_T_3D if d.dim == 3 else CurveKind.K_T_2D
    return DescriptorCurve(vals, kind, mask)


def torsion_s(d: DerivativeStack) -> DescriptorCurve:
    """Arc-length torsion magnitude; 3-D only, masked where curvature degenerates."""
    if d.dim != 3:
        raise ValueError("torsion is a 3-D notion; got a 2-D derivative stack")
    _require(d, 3, "torsion")
    v = speed(d)
    cross_vec, cross_mag = _cross(d.d1, d.d2)
    num = np.abs(np.einsum("ij,ij->i", cross_vec, d.d3))
    mask = (v >= SPEED_EPS) & (cross_mag >= CROSS_EPS)
    vals = np.zeros_like(v)
    np.divide(num, cross_mag**2, out=vals, where=mask)
    return DescriptorCurve(vals, CurveKind.TAU_S, mask)


def torsion_t(d: DerivativeStack) -> DescriptorCurve:
    """Time-parameterized torsion magnitude (twist rate, 1/s); 3-D only."""
    if d.dim != 3:
        raise ValueError("torsion is a 3-D notion; got a 2-D derivative stack")
    _require(d, 3, "torsion")
    v = speed(d)
    cross_vec, cross_mag = _cross(d.d1, d.d2)
    num = np.abs(np.einsum("ij,ij->i", cross_vec, d.d3)) * v
    mask = (v >= SPEED_EPS) & (cross_mag >= CROSS_EPS)
    vals = np.zeros_like(v)
    np.divide(num, cross_mag**2, out=vals, where=mask)
    return DescriptorCurve(vals, CurveKind.T_T, mask)


def frenet_frame(d: DerivativeStack) -> FrenetFrame:
    """Tangent/normal/binormal unit vectors per sample (3-D only).

    The tangent is the normalized velocity; the normal is the component of
    the acceleration orthogonal to the tangent, normalized; the binormal is
    their cross product.  Samples with degenerate speed or curvature are
    masked.
    """
    if d.dim != 3:
        raise ValueError("moving frames are 3-D; got a 2-D derivative stack")
    _require(d, 2, "frame")
    v = speed(d)
    _, cross_mag = _cross(d.d1, d.d2)
    mask = (v >= SPEED_EPS) & (cross_mag >= CROSS_EPS)

    t_vec = np.zeros_like(d.d1)
    np.divide(d.d1, v[:, None], out=t_vec, where=mask[:, None])
    proj = np.einsum("ij,ij->i", d.d2, t_vec)
    n_raw = d.d2 - proj[:, None] * t_vec
    n_norm = np.linalg.norm(n_raw, axis=1)
    mask = mask & (n_norm > 0)
    n_vec = np.zeros_like(n_raw)
    np.divide(n_raw, n_norm[:, None], out=n_vec, where=mask[:, None])
    b_vec = np.cross(t_vec, n_vec)
    b_vec[~mask] = 0.0
    t_vec[~mask] = 0.0
    for arr in (t_vec, n_vec, b_vec, mask):
        arr.flags.writeable = False
    return FrenetFrame(t_vec, n_vec, b_vec, mask)
