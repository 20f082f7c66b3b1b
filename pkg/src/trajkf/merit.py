"""Per-frame merit curves: the frame-importance function and its baselines.

The headline merit of an interval is the harmonic mean of the turn rate and
twist rate when the motion is genuinely three-dimensional, and the plain
turn rate of the plane-projected motion when it is planar.  Baseline
descriptors (arc-length curvature in 2-D/3-D, time-parameterized curvature
in 2-D/3-D) share the same curve representation so one selection stage
serves all of them.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from . import geometry
from .geometry import BRANCH_NONPLANAR, BRANCH_PLANAR, CurveKind, DescriptorCurve
from .planarity import DEFAULT_F_ERROR, fit_plane, project_to_plane
from .trajectory import (
    DerivativeStack,
    SigningInterval,
    TimedTrajectory,
    differentiate,
    speed,
)

HARMONIC_EPS = 1e-12

# Twist-rate estimates divide by |d1 x d2|^2 ~ v^6, so samples in the slow
# tails near rest boundaries are noise-dominated; they are masked (and thus
# zeroed in the merit) below this fraction of the interval's fast speed.
TORSION_SPEED_FRACTION = 0.25

_STENCIL_PAD = 3


class MeritMethod(Enum):
    """Descriptor used to rank frames; values match the CLI / file tags."""

    MT = "mt"
    K2DT = "k2dt"
    K3DT = "k3dt"
    KAPPA2DS = "k2ds"
    KAPPA3DS = "k3ds"


def harmonic_mean_curve(k: DescriptorCurve, t_abs: DescriptorCurve) -> DescriptorCurve:
    """Harmonic mean 2ab/(a+b) of turn-rate and twist-rate curves.

    Samples where either input is masked, or where the sum falls below
    HARMONIC_EPS, are masked (and therefore stored as 0).
    """
    if len(k) != len(t_abs):
        raise ValueError(f"curve length mismatch: {len(k)} vs {len(t_abs)}")
    a = k.values
    b = t_abs.values
    mask = k.valid_mask & t_abs.valid_mask & (a + b >= HARMONIC_EPS)
    vals = np.zeros_like(a)
    np.divide(2 * a * b, a + b, out=vals, where=mask)
    return DescriptorCurve(vals, CurveKind.H_T, mask)


def _padded_window(traj: TimedTrajectory, interval: SigningInterval) -> tuple[TimedTrajectory, slice]:
    """Interval plus a few neighbouring samples, so the interval's own edges
    are differentiated with interior stencils whenever neighbours exist."""
    lo = max(0, interval.start - _STENCIL_PAD)
    hi = min(traj.n_samples - 1, interval.end + _STENCIL_PAD)
    window = traj.restrict(SigningInterval(lo, hi))
    offset = interval.start - lo
    return window, slice(offset, offset + interval.length)


def _sliced_derivatives(window: TimedTrajectory, sl: slice, order: int) -> DerivativeStack:
    d = differentiate(window, order)
    return DerivativeStack(
        d.d1[sl],
        d.d2[sl] if d.d2 is not None else None,
        d.d3[sl] if d.d3 is not None else None,
    )


def _guard_slow_torsion(t_abs: DescriptorCurve, v: np.ndarray,
                        fraction: float) -> DescriptorCurve:
    cutoff = fraction * np.percentile(v, 95)
    return DescriptorCurve(t_abs.values, t_abs.kind, t_abs.valid_mask & (v >= cutoff))


def merit_curve(
    traj: TimedTrajectory,
    interval: SigningInterval,
    method: MeritMethod,
    f_error: float = DEFAULT_F_ERROR,
    torsion_speed_fraction: float = TORSION_SPEED_FRACTION,
) -> DescriptorCurve:
    """Descriptor curve for one signing interval under the given method.

    For MeritMethod.MT the interval's points are plane-fitted first; planar
    intervals are projected onto the plane and ranked by the turn rate of the
    projection, non-planar intervals by the harmonic mean of turn and twist
    rates, with the twist factor masked below ``torsion_speed_fraction`` of
    the interval's fast speed.  The curve's ``branch`` field records which
    case ran.  Baseline methods skip the classification.  Output is aligned
    to the interval's samples with masked entries stored as 0.
    """
    seg = traj.restrict(interval)
    window, sl = _padded_window(traj, interval)

    if method is MeritMethod.MT:
        if seg.dim == 2:
            curve = geometry.curvature_t(_sliced_derivatives(window, sl, 2))
            branch = BRANCH_PLANAR
        else:
            plane = fit_plane(seg.points, f_error)
            if plane.is_planar:
                flat = project_to_plane(window, plane)
                curve = geometry.curvature_t(_sliced_derivatives(flat, sl, 2))
                branch = BRANCH_PLANAR
            else:
                d = _sliced_derivatives(window, sl, 3)
                t_abs = _guard_slow_torsion(geometry.torsion_t(d), speed(d),
                                            torsion_speed_fraction)
                curve = harmonic_mean_curve(geometry.curvature_t(d), t_abs)
                branch = BRANCH_NONPLANAR
        return DescriptorCurve(curve.values, CurveKind.M_T, curve.valid_mask, branch)

    if method in (MeritMethod.K3DT, MeritMethod.KAPPA3DS) and seg.dim != 3:
        raise ValueError(f"method {method.value} needs a 3-D trajectory")

    if method in (MeritMethod.K2DT, MeritMethod.KAPPA2DS):
        window = window.take_xy()
    d = _sliced_derivatives(window, sl, 2)
    if method in (MeritMethod.K2DT, MeritMethod.K3DT):
        return geometry.curvature_t(d)
    return geometry.curvature_s(d)
