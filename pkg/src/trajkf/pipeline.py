"""End-to-end keyframe extraction: smooth, segment, score, select."""

from __future__ import annotations

from typing import Sequence

from .geometry import DescriptorCurve
from .merit import MeritMethod, merit_curve
from .planarity import DEFAULT_F_ERROR
from .selection import (
    DEFAULT_MIN_GAP,
    DEFAULT_MIN_LEN,
    KeyframeSet,
    default_speed_threshold,
    detect_intervals,
    find_peaks,
    select_keyframes,
)
from .trajectory import (
    SigningInterval,
    TimedTrajectory,
    differentiate,
    gaussian_smooth,
    speed,
)

DEFAULT_SIGMA = 2.0


def extract_keyframes(
    traj: TimedTrajectory,
    method: MeritMethod = MeritMethod.MT,
    count: int = 1,
    sigma: float = DEFAULT_SIGMA,
    f_error: float = DEFAULT_F_ERROR,
    intervals: Sequence[SigningInterval] | None = None,
    speed_threshold: float | None = None,
    min_gap: int = DEFAULT_MIN_GAP,
    min_len: int = DEFAULT_MIN_LEN,
) -> KeyframeSet:
    """Select the ``count`` most prominent merit maxima of a trajectory.

    The trajectory is smoothed first; signing intervals are detected from the
    speed profile unless supplied (e.g. from an annotation file).  Per
    interval, the merit curve of ``method`` is peak-picked, and peaks are
    pooled and ranked globally by prominence.  Frames slower than the
    interval-detection speed threshold never become candidates, so rest
    frames inside annotated rest-to-rest intervals stay excluded.  Frames in
    the result are sample indices into ``traj``.
    """
    smoothed = gaussian_smooth(traj, sigma)
    threshold = speed_threshold if speed_threshold is not None \
        else default_speed_threshold(smoothed)
    if intervals is None:
        if threshold <= 0:
            intervals = []
        else:
            intervals = detect_intervals(smoothed, threshold, min_gap, min_len)

    moving = None
    if threshold > 0 and smoothed.n_samples >= 3:
        moving = speed(differentiate(smoothed, 1)) >= threshold

    per_interval = []
    for itv in intervals:
        curve = merit_curve(smoothed, itv, method, f_error)
        if moving is not None:
            guard = moving[itv.start : itv.end + 1]
            curve = DescriptorCurve(curve.values, curve.kind,
                                    curve.valid_mask & guard, curve.branch)
        per_interval.append((itv, find_peaks(curve)))
    return select_keyframes(per_interval, count, method=method)
