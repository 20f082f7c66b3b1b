"""Timed trajectory containers, file ingestion, smoothing, and differentiation.

A trajectory is a uniformly sampled sequence of 2-D or 3-D positions of a
tracked point (typically a wrist keypoint), together with the capture frame
rate.  Everything downstream (curvature descriptors, keyframe selection,
evaluation) consumes these containers; they are immutable after construction
and safe to share across threads.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class ParseError(ValueError):
    """A trajectory or annotation file violates its schema."""


def _float9(x: float) -> float:
    """Round to 9 significant digits (canonical precision for emitted files)."""
    return float(format(float(x), ".9g"))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class TimedTrajectory:
    """Uniformly sampled positions of a tracked point.

    Attributes:
        points: (N, D) array of positions, D in {2, 3}; units are whatever the
            source provides (pixels or meters).
        frame_rate: samples per second, > 0.
        start_frame: video frame index of sample 0.  Sample n occurs at time
            (start_frame + n) / frame_rate.
    """

    points: np.ndarray
    frame_rate: float
    start_frame: int = 0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("points must be a non-empty (N, D) array")
        if pts.shape[1] not in (2, 3):
            raise ValueError(f"dimensionality must be 2 or 3, got {pts.shape[1]}")
        if not self.frame_rate > 0:
            raise ValueError(f"frame_rate must be positive, got {self.frame_rate}")
        object.__setattr__(self, "points", _readonly(pts))
        object.__setattr__(self, "frame_rate", float(self.frame_rate))
        object.__setattr__(self, "start_frame", int(self.start_frame))

    @property
    def n_samples(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def times(self) -> np.ndarray:
        """Sample times in seconds."""
        n = self.n_samples
        return (self.start_frame + np.arange(n)) / self.frame_rate

    def restrict(self, interval: "SigningInterval") -> "TimedTrajectory":
        """Sub-trajectory over an inclusive sample-index range."""
        if not (0 <= interval.start and interval.end < self.n_samples):
            raise ValueError(
                f"interval [{interval.start}, {interval.end}] outside trajectory "
                f"of {self.n_samples} samples"
            )
        return TimedTrajectory(
            self.points[interval.start : interval.end + 1],
            self.frame_rate,
            self.start_frame + interval.start,
        )

    def take_xy(self) -> "TimedTrajectory":
        """First two coordinate channels as a 2-D trajectory."""
        if self.dim == 2:
            return self
        return TimedTrajectory(self.points[:, :2], self.frame_rate, self.start_frame)


@dataclass(frozen=True)
class SigningInterval:
    """Inclusive sample-index range covering one rest-to-rest motion."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"invalid interval [{self.start}, {self.end}]")

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    def contains(self, frame: int) -> bool:
        return self.start <= frame <= self.end


@dataclass(frozen=True, eq=False)
class DerivativeStack:
    """Per-sample derivative estimates of a trajectory.

    d1, d2, d3 hold velocity, acceleration, and jerk estimates in position
    units per s, s^2, s^3; d2/d3 are None when not requested.
    """

    d1: np.ndarray
    d2: np.ndarray | None = None
    d3: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "d1", _readonly(self.d1))
        for name in ("d2", "d3"):
            arr = getattr(self, name)
            if arr is not None:
                arr = _readonly(arr)
                if arr.shape != self.d1.shape:
                    raise ValueError(f"{name} shape {arr.shape} != d1 shape {self.d1.shape}")
                object.__setattr__(self, name, arr)

    @property
    def n_samples(self) -> int:
        return self.d1.shape[0]

    @property
    def dim(self) -> int:
        return self.d1.shape[1]


@dataclass(frozen=True)
class Annotations:
    """Ground-truth signing intervals and keyframe indices for one video."""

    intervals: tuple[SigningInterval, ...] = ()
    keyframes: tuple[int, ...] = ()
    n_frames: int | None = None


def gaussian_smooth(traj: TimedTrajectory, sigma: float) -> TimedTrajectory:
    """Smooth each coordinate channel with a truncated Gaussian kernel.

    The kernel has standard deviation ``sigma`` (in frames), is truncated at
    +/- ceil(4 sigma) taps, and is renormalized to sum 1; near the boundaries
    the truncated overlap is renormalized the same way, so constants are
    preserved everywhere.  ``sigma = 0`` returns the input unchanged.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return traj
    radius = math.ceil(4 * sigma)
    k = np.arange(-radius, radius + 1, dtype=float)
    kernel = np.exp(-(k**2) / (2 * sigma**2))
    kernel /= kernel.sum()

    n = traj.n_samples
    # full convolution sliced back to the signal length; mode="same" would
    # return kernel-length output when the kernel outgrows a short signal
    def convolve(x):
        return np.convolve(x, kernel, mode="full")[radius : radius + n]

    coverage = convolve(np.ones(n))
    smoothed = np.column_stack(
        [convolve(traj.points[:, j]) / coverage for j in range(traj.dim)]
    )
    return TimedTrajectory(smoothed, traj.frame_rate, traj.start_frame)


_MIN_SAMPLES = {1: 3, 2: 4, 3: 7}


def differentiate(traj: TimedTrajectory, order_max: int = 3) -> DerivativeStack:
    """Estimate derivatives up to ``order_max`` by finite differences.

    Interior samples use central stencils with step h = 1/frame_rate:

        d1[n] = (p[n+1] - p[n-1]) / 2h
        d2[n] = (p[n+1] - 2 p[n] + p[n-1]) / h^2
        d3[n] = (p[n+2] - 2 p[n+1] + 2 p[n-1] - p[n-2]) / 2h^3

    Boundary samples use one-sided stencils of matching (second) accuracy
    order.  d1 and d2 are exact on polynomials of degree <= 2 at interior
    samples.
    """
    if order_max not in (1, 2, 3):
        raise ValueError(f"order_max must be 1, 2 or 3, got {order_max}")
    n = traj.n_samples
    if n < _MIN_SAMPLES[order_max]:
        raise ValueError(
            f"need at least {_MIN_SAMPLES[order_max]} samples for order {order_max}, got {n}"
        )
    h = 1.0 / traj.frame_rate
    p = traj.points

    d1 = np.empty_like(p)
    d1[1:-1] = (p[2:] - p[:-2]) / (2 * h)
    d1[0] = (-3 * p[0] + 4 * p[1] - p[2]) / (2 * h)
    d1[-1] = (3 * p[-1] - 4 * p[-2] + p[-3]) / (2 * h)

    d2 = None
    if order_max >= 2:
        d2 = np.empty_like(p)
        d2[1:-1] = (p[2:] - 2 * p[1:-1] + p[:-2]) / h**2
        d2[0] = (2 * p[0] - 5 * p[1] + 4 * p[2] - p[3]) / h**2
        d2[-1] = (2 * p[-1] - 5 * p[-2] + 4 * p[-3] - p[-4]) / h**2

    d3 = None
    if order_max >= 3:
        d3 = np.empty_like(p)
        d3[2:-2] = (p[4:] - 2 * p[3:-1] + 2 * p[1:-3] - p[:-4]) / (2 * h**3)

        def forward3(i):
            return (-5 * p[i] + 18 * p[i + 1] - 24 * p[i + 2]
                    + 14 * p[i + 3] - 3 * p[i + 4]) / (2 * h**3)

        def backward3(i):
            return (5 * p[i] - 18 * p[i - 1] + 24 * p[i - 2]
                    - 14 * p[i - 3] + 3 * p[i - 4]) / (2 * h**3)

        d3[0] = forward3(0)
        d3[1] = forward3(1)
        d3[-2] = backward3(n - 2)
        d3[-1] = backward3(n - 1)

    return DerivativeStack(d1, d2, d3)


def speed(d: DerivativeStack) -> np.ndarray:
    """Per-sample speed: Euclidean norm of the first derivative."""
    return np.linalg.norm(d.d1, axis=1)


# ---------------------------------------------------------------------------
# File formats.
#
# Trajectory CSV:  header "frame,x,y[,z]", one row per frame, frame indices
# consecutive and strictly increasing; frame rate supplied out of band.
# Trajectory JSON: {"fps": number, "start_frame": int, "points": [[x,y(,z)],..]}
# Annotations:     {"intervals": [{"start": int, "end": int}, ...],
#                   "keyframes": [int, ...], "n_frames": int (optional)}
# ---------------------------------------------------------------------------


def _as_text(source) -> str:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
    elif isinstance(source, bytes):
        text = source.decode("utf-8")
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    return text.lstrip("﻿")


def load_trajectory(source, format: str = "csv", frame_rate: float = 60.0) -> TimedTrajectory:
    """Read a trajectory from a CSV or JSON stream, path, or bytes.

    For CSV the frame rate comes from ``frame_rate`` (the file has none); for
    JSON it comes from the file's "fps" field.  Dimensionality is inferred
    from the columns present.  Malformed rows, non-monotone or non-consecutive
    frame indices, and mixed dimensionality raise ParseError naming the row.
    """
    text = _as_text(source)
    if format == "csv":
        return _load_csv(text, frame_rate)
    if format == "json":
        return _load_json(text)
    raise ValueError(f"unknown trajectory format {format!r}")


def _load_csv(text: str, frame_rate: float) -> TimedTrajectory:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [(i + 1, r) for i, r in enumerate(rows) if r]
    if not rows:
        raise ParseError("empty trajectory file")
    header = [c.strip().lower() for c in rows[0][1]]
    if header not in (["frame", "x", "y"], ["frame", "x", "y", "z"]):
        raise ParseError(f"row 1: header must be frame,x,y[,z], got {','.join(header)}")
    ncols = len(header)
    frames: list[int] = []
    coords: list[list[float]] = []
    for lineno, row in rows[1:]:
        if len(row) != ncols:
            raise ParseError(f"row {lineno}: expected {ncols} fields, got {len(row)}")
        try:
            frame = int(row[0])
            values = [float(v) for v in row[1:]]
        except ValueError as exc:
            raise ParseError(f"row {lineno}: malformed value ({exc})") from None
        if frames:
            if frame <= frames[-1]:
                raise ParseError(f"row {lineno}: frame {frame} not after frame {frames[-1]}")
            if frame != frames[-1] + 1:
                raise ParseError(
                    f"row {lineno}: frame indices must be consecutive "
                    f"(gap between {frames[-1]} and {frame})"
                )
        frames.append(frame)
        coords.append(values)
    if not frames:
        raise ParseError("trajectory file has a header but no samples")
    return TimedTrajectory(np.array(coords), frame_rate, frames[0])


def _load_json(text: str) -> TimedTrajectory:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict) or "fps" not in obj or "points" not in obj:
        raise ParseError('trajectory JSON must contain "fps" and "points"')
    pts = obj["points"]
    if not isinstance(pts, list) or not pts:
        raise ParseError('"points" must be a non-empty list')
    width = len(pts[0])
    if width not in (2, 3):
        raise ParseError(f"points[0]: dimensionality must be 2 or 3, got {width}")
    for i, row in enumerate(pts):
        if not isinstance(row, list) or len(row) != width:
            raise ParseError(f"points[{i}]: mixed dimensionality")
    return TimedTrajectory(np.array(pts, dtype=float), obj["fps"], obj.get("start_frame", 0))


def save_trajectory(traj: TimedTrajectory, dest, format: str = "csv") -> None:
    """Write a trajectory as CSV or JSON (floats at 9 significant digits)."""
    if format == "csv":
        lines = ["frame," + ",".join("xyz"[: traj.dim])]
        for n in range(traj.n_samples):
            vals = ",".join(f"{v:.9g}" for v in traj.points[n])
            lines.append(f"{traj.start_frame + n},{vals}")
        text = "\n".join(lines) + "\n"
    elif format == "json":
        obj = {
            "fps": _float9(traj.frame_rate),
            "start_frame": traj.start_frame,
            "points": [[_float9(v) for v in row] for row in traj.points],
        }
        text = json.dumps(obj, indent=2) + "\n"
    else:
        raise ValueError(f"unknown trajectory format {format!r}")
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    else:
        dest.write(text)


def load_annotations(source) -> Annotations:
    """Read an interval/keyframe annotation JSON file."""
    text = _as_text(source)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ParseError("annotation file must hold a JSON object")
    intervals = []
    for i, itv in enumerate(obj.get("intervals", [])):
        try:
            intervals.append(SigningInterval(int(itv["start"]), int(itv["end"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"intervals[{i}]: {exc}") from None
    keyframes = []
    for i, k in enumerate(obj.get("keyframes", [])):
        if not isinstance(k, int):
            raise ParseError(f"keyframes[{i}]: must be an integer frame index")
        keyframes.append(k)
    n_frames = obj.get("n_frames")
    if n_frames is not None and (not isinstance(n_frames, int) or n_frames <= 0):
        raise ParseError('"n_frames" must be a positive integer')
    return Annotations(tuple(intervals), tuple(keyframes), n_frames)


def save_annotations(ann: Annotations, dest, extra: dict | None = None) -> None:
    obj: dict = {
        "intervals": [{"start": i.start, "end": i.end} for i in ann.intervals],
        "keyframes": list(ann.keyframes),
    }
    if ann.n_frames is not None:
        obj["n_frames"] = ann.n_frames
    if extra:
        obj.update(extra)
    text = json.dumps(obj, indent=2) + "\n"
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    else:
        dest.write(text)
