"""Containers for samples, reference populations and patient trajectories.

A sample is an ``(n, p)`` float array; row order is significant and row
indices act as stable identifiers.  A point is a length-``p`` float array.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import AlignmentError, DimensionError

__all__ = [
    "as_point",
    "as_sample",
    "ReferenceSeries",
    "Trajectory",
]


def as_sample(points, p: int | None = None) -> np.ndarray:
    """Validate ``points`` and return them as a C-contiguous ``(n, p)`` array.

    A flat sequence is read as ``n`` one-dimensional points.
    """
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionError(f"sample must be 2-D (n, p), got shape {arr.shape}")
    n, dim = arr.shape
    if n < 1 or dim < 1:
        raise DimensionError(f"sample must be nonempty, got shape {arr.shape}")
    if p is not None and dim != p:
        raise DimensionError(f"expected {p}-dimensional sample, got p={dim}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError("sample contains non-finite coordinates")
    return np.ascontiguousarray(arr)


def as_point(x, p: int | None = None) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1 or arr.size < 1:
        raise DimensionError(f"point must be a 1-D coordinate vector, got shape {arr.shape}")
    if p is not None and arr.size != p:
        raise DimensionError(f"expected {p}-dimensional point, got p={arr.size}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError("point contains non-finite coordinates")
    return arr


def _check_times(times: Sequence[float], what: str) -> tuple[float, ...]:
    ts = tuple(float(t) for t in times)
    if not ts:
        raise DimensionError(f"{what} needs at least one time point")
    if any(not np.isfinite(t) for t in ts):
        raise DimensionError(f"{what} times must be finite")
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise DimensionError(f"{what} times must be strictly increasing")
    return ts


@dataclass(frozen=True)
class ReferenceSeries:
    """Time-indexed reference samples, all of one dimension ``p``."""

    times: tuple[float, ...]
    samples: tuple[np.ndarray, ...]

    def __init__(self, times: Sequence[float], samples: Sequence) -> None:
        ts = _check_times(times, "reference series")
        if len(samples) != len(ts):
            raise DimensionError(f"{len(ts)} times but {len(samples)} samples")
        arrs = tuple(as_sample(s) for s in samples)
        dims = {a.shape[1] for a in arrs}
        if len(dims) != 1:
            raise DimensionError(f"reference samples have mixed dimensions {sorted(dims)}")
        object.__setattr__(self, "times", ts)
        object.__setattr__(self, "samples", arrs)

    @property
    def k(self) -> int:
        return len(self.times)

    @property
    def p(self) -> int:
        return self.samples[0].shape[1]

    def __len__(self) -> int:
        return len(self.times)

    def __iter__(self) -> Iterator[tuple[float, np.ndarray]]:
        return iter(zip(self.times, self.samples))

    def at(self, t: float) -> np.ndarray:
        """Sample observed at time label ``t`` (exact label match)."""
        try:
            return self.samples[self.times.index(float(t))]
        except ValueError:
            raise AlignmentError(f"no reference population at time {t!r}") from None

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReferenceSeries):
            return NotImplemented
        return self.times == other.times and all(
            np.array_equal(a, b) for a, b in zip(self.samples, other.samples)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Trajectory:
    """One subject's measurements ``x(t_1), ..., x(t_k)``."""

    times: tuple[float, ...]
    points: np.ndarray

    def __init__(self, times: Sequence[float], points) -> None:
        ts = _check_times(times, "trajectory")
        pts = as_sample(points)
        if pts.shape[0] != len(ts):
            raise DimensionError(f"{len(ts)} times but {pts.shape[0]} points")
        object.__setattr__(self, "times", ts)
        object.__setattr__(self, "points", pts)

    @property
    def k(self) -> int:
        return len(self.times)

    @property
    def p(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return len(self.times)

    def __iter__(self) -> Iterator[tuple[float, np.ndarray]]:
        return iter(zip(self.times, self.points))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trajectory):
            return NotImplemented
        return self.times == other.times and np.array_equal(self.points, other.points)

    __hash__ = None  # type: ignore[assignment]


def align(traj: Trajectory, refs: ReferenceSeries) -> list[tuple[float, np.ndarray, np.ndarray]]:
    """Pair each trajectory point with its reference sample.

    Raises AlignmentError for a missing time and DimensionError when the
    trajectory and references disagree on ``p``.
    """
    if traj.p != refs.p:
        raise DimensionError(f"trajectory has p={traj.p}, references have p={refs.p}")
    return [(t, x, refs.at(t)) for t, x in traj]
