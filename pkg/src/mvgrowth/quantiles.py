"""Depth-rank quantiles, extreme-point labels and depth regions.

The quantile of a point is the share of reference points that are no deeper
than it: ``#{j : HD(s_j) <= HD(x)} / n``.  The deepest reference point maps
to 1.0, a point outside the reference hull maps to 0.0 (unless some
reference points also have depth 0, which cannot happen for points of the
sample itself).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import Trajectory, ReferenceSeries, align, as_point, as_sample
from .depth import DEFAULT_APPROX_DIRS, Depth, depth_counts, depth_of
from .errors import ConfigError

__all__ = [
    "EXTREME",
    "CENTRAL",
    "ORDINARY",
    "QuantileProfile",
    "DepthRegion",
    "ReferenceDepths",
    "rank_quantile",
    "depth_quantile",
    "classify_extremes",
    "depth_region",
    "profile",
]

EXTREME = "extreme"
CENTRAL = "central"
ORDINARY = "ordinary"


def rank_quantile(count, ref_counts) -> float:
    """Fraction of ``ref_counts`` that are ``<= count``."""
    ref_counts = np.asarray(ref_counts)
    return float(np.count_nonzero(ref_counts <= count)) / ref_counts.size


@dataclass(frozen=True, eq=False)
class ReferenceDepths:
    """A reference sample together with the depth counts of its own points.

    Build once per reference population and reuse for many queries.
    """

    sample: np.ndarray
    counts: np.ndarray
    method: str = "auto"
    n_dirs: int = DEFAULT_APPROX_DIRS
    seed: int = 0

    @classmethod
    def build(cls, ref, method: str = "auto", n_dirs: int = DEFAULT_APPROX_DIRS, seed: int = 0):
        ref = as_sample(ref)
        counts = depth_counts(ref, method, n_dirs, seed)
        return cls(ref, counts, method, n_dirs, seed)

    @property
    def n(self) -> int:
        return self.sample.shape[0]

    def depth(self, x) -> Depth:
        return depth_of(x, self.sample, self.method, self.n_dirs, self.seed)

    def quantile(self, x) -> float:
        return rank_quantile(self.depth(x).count, self.counts)

    def quantile_of_depth(self, depth: Depth) -> float:
        return rank_quantile(depth.count, self.counts)


def depth_quantile(
    x,
    ref,
    method: str = "auto",
    n_dirs: int = DEFAULT_APPROX_DIRS,
    seed: int = 0,
    ref_depths: ReferenceDepths | None = None,
) -> float:
    """Depth-rank quantile of ``x`` with respect to the reference sample.

    ``x`` is not added to ``ref``.  Pass ``ref_depths`` to reuse reference
    depths across calls; it must have been built from the same ``ref``.
    """
    if ref_depths is None:
        ref_depths = ReferenceDepths.build(ref, method, n_dirs, seed)
    x = as_point(x, p=ref_depths.sample.shape[1])
    return ref_depths.quantile(x)


def classify_extremes(
    ref,
    low: float = 0.05,
    high: float = 0.95,
    method: str = "auto",
    n_dirs: int = DEFAULT_APPROX_DIRS,
    seed: int = 0,
) -> list[str]:
    """Label each reference point extreme (quantile < low), central
    (quantile > high) or ordinary."""
    if not 0.0 <= low < high <= 1.0:
        raise ConfigError(f"need 0 <= low < high <= 1, got low={low}, high={high}")
    ref = as_sample(ref)
    counts = depth_counts(ref, method, n_dirs, seed)
    srt = np.sort(counts)
    q = np.searchsorted(srt, counts, side="right") / counts.size
    labels = np.full(counts.size, ORDINARY, dtype=object)
    labels[q < low] = EXTREME
    labels[q > high] = CENTRAL
    return labels.tolist()


@dataclass(frozen=True)
class DepthRegion:
    """Sample points whose depth is at least ``gamma``."""

    gamma: float
    gamma_count: int
    member_indices: tuple[int, ...]
    coverage: float
    p_level: float


def depth_region(
    ref,
    p_level: float,
    method: str = "auto",
    n_dirs: int = DEFAULT_APPROX_DIRS,
    seed: int = 0,
    counts: Sequence[int] | None = None,
) -> DepthRegion:
    """Largest realized depth threshold whose region holds at least
    ``p_level`` of the sample."""
    if not 0.0 < p_level <= 1.0:
        raise ConfigError(f"p_level must lie in (0, 1], got {p_level}")
    ref = as_sample(ref)
    n = ref.shape[0]
    if counts is None:
        counts = depth_counts(ref, method, n_dirs, seed)
    counts = np.asarray(counts)
    srt = np.sort(counts)
    gamma_count = int(srt[0])
    for level in np.unique(counts)[::-1]:
        inside = n - int(np.searchsorted(srt, level, side="left"))
        if inside / n >= p_level:
            gamma_count = int(level)
            break
    members = np.flatnonzero(counts >= gamma_count)
    return DepthRegion(
        gamma=gamma_count / n,
        gamma_count=gamma_count,
        member_indices=tuple(int(i) for i in members),
        coverage=members.size / n,
        p_level=float(p_level),
    )


@dataclass(frozen=True)
class QuantileProfile:
    """Per-time depth quantiles of one trajectory."""

    times: tuple[float, ...]
    q: tuple[float, ...]
    depths: tuple[Depth, ...]

    def __post_init__(self) -> None:
        if not (len(self.times) == len(self.q) == len(self.depths) >= 1):
            raise ValueError("profile fields must share a length >= 1")

    @property
    def k(self) -> int:
        return len(self.times)


def reference_depths(
    refs: ReferenceSeries,
    method: str = "auto",
    n_dirs: int = DEFAULT_APPROX_DIRS,
    seed: int = 0,
) -> dict[float, ReferenceDepths]:
    return {t: ReferenceDepths.build(s, method, n_dirs, seed) for t, s in refs}


def profile(
    traj: Trajectory,
    refs: ReferenceSeries,
    method: str = "auto",
    n_dirs: int = DEFAULT_APPROX_DIRS,
    seed: int = 0,
    cache: dict[float, ReferenceDepths] | None = None,
) -> QuantileProfile:
    """Quantile of each ``x(t_i)`` against the reference sample at ``t_i``."""
    pairs = align(traj, refs)
    qs, depths = [], []
    for t, x, ref in pairs:
        rd = cache[t] if cache is not None and t in cache else ReferenceDepths.build(ref, method, n_dirs, seed)
        d = rd.depth(x)
        depths.append(d)
        qs.append(rd.quantile_of_depth(d))
    return QuantileProfile(traj.times, tuple(qs), tuple(depths))
