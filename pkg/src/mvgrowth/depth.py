"""Tukey half-space depth of a point with respect to a finite sample.

All half-spaces are closed: sample points on the boundary line (and points
coincident with the query) are always counted.

Exact kernels exist for p = 1 (direct counts) and p = 2 (an angular sweep in
the spirit of Rousseeuw & Ruts' AS 307, with exact orientation tests).  For
p >= 3 use :func:`depth_approx`, which minimizes over random directions.
:func:`depth_brute` is a slow, independent oracle for the 2-D kernel.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _rng
from .data import as_point, as_sample
from .errors import ConfigError, DimensionError
from .predicates import orient_sign

__all__ = [
    "Depth",
    "depth_exact_1d",
    "depth_exact_2d",
    "depth_brute",
    "depth_approx",
    "depth_all",
    "depth_counts_1d",
    "DEFAULT_APPROX_DIRS",
]

DEFAULT_APPROX_DIRS = 2000
_DIR_CHUNK = 1024


@dataclass(frozen=True, order=True)
class Depth:
    """Depth as an exact count out of ``n`` sample points."""

    count: int
    n: int

    def __post_init__(self) -> None:
        if not 0 <= self.count <= self.n or self.n < 1:
            raise ValueError(f"invalid depth {self.count}/{self.n}")

    @property
    def value(self) -> float:
        return self.count / self.n

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.count, self.n)

    def __repr__(self) -> str:
        return f"Depth({self.count}/{self.n})"


# -- one dimension ---------------------------------------------------------


def _count_1d(x: float, values: np.ndarray) -> int:
    return int(min(np.count_nonzero(values <= x), np.count_nonzero(values >= x)))


def depth_exact_1d(x, s) -> Depth:
    """Depth of a real ``x`` in a 1-D sample: ``min(#{s <= x}, #{s >= x})``."""
    s = as_sample(s, p=1)
    x = as_point(x, p=1)[0]
    return Depth(_count_1d(x, s[:, 0]), s.shape[0])


def depth_counts_1d(values) -> np.ndarray:
    """Depth counts of every element of a 1-D array within the array itself."""
    v = np.asarray(values, dtype=float).ravel()
    srt = np.sort(v)
    le = np.searchsorted(srt, v, side="right")
    ge = v.size - np.searchsorted(srt, v, side="left")
    return np.minimum(le, ge)


# -- two dimensions: exact angular sweep -------------------------------------


def _exact_angle_order(q: np.ndarray, pts: np.ndarray, upper: np.ndarray) -> np.ndarray:
    def cmp(i: int, j: int) -> int:
        if upper[i] != upper[j]:
            return -1 if upper[i] else 1
        return -int(orient_sign(q, pts[i], pts[j]))

    return np.array(sorted(range(len(pts)), key=functools.cmp_to_key(cmp)), dtype=np.intp)


def _sweep_count_2d(q: np.ndarray, s: np.ndarray) -> int:
    n = s.shape[0]
    d = s - q  # float differences keep the exact signs of s - q
    dx, dy = d[:, 0], d[:, 1]
    coincident = (dx == 0.0) & (dy == 0.0)
    z = int(np.count_nonzero(coincident))
    if z == n:
        return n
    pts = s[~coincident]
    dx, dy = dx[~coincident], dy[~coincident]
    m = pts.shape[0]

    # half-open halves: [0, pi) and [pi, 2pi), decided exactly from signs
    upper = (dy > 0.0) | ((dy == 0.0) & (dx > 0.0))
    key = np.mod(np.arctan2(dy, dx), 2.0 * np.pi)
    order = np.lexsort((key, ~upper))
    pts, upper, key = pts[order], upper[order], key[order]

    # float keys only propose the order; consecutive pairs are verified exactly
    same_half = upper[:-1] == upper[1:]
    turn = orient_sign(q, pts[:-1], pts[1:]) if m > 1 else np.zeros(0, np.int8)
    if np.any(same_half & (turn < 0)):
        order = _exact_angle_order(q, pts, upper)
        pts, upper, key = pts[order], upper[order], key[order]
        same_half = upper[:-1] == upper[1:]
        turn = orient_sign(q, pts[:-1], pts[1:])

    # collapse runs of points on a common ray from q
    new_ray = np.ones(m, dtype=bool)
    new_ray[1:] = ~(same_half & (turn == 0))
    starts = np.flatnonzero(new_ray)
    mult = np.diff(np.append(starts, m))
    rays = pts[starts]
    rkey = key[starts]
    kk = rays.shape[0]
    if kk == 1:
        return z

    # window of ray i: rays at angular offset [0, pi) counter-clockwise
    idx = np.arange(kk)
    rkey2 = np.concatenate([rkey, rkey + 2.0 * np.pi])
    end = np.searchsorted(rkey2, rkey + np.pi, side="left")
    end = np.clip(end, idx + 1, idx + kk)
    while True:
        prev_out = (end - 1 > idx) & (orient_sign(q, rays, rays[(end - 1) % kk]) <= 0)
        next_in = (end < idx + kk) & (orient_sign(q, rays, rays[end % kk]) > 0)
        if not (prev_out.any() or next_in.any()):
            break
        end = end - prev_out + (next_in & ~prev_out)
    csum = np.concatenate([[0], np.cumsum(np.concatenate([mult, mult]))])
    best = int((csum[end] - csum[idx]).max())
    return z + m - best


def depth_exact_2d(q, s) -> Depth:
    """Exact half-space depth of ``q`` in a bivariate sample, O(n log n)."""
    s = as_sample(s, p=2)
    q = as_point(q, p=2)
    return Depth(_sweep_count_2d(q, s), s.shape[0])


# -- brute-force oracle ------------------------------------------------------


def _to_integers(values: list[float]) -> list[int]:
    fr = [Fraction(v) for v in values]
    den = max(f.denominator for f in fr)  # powers of two: max is a common multiple
    return [int(f * den) for f in fr]


def depth_brute(q, s) -> Depth:
    """Reference 2-D depth by enumerating every closed half-plane class.

    Candidate boundaries are the lines through ``q`` and each sample point;
    each candidate is evaluated as-is and symbolically rotated by an
    infinitesimal angle both ways, which reaches every open arc of normals.
    All arithmetic is on exact integers.
    """
    s = as_sample(s, p=2)
    q = as_point(q, p=2)
    n = s.shape[0]
    ints = _to_integers(list(q) + s.ravel().tolist())
    big = max(abs(v) for v in ints).bit_length() > 29
    arr = np.array(ints, dtype=object if big else np.int64)
    d = arr[2:].reshape(n, 2) - arr[:2]
    nonzero = (d[:, 0] != 0) | (d[:, 1] != 0)
    if not nonzero.any():
        return Depth(n, n)
    base = d[nonzero]
    perp = np.stack([-base[:, 1], base[:, 0]], axis=1)
    best = n
    for normal_sign in (1, -1):
        u = normal_sign * perp
        along = d @ u.T  # (n, candidates)
        for turn in (1, -1):
            w = turn * np.stack([-u[:, 1], u[:, 0]], axis=1)
            side = d @ w.T
            inside = (along > 0) | ((along == 0) & (side > 0)) | ~nonzero[:, None]
            best = min(best, int(inside.sum(axis=0).min()))
        on_line = (along >= 0).sum(axis=0).min()
        best = min(best, int(on_line))
    return Depth(best, n)


# -- any dimension: random directions ----------------------------------------


def depth_approx(q, s, n_dirs: int = DEFAULT_APPROX_DIRS, seed: int = 0) -> Depth:
    """Upper bound on the depth from ``n_dirs`` seeded random half-spaces.

    The direction stream depends only on ``seed`` and ``p``, and a larger
    ``n_dirs`` extends a smaller one, so the estimate never increases with
    more directions.
    """
    s = as_sample(s)
    q = as_point(q, p=s.shape[1])
    if n_dirs < 1:
        raise ConfigError(f"n_dirs must be positive, got {n_dirs}")
    d = s - q
    best = s.shape[0]
    for start in range(0, n_dirs, _DIR_CHUNK):
        u = _rng.unit_vectors(seed, min(_DIR_CHUNK, n_dirs - start), s.shape[1], start=start)
        proj = d @ u.T
        counts = np.minimum((proj >= 0).sum(axis=0), (proj <= 0).sum(axis=0))
        best = min(best, int(counts.min()))
    return Depth(best, s.shape[0])


def depth_all(
    s,
    method: str = "auto",
    n_dirs: int = DEFAULT_APPROX_DIRS,
    seed: int = 0,
) -> list[Depth]:
    """Depth of every sample point relative to the whole sample.

    ``method`` is ``"exact"`` (p <= 2 only), ``"approx"`` or ``"auto"``
    (exact when available).
    """
    s = as_sample(s)
    return [Depth(int(c), s.shape[0]) for c in depth_counts(s, method, n_dirs, seed)]


def depth_counts(s, method: str = "auto", n_dirs: int = DEFAULT_APPROX_DIRS, seed: int = 0) -> np.ndarray:
    """Integer depth counts of all sample points, as an array."""
    s = as_sample(s)
    method = resolve_method(s.shape[1], method)
    if method == "approx":
        return np.array([depth_approx(x, s, n_dirs, seed).count for x in s], dtype=np.int64)
    if s.shape[1] == 1:
        return depth_counts_1d(s[:, 0]).astype(np.int64)
    return np.array([_sweep_count_2d(x, s) for x in s], dtype=np.int64)


def depth_of(x, s, method: str = "auto", n_dirs: int = DEFAULT_APPROX_DIRS, seed: int = 0) -> Depth:
    """Depth of one point, dispatching on dimension and ``method``."""
    s = as_sample(s)
    x = as_point(x, p=s.shape[1])
    method = resolve_method(s.shape[1], method)
    if method == "approx":
        return depth_approx(x, s, n_dirs, seed)
    if s.shape[1] == 1:
        return Depth(_count_1d(x[0], s[:, 0]), s.shape[0])
    return Depth(_sweep_count_2d(x, s), s.shape[0])


def resolve_method(p: int, method: str) -> str:
    if method not in ("auto", "exact", "approx"):
        raise ConfigError(f"unknown depth method {method!r}")
    if method == "auto":
        return "exact" if p <= 2 else "approx"
    if method == "exact" and p > 2:
        raise DimensionError(f"exact depth is only available for p <= 2, got p={p}")
    return method
