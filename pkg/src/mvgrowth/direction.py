"""Patient-specific projection direction.

For a unit vector ``a`` the patient's point at each time is projected onto
``a`` together with that time's reference sample, and ranked with the 1-D
version of the depth quantile.  The fitted direction minimizes the sum of
squared gaps between these projected quantiles and the multivariate ones.

The objective is a step function of ``a``, so the search is derivative-free:
an equally spaced grid of angles on [0, pi) for p = 2, seeded random
directions on the half-sphere otherwise.  ``a`` and ``-a`` give identical
quantiles, which is why half the circle suffices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _rng
from .data import ReferenceSeries, Trajectory, align, as_point, as_sample
from .errors import ConfigError, DimensionError
from .quantiles import QuantileProfile, depth_quantile, profile as quantile_profile

__all__ = [
    "UnitDirection",
    "DirectionFit",
    "project",
    "projected_quantile",
    "projected_quantiles",
    "objective",
    "optimize_grid_2d",
    "optimize_sphere",
]

_NORM_TOL = 1e-12
_BATCH = 256


def _canonical(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(v)
    if nz.size and v[nz[0]] < 0:
        v = -v
    return v + 0.0  # drop negative zeros


@dataclass(frozen=True)
class UnitDirection:
    """Unit vector with its first nonzero coordinate positive."""

    coords: tuple[float, ...]

    def __post_init__(self) -> None:
        v = np.asarray(self.coords, dtype=float)
        if v.ndim != 1 or v.size < 1 or not np.all(np.isfinite(v)):
            raise DimensionError(f"direction needs finite coordinates, got {self.coords!r}")
        if abs(float(np.sqrt(v @ v)) - 1.0) > _NORM_TOL:
            raise ConfigError(f"direction is not unit length: {self.coords!r}")
        object.__setattr__(self, "coords", tuple(float(c) for c in _canonical(v)))

    @classmethod
    def from_vector(cls, v) -> "UnitDirection":
        v = np.asarray(v, dtype=float).ravel()
        norm = float(np.sqrt(v @ v))
        if not np.isfinite(norm) or norm == 0.0:
            raise ConfigError("cannot normalize a zero or non-finite vector")
        return cls(tuple(v / norm))

    @classmethod
    def from_angle(cls, phi: float) -> "UnitDirection":
        return cls((float(np.cos(phi)), float(np.sin(phi))))

    @property
    def p(self) -> int:
        return len(self.coords)

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.coords)

    @property
    def angle(self) -> float:
        """Angle in (-pi/2, pi/2] for p = 2."""
        if self.p != 2:
            raise DimensionError("angle is defined for p = 2 only")
        return float(np.arctan2(self.coords[1], self.coords[0]))


def _project_many(s: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """``s @ dirs.T`` with a fixed, FMA-free summation order.

    Single and batched projections must round identically, otherwise tied
    projected values could rank differently between code paths.
    """
    out = s[:, :1] * dirs[:, 0]
    for c in range(1, s.shape[1]):
        out = out + s[:, c : c + 1] * dirs[:, c]
    return out


def _as_direction(a, p: int) -> np.ndarray:
    v = a.vector if isinstance(a, UnitDirection) else np.asarray(a, dtype=float).ravel()
    if v.size != p:
        raise DimensionError(f"direction has p={v.size}, data have p={p}")
    return v


def project(s, a) -> np.ndarray:
    """Projections ``a . s_j`` as an ``(n, 1)`` sample, order preserved."""
    s = as_sample(s)
    v = _as_direction(a, s.shape[1])
    return _project_many(s, v[None, :])


def projected_quantile(x, ref, a) -> float:
    """1-D depth quantile of ``a . x`` among the projected reference."""
    ref = as_sample(ref)
    x = as_point(x, p=ref.shape[1])
    v = _as_direction(a, ref.shape[1])
    px = _project_many(x[None, :], v[None, :])[0, 0]
    return depth_quantile(px, project(ref, v))


def projected_quantiles(x, ref, dirs) -> np.ndarray:
    """Projected quantiles of ``x`` for each row of ``dirs`` at once.

    Equals :func:`projected_quantile` row by row.
    """
    ref = as_sample(ref)
    x = as_point(x, p=ref.shape[1])
    dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
    if dirs.shape[1] != ref.shape[1]:
        raise DimensionError(f"directions have p={dirs.shape[1]}, data have p={ref.shape[1]}")
    n = ref.shape[0]
    out = np.empty(dirs.shape[0])
    rows = np.arange(n)[:, None]
    for lo in range(0, dirs.shape[0], _BATCH):
        d = dirs[lo : lo + _BATCH]
        proj = np.sort(_project_many(ref, d), axis=0)
        px = _project_many(x[None, :], d)[0]
        # tie-group bounds of each sorted entry
        starts = np.ones(proj.shape, dtype=bool)
        starts[1:] = proj[1:] != proj[:-1]
        first = np.maximum.accumulate(np.where(starts, rows, 0), axis=0)
        ends = np.ones(proj.shape, dtype=bool)
        ends[:-1] = starts[1:]
        last = np.minimum.accumulate(np.where(ends, rows, n - 1)[::-1], axis=0)[::-1]
        ref_depth = np.minimum(last + 1, n - first)
        x_depth = np.minimum((proj <= px).sum(axis=0), (proj >= px).sum(axis=0))
        out[lo : lo + _BATCH] = (ref_depth <= x_depth).sum(axis=0) / n
    return out


@dataclass(frozen=True)
class DirectionFit:
    direction: UnitDirection
    objective: float
    q_tilde: tuple[float, ...]
    q: tuple[float, ...]
    grid_index: int | None = None


def _profile_q(traj: Trajectory, refs: ReferenceSeries, q) -> np.ndarray:
    if q is None:
        q = quantile_profile(traj, refs)
    vals = q.q if isinstance(q, QuantileProfile) else q
    vals = np.asarray(vals, dtype=float)
    if vals.shape != (traj.k,):
        raise DimensionError(f"need {traj.k} multivariate quantiles, got {vals.shape}")
    return vals


def _q_tilde_table(traj: Trajectory, refs: ReferenceSeries, dirs: np.ndarray) -> np.ndarray:
    """(n_dirs, k) projected quantiles."""
    pairs = align(traj, refs)
    return np.stack([projected_quantiles(x, ref, dirs) for _, x, ref in pairs], axis=1)


def objective(traj: Trajectory, refs: ReferenceSeries, q, a) -> float:
    """Sum over times of ``(q_j - q_tilde_j(a))**2``.

    ``q`` is the multivariate profile (a QuantileProfile or a sequence of
    k values).
    """
    qv = _profile_q(traj, refs, q)
    v = _as_direction(a, refs.p)
    qt = np.array([projected_quantile(x, ref, v) for _, x, ref in align(traj, refs)])
    return float(((qv - qt) ** 2).sum())


def _best(traj, refs, qv: np.ndarray, dirs: np.ndarray) -> tuple[int, np.ndarray, np.ndarray]:
    table = _q_tilde_table(traj, refs, dirs)
    scores = ((qv[None, :] - table) ** 2).sum(axis=1)
    i = int(np.argmin(scores))  # first minimum: smallest index wins ties
    return i, table[i], scores


def grid_directions(n_angles: int) -> np.ndarray:
    """Unit vectors at angles ``i * pi / n_angles``, i = 0 .. n_angles - 1."""
    phi = np.arange(n_angles) * np.pi / n_angles
    return np.stack([np.cos(phi), np.sin(phi)], axis=1)


def optimize_grid_2d(
    traj: Trajectory,
    refs: ReferenceSeries,
    q=None,
    n_angles: int = 500,
    return_scores: bool = False,
):
    """Grid search over ``n_angles`` equally spaced angles in [0, pi).

    ``q`` defaults to the trajectory's multivariate profile; it is computed
    once and reused for every direction.  With ``return_scores`` the
    objective at every grid angle is returned as well.
    """
    if refs.p != 2 or traj.p != 2:
        raise DimensionError("grid search needs bivariate data")
    if n_angles < 1:
        raise ConfigError(f"n_angles must be positive, got {n_angles}")
    qv = _profile_q(traj, refs, q)
    dirs = grid_directions(n_angles)
    i, qt, scores = _best(traj, refs, qv, dirs)
    fit = DirectionFit(
        direction=UnitDirection.from_vector(dirs[i]),
        objective=float(scores[i]),
        q_tilde=tuple(float(v) for v in qt),
        q=tuple(float(v) for v in qv),
        grid_index=i,
    )
    return (fit, scores) if return_scores else fit


def sphere_directions(n_dirs: int, p: int, seed: int) -> np.ndarray:
    """Seeded uniform directions, sign-folded onto the canonical half-sphere."""
    dirs = _rng.unit_vectors(seed, n_dirs, p)
    return np.stack([_canonical(v) for v in dirs])


def optimize_sphere(
    traj: Trajectory,
    refs: ReferenceSeries,
    q=None,
    n_dirs: int = 2000,
    seed: int = 0,
) -> DirectionFit:
    """Best of ``n_dirs`` seeded random unit directions (any p >= 2)."""
    if refs.p < 2:
        raise DimensionError("direction search needs p >= 2")
    if n_dirs < 1:
        raise ConfigError(f"n_dirs must be positive, got {n_dirs}")
    qv = _profile_q(traj, refs, q)
    dirs = sphere_directions(n_dirs, refs.p, seed)
    i, qt, scores = _best(traj, refs, qv, dirs)
    return DirectionFit(
        direction=UnitDirection.from_vector(dirs[i]),
        objective=float(scores[i]),
        q_tilde=tuple(float(v) for v in qt),
        q=tuple(float(v) for v in qv),
        grid_index=None,
    )


def angle_gap(a: UnitDirection | Sequence[float], b: UnitDirection | Sequence[float]) -> float:
    """Angle between the lines spanned by ``a`` and ``b`` (sign ignored)."""
    va = a.vector if isinstance(a, UnitDirection) else np.asarray(a, dtype=float)
    vb = b.vector if isinstance(b, UnitDirection) else np.asarray(b, dtype=float)
    c = abs(float(va @ vb)) / float(np.sqrt(va @ va) * np.sqrt(vb @ vb))
    return float(np.arccos(min(1.0, c)))
