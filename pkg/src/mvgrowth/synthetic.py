"""Seeded bivariate-normal reference populations and a drifting patient.

Defaults reproduce the demonstration setting: four populations of 1000
points, correlation 0.77, variances 1 and 2.44, means moving linearly from
(5, 5) to (10.5, 9).  The patient sits at the population mean at the first
time and moves ``patient_drift`` further away at every step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _rng
from .data import ReferenceSeries, Trajectory
from .errors import ConfigError

__all__ = ["GenSpec", "DEMO_DRIFT", "covariance", "gen_reference", "gen_patient", "population_means"]

# 0.575 * (1, -0.9): contrast of the first against the second measurement
DEMO_DRIFT = (0.575, -0.5175)


@dataclass(frozen=True)
class GenSpec:
    k: int = 4
    n: int = 1000
    mean_start: tuple[float, float] = (5.0, 5.0)
    mean_end: tuple[float, float] = (10.5, 9.0)
    variances: tuple[float, float] = (1.0, 2.44)
    correlation: float = 0.77
    seed: int = 0
    patient_drift: tuple[float, float] = DEMO_DRIFT
    times: tuple[float, ...] | None = field(default=None)

    def validate(self) -> None:
        if int(self.k) != self.k or self.k < 1:
            raise ConfigError(f"k must be a positive integer, got {self.k}")
        if int(self.n) != self.n or self.n < 1:
            raise ConfigError(f"n must be a positive integer, got {self.n}")
        for name in ("mean_start", "mean_end", "variances", "patient_drift"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (2,) or not np.all(np.isfinite(v)):
                raise ConfigError(f"{name} must be two finite numbers, got {getattr(self, name)!r}")
        if not all(v > 0 for v in self.variances):
            raise ConfigError(f"variances must be positive, got {self.variances}")
        if not (np.isfinite(self.correlation) and abs(self.correlation) < 1):
            raise ConfigError(f"correlation must lie in (-1, 1), got {self.correlation}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError(f"seed must fit in 64 bits, got {self.seed}")
        if self.times is not None:
            ts = [float(t) for t in self.times]
            if len(ts) != self.k or any(b <= a for a, b in zip(ts, ts[1:])):
                raise ConfigError("times must be k strictly increasing labels")

    @property
    def time_labels(self) -> tuple[float, ...]:
        if self.times is not None:
            return tuple(float(t) for t in self.times)
        return tuple(float(i + 1) for i in range(self.k))


def covariance(spec: GenSpec) -> np.ndarray:
    v1, v2 = (float(v) for v in spec.variances)
    off = spec.correlation * np.sqrt(v1 * v2)
    return np.array([[v1, off], [off, v2]])


def population_means(spec: GenSpec) -> np.ndarray:
    """(k, 2) means, linear between ``mean_start`` and ``mean_end``."""
    start = np.asarray(spec.mean_start, dtype=float)
    end = np.asarray(spec.mean_end, dtype=float)
    if spec.k == 1:
        return start[None, :].copy()
    frac = np.arange(spec.k) / (spec.k - 1)
    return start + frac[:, None] * (end - start)


def gen_reference(spec: GenSpec) -> ReferenceSeries:
    """Draw the k reference samples.

    Time ``i`` uses its own counter-based stream keyed by ``(seed, i)``, so
    populations can be regenerated independently and in any order.
    """
    spec.validate()
    chol = np.linalg.cholesky(covariance(spec))
    means = population_means(spec)
    samples = []
    for i in range(spec.k):
        z = _rng.normals(spec.seed, (_rng.REFERENCE, i), spec.n, 2)
        # explicit products keep the result independent of BLAS threading
        samples.append(means[i] + z[:, :1] * chol[:, 0] + z[:, 1:] * chol[:, 1])
    return ReferenceSeries(spec.time_labels, samples)


def gen_patient(spec: GenSpec) -> Trajectory:
    """Noise-free patient: ``mean(t_i) + i * patient_drift``."""
    spec.validate()
    means = population_means(spec)
    steps = np.arange(spec.k, dtype=float)[:, None]
    return Trajectory(spec.time_labels, means + steps * np.asarray(spec.patient_drift, dtype=float))
