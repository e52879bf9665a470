from dataclasses import replace

import numpy as np
import pytest

from mvgrowth import _rng
from mvgrowth.errors import ConfigError
from mvgrowth.quantiles import profile
from mvgrowth.synthetic import DEMO_DRIFT, GenSpec, covariance, gen_patient, gen_reference, population_means


def test_demo_covariance_off_diagonal():
    cov = covariance(GenSpec())
    assert cov[0, 1] == cov[1, 0] == pytest.approx(0.77 * np.sqrt(2.44))
    assert cov[0, 1] == pytest.approx(1.2028, abs=1e-4)
    assert np.all(np.linalg.eigvalsh(cov) > 0)


def test_means_interpolate_linearly():
    means = population_means(GenSpec())
    assert means[0].tolist() == [5.0, 5.0]
    assert means[-1].tolist() == [10.5, 9.0]
    assert np.allclose(np.diff(means, axis=0), [5.5 / 3, 4 / 3])


def test_zero_correlation_sample(demo_spec):
    spec = replace(demo_spec, correlation=0.0, variances=(1.0, 1.0), seed=3)
    for _, s in gen_reference(spec):
        assert abs(np.corrcoef(s.T)[0, 1]) < 0.1


def test_single_time():
    spec = GenSpec(k=1, n=50)
    refs, traj = gen_reference(spec), gen_patient(spec)
    assert refs.k == 1 and refs.times == (1.0,)
    assert traj.points[0].tolist() == [5.0, 5.0]


def test_deterministic_and_seed_sensitive(demo_spec):
    a, b = gen_reference(demo_spec), gen_reference(demo_spec)
    assert all(np.array_equal(x, y) for x, y in zip(a.samples, b.samples))
    c = gen_reference(replace(demo_spec, seed=1))
    assert not np.array_equal(a.samples[0], c.samples[0])


def test_prefix_and_offset_reproducible():
    big = gen_reference(GenSpec(n=300, seed=11))
    small = gen_reference(GenSpec(n=40, seed=11))
    for x, y in zip(big.samples, small.samples):
        assert np.array_equal(x[:40], y)
    full = _rng.normals(5, (_rng.REFERENCE, 2), 30, 3)
    part = _rng.normals(5, (_rng.REFERENCE, 2), 7, 3, start=12)
    assert np.array_equal(full[12:19], part)


def test_times_are_independent_streams(demo_spec):
    refs = gen_reference(demo_spec)
    centered = [s - s.mean(axis=0) for s in refs.samples]
    assert not np.array_equal(centered[0], centered[1])


def test_sample_moments(demo_spec):
    refs = gen_reference(demo_spec)
    tol = 4 * np.sqrt(max(demo_spec.variances) / demo_spec.n)
    for mean, s in zip(population_means(demo_spec), refs.samples):
        assert np.all(np.abs(s.mean(axis=0) - mean) < tol)
        assert np.allclose(np.cov(s.T), covariance(demo_spec), atol=0.3)


def test_custom_time_labels():
    spec = GenSpec(k=3, n=10, times=(0.5, 2.0, 7.0))
    assert gen_reference(spec).times == (0.5, 2.0, 7.0)
    assert gen_patient(spec).times == (0.5, 2.0, 7.0)


def test_patient_at_means_is_central(demo_spec):
    spec = replace(demo_spec, patient_drift=(0.0, 0.0))
    prof = profile(gen_patient(spec), gen_reference(spec))
    assert all(q > 0.5 for q in prof.q)


def test_demo_patient_drifts_out(demo):
    _, traj, _, prof = demo
    assert np.allclose(traj.points[1] - traj.points[0] - (population_means(GenSpec())[1] - [5, 5]), DEMO_DRIFT)
    assert all(a > b for a, b in zip(prof.q, prof.q[1:]))


@pytest.mark.parametrize(
    "changes",
    [
        {"k": 0},
        {"n": 0},
        {"n": 2.5},
        {"correlation": 1.0},
        {"correlation": float("nan")},
        {"variances": (1.0, 0.0)},
        {"variances": (1.0, 2.0, 3.0)},
        {"mean_start": (1.0, float("inf"))},
        {"seed": -1},
        {"times": (1.0, 1.0, 2.0, 3.0)},
        {"times": (1.0, 2.0)},
    ],
)
def test_invalid_generator_settings(changes):
    spec = replace(GenSpec(n=10), **changes)
    with pytest.raises(ConfigError):
        gen_reference(spec)
    with pytest.raises(ConfigError):
        gen_patient(spec)
