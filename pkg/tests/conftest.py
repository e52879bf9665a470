import numpy as np
import pytest

from mvgrowth.quantiles import profile, reference_depths
from mvgrowth.synthetic import GenSpec, gen_patient, gen_reference


@pytest.fixture(scope="session")
def demo_spec():
    return GenSpec()


@pytest.fixture(scope="session")
def demo(demo_spec):
    """Demo populations, patient, cached reference depths and profile (seed 0)."""
    refs = gen_reference(demo_spec)
    traj = gen_patient(demo_spec)
    cache = reference_depths(refs)
    prof = profile(traj, refs, cache=cache)
    return refs, traj, cache, prof


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
