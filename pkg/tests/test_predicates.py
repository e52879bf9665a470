from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvgrowth.predicates import orient_sign


def rational_sign(q, a, b):
    qx, qy = Fraction(q[0]), Fraction(q[1])
    det = (Fraction(a[0]) - qx) * (Fraction(b[1]) - qy) - (Fraction(a[1]) - qy) * (Fraction(b[0]) - qx)
    return (det > 0) - (det < 0)


@pytest.mark.parametrize(
    "q, a, b, expected",
    [
        ((0, 0), (1, 0), (0, 1), 1),
        ((0, 0), (0, 1), (1, 0), -1),
        ((0, 0), (1, 1), (2, 2), 0),
        ((0, 0), (1, 1), (-3, -3), 0),
        ((1, 1), (1, 1), (5, 7), 0),
        ((0.5, 0.5), (12.0, 12.0), (24.0, 24.0), 0),
        ((0.1, 0.1), (0.3, 0.3), (0.7, 0.7), rational_sign((0.1, 0.1), (0.3, 0.3), (0.7, 0.7))),
    ],
)
def test_known_signs(q, a, b, expected):
    assert orient_sign(q, a, b) == expected


def test_shapes_broadcast():
    q = np.zeros(2)
    a = np.array([[1.0, 0.0], [0.0, 1.0], [2.0, 2.0]])
    b = np.array([0.0, 1.0])
    out = orient_sign(q, a, b)
    assert out.shape == (3,)
    assert out.tolist() == [1, 0, 1]
    assert orient_sign(q, a[0], b).shape == ()


def test_near_collinear_fuzz(rng):
    a = rng.normal(size=(3000, 2))
    b = rng.normal(size=(3000, 2))
    t = rng.normal(size=3000)
    c = a + (b - a) * t[:, None]
    got = orient_sign(a, b, c)
    want = [rational_sign(*trip) for trip in zip(a, b, c)]
    assert got.tolist() == want


def test_scaled_lattice_fuzz(rng):
    pts = rng.integers(-2**40, 2**40, size=(3000, 3, 2)).astype(float) * 2.0**-30
    got = orient_sign(pts[:, 0], pts[:, 1], pts[:, 2])
    assert got.tolist() == [rational_sign(*trip) for trip in pts]


def test_extreme_magnitudes():
    # underflowing and overflowing products fall back to exact evaluation
    tiny = 1e-300
    assert orient_sign((0, 0), (tiny, 0), (0, tiny)) == 1
    huge = 1e300
    assert orient_sign((0, 0), (huge, 0), (0, huge)) == 1
    assert orient_sign((-huge, 0), (huge, 0), (0, -huge)) == -1


coord = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
point = st.tuples(coord, coord)


@settings(max_examples=300, deadline=None)
@given(point, point, point)
def test_matches_rational(q, a, b):
    assert orient_sign(q, a, b) == rational_sign(q, a, b)


@settings(max_examples=200, deadline=None)
@given(point, point, point)
def test_antisymmetric(q, a, b):
    assert orient_sign(q, a, b) == -orient_sign(q, b, a)


small = st.floats(min_value=-1e-160, max_value=1e-160, allow_nan=False)
mixed = st.tuples(st.one_of(coord, small), st.one_of(coord, small))


@settings(max_examples=300, deadline=None)
@given(mixed, mixed, mixed)
def test_matches_rational_tiny_magnitudes(q, a, b):
    assert orient_sign(q, a, b) == rational_sign(q, a, b)
