import numpy as np
import pytest

from softstream import Dataset


@pytest.fixture
def two_blob_data():
    """Two well-separated Gaussian blobs, 100 points each, d=3."""
    rng = np.random.default_rng(1234)
    a = rng.normal((0.0, 0.0, 0.0), 1.0, size=(100, 3))
    b = rng.normal((30.0, 30.0, 30.0), 1.0, size=(100, 3))
    return Dataset.from_points(np.vstack([a, b]))


def random_instance(rng, max_n=200, max_d=5, k_range=(2, 8), coincident=False):
    """A random (data, centers) pair for inequality sweeps.

    With ``coincident`` some centers are copied straight from data points
    and one may be duplicated, exercising the zero-distance conventions.
    """
    n = int(rng.integers(2, max_n + 1))
    d = int(rng.integers(1, max_d + 1))
    k = int(rng.integers(k_range[0], k_range[1] + 1))
    scale = 10.0 ** rng.integers(-2, 3)
    points = rng.normal(size=(n, d)) * scale
    weights = rng.uniform(0.5, 3.0, size=n)
    data = Dataset(points, weights)
    centers = rng.normal(size=(k, d)) * scale
    if coincident:
        copies = int(rng.integers(1, k + 1))
        idx = rng.integers(0, n, size=copies)
        centers[:copies] = points[idx]
        if k >= 2 and rng.random() < 0.5:
            centers[-1] = centers[0]  # duplicate center
    return data, centers
