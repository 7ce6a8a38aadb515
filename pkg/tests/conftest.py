import numpy as np
import pytest


def _random_admissible(rng: np.random.Generator, k: int, im_scale: float = 1.0) -> np.ndarray:
    w = rng.normal(size=(k, k))
    re = w @ w.T / k + 0.2 * np.eye(k)
    im = rng.uniform(-im_scale, im_scale, (k, k))
    return re + 1j * (im + im.T) / 2.0


@pytest.fixture
def rand_admissible():
    """Factory for random complex symmetric matrices with PD real part."""
    return _random_admissible
