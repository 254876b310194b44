import numpy as np
import pytest

from latticewh.branches import Frequency, dispersion_solve

OMEGA = 1 + 0.1j
THETA = np.pi / 6


@pytest.fixture(scope="session")
def inc_square():
    return dispersion_solve("square", Frequency(OMEGA), THETA)


@pytest.fixture(scope="session")
def inc_triangular():
    return dispersion_solve("triangular", Frequency(OMEGA), THETA)


@pytest.fixture(scope="session")
def inc_honeycomb():
    return dispersion_solve("honeycomb", Frequency(OMEGA), THETA)


def unit_samples(count: int, rng: np.random.Generator, lo=0.95, hi=1.05) -> np.ndarray:
    """Random points near the unit circle, away from the real axis pinch."""
    radii = rng.uniform(lo, hi, count)
    angles = rng.uniform(0.0, 2.0 * np.pi, count)
    return radii * np.exp(1j * angles)
