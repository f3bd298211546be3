import numpy as np
import pytest

from sequens import harness


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def rand_herm(d, rng):
    return harness.random_hermitian(d, rng)


PLUS = np.array([1, 1]) / np.sqrt(2)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)


def random_document(rng):
    """A generator-produced object of a random document kind."""
    from sequens.effects import PartialState

    d = int(rng.integers(1, 6))
    k = int(rng.integers(1, 5))
    kind = int(rng.integers(0, 8))
    if kind == 0:
        return harness.random_effect(d, rng)
    if kind == 1:
        return harness.random_state(d, rng)
    if kind == 2:
        return PartialState(harness.random_state(d, rng).matrix * rng.uniform())
    if kind == 3:
        return harness.random_pure_state(d, rng)
    if kind == 4:
        return harness.random_observable(d, k, rng)
    if kind == 5:
        return harness.random_channel(int(rng.integers(1, 5)), k, rng)
    if kind == 6:
        return harness.random_hermitian(d, rng)
    return {f"x{i}": float(v) for i, v in enumerate(rng.standard_normal(k))}
