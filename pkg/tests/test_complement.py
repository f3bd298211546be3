import numpy as np
import pytest

from sequens import harness
from sequens.complement import (
    NObservable,
    add_noise,
    closed_form_complement,
    complement_channel,
    complement_obs,
    is_bistochastic,
    iterate_complement,
    trivial_uniform,
)
from sequens.errors import NotNObservable, WeightError
from sequens.numerics import approx_equal
from sequens.observables import ClassicalChannel, Observable, condition_obs, mixture, post_process

Z = NObservable([("0", np.diag([1.0, 0])), ("1", np.diag([0, 1.0]))])


def effects_close(A, B, atol):
    return A.outcomes == B.outcomes and max(
        np.linalg.norm(a.matrix - b.matrix) for a, b in zip(A.effects, B.effects)
    ) < atol


def test_n_observable_rules():
    with pytest.raises(NotNObservable):
        NObservable([("1", np.eye(2))])
    with pytest.raises(NotNObservable):
        NObservable([("a", np.eye(2)), ("b", np.zeros((2, 2)))])


def test_trivial_uniform(rng):
    U = trivial_uniform(Z)
    assert all(np.array_equal(e.matrix, np.eye(2) / 2) for e in U.effects)
    A3 = harness.random_observable(2, 3, rng)
    U3 = trivial_uniform(A3)
    assert U3.outcomes == A3.outcomes
    assert np.allclose(sum(e.matrix for e in U3.effects), np.eye(2))
    assert all(np.allclose(e.matrix, np.eye(2) / 3) for e in U3.effects)


def test_add_noise(rng):
    A = harness.random_observable(3, 3, rng)
    assert effects_close(add_noise(A, 0), A, 1e-15)
    assert effects_close(add_noise(A, 1), trivial_uniform(A), 1e-15)
    noisy = add_noise(Z, 0.4)
    np.testing.assert_allclose(noisy.effects[0].matrix, np.diag([0.8, 0.2]))
    np.testing.assert_allclose(noisy.effects[1].matrix, np.diag([0.2, 0.8]))
    with pytest.raises(WeightError):
        add_noise(Z, 1.5)


def test_complement_fixed_point_and_swap(rng):
    U = trivial_uniform(harness.random_observable(3, 4, rng))
    assert effects_close(complement_obs(U), U, 1e-15)
    A = harness.random_observable(3, 2, rng)
    Ac = complement_obs(A)
    assert approx_equal(Ac.effects[0].matrix, A.effects[1].matrix)
    assert approx_equal(Ac.effects[1].matrix, A.effects[0].matrix)
    U3 = NObservable((str(i), np.eye(2) / 3) for i in range(3))
    assert all(np.allclose(e.matrix, np.eye(2) / 3) for e in complement_obs(U3).effects)


def test_complement_only_fixes_uniform(rng):
    A = harness.random_observable(3, 3, rng)
    assert not effects_close(complement_obs(A), A, 1e-6)


def test_iterate_examples(rng):
    A2 = harness.random_observable(3, 2, rng)
    assert effects_close(iterate_complement(A2, 2), A2, 1e-14)
    A = harness.random_observable(3, 3, rng)
    U = trivial_uniform(A)
    want2 = mixture([0.75, 0.25], [U, A])
    assert effects_close(iterate_complement(A, 2), want2, 1e-12)
    want3 = mixture([0.75, 0.25], [U, complement_obs(A)])
    assert effects_close(iterate_complement(A, 3), want3, 1e-12)


def test_closed_form_examples(rng):
    A = harness.random_observable(3, 3, rng)
    assert effects_close(closed_form_complement(A, 1), complement_obs(A), 1e-15)
    U = trivial_uniform(A)
    # coefficient 1/(n-1)^m = 1/16 for n=3, m=4
    want = mixture([15 / 16, 1 / 16], [U, A])
    assert effects_close(closed_form_complement(A, 4), want, 1e-14)
    assert effects_close(iterate_complement(A, 4), want, 1e-12)
    assert not effects_close(iterate_complement(A, 4), mixture([80 / 81, 1 / 81], [U, A]), 1e-3)
    A2 = harness.random_observable(2, 2, rng)
    assert effects_close(closed_form_complement(A2, 7), complement_obs(A2), 1e-15)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("m", range(1, 9))
def test_iterate_matches_closed_form(n, m):
    rng = np.random.default_rng(1000 * n + m)
    A = harness.random_observable(int(rng.integers(2, 5)), n, rng)
    assert effects_close(iterate_complement(A, m), closed_form_complement(A, m), 1e-10)


def test_m_must_be_positive():
    with pytest.raises(ValueError):
        iterate_complement(Z, 0)
    with pytest.raises(ValueError):
        closed_form_complement(Z, 1.5)


def test_complement_channel():
    np.testing.assert_array_equal(complement_channel(2).probs, [[0, 1], [1, 0]])
    np.testing.assert_array_equal(complement_channel(3).probs, [[0, 0.5, 0.5], [0.5, 0, 0.5], [0.5, 0.5, 0]])
    for n in range(2, 7):
        p = complement_channel(n).probs
        assert np.allclose(p.sum(axis=0), 1) and np.allclose(p.sum(axis=1), 1)
        assert is_bistochastic(complement_channel(n))


def test_complement_is_post_processing(rng):
    A = harness.random_observable(3, 4, rng)
    nu = complement_channel(4, A.outcomes)
    assert effects_close(post_process(nu, A), complement_obs(A), 1e-12)


def test_is_bistochastic():
    assert is_bistochastic(ClassicalChannel.identity(["a", "b", "c"]))
    assert not is_bistochastic(ClassicalChannel(["a", "b"], ["c", "d"], [[1, 0], [1, 0]]))


def test_uniform_is_neutral(rng):
    A = harness.random_observable(3, 3, rng)
    U = trivial_uniform(A)
    assert effects_close(condition_obs(A, U), A, 1e-12)
    assert effects_close(condition_obs(U, A), U, 1e-12)


def test_complement_of_complement_dichotomic_exact(rng):
    A = harness.random_observable(4, 2, rng)
    Ac = complement_obs(A)
    assert effects_close(complement_obs(Ac), A, 1e-14)
    assert effects_close(iterate_complement(A, 3), Ac, 1e-14)


def test_observable_input_is_promoted(rng):
    A = harness.random_observable(2, 3, rng)
    assert isinstance(A, Observable) and not isinstance(A, NObservable)
    assert isinstance(complement_obs(A), NObservable)
