import numpy as np
import pytest

from sequens import harness
from sequens.effects import Effect
from sequens.errors import UnknownTheorem
from sequens.numerics import tolerance


def test_effect_generator_sweep():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        e = harness.random_effect(3, rng)
        Effect(e.matrix)
        w = np.linalg.eigvalsh(e.matrix)
        assert w[0] >= -1e-12 and w[-1] <= 1


def test_effect_generator_deterministic():
    a = harness.random_effect(2, np.random.default_rng(42))
    b = harness.random_effect(2, np.random.default_rng(42))
    np.testing.assert_array_equal(a.matrix, b.matrix)


def test_observable_generator():
    rng = np.random.default_rng(1)
    assert np.array_equal(harness.random_observable(3, 1, rng).effects[0].matrix, np.eye(3))
    for _ in range(200):
        d, k = int(rng.integers(2, 6)), int(rng.integers(2, 5))
        A = harness.random_observable(d, k, rng)
        assert np.linalg.norm(sum(a.matrix for a in A.effects) - np.eye(d)) < 1e-10
        assert all(np.linalg.eigvalsh(a.matrix)[0] > 0 for a in A.effects)


def test_sharp_generator():
    rng = np.random.default_rng(2)
    for _ in range(200):
        d = int(rng.integers(2, 6))
        k = int(rng.integers(1, d + 1))
        S = harness.random_sharp_observable(d, k, rng)
        assert len(S) == k and S.is_sharp
        assert all(np.linalg.norm(a.matrix) > 0.5 for a in S.effects)
    assert harness.random_atomic_observable(4, rng).is_atomic
    with pytest.raises(ValueError):
        harness.random_sharp_observable(2, 3, rng)


def test_state_and_channel_generators():
    rng = np.random.default_rng(3)
    for _ in range(100):
        assert abs(harness.random_state(4, rng).trace() - 1) < 1e-12
        nu = harness.random_channel(3, 4, rng)
        assert np.abs(nu.probs.sum(axis=1) - 1).max() < 1e-12
        bi = harness.random_bistochastic(4, rng)
        assert np.abs(bi.probs.sum(axis=0) - 1).max() < 1e-12


def test_random_unitary():
    u = harness.random_unitary(5, np.random.default_rng(4))
    assert np.linalg.norm(u.conj().T @ u - np.eye(5)) < 1e-12


def test_trial_seeds_are_order_independent():
    seeds = [harness.trial_seed(7, i) for i in range(50)]
    assert len(set(seeds)) == 50
    assert harness.trial_seed(7, 10) == seeds[10]
    assert harness.trial_seed(8, 10) != seeds[10]


def test_run_check_deterministic():
    spec = harness.RandomSpec(seed=11, trials=20)
    a = harness.run_check("lemma_3_1", spec)
    b = harness.run_check("lemma_3_1", spec)
    assert a == b and a.passed


def test_workers_do_not_change_results():
    spec = harness.RandomSpec(seed=5, trials=30)
    assert harness.run_check("thm_4_2_i", spec, workers=1) == harness.run_check("thm_4_2_i", spec, workers=4)


def test_replay_worst_case():
    spec = harness.RandomSpec(seed=3, trials=25)
    r = harness.run_check("thm_3_2_ii", spec)
    assert harness.replay("thm_3_2_ii", r.worst_case_seed, spec) == r.max_deviation


def test_unknown_theorem():
    with pytest.raises(UnknownTheorem) as info:
        harness.run_check("thm_9_9")
    assert str(info.value).startswith("UnknownTheorem")
    with pytest.raises(UnknownTheorem):
        harness.select("thm_9")


def test_select_prefix():
    assert harness.select("thm_4_3") == ["thm_4_3_i", "thm_4_3_ii"]
    assert harness.select("lemma_3_1") == ["lemma_3_1"]


def test_spec_validation():
    with pytest.raises(ValueError):
        harness.RandomSpec(dims=(5, 2))
    with pytest.raises(ValueError):
        harness.RandomSpec(outcomes=(1, 3))
    with pytest.raises(ValueError):
        harness.RandomSpec(trials=0)


def test_report_dict():
    r = harness.run_check("lemma_5_1", harness.RandomSpec(trials=5))
    d = r.as_dict()
    assert d["theorem_id"] == "lemma_5_1" and d["trials"] == 5 and d["passed"] is True


def test_policy_reaches_worker_threads():
    spec = harness.RandomSpec(seed=1, trials=8)
    with tolerance(atol=1e-6, eig_clamp=1e-10):
        r = harness.run_check("lemma_3_1", spec, workers=2)
    assert r.passed


@pytest.mark.parametrize("theorem_id", sorted(harness.REGISTRY))
def test_every_check_passes_quickly(theorem_id):
    r = harness.run_check(theorem_id, harness.RandomSpec(seed=99, trials=15))
    assert r.passed, r


def test_lemma_6_1_sufficiency_detects_noncommuting():
    # deviation is an indicator: 0 when every generic pair is moved by conditioning
    r = harness.run_check("lemma_6_1_sufficiency", harness.RandomSpec(seed=4, trials=40))
    assert r.max_deviation == 0.0
