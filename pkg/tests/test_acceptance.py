"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line (visible even with
output capture on) before asserting. Run just this module with::

    pytest tests/test_acceptance.py -v
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from sequens import cli, harness
from sequens.complement import (
    closed_form_complement,
    complement_obs,
    is_bistochastic,
    iterate_complement,
)
from sequens.errors import SequensError
from sequens.io import load, parse_document, serialize_document
from sequens.numerics import projector
from sequens.observables import (
    Outcome,
    bicondition,
    condition_obs,
    observable_operator,
    post_process,
)
from sequens.qubit import qubit_example
from sequens.spectral import condition_operator, spectral_observable

from conftest import random_document

pytestmark = pytest.mark.acceptance

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def report(capsys):
    def _report(number, name, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {name} ({detail})")
        assert ok, detail

    return _report


def _effect_gap(A, B):
    assert A.labels == B.labels
    return max(np.linalg.norm(a.matrix - b.matrix) for a, b in zip(A.effects, B.effects))


# the results the identity suite has to cover
REQUIRED = [
    "lemma_3_1", "thm_3_2_i", "thm_3_2_ii", "thm_3_2_iii", "lemma_4_1", "thm_4_2_i", "thm_4_2_ii",
    "thm_4_2_iii", "thm_4_3_i", "thm_4_3_ii", "lemma_5_1", "thm_5_2_i", "thm_5_2_ii", "lemma_5_3",
    "thm_5_4", "lemma_6_1_necessity", "lemma_6_1_sufficiency", "thm_6_2_i", "thm_6_2_ii", "thm_6_2_iii",
    "sec2_trace_symmetry", "sec2_atomic_left", "sec2_atomic_right", "sec3_left_marginal",
    "sec3_right_marginal", "sec3_sharp_orthogonality",
]


def test_1_identity_suite(report):
    spec = harness.RandomSpec(seed=7, dims=(2, 5), outcomes=(2, 4), trials=200)
    start = time.perf_counter()
    results = harness.run_all(spec)
    elapsed = time.perf_counter() - start
    missing = [t for t in REQUIRED if t not in harness.REGISTRY]
    worst = max(results, key=lambda r: r.max_deviation)
    ok = not missing and all(r.max_deviation < 1e-8 for r in results) and elapsed < 60
    detail = (
        f"{len(results)} checks x 200 trials, worst {worst.theorem_id} = {worst.max_deviation:.2e}, "
        f"{elapsed:.1f} s" + (f", missing {missing}" if missing else "")
    )
    report(1, "identity suite, seed 7", ok, detail)


def test_2_qubit_example(report):
    with open(GOLDEN / "example_qubit.json", encoding="utf-8") as fh:
        golden = json.load(fh)
    rng = np.random.default_rng(20241017)
    worst = 0.0
    for _ in range(20):
        x = tuple(rng.uniform(-3, 3, 2))
        y = tuple(rng.uniform(-3, 3, 2))
        ex = qubit_example(x, y)
        p = ex["transition"]
        phi1, phi2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        c1, c2 = y[1] + (y[0] - y[1]) * p, y[0] + (y[1] - y[0]) * p
        cond, seq = ex["cond_hat_ops"], ex["seq_hat_ops"]
        # coefficients read off the operator computed by conditioning
        via_ops = [np.vdot(phi1, cond @ phi1).real, np.vdot(phi2, cond @ phi2).real]
        via_seq = [np.vdot(phi1, seq @ phi1).real, np.vdot(phi2, seq @ phi2).real]
        display_cond = c1 * projector(phi1) + c2 * projector(phi2)
        display_seq = x[0] * c1 * projector(phi1) + x[1] * c2 * projector(phi2)
        worst = max(
            worst,
            abs(p - 0.5),
            abs(via_ops[0] - c1),
            abs(via_ops[1] - c2),
            abs(via_seq[0] - x[0] * c1),
            abs(via_seq[1] - x[1] * c2),
            np.linalg.norm(cond - display_cond),
            np.linalg.norm(ex["cond_hat_sum"] - display_cond),
            np.linalg.norm(seq - display_seq),
            np.linalg.norm(ex["seq_hat_sum"] - display_seq),
        )
    default = qubit_example()
    golden_gap = max(abs(default["coefficients"][k] - golden["coefficients"][k]) for k in golden["coefficients"])
    ok = worst < 1e-12 and golden_gap == 0.0 and abs(default["coefficients"]["phi1"]) < 1e-12
    report(2, "qubit example", ok, f"20 draws, worst {worst:.2e}, golden gap {golden_gap:.1e}")


def test_3_iterated_complement(report):
    rng = np.random.default_rng(54)
    worst = 0.0
    for n in (2, 3, 4, 5):
        for m in range(1, 9):
            for _ in range(50):
                A = harness.random_observable(int(rng.integers(2, 6)), n, rng)
                worst = max(worst, _effect_gap(iterate_complement(A, m), closed_form_complement(A, m)))
    exact = 0.0
    for _ in range(200):
        A = harness.random_observable(int(rng.integers(2, 6)), 2, rng)
        A1 = complement_obs(A)
        A2 = complement_obs(A1)
        A3 = complement_obs(A2)
        exact = max(exact, _effect_gap(A2, A), _effect_gap(A3, A1))
    ok = worst < 1e-10 and exact < 1e-14
    report(3, "iterated complement closed form", ok, f"worst {worst:.2e}, dichotomic {exact:.2e}")


def test_4_bistochastic_necessity(report):
    rng = np.random.default_rng(53)
    n, slack, tested = 3, math.inf, 0
    while tested < 50:
        nu = harness.random_channel(3, 3, rng)
        if is_bistochastic(nu):
            continue
        tested += 1
        need = np.max(np.abs(nu.probs.sum(axis=0) - 1)) / (n - 1)
        for _ in range(5):
            A = harness.random_observable(int(rng.integers(2, 6)), 3, rng, [Outcome(r) for r in nu.rows])
            lhs = complement_obs(post_process(nu, A))
            rhs = post_process(nu, complement_obs(A))
            slack = min(slack, _effect_gap(lhs, rhs) - (need - 1e-10))
    report(4, "complement commutes only with bistochastic channels", slack >= 0, f"50 channels, min slack {slack:.2e}")


def test_5_operator_conditioning_fixed_points(report):
    rng = np.random.default_rng(61)
    commuting = 0.0
    for _ in range(200):
        T, S = harness.random_commuting_pair(int(rng.integers(2, 6)), rng)
        commuting = max(commuting, np.linalg.norm(condition_operator(T, S).matrix - T))
    generic, count = math.inf, 0
    while count < 200:
        d = int(rng.integers(2, 6))
        T, S = harness.random_hermitian(d, rng), harness.random_hermitian(d, rng)
        if np.linalg.norm(T @ S - S @ T) <= 1e-3:
            continue
        count += 1
        generic = min(generic, np.linalg.norm(condition_operator(T, S).matrix - T))
    ok = commuting < 1e-9 and generic > 1e-6
    report(5, "(T|S) = T iff T and S commute", ok, f"commuting max {commuting:.2e}, generic min {generic:.2e}")


def test_6_nonassociativity_witness(report):
    B, A, C = (load(GOLDEN / f"bicondition_{n}.json") for n in "BAC")
    with open(GOLDEN / "bicondition_witness.json", encoding="utf-8") as fh:
        frozen = json.load(fh)["frobenius_gap"]
    left, right = bicondition(B, A, C, "left"), bicondition(B, A, C, "right")
    gaps = [np.linalg.norm(lft.matrix - rgt.matrix) for lft, rgt in zip(left.effects, right.effects)]
    drift = max(abs(g - f) for g, f in zip(gaps, frozen))
    ok = max(gaps) > 1e-3 and drift < 1e-12
    report(6, "biconditional grouping matters", ok, f"gap {max(gaps):.6f}, drift from golden {drift:.1e}")


def test_7_cross_module(report):
    rng = np.random.default_rng(71)
    worst = 0.0
    for _ in range(200):
        d = int(rng.integers(2, 6))
        T, S = harness.random_hermitian(d, rng), harness.random_hermitian(d, rng)
        via_obs = observable_operator(condition_obs(spectral_observable(T), spectral_observable(S)))
        worst = max(worst, np.linalg.norm(via_obs - condition_operator(T, S).matrix))
    report(7, "operator vs observable conditioning", worst < 1e-8, f"200 pairs, worst {worst:.2e}")


BAD_DOCUMENTS = {
    "NotResolution": '{"kind": "observable", "dim": 1, "entries": [{"label": "a", "matrix": [[0.5]]}]}',
    "NotEffect": '{"kind": "effect", "dim": 1, "matrix": [[1.5]]}',
    "NotHermitian": '{"kind": "effect", "dim": 2, "matrix": [[0, 1], [0, 0]]}',
    "NotState": '{"kind": "state", "dim": 1, "matrix": [[0.5]]}',
    "NotPSD": '{"kind": "partial-state", "dim": 1, "matrix": [[-0.5]]}',
    "NotStochastic": '{"kind": "channel", "rows": ["a"], "cols": [{"label": "b", "value": 1}], "probs": [[0.5]]}',
    "DuplicateLabel": (
        '{"kind": "observable", "dim": 1, "entries": '
        '[{"label": "a", "matrix": [[0.5]]}, {"label": "a", "matrix": [[0.5]]}]}'
    ),
    "EmptyObservable": '{"kind": "observable", "dim": 1, "entries": []}',
    "NotNormalized": '{"kind": "pure-state", "dim": 2, "vector": [1, 1]}',
}


def test_8_round_trip_fuzz(report, tmp_path, capsys):
    rng = np.random.default_rng(81)
    mismatches = 0
    for _ in range(1000):
        text = serialize_document(random_document(rng))
        if serialize_document(parse_document(text)) != text:
            mismatches += 1
    unnamed = []
    for name, text in BAD_DOCUMENTS.items():
        try:
            parse_document(text)
            unnamed.append(name)
        except SequensError as exc:
            if exc.invariant != name or name not in str(exc):
                unnamed.append(name)
        path = tmp_path / f"{name}.json"
        path.write_text(text, encoding="utf-8")
        code = cli.main(["validate", str(path)])
        err = capsys.readouterr().err
        if code != 1 or name not in err:
            unnamed.append(f"cli:{name}")
    ok = mismatches == 0 and not unnamed
    report(8, "document round trip", ok, f"1000 documents, {mismatches} mismatches, unnamed errors {unnamed}")
