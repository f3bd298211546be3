"""Seeded random instances and numerical checks of the conditioning identities.

Each registered check draws one random instance from a per-trial generator
and returns the deviation between the two sides of an identity: Frobenius
distance normalized by ``1 + larger norm`` for operator identities, absolute
difference for scalars, and 0/1 for qualitative statements ("these two are
different"). :func:`run_check` runs many trials and keeps the worst one.

Trial ``i`` of a run with seed ``s`` uses ``numpy.random.default_rng(t)``
where ``t`` is a 64-bit word hashed from ``(s, i)`` by ``SeedSequence``; the
report stores ``t`` of the worst trial so it can be replayed alone.
"""

import concurrent.futures
import contextvars
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Tuple

import numpy as np

from . import complement as cmp
from . import observables as obs
from . import spectral as spc
from .effects import (
    Effect,
    PureState,
    State,
    condition_partial_state,
    conditional_probability,
    seq_product,
)
from .errors import UnknownTheorem
from .numerics import (
    approx_equal,
    get_policy,
    hermitian_eig,
    projector,
    relative_deviation,
    spectral_projections,
)

__all__ = [
    "RandomSpec",
    "CheckReport",
    "random_unitary",
    "random_hermitian",
    "random_psd",
    "random_effect",
    "random_observable",
    "random_sharp_observable",
    "random_atomic_observable",
    "random_state",
    "random_pure_state",
    "random_channel",
    "random_bistochastic",
    "random_commuting_pair",
    "trial_seed",
    "run_check",
    "run_all",
    "select",
    "replay",
    "REGISTRY",
]

# ---------------------------------------------------------------------------
# generators


def _ginibre(rows, cols, rng):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_unitary(dim, rng):
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    q, r = np.linalg.qr(_ginibre(dim, dim, rng))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(dim, rng):
    g = _ginibre(dim, dim, rng)
    return (g + g.conj().T) / 2


def random_psd(dim, rng):
    g = _ginibre(dim, dim, rng)
    return g.conj().T @ g


def random_effect(dim, rng) -> Effect:
    """``G^dagger G / (||G^dagger G||_2 + u)`` with ``u ~ U(0, 1)``; spectrum in [0, 1)."""
    h = random_psd(dim, rng)
    u = rng.uniform(0.0, 1.0)
    while u == 0.0:
        u = rng.uniform(0.0, 1.0)
    return Effect(h / (np.linalg.norm(h, 2) + u))


def _outcomes(k, rng, prefix="x"):
    return [obs.Outcome(f"{prefix}{i}", float(v)) for i, v in enumerate(rng.standard_normal(k))]


def _inv_sqrt(m):
    w, v = hermitian_eig(m)
    return (v / np.sqrt(w)) @ v.conj().T


def random_observable(dim, k, rng, outcomes=None) -> obs.Observable:
    """Random full-rank POVM with ``k`` outcomes.

    Draws PSD ``H_1..H_k``, sets ``S = sum H_i + eps I`` and returns
    ``S^{-1/2} H_i S^{-1/2}`` with ``eps I`` folded into the last term.
    Outcomes default to labels ``x0, x1, ...`` with standard normal values.
    """
    outs = _outcomes(k, rng) if outcomes is None else list(outcomes)
    if len(outs) != k:
        raise ValueError("need one outcome per effect")
    if k == 1:
        return obs.Observable([(outs[0], Effect.identity(dim))])
    eps = 1e-6
    hs = [random_psd(dim, rng) for _ in range(k)]
    hs[-1] = hs[-1] + eps * np.eye(dim)
    r = _inv_sqrt(sum(hs))
    return obs.Observable((o, r @ h @ r) for o, h in zip(outs, hs))


def _block_sizes(dim, k, rng):
    if not 1 <= k <= dim:
        raise ValueError(f"a sharp observable with nonzero effects needs 1 <= k <= dim, got k={k}")
    cuts = np.sort(rng.choice(np.arange(1, dim), size=k - 1, replace=False)) if k > 1 else []
    return np.diff(np.concatenate([[0], cuts, [dim]])).astype(int)


def random_sharp_observable(dim, k, rng, outcomes=None) -> obs.Observable:
    """Random unitary applied to a partition of the basis projectors into ``k`` blocks."""
    outs = _outcomes(k, rng) if outcomes is None else list(outcomes)
    u = random_unitary(dim, rng)
    sizes = _block_sizes(dim, k, rng)
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    effects = [u[:, s:s + n] @ u[:, s:s + n].conj().T for s, n in zip(starts, sizes)]
    return obs.Observable(zip(outs, effects))


def random_atomic_observable(dim, rng, outcomes=None) -> obs.Observable:
    return random_sharp_observable(dim, dim, rng, outcomes)


def random_state(dim, rng) -> State:
    g = _ginibre(dim, dim, rng)
    rho = g.conj().T @ g
    return State(rho / np.trace(rho).real)


def random_pure_state(dim, rng) -> PureState:
    return PureState(_ginibre(dim, 1, rng), normalize=True)


def random_channel(rows, cols, rng) -> obs.ClassicalChannel:
    """Row-normalized uniform positive matrix.

    ``rows`` / ``cols`` are either counts or outcome sequences; counted
    columns get labels ``y0, y1, ...`` with standard normal values.
    """
    rows = [f"x{i}" for i in range(rows)] if isinstance(rows, int) else list(rows)
    cols = _outcomes(cols, rng, "y") if isinstance(cols, int) else list(cols)
    p = rng.uniform(0.0, 1.0, (len(rows), len(cols))) + 1e-3
    return obs.ClassicalChannel(rows, cols, p / p.sum(axis=1, keepdims=True))


def random_bistochastic(n, rng, rows=None, cols=None) -> obs.ClassicalChannel:
    """Random convex combination of permutation matrices."""
    rows = [f"x{i}" for i in range(n)] if rows is None else list(rows)
    cols = rows if cols is None else list(cols)
    w = rng.dirichlet(np.ones(n + 1))
    p = sum(wi * np.eye(n)[rng.permutation(n)] for wi in w)
    return obs.ClassicalChannel(rows, cols, p)


def random_commuting_pair(dim, rng):
    """Two Hermitian matrices diagonal in a shared random basis.

    With probability 0.3 the second one has a repeated eigenvalue, so its
    spectral projections are not all rank one.
    """
    u = random_unitary(dim, rng)
    t = rng.standard_normal(dim)
    s = rng.standard_normal(dim)
    if dim > 1 and rng.uniform() < 0.3:
        s[1] = s[0]
    return (u * t) @ u.conj().T, (u * s) @ u.conj().T


# ---------------------------------------------------------------------------
# runner


@dataclass(frozen=True)
class RandomSpec:
    seed: int = 7
    dims: Tuple[int, int] = (2, 5)
    outcomes: Tuple[int, int] = (2, 4)
    trials: int = 200

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        for name in ("dims", "outcomes"):
            lo, hi = getattr(self, name)
            if lo > hi or lo < 1:
                raise ValueError(f"{name} range {lo}..{hi} is empty or non-positive")
        if self.outcomes[0] < 2:
            raise ValueError("outcome counts start at 2")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    def dim(self, rng):
        return int(rng.integers(self.dims[0], self.dims[1] + 1))

    def count(self, rng):
        return int(rng.integers(self.outcomes[0], self.outcomes[1] + 1))


@dataclass(frozen=True)
class CheckReport:
    theorem_id: str
    trials: int
    max_deviation: float
    worst_case_seed: int
    passed: bool
    tolerance: float
    seconds: float = field(default=0.0, compare=False)

    def as_dict(self):
        return {
            "theorem_id": self.theorem_id,
            "trials": self.trials,
            "max_deviation": self.max_deviation,
            "worst_case_seed": self.worst_case_seed,
            "passed": self.passed,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class _Check:
    fn: Callable
    tolerance: float
    description: str


REGISTRY: Dict[str, _Check] = {}


def _register(theorem_id, description, tolerance=1e-8):
    def deco(fn):
        REGISTRY[theorem_id] = _Check(fn, tolerance, description)
        return fn

    return deco


def trial_seed(seed, i) -> int:
    """64-bit seed of trial ``i``, independent of execution order."""
    return int(np.random.SeedSequence([seed, i]).generate_state(1, np.uint64)[0])


def replay(theorem_id, seed, spec=None) -> float:
    """Deviation of a single trial given its derived seed."""
    check = _lookup(theorem_id)
    return float(check.fn(np.random.default_rng(seed), spec or RandomSpec()))


def _lookup(theorem_id):
    try:
        return REGISTRY[theorem_id]
    except KeyError:
        raise UnknownTheorem(f"no check registered under {theorem_id!r}") from None


def run_check(theorem_id, spec=None, workers=1) -> CheckReport:
    """Run ``spec.trials`` random trials of one registered identity."""
    spec = spec or RandomSpec()
    check = _lookup(theorem_id)
    seeds = [trial_seed(spec.seed, i) for i in range(spec.trials)]
    start = time.perf_counter()
    if workers > 1:
        ctx = contextvars.copy_context()
        with concurrent.futures.ThreadPoolExecutor(workers) as pool:
            devs = list(pool.map(lambda s: ctx.copy().run(replay, theorem_id, s, spec), seeds))
    else:
        devs = [replay(theorem_id, s, spec) for s in seeds]
    worst = int(np.argmax(devs))
    max_dev = float(devs[worst])
    return CheckReport(
        theorem_id=theorem_id,
        trials=spec.trials,
        max_deviation=max_dev,
        worst_case_seed=seeds[worst],
        passed=bool(max_dev <= check.tolerance),
        tolerance=check.tolerance,
        seconds=time.perf_counter() - start,
    )


def select(theorem_id):
    """Ids matching ``theorem_id`` exactly, or as a group prefix.

    ``"thm_4_3"`` selects ``thm_4_3_i`` and ``thm_4_3_ii``.
    """
    if theorem_id in REGISTRY:
        return [theorem_id]
    ids = [t for t in REGISTRY if t.startswith(theorem_id + "_")]
    if not ids:
        raise UnknownTheorem(f"no check registered under {theorem_id!r}")
    return ids


def run_all(spec=None, workers=1, theorem_id=None):
    ids = list(REGISTRY) if theorem_id is None else select(theorem_id)
    return [run_check(t, spec, workers) for t in ids]


# ---------------------------------------------------------------------------
# deviation helpers


def _obs_dev(A, B):
    if A.labels != B.labels:
        return 1.0
    return max(relative_deviation(a.matrix, b.matrix) for a, b in zip(A.effects, B.effects))


def _obs_close(A, B):
    return A.labels == B.labels and all(approx_equal(a.matrix, b.matrix) for a, b in zip(A.effects, B.effects))


def _shared_observables(dim, k, count, rng):
    outs = _outcomes(k, rng, "y")
    return [random_observable(dim, k, rng, outs) for _ in range(count)]


def _weights(count, rng):
    return rng.dirichlet(np.ones(count)).tolist()


# ---------------------------------------------------------------------------
# effects


@_register("sec2_trace_symmetry", "tr[(b|a)] = tr(ab) = tr[(a|b)]")
def _(rng, spec):
    d = spec.dim(rng)
    a, b = random_effect(d, rng), random_effect(d, rng)
    ab = seq_product(a, b).trace()
    ba = seq_product(b, a).trace()
    plain = float(np.trace(a.matrix @ b.matrix).real)
    return max(abs(ab - ba), abs(ab - plain))


@_register("sec2_commutation", "a o b = b o a iff ab = ba")
def _(rng, spec):
    d = spec.dim(rng)
    u = random_unitary(d, rng)
    a = Effect((u * rng.uniform(0, 1, d)) @ u.conj().T)
    b = Effect((u * rng.uniform(0, 1, d)) @ u.conj().T)
    commuting = relative_deviation(seq_product(a, b).matrix, seq_product(b, a).matrix)
    a, b = random_effect(d, rng), random_effect(d, rng)
    lhs = approx_equal(seq_product(a, b).matrix, seq_product(b, a).matrix)
    rhs = approx_equal(a.matrix @ b.matrix, b.matrix @ a.matrix)
    return max(commuting, float(lhs != rhs))


@_register("sec2_atomic_left", "(b|P_phi) = <phi, b phi> P_phi")
def _(rng, spec):
    d = spec.dim(rng)
    phi, b = random_pure_state(d, rng), random_effect(d, rng)
    p = projector(phi.vector)
    expected = np.vdot(phi.vector, b.matrix @ phi.vector).real * p
    return relative_deviation(seq_product(Effect(p), b).matrix, expected)


@_register("sec2_atomic_right", "(P_phi|a) = <phi, a phi> P_(a^1/2 phi)^")
def _(rng, spec):
    d = spec.dim(rng)
    phi, a = random_pure_state(d, rng), random_effect(d, rng)
    v = a.sqrt @ phi.vector
    expected = np.vdot(phi.vector, a.matrix @ phi.vector).real * projector(v)
    return relative_deviation(seq_product(a, Effect(projector(phi.vector))).matrix, expected)


@_register("sec2_atomic_both", "(P_psi|P_phi) = |<phi, psi>|^2 P_phi")
def _(rng, spec):
    d = spec.dim(rng)
    phi, psi = random_pure_state(d, rng), random_pure_state(d, rng)
    p, q = projector(phi.vector), projector(psi.vector)
    expected = abs(np.vdot(phi.vector, psi.vector)) ** 2 * p
    return relative_deviation(seq_product(Effect(p), Effect(q)).matrix, expected)


@_register("sec2_conditioning_duality", "E_rho[(b|a)] = tr[(rho|a) b]")
def _(rng, spec):
    d = spec.dim(rng)
    rho, a, b = random_state(d, rng), random_effect(d, rng), random_effect(d, rng)
    lhs = np.trace(rho.matrix @ seq_product(a, b).matrix).real
    rhs = np.trace(condition_partial_state(rho, a).matrix @ b.matrix).real
    return abs(lhs - rhs)


@_register("sec2_additivity", "(b1 + b2|a) = (b1|a) + (b2|a); (b|la) = (lb|a) = l(b|a)")
def _(rng, spec):
    d = spec.dim(rng)
    a = random_effect(d, rng)
    parts = random_observable(d, 3, rng).effects
    b1, b2 = parts[0], parts[1]
    sum_first = seq_product(a, Effect(b1.matrix + b2.matrix)).matrix
    additive = relative_deviation(sum_first, seq_product(a, b1).matrix + seq_product(a, b2).matrix)
    lam = rng.uniform()
    base = lam * seq_product(a, b1).matrix
    scaled_cond = relative_deviation(seq_product(Effect(lam * a.matrix), b1).matrix, base)
    scaled_eff = relative_deviation(seq_product(a, Effect(lam * b1.matrix)).matrix, base)
    return max(additive, scaled_cond, scaled_eff)


@_register("sec2_conditional_probability", "b -> E_rho[(b|a)]/E_rho(a) is additive with total mass 1")
def _(rng, spec):
    d = spec.dim(rng)
    rho, a = random_state(d, rng), random_effect(d, rng)
    B = random_observable(d, spec.count(rng), rng)
    total = sum(conditional_probability(rho, b, a) for b in B.effects)
    b1, b2 = B.effects[0], B.effects[1]
    pair = conditional_probability(rho, Effect(b1.matrix + b2.matrix), a)
    split = conditional_probability(rho, b1, a) + conditional_probability(rho, b2, a)
    one = conditional_probability(rho, Effect.identity(d), a)
    return max(abs(total - 1), abs(pair - split), abs(one - 1))


# ---------------------------------------------------------------------------
# observables


def _pair(rng, spec):
    d = spec.dim(rng)
    return d, random_observable(d, spec.count(rng), rng), random_observable(d, spec.count(rng), rng)


@_register("sec3_left_marginal", "left marginal of A o B is A")
def _(rng, spec):
    _, A, B = _pair(rng, spec)
    left = obs.marginal_left(obs.seq_product_obs(A, B))
    return _obs_dev(left, A)


@_register("sec3_right_marginal", "right marginal of A o B is (B|A)")
def _(rng, spec):
    _, A, B = _pair(rng, spec)
    right = obs.marginal_right(obs.seq_product_obs(A, B))
    return _obs_dev(right, obs.condition_obs(B, A))


@_register("sec3_sharp_orthogonality", "sharp effects are pairwise orthogonal")
def _(rng, spec):
    d = spec.dim(rng)
    A = random_sharp_observable(d, int(rng.integers(1, d + 1)), rng)
    es = [a.matrix for a in A.effects]
    return max((float(np.linalg.norm(x @ y)) for i, x in enumerate(es) for y in es[i + 1:]), default=0.0)


@_register("sec3_state_conditioning", "(rho|A) is a state")
def _(rng, spec):
    d = spec.dim(rng)
    rho, A = random_state(d, rng), random_observable(d, spec.count(rng), rng)
    out = obs.condition_state_obs(rho, A)
    return max(abs(out.trace() - 1), max(0.0, -np.linalg.eigvalsh(out.matrix)[0]))


@_register("sec3_atomic_conditioning", "(B|A)_y = sum_x <phi_x, b_y phi_x> P_phi_x for atomic A")
def _(rng, spec):
    d = spec.dim(rng)
    A = random_atomic_observable(d, rng)
    B = random_observable(d, spec.count(rng), rng)
    phis = [hermitian_eig(a.matrix).eigenvectors[:, -1] for a in A.effects]
    dev = 0.0
    for b, e in zip(B.effects, obs.condition_obs(B, A).effects):
        expected = sum(np.vdot(f, b.matrix @ f).real * projector(f) for f in phis)
        dev = max(dev, relative_deviation(e.matrix, expected))
    return dev


@_register("lemma_3_1", "E_rho(B|A) = E_(rho|A)(B)")
def _(rng, spec):
    d, A, B = _pair(rng, spec)
    rho = random_state(d, rng)
    lhs = obs.expectation(rho, obs.condition_obs(B, A))
    rhs = obs.expectation(obs.condition_state_obs(rho, A), B)
    return abs(lhs - rhs)


@_register("thm_3_2_i", "A o sum l_i B_i = sum l_i (A o B_i)")
def _(rng, spec):
    d = spec.dim(rng)
    A = random_observable(d, spec.count(rng), rng)
    Bs = _shared_observables(d, spec.count(rng), int(rng.integers(2, 4)), rng)
    w = _weights(len(Bs), rng)
    lhs = obs.seq_product_obs(A, obs.mixture(w, Bs))
    rhs = obs.mixture(w, [obs.seq_product_obs(A, B) for B in Bs])
    return _obs_dev(lhs, rhs)


@_register("thm_3_2_ii", "(sum l_i B_i|A) = sum l_i (B_i|A)")
def _(rng, spec):
    d = spec.dim(rng)
    A = random_observable(d, spec.count(rng), rng)
    Bs = _shared_observables(d, spec.count(rng), int(rng.integers(2, 4)), rng)
    w = _weights(len(Bs), rng)
    lhs = obs.condition_obs(obs.mixture(w, Bs), A)
    rhs = obs.mixture(w, [obs.condition_obs(B, A) for B in Bs])
    return _obs_dev(lhs, rhs)


@_register("thm_3_2_iii", "(nu . A|C) = nu . (A|C)")
def _(rng, spec):
    d, A, C = _pair(rng, spec)
    nu = random_channel(A.labels, spec.count(rng), rng)
    lhs = obs.condition_obs(obs.post_process(nu, A), C)
    rhs = obs.post_process(nu, obs.condition_obs(A, C))
    return _obs_dev(lhs, rhs)


@_register("lemma_4_1", "mu . (nu . A) = (nu mu) . A")
def _(rng, spec):
    d = spec.dim(rng)
    A = random_observable(d, spec.count(rng), rng)
    nu = random_channel(A.labels, spec.count(rng), rng)
    mu = random_channel([c.label for c in nu.cols], spec.count(rng), rng)
    lhs = obs.post_process(mu, obs.post_process(nu, A))
    rhs = obs.post_process(obs.compose_channels(nu, mu), A)
    return _obs_dev(lhs, rhs)


@_register("thm_4_2_i", "(nu . A)^ = f_nu^(A^)")
def _(rng, spec):
    d = spec.dim(rng)
    A = random_observable(d, spec.count(rng), rng)
    nu = random_channel(A.labels, spec.count(rng), rng)
    lhs = obs.observable_operator(obs.post_process(nu, A))
    return relative_deviation(lhs, obs.f_hat(A, obs.f_nu(nu)))


@_register("thm_4_2_ii", "[mu . (nu . A)]^ = f_(nu mu)^(A^)")
def _(rng, spec):
    d = spec.dim(rng)
    A = random_observable(d, spec.count(rng), rng)
    nu = random_channel(A.labels, spec.count(rng), rng)
    mu = random_channel([c.label for c in nu.cols], spec.count(rng), rng)
    lhs = obs.observable_operator(obs.post_process(mu, obs.post_process(nu, A)))
    rhs = obs.f_hat(A, obs.f_nu(obs.compose_channels(nu, mu)))
    return relative_deviation(lhs, rhs)


@_register("thm_4_2_iii", "(sum l_i B_i)^ = sum l_i B_i^")
def _(rng, spec):
    d = spec.dim(rng)
    Bs = _shared_observables(d, spec.count(rng), int(rng.integers(2, 4)), rng)
    w = _weights(len(Bs), rng)
    lhs = obs.observable_operator(obs.mixture(w, Bs))
    rhs = sum(wi * obs.observable_operator(B) for wi, B in zip(w, Bs))
    return relative_deviation(lhs, rhs)


@_register("thm_4_3_i", "(B|A)^ = sum_x (B^|a_x)")
def _(rng, spec):
    _, A, B = _pair(rng, spec)
    bhat = obs.observable_operator(B)
    lhs = obs.observable_operator(obs.condition_obs(B, A))
    rhs = sum(obs.condition_operator_on_effect(bhat, a) for a in A.effects)
    return relative_deviation(lhs, rhs)


@_register("thm_4_3_ii", "(A o B)^ = sum_x x (B^|a_x)")
def _(rng, spec):
    _, A, B = _pair(rng, spec)
    bhat = obs.observable_operator(B)
    lhs = obs.observable_operator(obs.seq_product_obs(A, B))
    rhs = sum(x * obs.condition_operator_on_effect(bhat, a) for x, a in zip(A.require_values(), A.effects))
    return relative_deviation(lhs, rhs)


@_register("sec4_sharp_fhat", "f^(A^) = f(A^) for sharp A")
def _(rng, spec):
    d = spec.dim(rng)
    A = random_sharp_observable(d, int(rng.integers(1, d + 1)), rng)
    ahat = obs.observable_operator(A)
    return relative_deviation(obs.f_hat(A, lambda x: x * x), ahat @ ahat)


@_register("bicondition_left_form", "((B|A)|C)_y = sum_{z,x} c_z^1/2 a_x^1/2 b_y a_x^1/2 c_z^1/2")
def _(rng, spec):
    d = spec.dim(rng)
    A, B, C = (random_observable(d, spec.count(rng), rng) for _ in range(3))
    left = obs.bicondition(B, A, C, "left")
    dev = 0.0
    for b, e in zip(B.effects, left.effects):
        expected = sum(c.sqrt @ a.sqrt @ b.matrix @ a.sqrt @ c.sqrt for c in C.effects for a in A.effects)
        dev = max(dev, relative_deviation(e.matrix, expected))
    return dev


# ---------------------------------------------------------------------------
# complement


def _n_observable(rng, spec, n=None):
    d = spec.dim(rng)
    return cmp.as_n_observable(random_observable(d, n or spec.count(rng), rng))


@_register("lemma_5_1", "A' = A iff A = I_A")
def _(rng, spec):
    A = _n_observable(rng, spec)
    uniform = cmp.trivial_uniform(A)
    fixed = _obs_dev(cmp.complement_obs(uniform), uniform)
    spurious = float(_obs_close(cmp.complement_obs(A), A))
    return max(fixed, spurious)


@_register("thm_5_2_i", "(B|A)' = (B'|A)")
def _(rng, spec):
    d = spec.dim(rng)
    A = random_observable(d, spec.count(rng), rng)
    B = random_observable(d, spec.count(rng), rng)
    lhs = cmp.complement_obs(obs.condition_obs(B, A))
    rhs = obs.condition_obs(cmp.complement_obs(B), A)
    return _obs_dev(lhs, rhs)


@_register("thm_5_2_ii", "(sum l_i A_i)' = sum l_i A_i'")
def _(rng, spec):
    d = spec.dim(rng)
    As = _shared_observables(d, spec.count(rng), int(rng.integers(2, 4)), rng)
    w = _weights(len(As), rng)
    lhs = cmp.complement_obs(obs.mixture(w, As))
    rhs = obs.mixture(w, [cmp.complement_obs(A) for A in As])
    return _obs_dev(lhs, rhs)


@_register("lemma_5_3", "(nu . A)' = nu . A' iff nu is bistochastic")
def _(rng, spec):
    A = _n_observable(rng, spec)
    n, d = len(A), A.dim
    bi = random_bistochastic(n, rng, A.labels)
    bistochastic = _obs_dev(cmp.complement_obs(obs.post_process(bi, A)), obs.post_process(bi, cmp.complement_obs(A)))
    # the gap for a general channel is exactly (colsum_y - 1) I / (n - 1)
    nu = random_channel(A.labels, A.outcomes, rng)
    lhs = cmp.complement_obs(obs.post_process(nu, A))
    rhs = obs.post_process(nu, cmp.complement_obs(A))
    gap = max(
        relative_deviation(l.matrix - r.matrix, (1 - s) / (n - 1) * np.eye(d))
        for l, r, s in zip(lhs.effects, rhs.effects, nu.probs.sum(axis=0))
    )
    return max(bistochastic, gap)


@_register("thm_5_4", "iterated complement matches the closed form, m = 1..8")
def _(rng, spec):
    A = _n_observable(rng, spec)
    dev, it = 0.0, A
    for m in range(1, 9):
        it = cmp.complement_obs(it)
        dev = max(dev, _obs_dev(it, cmp.closed_form_complement(A, m)))
    return dev


@_register("sec5_complement_channel", "A' = nu_c . A for the complement channel")
def _(rng, spec):
    A = _n_observable(rng, spec)
    nu = cmp.complement_channel(len(A), A.outcomes)
    return _obs_dev(cmp.complement_obs(A), obs.post_process(nu, A))


@_register("sec5_uniform_neutral", "(I_A|B) = I_A and (B|I_A) = B")
def _(rng, spec):
    d = spec.dim(rng)
    A = cmp.as_n_observable(random_observable(d, spec.count(rng), rng))
    B = random_observable(d, spec.count(rng), rng)
    ia = cmp.trivial_uniform(A)
    return max(_obs_dev(obs.condition_obs(ia, B), ia), _obs_dev(obs.condition_obs(B, ia), B))


# ---------------------------------------------------------------------------
# spectral


def _generic_pair(rng, spec):
    d = spec.dim(rng)
    while True:
        t, s = random_hermitian(d, rng), random_hermitian(d, rng)
        if np.linalg.norm(t @ s - s @ t) > 1e-3:
            return t, s


@_register("lemma_6_1_necessity", "ST = TS implies (T|S) = T")
def _(rng, spec):
    t, s = random_commuting_pair(spec.dim(rng), rng)
    return relative_deviation(spc.condition_operator(t, s).matrix, t)


@_register("lemma_6_1_sufficiency", "(T|S) = T implies ST = TS")
def _(rng, spec):
    t, s = _generic_pair(rng, spec)
    return float(approx_equal(spc.condition_operator(t, s).matrix, t))


@_register("thm_6_2_i", "T >= 0 implies (T|S) >= 0")
def _(rng, spec):
    d = spec.dim(rng)
    t, s = random_psd(d, rng), random_hermitian(d, rng)
    low = np.linalg.eigvalsh(spc.condition_operator(t, s).matrix)[0]
    return max(0.0, -low - get_policy().eig_clamp)


@_register("thm_6_2_ii", "tr[(T|S)] = tr(T)")
def _(rng, spec):
    t, s = _generic_pair(rng, spec)
    return abs(np.trace(spc.condition_operator(t, s).matrix) - np.trace(t)) / (1 + np.linalg.norm(t))


@_register("thm_6_2_iii", "(rho|S) is a state and tr[rho (T|S)] = tr[(rho|S) T]")
def _(rng, spec):
    t, s = _generic_pair(rng, spec)
    rho = random_state(t.shape[0], rng)
    cond = spc.condition_operator(rho.matrix, s).matrix
    state = State(cond)
    lhs = np.trace(rho.matrix @ spc.condition_operator(t, s).matrix).real
    rhs = np.trace(state.matrix @ t).real
    return max(abs(state.trace() - 1), abs(lhs - rhs) / (1 + np.linalg.norm(t)))


@_register("sec6_value_independence", "(T|S) depends on the eigenspaces of S only")
def _(rng, spec):
    d = spec.dim(rng)
    t, s = random_hermitian(d, rng), random_hermitian(d, rng)
    pairs = spectral_projections(s)
    values = rng.permutation(np.cumsum(1.0 + rng.uniform(size=len(pairs))))
    g = sum(v * q for v, (_, q) in zip(values, pairs))
    return relative_deviation(spc.condition_operator(t, s).matrix, spc.condition_operator(t, g).matrix)


@_register("sec6_linearity", "T -> (T|S) is real linear")
def _(rng, spec):
    d = spec.dim(rng)
    t1, t2, s = random_hermitian(d, rng), random_hermitian(d, rng), random_hermitian(d, rng)
    al, be = rng.standard_normal(2)
    lhs = spc.condition_operator(al * t1 + be * t2, s).matrix
    rhs = al * spc.condition_operator(t1, s).matrix + be * spc.condition_operator(t2, s).matrix
    return relative_deviation(lhs, rhs)


@_register("sec6_cross_module", "(T|S) = (P|Q)^ via conditioned spectral observables")
def _(rng, spec):
    d = spec.dim(rng)
    t, s = random_hermitian(d, rng), random_hermitian(d, rng)
    direct = spc.condition_operator(t, s).matrix
    P, Q = spc.spectral_observable(t), spc.spectral_observable(s)
    return relative_deviation(direct, obs.observable_operator(obs.condition_obs(P, Q)))


@_register("sec6_atomic", "(T|S) = sum_y <psi_y, T psi_y> P_psi_y for nondegenerate S")
def _(rng, spec):
    d = spec.dim(rng)
    t, s = random_hermitian(d, rng), random_hermitian(d, rng)
    psis = hermitian_eig(s).eigenvectors.T
    expected = sum(np.vdot(p, t @ p).real * projector(p) for p in psis)
    return relative_deviation(spc.condition_operator(t, s).matrix, expected)
