"""Observables (finite POVMs), conditioning, post-processing, and observable operators.

An :class:`Observable` is an ordered list of ``(Outcome, Effect)`` pairs whose
effects sum to the identity. Outcome identity is the label; the optional real
``value`` is only needed by operations that treat the value space as a subset
of the reals (expectations, observable operators).

Conditioning ``(B|A)`` measures ``A`` first, discards its outcome, then
measures ``B``; its effect at ``y`` is ``sum_x a_x^{1/2} b_y a_x^{1/2}``.
"""

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence, Union

import numpy as np

from .effects import Effect, State, _sandwich, _same_dim, seq_product
from .effects import is_sharp as _effect_is_sharp
from .errors import (
    DimensionMismatch,
    DuplicateLabel,
    EmptyObservable,
    FunctionDomainError,
    MissingOutcomeValues,
    NotHermitian,
    NotResolution,
    NotStochastic,
    OutcomeMismatch,
    ShapeMismatch,
    WeightError,
)
from .numerics import as_matrix, frobenius, get_policy, is_hermitian

__all__ = [
    "Outcome",
    "Observable",
    "PairObservable",
    "ClassicalChannel",
    "validate_observable",
    "seq_product_obs",
    "marginal_left",
    "marginal_right",
    "condition_obs",
    "condition_state_obs",
    "expectation",
    "mixture",
    "post_process",
    "compose_channels",
    "observable_operator",
    "f_hat",
    "f_nu",
    "condition_operator_on_effect",
    "bicondition",
    "PAIR_SEPARATOR",
]

PAIR_SEPARATOR = "⊗"


@dataclass(frozen=True)
class Outcome:
    label: str
    value: Optional[float] = None

    def __post_init__(self):
        if not isinstance(self.label, str):
            object.__setattr__(self, "label", str(self.label))
        if self.value is not None:
            object.__setattr__(self, "value", float(self.value))


def _as_outcome(o) -> Outcome:
    if isinstance(o, Outcome):
        return o
    if isinstance(o, (int, float, np.floating, np.integer)):
        return Outcome(format(float(o), ".17g"), float(o))
    return Outcome(str(o))


class Observable:
    """A finite observable ``A = {a_x : x in Omega_A}`` with ``sum_x a_x = I``.

    Build one from ``(outcome, effect)`` pairs, where an outcome may be an
    :class:`Outcome`, a string label, or a number (label and value both taken
    from it) and an effect may be an :class:`Effect` or a matrix.

    Raises:
        EmptyObservable, DimensionMismatch, DuplicateLabel, NotResolution
    """

    def __init__(self, entries):
        entries = list(entries)
        if not entries:
            raise EmptyObservable("an observable needs at least one outcome")
        outcomes = tuple(_as_outcome(o) for o, _ in entries)
        effects = tuple(e if isinstance(e, Effect) else Effect(e) for _, e in entries)
        dims = {e.dim for e in effects}
        if len(dims) != 1:
            raise DimensionMismatch(f"effects have differing dimensions {sorted(dims)}")
        labels = [o.label for o in outcomes]
        if len(set(labels)) != len(labels):
            dup = sorted({x for x in labels if labels.count(x) > 1})
            raise DuplicateLabel(f"repeated outcome labels {dup}")
        d = effects[0].dim
        gap = frobenius(sum(e.matrix for e in effects) - np.eye(d))
        if gap > get_policy().atol * d:
            raise NotResolution(f"||sum a_x - I||_F = {gap:.3g} exceeds {get_policy().atol * d:.3g}")
        self._outcomes = outcomes
        self._effects = effects
        self._index = {o.label: i for i, o in enumerate(outcomes)}

    @classmethod
    def from_matrices(cls, matrices, labels=None, values=None):
        matrices = list(matrices)
        n = len(matrices)
        labels = [f"x{i}" for i in range(n)] if labels is None else list(labels)
        values = [None] * n if values is None else list(values)
        if len(labels) != n or len(values) != n:
            raise ShapeMismatch("labels/values must match the number of effects")
        return cls((Outcome(lab, val), m) for lab, val, m in zip(labels, values, matrices))

    @classmethod
    def trivial(cls, dim, label="1", value=None):
        return cls([(Outcome(label, value), Effect.identity(dim))])

    @property
    def dim(self) -> int:
        return self._effects[0].dim

    @property
    def outcomes(self) -> tuple:
        return self._outcomes

    @property
    def effects(self) -> tuple:
        return self._effects

    @property
    def labels(self) -> tuple:
        return tuple(o.label for o in self._outcomes)

    @property
    def values(self) -> tuple:
        return tuple(o.value for o in self._outcomes)

    @property
    def has_values(self) -> bool:
        return all(o.value is not None for o in self._outcomes)

    def effect(self, label) -> Effect:
        return self._effects[self._index[str(label)]]

    @property
    def is_sharp(self) -> bool:
        """All effects are projections."""
        return all(_effect_is_sharp(e) for e in self._effects)

    @property
    def is_atomic(self) -> bool:
        """All effects are rank-one projections."""
        tol = get_policy().atol
        return self.is_sharp and all(abs(e.trace() - 1) <= tol for e in self._effects)

    def require_values(self) -> np.ndarray:
        if not self.has_values:
            missing = [o.label for o in self._outcomes if o.value is None]
            raise MissingOutcomeValues(f"outcomes {missing} carry no numerical value")
        return np.array(self.values, dtype=float)

    def __len__(self):
        return len(self._effects)

    def __iter__(self):
        return iter(zip(self._outcomes, self._effects))

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, labels={list(self.labels)})"


def validate_observable(entries) -> Observable:
    """Construct and validate an :class:`Observable`."""
    return Observable(entries)


class PairObservable(Observable):
    """An observable on ``Omega_A x Omega_B`` in A-major order.

    Pair labels are ``"x⊗y"``; the pair value is ``x*y`` when both parts
    carry values.
    """

    def __init__(self, left, right, effects):
        left = tuple(_as_outcome(o) for o in left)
        right = tuple(_as_outcome(o) for o in right)
        effects = list(effects)
        if len(effects) != len(left) * len(right):
            raise ShapeMismatch("need one effect per (x, y) pair")
        pairs = []
        for i, x in enumerate(left):
            for j, y in enumerate(right):
                value = None if x.value is None or y.value is None else x.value * y.value
                pairs.append((Outcome(f"{x.label}{PAIR_SEPARATOR}{y.label}", value), effects[i * len(right) + j]))
        super().__init__(pairs)
        self._left = left
        self._right = right

    @property
    def left(self) -> tuple:
        return self._left

    @property
    def right(self) -> tuple:
        return self._right

    def block(self) -> list:
        """Effects as a nested list ``[x][y]``."""
        m = len(self._right)
        return [list(self.effects[i * m:(i + 1) * m]) for i in range(len(self._left))]


def seq_product_obs(A: Observable, B: Observable) -> PairObservable:
    """``A o B = {a_x o b_y}`` on ``Omega_A x Omega_B``."""
    _same_dim(A, B)
    effects = [seq_product(a, b) for a in A.effects for b in B.effects]
    return PairObservable(A.outcomes, B.outcomes, effects)


def marginal_left(AB: PairObservable) -> Observable:
    """Sum over ``y``; for ``AB = A o B`` this returns ``A``."""
    rows = AB.block()
    return Observable((x, sum(e.matrix for e in row)) for x, row in zip(AB.left, rows))


def marginal_right(AB: PairObservable) -> Observable:
    """Sum over ``x``; for ``AB = A o B`` this is ``(B|A)``."""
    rows = AB.block()
    cols = zip(*rows)
    return Observable((y, sum(e.matrix for e in col)) for y, col in zip(AB.right, cols))


def condition_obs(B: Observable, A: Observable) -> Observable:
    """``(B|A)_y = sum_x a_x^{1/2} b_y a_x^{1/2}``, on ``B``'s outcomes."""
    _same_dim(A, B)
    roots = [a.sqrt for a in A.effects]
    return Observable((y, sum(_sandwich(s, b.matrix) for s in roots)) for y, b in B)


def condition_state_obs(rho: State, A: Observable) -> State:
    """Lüders conditioning ``(rho|A) = sum_x a_x^{1/2} rho a_x^{1/2}``."""
    _same_dim(rho, A)
    return State(sum(_sandwich(a.sqrt, rho.matrix) for a in A.effects))


def expectation(rho: State, A: Observable) -> float:
    """``E_rho(A) = sum_x x tr(rho a_x)``."""
    _same_dim(rho, A)
    xs = A.require_values()
    probs = [np.trace(rho.matrix @ a.matrix).real for a in A.effects]
    return float(np.dot(xs, probs))


def mixture(weights: Sequence[float], Bs: Sequence[Observable]) -> Observable:
    """Convex combination ``sum_i w_i B^(i)`` of observables with one outcome list."""
    weights = [float(w) for w in weights]
    Bs = list(Bs)
    if not Bs or len(weights) != len(Bs):
        raise WeightError("need one weight per observable")
    tol = get_policy().atol
    if any(w < -tol or w > 1 + tol for w in weights) or abs(sum(weights) - 1) > tol:
        raise WeightError(f"weights {weights} are not a probability vector")
    _same_dim(*Bs)
    ref = Bs[0].outcomes
    for B in Bs[1:]:
        if B.outcomes != ref:
            raise OutcomeMismatch("mixed observables must share the same ordered outcomes")
    return Observable(
        (y, sum(w * B.effects[k].matrix for w, B in zip(weights, Bs))) for k, y in enumerate(ref)
    )


class ClassicalChannel:
    """Row-stochastic matrix ``nu[x, y]`` from ``Omega_A`` (row labels) to ``Omega_B``.

    ``rows`` are outcome labels of the input space; ``cols`` are full
    outcomes (label and optional value) of the output space.
    """

    __slots__ = ("_rows", "_cols", "_probs")

    def __init__(self, rows, cols, probs):
        rows = tuple(o.label if isinstance(o, Outcome) else str(o) for o in rows)
        cols = tuple(_as_outcome(o) for o in cols)
        p = np.array(probs, dtype=float)
        if p.shape != (len(rows), len(cols)):
            raise ShapeMismatch(f"probability matrix shape {p.shape} != ({len(rows)}, {len(cols)})")
        if len(set(rows)) != len(rows) or len({c.label for c in cols}) != len(cols):
            raise DuplicateLabel("channel row/column labels must be unique")
        tol = get_policy().atol
        if p.size and (p.min() < -tol or p.max() > 1 + tol):
            raise NotStochastic("entries must lie in [0, 1]")
        sums = p.sum(axis=1)
        if np.any(np.abs(sums - 1) > tol):
            raise NotStochastic(f"row sums {sums.tolist()} differ from 1")
        p.setflags(write=False)
        self._rows, self._cols, self._probs = rows, cols, p

    @classmethod
    def identity(cls, outcomes):
        outs = tuple(_as_outcome(o) for o in outcomes)
        return cls([o.label for o in outs], outs, np.eye(len(outs)))

    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def cols(self) -> tuple:
        return self._cols

    @property
    def probs(self) -> np.ndarray:
        return self._probs

    @property
    def shape(self):
        return self._probs.shape

    def __repr__(self):
        return f"ClassicalChannel({len(self._rows)}x{len(self._cols)})"


def post_process(nu: ClassicalChannel, A: Observable) -> Observable:
    """``nu . A = {sum_x nu[x, y] a_x : y}``."""
    if tuple(nu.rows) != A.labels:
        raise OutcomeMismatch(f"channel rows {list(nu.rows)} do not match outcomes {list(A.labels)}")
    stack = np.stack([a.matrix for a in A.effects])
    return Observable((y, np.tensordot(nu.probs[:, j], stack, axes=1)) for j, y in enumerate(nu.cols))


def compose_channels(nu: ClassicalChannel, mu: ClassicalChannel) -> ClassicalChannel:
    """Matrix product ``nu mu``: first ``nu``, then ``mu``."""
    if tuple(c.label for c in nu.cols) != tuple(mu.rows):
        raise ShapeMismatch("output outcomes of nu must equal input outcomes of mu")
    return ClassicalChannel(nu.rows, mu.cols, nu.probs @ mu.probs)


def observable_operator(A: Observable) -> np.ndarray:
    """``A^ = sum_x x a_x`` (pair observables use the product value ``xy``)."""
    xs = A.require_values()
    return sum(x * a.matrix for x, a in zip(xs, A.effects))


FunctionTable = Union[Mapping[str, float], Callable[[float], float]]


def f_hat(A: Observable, f: FunctionTable) -> np.ndarray:
    """``f^(A^) = sum_x f(x) a_x``.

    ``f`` is a table mapping outcome labels to reals. A callable is also
    accepted, in which case it is evaluated on the outcome values.
    """
    if callable(f) and not isinstance(f, Mapping):
        table = {o.label: float(f(x)) for o, x in zip(A.outcomes, A.require_values())}
    else:
        table = {str(k): float(v) for k, v in f.items()}
    missing = [lab for lab in A.labels if lab not in table]
    if missing:
        raise FunctionDomainError(f"function table is undefined on {missing}")
    return sum(table[o.label] * a.matrix for o, a in A)


def f_nu(nu: ClassicalChannel) -> dict:
    """``f_nu(x) = sum_y y nu[x, y]`` as a table over the channel's input labels."""
    ys = [c.value for c in nu.cols]
    if any(y is None for y in ys):
        raise MissingOutcomeValues("channel output outcomes carry no numerical values")
    vals = nu.probs @ np.array(ys, dtype=float)
    return dict(zip(nu.rows, vals.tolist()))


def condition_operator_on_effect(T, a: Effect) -> np.ndarray:
    """``(T|a) = a^{1/2} T a^{1/2}`` for Hermitian ``T``."""
    T = as_matrix(T)
    if T.shape[0] != a.dim:
        raise DimensionMismatch(f"operator dim {T.shape[0]} != effect dim {a.dim}")
    if not is_hermitian(T):
        raise NotHermitian("T must be self-adjoint")
    return _sandwich(a.sqrt, T)


def bicondition(B: Observable, A: Observable, C: Observable, grouping: str = "left") -> Observable:
    """Two-stage conditioning of ``B``.

    ``grouping="left"`` gives ``((B|A)|C)`` (measure ``C``, then ``A``, then
    ``B``); ``grouping="right"`` gives ``(B|(A|C))``. The two differ in
    general because the sequential product is not associative.
    """
    _same_dim(A, B, C)
    if grouping == "left":
        return condition_obs(condition_obs(B, A), C)
    if grouping == "right":
        return condition_obs(B, condition_obs(A, C))
    raise ValueError(f"grouping must be 'left' or 'right', not {grouping!r}")
