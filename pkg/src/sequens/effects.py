"""Quantum effects, states, and the sequential product.

An effect is a Hermitian operator ``a`` with ``0 <= a <= I``. The sequential
product ``a o b = a^{1/2} b a^{1/2}`` is the effect "b given a", written
``(b|a)``; it is linear in ``b`` but not in ``a`` and is commutative only
for commuting pairs.
"""

import threading

import numpy as np

from .errors import (
    ConditionOnNull,
    DimensionMismatch,
    NotEffect,
    NotNormalized,
    NotPartialState,
    NotPSD,
    NotState,
)
from .numerics import as_matrix, get_policy, projector, psd_sqrt, symmetrize

__all__ = [
    "Effect",
    "PartialState",
    "State",
    "PureState",
    "seq_product",
    "complement_effect",
    "occurrence_probability",
    "condition_partial_state",
    "conditional_probability",
    "is_sharp",
    "transition_probability",
]


def _frozen(m):
    m = np.array(m, dtype=np.complex128)
    m.setflags(write=False)
    return m


def _check_spectrum(m, lo, hi, exc, what):
    w = np.linalg.eigvalsh(m)
    clamp = get_policy().eig_clamp
    if w[0] < lo - clamp or w[-1] > hi + clamp:
        raise exc(f"{what} spectrum [{w[0]:.3g}, {w[-1]:.3g}] leaves [{lo}, {hi}]")


class Effect:
    """An operator ``a`` with ``0 <= a <= I``.

    The matrix is symmetrized on construction and stored read-only. Spectra
    up to ``eig_clamp`` outside ``[0, 1]`` are accepted as boundary values;
    derived quantities (the square root, probabilities) use the clamped
    spectrum while the stored matrix is left untouched.

    ``sqrt`` is computed on first use and memoized; concurrent first access
    may compute it twice but always stores the same value.
    """

    __slots__ = ("_matrix", "_sqrt", "__weakref__")

    def __init__(self, matrix, *, _trusted=False):
        m = as_matrix(matrix) if _trusted else symmetrize(matrix)
        if not _trusted:
            _check_spectrum(m, 0.0, 1.0, NotEffect, "effect")
        self._matrix = _frozen(m)
        self._sqrt = None

    @classmethod
    def identity(cls, dim):
        return cls(np.eye(dim), _trusted=True)

    @classmethod
    def zero(cls, dim):
        return cls(np.zeros((dim, dim)), _trusted=True)

    @classmethod
    def atom(cls, vec):
        """The rank-one projection onto ``vec`` (normalized internally)."""
        return cls(projector(vec))

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @property
    def sqrt(self) -> np.ndarray:
        s = self._sqrt
        if s is None:
            s = _frozen(psd_sqrt(self._matrix))
            self._sqrt = s
        return s

    def trace(self) -> float:
        return float(np.trace(self._matrix).real)

    def __array__(self, dtype=None, copy=None):
        return self._matrix if dtype is None else self._matrix.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, Effect):
            return NotImplemented
        return np.array_equal(self._matrix, other._matrix)

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, trace={self.trace():.6g})"


class PartialState:
    """A positive operator ``rho`` with ``tr(rho) <= 1``."""

    __slots__ = ("_matrix",)

    def __init__(self, matrix):
        m = symmetrize(matrix)
        w = np.linalg.eigvalsh(m)
        if w[0] < -get_policy().eig_clamp:
            raise NotPSD(f"density operator has eigenvalue {w[0]:.3g}")
        self._validate_trace(float(np.trace(m).real))
        self._matrix = _frozen(m)

    def _validate_trace(self, tr):
        if tr > 1 + get_policy().atol:
            raise NotPartialState(f"trace {tr!r} exceeds 1")

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self._matrix).real)

    def __array__(self, dtype=None, copy=None):
        return self._matrix if dtype is None else self._matrix.astype(dtype)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, trace={self.trace():.6g})"


class State(PartialState):
    """A density operator: positive with unit trace."""

    __slots__ = ()

    def _validate_trace(self, tr):
        if abs(tr - 1) > get_policy().atol:
            raise NotState(f"trace {tr!r} differs from 1")

    @classmethod
    def maximally_mixed(cls, dim):
        return cls(np.eye(dim) / dim)


class PureState:
    """A unit vector ``phi``; ``density()`` gives the atomic state P_phi."""

    __slots__ = ("_vector",)

    def __init__(self, vector, normalize=False):
        v = np.array(vector, dtype=np.complex128).reshape(-1)
        norm = float(np.linalg.norm(v))
        if normalize:
            if norm == 0.0:
                raise NotNormalized("cannot normalize the zero vector")
            v = v / norm
        elif abs(norm - 1) > get_policy().atol:
            raise NotNormalized(f"vector norm {norm!r} differs from 1")
        v.setflags(write=False)
        self._vector = v

    @property
    def vector(self) -> np.ndarray:
        return self._vector

    @property
    def dim(self) -> int:
        return self._vector.shape[0]

    def density(self) -> State:
        return State(np.outer(self._vector, self._vector.conj()))

    def __repr__(self):
        return f"PureState(dim={self.dim})"


def _same_dim(*objs):
    dims = {o.dim for o in objs}
    if len(dims) != 1:
        raise DimensionMismatch(f"operands live in different dimensions {sorted(dims)}")


def _sandwich(s, m):
    out = s @ m @ s
    return (out + out.conj().T) / 2


def seq_product(a: Effect, b: Effect) -> Effect:
    """The sequential product ``a o b = a^{1/2} b a^{1/2}``, i.e. ``(b|a)``."""
    _same_dim(a, b)
    return Effect(_sandwich(a.sqrt, b.matrix))


def complement_effect(a: Effect) -> Effect:
    """``a' = I - a``."""
    return Effect(np.eye(a.dim) - a.matrix, _trusted=True)


def _rho_matrix(rho):
    if isinstance(rho, PureState):
        return np.outer(rho.vector, rho.vector.conj())
    return rho.matrix


def occurrence_probability(rho, a: Effect) -> float:
    """``tr(rho a)``, the probability that ``a`` occurs in ``rho``.

    ``rho`` may be a (partial) state or a :class:`PureState`; for the latter
    this is ``<phi, a phi>``.
    """
    _same_dim(rho, a)
    if isinstance(rho, PureState):
        p = np.vdot(rho.vector, a.matrix @ rho.vector).real
    else:
        p = np.trace(rho.matrix @ a.matrix).real
    return float(np.clip(p, 0.0, 1.0))


def condition_partial_state(rho, a: Effect) -> PartialState:
    """``(rho|a) = a^{1/2} rho a^{1/2}``; defined even when ``tr(rho a) = 0``."""
    _same_dim(rho, a)
    return PartialState(_sandwich(a.sqrt, _rho_matrix(rho)))


def conditional_probability(rho, b: Effect, a: Effect) -> float:
    """Probability of ``b`` given ``a`` in the state ``rho``.

    Computes ``tr[rho (b|a)] / tr(rho a)``.

    Raises:
        ConditionOnNull: if ``tr(rho a)`` is not above ``atol``.
    """
    _same_dim(rho, a, b)
    denom = float(np.trace(_rho_matrix(rho) @ a.matrix).real)
    if denom <= get_policy().atol:
        raise ConditionOnNull(f"E_rho(a) = {denom:.3g} is zero within tolerance")
    num = float(np.trace(_rho_matrix(rho) @ seq_product(a, b).matrix).real)
    return float(np.clip(num / denom, 0.0, 1.0))


def is_sharp(a: Effect) -> bool:
    """True iff ``a`` is a projection, i.e. ``(a|a) = a``."""
    m = a.matrix
    return float(np.linalg.norm(m @ m - m)) <= get_policy().atol


def transition_probability(phi: PureState, psi: PureState) -> float:
    """``|<phi, psi>|^2``."""
    _same_dim(phi, psi)
    return float(min(abs(np.vdot(phi.vector, psi.vector)) ** 2, 1.0))
