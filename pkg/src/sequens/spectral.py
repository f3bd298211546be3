"""Conditioning one self-adjoint operator on another.

``(T|S) = sum_y Q_y T Q_y`` where ``Q_y`` are the spectral projections of
``S``. This is the observable operator of ``(P|Q)`` for the spectral
observables ``P`` of ``T`` and ``Q`` of ``S``, and depends on ``S`` only
through its eigenspaces.

Eigenvalues of ``S`` closer than ``cluster_tol`` are merged into one
eigenspace, so ``(T|S)`` is stable under perturbations of ``S`` below that
radius and jumps when a cluster splits.
"""

import numpy as np

from .effects import Effect, _same_dim
from .errors import DimensionMismatch
from .numerics import as_matrix, frobenius, get_policy, spectral_projections, symmetrize
from .observables import Observable, Outcome

__all__ = [
    "SelfAdjointOperator",
    "SpectralObservable",
    "spectral_observable",
    "condition_operator",
    "commutes",
]


class SelfAdjointOperator:
    """A Hermitian matrix, symmetrized and stored read-only."""

    __slots__ = ("_matrix",)

    def __init__(self, matrix):
        if isinstance(matrix, SelfAdjointOperator):
            matrix = matrix.matrix
        m = symmetrize(matrix)
        m.setflags(write=False)
        self._matrix = m

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self._matrix if dtype is None else self._matrix.astype(dtype)

    def __repr__(self):
        return f"SelfAdjointOperator(dim={self.dim})"


def _operator(T) -> SelfAdjointOperator:
    return T if isinstance(T, SelfAdjointOperator) else SelfAdjointOperator(T)


class SpectralObservable(Observable):
    """The sharp observable ``{P_x}`` of distinct eigenvalues ``x`` of an operator."""


def spectral_observable(T) -> SpectralObservable:
    """Spectral observable of ``T``; its observable operator reproduces ``T``.

    Outcome labels are the eigenvalues written with 17 significant digits.
    """
    T = _operator(T)
    pairs = spectral_projections(T.matrix)
    return SpectralObservable((Outcome(format(x, ".17g"), x), Effect(p)) for x, p in pairs)


def condition_operator(T, S) -> SelfAdjointOperator:
    """``(T|S) = sum_y Q_y T Q_y`` over the eigenprojections ``Q_y`` of ``S``."""
    T, S = _operator(T), _operator(S)
    _same_dim(T, S)
    out = sum(q @ T.matrix @ q for _, q in spectral_projections(S.matrix))
    return SelfAdjointOperator((out + out.conj().T) / 2)


def commutes(T, S) -> bool:
    """``||TS - ST||_F <= atol (1 + ||T||_F ||S||_F)``."""
    t, s = as_matrix(np.asarray(T)), as_matrix(np.asarray(S))
    if t.shape != s.shape:
        raise DimensionMismatch(f"shapes {t.shape} and {s.shape} differ")
    gap = frobenius(t @ s - s @ t)
    return gap <= get_policy().atol * (1 + frobenius(t) * frobenius(s))
