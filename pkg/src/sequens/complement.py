"""n-observables, noise, and the observable complement.

For an n-observable ``A`` (n outcomes, no zero effect) the complement is
``A' = {(I - a_x)/(n-1)}``. Complementation is the post-processing by the
channel with zeros on the diagonal and ``1/(n-1)`` elsewhere, and repeated
complementation drives ``A`` toward the uniform observable ``I_A``.
"""

import numpy as np

from .effects import Effect
from .errors import DegenerateComplement, NotNObservable, WeightError
from .numerics import frobenius, get_policy
from .observables import ClassicalChannel, Observable, Outcome, _as_outcome, mixture

__all__ = [
    "NObservable",
    "as_n_observable",
    "trivial_uniform",
    "add_noise",
    "complement_obs",
    "iterate_complement",
    "closed_form_complement",
    "complement_channel",
    "is_bistochastic",
]


class NObservable(Observable):
    """An observable with ``n >= 2`` outcomes and no zero effect."""

    def __init__(self, entries):
        super().__init__(entries)
        if len(self) < 2:
            raise NotNObservable("an n-observable needs at least two outcomes")
        tol = get_policy().atol
        zero = [o.label for o, a in self if frobenius(a.matrix) <= tol]
        if zero:
            raise NotNObservable(f"outcomes {zero} have zero effects")


def as_n_observable(A: Observable) -> NObservable:
    if isinstance(A, NObservable):
        return A
    return NObservable(zip(A.outcomes, A.effects))


def trivial_uniform(A: Observable) -> NObservable:
    """``I_A``: every outcome of ``A`` gets the effect ``I/n``."""
    A = as_n_observable(A)
    u = Effect(np.eye(A.dim) / len(A), _trusted=True)
    return NObservable((o, u) for o in A.outcomes)


def add_noise(A: Observable, lam: float) -> NObservable:
    """``A`` with noise content ``lam``: ``lam I_A + (1 - lam) A``."""
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise WeightError(f"noise content {lam} is outside [0, 1]")
    A = as_n_observable(A)
    mixed = mixture([lam, 1.0 - lam], [trivial_uniform(A), A])
    return NObservable(zip(mixed.outcomes, mixed.effects))


def complement_obs(A: Observable) -> NObservable:
    """``A' = {(I - a_x)/(n - 1)}``."""
    A = as_n_observable(A)
    n, eye = len(A), np.eye(A.dim)
    effects = [(eye - a.matrix) / (n - 1) for a in A.effects]
    tol = get_policy().atol
    for o, e in zip(A.outcomes, effects):
        if frobenius(e) <= tol:
            raise DegenerateComplement(f"complement effect at {o.label!r} vanishes")
    return NObservable(zip(A.outcomes, effects))


def iterate_complement(A: Observable, m: int) -> NObservable:
    """Apply :func:`complement_obs` ``m`` times."""
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    out = as_n_observable(A)
    for _ in range(int(m)):
        out = complement_obs(out)
    return out


def closed_form_complement(A: Observable, m: int) -> NObservable:
    """The ``m``-th complement without iterating.

    Even ``m``: ``[1 - c] I_A + c A`` with ``c = (n-1)^-m``. Odd ``m``:
    ``[1 - c] I_A + c A'`` with ``c = (n-1)^-(m-1)``.
    """
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    A = as_n_observable(A)
    m, n = int(m), len(A)
    if m % 2 == 0:
        c, base = float(n - 1) ** -m, A
    else:
        c, base = float(n - 1) ** -(m - 1), complement_obs(A)
    mixed = mixture([1.0 - c, c], [trivial_uniform(A), base])
    return NObservable(zip(mixed.outcomes, mixed.effects))


def complement_channel(n: int, outcomes=None) -> ClassicalChannel:
    """The n x n channel with zero diagonal and ``1/(n-1)`` elsewhere."""
    if n < 2:
        raise ValueError("the complement channel needs n >= 2")
    outs = [Outcome(f"x{i}") for i in range(n)] if outcomes is None else [_as_outcome(o) for o in outcomes]
    if len(outs) != n:
        raise ValueError(f"expected {n} outcomes, got {len(outs)}")
    probs = (np.ones((n, n)) - np.eye(n)) / (n - 1)
    return ClassicalChannel([o.label for o in outs], outs, probs)


def is_bistochastic(nu: ClassicalChannel) -> bool:
    """True iff every column of ``nu`` also sums to 1."""
    cols = nu.probs.sum(axis=0)
    return bool(np.all(np.abs(cols - 1) <= get_policy().atol))
