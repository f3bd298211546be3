"""Dense Hermitian linear algebra and the tolerance policy.

Matrices are plain ``numpy`` arrays of shape ``(d, d)`` and dtype
``complex128``. Every comparison in the package goes through the active
:class:`TolerancePolicy`, which is held in a context variable so it can be
overridden locally (and per thread) with :func:`tolerance`.
"""

import contextlib
import contextvars
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import DidNotConverge, DimensionMismatch, NotHermitian, NotPSD

__all__ = [
    "TolerancePolicy",
    "HermitianEig",
    "get_policy",
    "set_policy",
    "tolerance",
    "as_matrix",
    "is_hermitian",
    "symmetrize",
    "hermitian_eig",
    "psd_sqrt",
    "spectral_projections",
    "approx_equal",
    "frobenius",
    "relative_deviation",
    "projector",
]


@dataclass(frozen=True)
class TolerancePolicy:
    """Numerical tolerances shared by all modules.

    Attributes:
        atol: absolute tolerance for entrywise/Frobenius comparisons.
        eig_clamp: eigenvalues this far outside an admissible interval are
            treated as boundary values instead of rejected.
        cluster_tol: eigenvalues closer than this are one distinct eigenvalue.
    """

    atol: float = 1e-9
    eig_clamp: float = 1e-10
    cluster_tol: float = 1e-8

    def __post_init__(self):
        if not (self.atol > 0 and self.eig_clamp > 0 and self.cluster_tol > 0):
            raise ValueError("all tolerances must be strictly positive")
        if self.eig_clamp > self.atol:
            raise ValueError("eig_clamp must not exceed atol")


_POLICY = contextvars.ContextVar("sequens_policy", default=TolerancePolicy())


def get_policy() -> TolerancePolicy:
    return _POLICY.get()


def set_policy(policy: TolerancePolicy) -> None:
    """Replace the policy for the current context (thread / task)."""
    _POLICY.set(policy)


@contextlib.contextmanager
def tolerance(**overrides):
    """Temporarily override fields of the active policy.

    >>> with tolerance(atol=1e-6):
    ...     get_policy().atol
    1e-06
    """
    token = _POLICY.set(replace(_POLICY.get(), **overrides))
    try:
        yield _POLICY.get()
    finally:
        _POLICY.reset(token)


class HermitianEig(NamedTuple):
    """Eigenvalues in ascending order and the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m) -> np.ndarray:
    """Coerce to a square complex128 array; raise DimensionMismatch otherwise."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatch(f"expected a square d x d matrix, got shape {arr.shape}")
    return arr


def frobenius(m) -> float:
    return float(np.linalg.norm(m))


def is_hermitian(m, atol=None) -> bool:
    m = as_matrix(m)
    atol = get_policy().atol if atol is None else atol
    return frobenius(m - m.conj().T) <= atol * m.shape[0]


def symmetrize(m) -> np.ndarray:
    """Return (M + M^dagger)/2 after checking M is Hermitian within atol*d.

    The result is exactly Hermitian in floating point, and leaves an exactly
    Hermitian input bit-identical.
    """
    m = as_matrix(m)
    gap = frobenius(m - m.conj().T)
    limit = get_policy().atol * m.shape[0]
    if gap > limit:
        raise NotHermitian(f"||M - M^dagger||_F = {gap:.3g} exceeds {limit:.3g}")
    return (m + m.conj().T) / 2


def hermitian_eig(m) -> HermitianEig:
    """Eigendecomposition of a (nearly) Hermitian matrix.

    The input is symmetrized first. Eigenvalues come back ascending and the
    eigenvector matrix is unitary.
    """
    h = symmetrize(m)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise DidNotConverge(str(exc)) from exc
    return HermitianEig(w, v)


def _reconstruct(w, v):
    out = (v * w) @ v.conj().T
    return (out + out.conj().T) / 2


def noise_floor(w) -> float:
    """Eigenvalue magnitude indistinguishable from zero for a spectrum ``w``."""
    return 64 * np.finfo(float).eps * len(w) * max(1.0, float(np.max(np.abs(w))))


def psd_sqrt(m) -> np.ndarray:
    """Unique positive square root of a positive semidefinite matrix.

    Eigenvalues in ``[-eig_clamp, 0)`` are clamped to 0. Eigenvalues below
    :func:`noise_floor` are zeroed as well: the square root would otherwise
    turn rounding noise of order 1e-17 into entries of order 1e-9.
    """
    w, v = hermitian_eig(m)
    clamp = get_policy().eig_clamp
    if w[0] < -clamp:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3g} is below -{clamp:g}")
    w = np.where(w <= noise_floor(w), 0.0, w)
    return _reconstruct(np.sqrt(w), v)


def spectral_projections(m, cluster_tol=None):
    """Distinct eigenvalues of ``m`` with their orthogonal eigenprojections.

    Eigenvalues are sorted ascending and split wherever consecutive values
    differ by more than ``cluster_tol``; each cluster is represented by the
    mean of its members. Returns a list of ``(value, projection)`` pairs.
    """
    cluster_tol = get_policy().cluster_tol if cluster_tol is None else cluster_tol
    w, v = hermitian_eig(m)
    breaks = np.flatnonzero(np.diff(w) > cluster_tol) + 1
    out = []
    for idx in np.split(np.arange(len(w)), breaks):
        cols = v[:, idx]
        p = cols @ cols.conj().T
        out.append((float(np.mean(w[idx])), (p + p.conj().T) / 2))
    return out


def approx_equal(m, n) -> bool:
    """||M - N||_F <= atol * (1 + max(||M||_F, ||N||_F))."""
    m = np.asarray(m, dtype=np.complex128)
    n = np.asarray(n, dtype=np.complex128)
    if m.shape != n.shape:
        raise DimensionMismatch(f"shapes {m.shape} and {n.shape} differ")
    scale = 1.0 + max(frobenius(m), frobenius(n))
    return frobenius(m - n) <= get_policy().atol * scale


def relative_deviation(m, n) -> float:
    """Frobenius distance normalized by (1 + the larger norm)."""
    m = np.asarray(m, dtype=np.complex128)
    n = np.asarray(n, dtype=np.complex128)
    return frobenius(m - n) / (1.0 + max(frobenius(m), frobenius(n)))


def projector(vec) -> np.ndarray:
    """Rank-one projection onto span(vec); ``vec`` need not be normalized."""
    v = np.asarray(vec, dtype=np.complex128).reshape(-1)
    norm2 = float(np.vdot(v, v).real)
    if norm2 == 0.0:
        raise ValueError("cannot project onto the zero vector")
    return np.outer(v, v.conj()) / norm2
