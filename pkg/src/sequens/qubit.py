"""Worked qubit case: two dichotomic atomic observables on C^2.

``A = {P_phi1, P_phi2}`` with values ``x1, x2`` and ``B = {P_psi1, P_psi2}``
with values ``y1, y2``, both bases real and parametrized by a rotation angle.
With ``p = |<phi1, psi1>|^2`` the conditioned operators are diagonal in the
``phi`` basis:

    (B|A)^   = [y2 + (y1 - y2) p] P_phi1 + [y1 + (y2 - y1) p] P_phi2
    (A o B)^ = x1 [y2 + (y1 - y2) p] P_phi1 + x2 [y1 + (y2 - y1) p] P_phi2
"""

import math

import numpy as np

from .effects import Effect
from .numerics import projector
from .observables import (
    Observable,
    Outcome,
    condition_obs,
    condition_operator_on_effect,
    observable_operator,
    seq_product_obs,
)

__all__ = ["rotated_basis", "qubit_observables", "qubit_example"]


def rotated_basis(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([c, s], dtype=complex), np.array([-s, c], dtype=complex)


def qubit_observables(x, y, phi_angle=0.0, psi_angle=math.pi / 4):
    """The pair ``(A, B)``; the defaults are the standard and Hadamard bases."""
    phi, psi = rotated_basis(phi_angle), rotated_basis(psi_angle)
    A = Observable(
        [(Outcome("x1", x[0]), Effect(projector(phi[0]))), (Outcome("x2", x[1]), Effect(projector(phi[1])))]
    )
    B = Observable(
        [(Outcome("y1", y[0]), Effect(projector(psi[0]))), (Outcome("y2", y[1]), Effect(projector(psi[1])))]
    )
    return A, B, phi, psi


def qubit_example(x=(1.0, -1.0), y=(1.0, -1.0), phi_angle=0.0, psi_angle=math.pi / 4):
    """All quantities of the qubit case, computed two ways.

    ``*_ops`` entries come from the library operations (conditioning, then
    the observable operator, and the sum of ``(B^|a_x)``); ``*_formula``
    entries come from substituting ``p`` into the closed forms above.
    """
    x1, x2 = map(float, x)
    y1, y2 = map(float, y)
    A, B, phi, psi = qubit_observables((x1, x2), (y1, y2), phi_angle, psi_angle)
    p = abs(np.vdot(phi[0], psi[0])) ** 2
    p1, p2 = projector(phi[0]), projector(phi[1])

    bhat = observable_operator(B)
    cond_sum = sum(condition_operator_on_effect(bhat, a) for a in A.effects)
    seq_sum = sum(xv * condition_operator_on_effect(bhat, a) for xv, a in zip((x1, x2), A.effects))

    c1 = y2 + (y1 - y2) * p
    c2 = y1 + (y2 - y1) * p
    return {
        "transition": p,
        "coefficients": {"phi1": c1, "phi2": c2, "x_phi1": x1 * c1, "x_phi2": x2 * c2},
        "A_hat": observable_operator(A),
        "B_hat": bhat,
        "seq_product": [e.matrix for e in seq_product_obs(A, B).effects],
        "conditioned": [e.matrix for e in condition_obs(B, A).effects],
        "cond_hat_ops": observable_operator(condition_obs(B, A)),
        "cond_hat_sum": cond_sum,
        "cond_hat_formula": c1 * p1 + c2 * p2,
        "seq_hat_ops": observable_operator(seq_product_obs(A, B)),
        "seq_hat_sum": seq_sum,
        "seq_hat_formula": x1 * c1 * p1 + x2 * c2 * p2,
    }
