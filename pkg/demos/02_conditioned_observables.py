"""
Conditioned observables on a qubit
==================================

Two dichotomic observables in the standard and Hadamard bases, measured
in sequence.
"""

import numpy as np

from sequens import condition_obs, observable_operator, seq_product_obs
from sequens.qubit import qubit_example, qubit_observables

A, B, phi, psi = qubit_observables(x=(1.0, -1.0), y=(1.0, -1.0))

# the joint observable A o B lives on pairs of outcomes
AB = seq_product_obs(A, B)
for label, effect in zip(AB.labels, AB.effects):
    print(label, np.round(effect.matrix.real, 3).tolist())

# (B|A): measure A, forget its result, then read B
BA = condition_obs(B, A)
print("(B|A) effects:", [np.round(e.matrix.real, 3).tolist() for e in BA.effects])

# with unbiased bases, conditioning wipes out B's expectation entirely
print("(B|A)^ =\n", observable_operator(BA).real)

# rotate the second basis a little: the coefficients move off zero
ex = qubit_example(psi_angle=0.3)
print("p =", round(ex["transition"], 4), "coefficients:", {k: round(v, 4) for k, v in ex["coefficients"].items()})
