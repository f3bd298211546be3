"""
Effects and the sequential product
==================================

Measure one yes/no test and then another, and watch the order matter.
"""

import numpy as np

from sequens import Effect, State, conditional_probability, seq_product

# two sharp qubit tests: "spin up along z" and "spin up along x"
up_z = Effect(np.diag([1.0, 0.0]))
up_x = Effect(np.full((2, 2), 0.5))

# a o b = a^{1/2} b a^{1/2}: measure a first, then b
print("up_z then up_x:\n", seq_product(up_z, up_x).matrix.real)
print("up_x then up_z:\n", seq_product(up_x, up_z).matrix.real)

# the traces agree even though the operators differ
print("traces:", seq_product(up_z, up_x).trace(), seq_product(up_x, up_z).trace())

# an unsharp test commutes with everything proportional to I
half = Effect(np.eye(2) / 2)
print("half o up_x == up_x / 2:", np.allclose(seq_product(half, up_x).matrix, up_x.matrix / 2))

# in the maximally mixed state, P(up_x | up_z) is the transition probability
rho = State.maximally_mixed(2)
print("P(up_x | up_z) =", conditional_probability(rho, up_x, up_z))
