"""
Complements and noise
=====================

Complementing an observable over and over washes it out toward the
uniform observable, except in the two-outcome case.
"""

import numpy as np

from sequens import harness
from sequens.complement import (
    closed_form_complement,
    complement_channel,
    iterate_complement,
    trivial_uniform,
)

rng = np.random.default_rng(3)
A = harness.random_observable(3, 3, rng)
uniform = trivial_uniform(A)


def distance(X, Y):
    return max(np.linalg.norm(x.matrix - y.matrix) for x, y in zip(X.effects, Y.effects))


# each round shrinks the distance to I_A by a factor n - 1 = 2
for m in range(1, 7):
    Am = iterate_complement(A, m)
    print(f"m={m}  distance to I_A {distance(Am, uniform):.5f}  closed form gap {distance(Am, closed_form_complement(A, m)):.1e}")

# two outcomes: the complement just swaps, so it never converges
A2 = harness.random_observable(3, 2, rng)
print("dichotomic A'' == A:", distance(iterate_complement(A2, 2), A2) < 1e-14)

# the complement is a classical relabelling by a bistochastic channel
print("complement channel, n=3:\n", complement_channel(3).probs)
