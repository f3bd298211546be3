"""
Conditioning one operator on another
====================================

(T|S) keeps the blocks of T that live inside the eigenspaces of S and
throws the rest away.
"""

import numpy as np

from sequens import harness
from sequens.observables import condition_obs, observable_operator
from sequens.spectral import commutes, condition_operator, spectral_observable

T = np.diag([1.0, 2.0])
S = np.array([[0.0, 1.0], [1.0, 0.0]])

# the sigma_z part of T is invisible in the sigma_x eigenbasis
print("(T|S) =\n", condition_operator(T, S).matrix.real)

# the same answer through observables: spectral observables, conditioning, then A^
via_obs = observable_operator(condition_obs(spectral_observable(T), spectral_observable(S)))
print("via observables:\n", via_obs.real)

# commuting operators are left alone; generic ones are not
rng = np.random.default_rng(0)
T, S = harness.random_commuting_pair(4, rng)
print("commuting:", commutes(T, S), "moved by", np.linalg.norm(condition_operator(T, S).matrix - T))
T, S = harness.random_hermitian(4, rng), harness.random_hermitian(4, rng)
print("generic:  ", commutes(T, S), "moved by", np.linalg.norm(condition_operator(T, S).matrix - T))
