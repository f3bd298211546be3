"""Sequential products, conditioned observables, and operator conditioning.

Finite-dimensional toolkit for quantum effects and observables (POVMs):
sequential products ``a o b = a^{1/2} b a^{1/2}``, observables conditioned on
other observables, classical post-processing, observable operators,
observable complements, and conditioning of self-adjoint operators on the
spectral projections of another operator.
"""

from .complement import (
    NObservable,
    add_noise,
    as_n_observable,
    closed_form_complement,
    complement_channel,
    complement_obs,
    is_bistochastic,
    iterate_complement,
    trivial_uniform,
)
from .effects import (
    Effect,
    PartialState,
    PureState,
    State,
    complement_effect,
    condition_partial_state,
    conditional_probability,
    is_sharp,
    occurrence_probability,
    seq_product,
    transition_probability,
)
from .errors import *  # noqa: F401,F403
from .numerics import (
    HermitianEig,
    TolerancePolicy,
    approx_equal,
    get_policy,
    hermitian_eig,
    projector,
    psd_sqrt,
    set_policy,
    spectral_projections,
    tolerance,
)
from .observables import (
    ClassicalChannel,
    Observable,
    Outcome,
    PairObservable,
    bicondition,
    compose_channels,
    condition_obs,
    condition_operator_on_effect,
    condition_state_obs,
    expectation,
    f_hat,
    f_nu,
    marginal_left,
    marginal_right,
    mixture,
    observable_operator,
    post_process,
    seq_product_obs,
    validate_observable,
)
from .spectral import (
    SelfAdjointOperator,
    SpectralObservable,
    commutes,
    condition_operator,
    spectral_observable,
)

__version__ = "0.1.0"
