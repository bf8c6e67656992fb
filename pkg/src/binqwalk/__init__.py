"""Discrete-time quantum walk on the line whose inhomogeneous,
time-dependent coin makes the position distribution exactly binomial at
every step.

The package covers the walk itself (:mod:`binqwalk.lattice`,
:mod:`binqwalk.coin`), closed-form references and entanglement analysis
(:mod:`binqwalk.analytics`), projective measurement with unitary reversal
(:mod:`binqwalk.measurement`), a seeded Monte Carlo decoherence engine
(:mod:`binqwalk.decoherence`), and a CSV/JSON command-line front end
(:mod:`binqwalk.cli`).
"""

from ._kernels import BACKEND as kernel_backend
from .analytics import (
    GaussParams,
    ReducedDensity,
    binomial_mass,
    binomial_pmf,
    closed_form_amplitudes,
    closed_form_state,
    entanglement_entropy,
    entropy_asymptote,
    gaussian_approx,
    reduced_density,
)
from .coin import (
    CoinAngles,
    CoinSpec,
    coin_angle,
    ehrenfest_residual,
    evolve,
    flux,
    flux_profile,
    step,
)
from .decoherence import (
    DecoherenceConfig,
    EnsembleResult,
    detect_bimodality,
    run_ensemble,
    run_trajectory,
    trial_substream,
)
from .lattice import (
    INV_SQRT2,
    Pmf,
    WalkState,
    initial_state,
    inner_product,
    moment,
    pmf,
)
from .measurement import (
    ChiralityOutcome,
    RecoveryOp,
    chirality_branch,
    measure_chirality,
    measure_position,
    recover,
    wrong_recover_demo,
)

__version__ = "0.1.0"
