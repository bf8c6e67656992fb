"""Site- and time-dependent coin field and the one-step walk evolution.

The coin angle at site ``n`` and time ``t >= 1`` is fixed by the bias
parameter ``p`` through

    cos_theta(n, t) = sqrt(p/2) * sqrt(1 + n/t) - sqrt((1-p)/2) * sqrt(1 - n/t)
    sin_theta(n, t) = sqrt((1-p)/2) * sqrt(1 + n/t) + sqrt(p/2) * sqrt(1 - n/t)

with the degenerate origin cell ``(n, t) = (0, 0)`` taking the ``n/t -> 0``
limit.  One evolution step applies this coin in place and then shifts the
up component one site right and the down component one site left:

    psi_plus(n+1, t+1)  = cos_theta(n, t) * psi_plus(n, t) + sin_theta(n, t) * psi_minus(n, t)
    psi_minus(n-1, t+1) = sin_theta(n, t) * psi_plus(n, t) - cos_theta(n, t) * psi_minus(n, t)

Driving the walk with this field makes the position distribution at every
step exactly the binomial law of a classical random walk with step-up
probability ``p``, while the evolution itself stays unitary.

Angles are always computed on demand from the closed form (O(1) per site);
they are never tabulated per state.  ``angle_tables`` exists only so the
Monte Carlo kernels can reuse one precomputed table across many
trajectories of the same run.
"""

import math
from dataclasses import dataclass

import numpy as np

from .lattice import Pmf, WalkState, moment, pmf

__all__ = [
    "CoinSpec",
    "CoinAngles",
    "coin_angle",
    "angle_arrays",
    "angle_tables",
    "step",
    "evolve",
    "flux",
    "flux_profile",
    "ehrenfest_residual",
]


@dataclass(frozen=True)
class CoinSpec:
    """Bias parameter of the target random walk, 0 <= p <= 1."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"bias parameter must lie in [0, 1], got {self.p}")


@dataclass(frozen=True)
class CoinAngles:
    """Cosine/sine pair of one coin angle; satisfies cos^2 + sin^2 = 1."""

    cos_theta: float
    sin_theta: float


def _on_support(n: int, t: int) -> bool:
    return abs(n) <= t and (n - t) % 2 == 0


def coin_angle(n: int, t: int, spec: CoinSpec) -> CoinAngles:
    """Coin angle at one lattice cell.

    Defined only where the walker can carry amplitude: ``|n| <= t`` with
    ``n = t (mod 2)``, plus the origin cell (0, 0).  Off-support queries
    raise ValueError.
    """
    if t < 0 or not _on_support(n, t):
        raise ValueError(
            f"coin angle undefined off the walk support: site {n} at time {t}"
        )
    a = math.sqrt(spec.p / 2.0)
    b = math.sqrt((1.0 - spec.p) / 2.0)
    if t == 0:
        return CoinAngles(cos_theta=a - b, sin_theta=b + a)
    up = math.sqrt(1.0 + n / t)
    dn = math.sqrt(1.0 - n / t)
    return CoinAngles(cos_theta=a * up - b * dn, sin_theta=b * up + a * dn)


def angle_arrays(t: int, spec: CoinSpec, span: int | None = None):
    """Vectorized coin angles over the window ``-span .. span`` at time t.

    Entries with ``|n| > t`` have their radicands clipped at zero; they are
    only ever multiplied by amplitudes that are exactly zero there, so any
    finite filler value is fine.  Returns ``(cos, sin)`` float64 arrays.
    """
    if span is None:
        span = t
    a = math.sqrt(spec.p / 2.0)
    b = math.sqrt((1.0 - spec.p) / 2.0)
    size = 2 * span + 1
    if t == 0:
        cos = np.zeros(size)
        sin = np.zeros(size)
        cos[span] = a - b
        sin[span] = b + a
        return cos, sin
    x = np.arange(-span, span + 1, dtype=np.float64) / t
    up = np.sqrt(np.clip(1.0 + x, 0.0, None))
    dn = np.sqrt(np.clip(1.0 - x, 0.0, None))
    return a * up - b * dn, b * up + a * dn


def angle_tables(spec: CoinSpec, t_max: int):
    """Coin angles for every time 0 .. t_max-1 over the window of t_max.

    Row ``t`` holds the angles used by the step from time ``t`` to ``t+1``,
    laid out over sites ``-t_max .. t_max`` (index ``i`` is site
    ``i - t_max``).  Shape ``(t_max, 2*t_max + 1)``.
    """
    size = 2 * t_max + 1
    cos_tab = np.zeros((t_max, size))
    sin_tab = np.zeros((t_max, size))
    for t in range(t_max):
        cos_tab[t], sin_tab[t] = angle_arrays(t, spec, span=t_max)
    return cos_tab, sin_tab


def step(state: WalkState, spec: CoinSpec) -> WalkState:
    """Advance the walker one time step; the window grows by one site."""
    cos, sin = angle_arrays(state.t, spec, span=state.span)
    size = state.psi_plus.size
    new_plus = np.zeros(size + 2)
    new_minus = np.zeros(size + 2)
    new_plus[2:] = cos * state.psi_plus + sin * state.psi_minus
    new_minus[:size] = sin * state.psi_plus - cos * state.psi_minus
    return WalkState(t=state.t + 1, psi_plus=new_plus, psi_minus=new_minus)


def evolve(state: WalkState, spec: CoinSpec, steps: int) -> WalkState:
    """Iterate ``step`` the given number of times (0 is the identity)."""
    if steps < 0:
        raise ValueError(f"step count must be >= 0, got {steps}")
    for _ in range(steps):
        state = step(state, spec)
    return state


def flux(state: WalkState, spec: CoinSpec, n: int) -> float:
    """Net probability flux leaving site ``n`` during the next step.

    J(n, t) = cos(2 theta) * (psi_plus^2 - psi_minus^2)
            + 2 sin(2 theta) * psi_plus * psi_minus,

    with the double angles expanded as cos^2 - sin^2 and 2 sin cos to avoid
    any arccos branch ambiguity.  Returns 0 for off-support sites.
    """
    if not _on_support(n, state.t):
        return 0.0
    ang = coin_angle(n, state.t, spec)
    c, s = ang.cos_theta, ang.sin_theta
    up, dn = state.amplitudes_at(n)
    return (c * c - s * s) * (up * up - dn * dn) + 2.0 * (2.0 * s * c) * up * dn


def flux_profile(state: WalkState, spec: CoinSpec) -> np.ndarray:
    """Flux at every window site at once; zero wherever amplitude is zero."""
    cos, sin = angle_arrays(state.t, spec, span=state.span)
    up = state.psi_plus
    dn = state.psi_minus
    return (cos * cos - sin * sin) * (up * up - dn * dn) + 4.0 * sin * cos * up * dn


def ehrenfest_residual(state: WalkState, spec: CoinSpec) -> float:
    """Mean-position bookkeeping defect, zero when probability is conserved.

    Returns <X>(t+1) - <X>(t) - sum_n J(n, t); the drift of the mean over
    one step must be exactly the total flux.
    """
    after = step(state, spec)
    drift = moment(pmf(after), 1) - moment(pmf(state), 1)
    return drift - float(flux_profile(state, spec).sum())
