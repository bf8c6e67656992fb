"""Closed forms for the walk: binomial law, amplitude formulas, Gaussian
limit, and the chirality-space entanglement entropy.

Everything here is independent of the step-by-step evolution in
:mod:`binqwalk.coin`, which is what makes these functions usable as oracles
against it.  All factorial ratios go through log-gamma with a single
exponentiation at the end, so times up to 10^4 stay far from overflow.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlogy

from .lattice import WalkState

__all__ = [
    "ReducedDensity",
    "GaussParams",
    "binomial_pmf",
    "binomial_mass",
    "closed_form_amplitudes",
    "closed_form_state",
    "gaussian_approx",
    "reduced_density",
    "entanglement_entropy",
    "entropy_asymptote",
]

_LN2 = math.log(2.0)


def _check_bias(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"bias parameter must lie in [0, 1], got {p}")


def binomial_pmf(n: int, t: int, p: float) -> float:
    """Binomial site-occupation law of a random walk with up-step bias p.

    Mass at site ``n`` after ``t`` steps (``(t+n)/2`` up-steps out of t);
    zero for sites off the parity support.
    """
    if t < 0:
        raise ValueError(f"time index must be >= 0, got {t}")
    _check_bias(p)
    if abs(n) > t or (n - t) % 2 != 0:
        return 0.0
    k = (t + n) // 2
    log_mass = (
        gammaln(t + 1)
        - gammaln(k + 1)
        - gammaln(t - k + 1)
        + xlogy(k, p)
        + xlogy(t - k, 1.0 - p)
    )
    return float(np.exp(log_mass))


def binomial_mass(t: int, p: float) -> np.ndarray:
    """Binomial masses over the full window ``-t .. t`` (off-parity zeros)."""
    if t < 0:
        raise ValueError(f"time index must be >= 0, got {t}")
    _check_bias(p)
    mass = np.zeros(2 * t + 1)
    k = np.arange(t + 1, dtype=np.float64)
    log_mass = (
        gammaln(t + 1)
        - gammaln(k + 1)
        - gammaln(t - k + 1)
        + xlogy(k, p)
        + xlogy(t - k, 1.0 - p)
    )
    mass[0::2] = np.exp(log_mass)
    return mass


def _amplitude_coeff(log_fact_num: float, j: np.ndarray, k: np.ndarray, t: int,
                     n: np.ndarray, p: float) -> np.ndarray:
    """exp(0.5*log(coeff)) * p^((t+n)/4) * (1-p)^((t-n)/4) with j,k >= 0."""
    log_coeff = log_fact_num - gammaln(j + 1) - gammaln(k + 1)
    log_power = xlogy((t + n) / 4.0, p) + xlogy((t - n) / 4.0, 1.0 - p)
    return np.exp(0.5 * log_coeff + log_power)


def closed_form_amplitudes(n: int, t: int, p: float) -> tuple[float, float]:
    """Exact wave-function components (psi_plus, psi_minus) at one cell.

    For interior sites both components are square roots of scaled binomial
    weights; at the edges ``psi_plus(t, t) = p^(t/2)`` and
    ``psi_minus(-t, t) = (1-p)^(t/2)`` with the opposite components zero.
    Off-support queries raise ValueError.
    """
    if t < 1:
        raise ValueError(f"closed forms require t >= 1, got {t}")
    _check_bias(p)
    if abs(n) > t or (n - t) % 2 != 0:
        raise ValueError(f"site {n} is off the support at time {t}")
    log_fact = float(gammaln(t))
    n_arr = np.array([float(n)])
    if n == -t:
        plus = 0.0
    else:
        j = np.array([(t + n - 2) / 2.0])
        k = np.array([(t - n) / 2.0])
        plus = float(_amplitude_coeff(log_fact, j, k, t, n_arr, p)[0])
    if n == t:
        minus = 0.0
    else:
        j = np.array([(t + n) / 2.0])
        k = np.array([(t - n - 2) / 2.0])
        minus = float(_amplitude_coeff(log_fact, j, k, t, n_arr, p)[0])
    return plus, minus


def closed_form_state(t: int, p: float) -> WalkState:
    """Whole wave function at time t from the closed forms, window -t .. t."""
    if t < 1:
        raise ValueError(f"closed forms require t >= 1, got {t}")
    _check_bias(p)
    size = 2 * t + 1
    plus = np.zeros(size)
    minus = np.zeros(size)
    n = np.arange(-t, t + 1, 2, dtype=np.float64)
    log_fact = float(gammaln(t))
    plus_vals = _amplitude_coeff(log_fact, (t + n - 2) / 2.0, (t - n) / 2.0, t, n, p)
    minus_vals = _amplitude_coeff(log_fact, (t + n) / 2.0, (t - n - 2) / 2.0, t, n, p)
    plus_vals[0] = 0.0                      # site -t: only the down component
    plus_vals[-1] = p ** (t / 2.0)          # site +t
    minus_vals[0] = (1.0 - p) ** (t / 2.0)  # site -t
    minus_vals[-1] = 0.0                    # site +t: only the up component
    plus[0::2] = plus_vals
    minus[0::2] = minus_vals
    return WalkState(t=t, psi_plus=plus, psi_minus=minus)


@dataclass(frozen=True)
class GaussParams:
    """Per-step drift and variance of the diffusive limit."""

    mu: float
    sigma2: float

    @classmethod
    def from_bias(cls, p: float) -> "GaussParams":
        _check_bias(p)
        return cls(mu=2.0 * p - 1.0, sigma2=4.0 * p * (1.0 - p))


def gaussian_approx(n: float, t: int, p: float) -> float:
    """Large-t Gaussian envelope of the site-occupation law.

    (2 / sqrt(2 pi sigma^2 t)) * exp(-(n - mu t)^2 / (2 sigma^2 t)) with
    mu = 2p - 1 and sigma^2 = 4p(1-p); the prefactor 2 compensates for the
    walk occupying only every other site.  Degenerate at p in {0, 1}.
    """
    if t < 1:
        raise ValueError(f"Gaussian limit requires t >= 1, got {t}")
    _check_bias(p)
    if p in (0.0, 1.0):
        raise ValueError("Gaussian limit is degenerate at p = 0 or p = 1")
    params = GaussParams.from_bias(p)
    width = params.sigma2 * t
    return (2.0 / math.sqrt(2.0 * math.pi * width)) * math.exp(
        -((n - params.mu * t) ** 2) / (2.0 * width)
    )


@dataclass(frozen=True)
class ReducedDensity:
    """Chirality-space density matrix, [[p_plus, q], [q, p_minus]]."""

    p_plus: float
    p_minus: float
    q_offdiag: float

    def __post_init__(self):
        if self.p_plus < -1e-12 or self.p_minus < -1e-12:
            raise ValueError("diagonal weights must be nonnegative")
        if abs(self.p_plus + self.p_minus - 1.0) > 1e-12:
            raise ValueError("diagonal weights must sum to 1")
        bound = math.sqrt(max(self.p_plus * self.p_minus, 0.0))
        if abs(self.q_offdiag) > bound + 1e-12:
            raise ValueError("off-diagonal term violates positive semidefiniteness")


def reduced_density(state: WalkState) -> ReducedDensity:
    """Trace out the position: P+ = sum psi_plus^2, P- = sum psi_minus^2,
    Q = sum psi_plus * psi_minus."""
    plus = state.psi_plus
    minus = state.psi_minus
    return ReducedDensity(
        p_plus=float(plus @ plus),
        p_minus=float(minus @ minus),
        q_offdiag=float(plus @ minus),
    )


def entanglement_entropy(rd: ReducedDensity) -> float:
    """Von Neumann entropy (base 2) of the chirality-space density matrix.

    The eigenvalues are 1/2 +- sqrt(1/4 - p_plus*p_minus + q^2); tiny
    negative discriminants from floating-point noise are clamped to zero,
    anything below -1e-12 means the matrix was not a density matrix.
    """
    disc = 0.25 - rd.p_plus * rd.p_minus + rd.q_offdiag * rd.q_offdiag
    if disc < -1e-12:
        raise ValueError(f"invalid density matrix: negative discriminant {disc}")
    root = math.sqrt(max(disc, 0.0))
    lam_hi = min(0.5 + root, 1.0)
    lam_lo = max(0.5 - root, 0.0)
    return -float(xlogy(lam_hi, lam_hi) + xlogy(lam_lo, lam_lo)) / _LN2


def entropy_asymptote(t: int) -> float:
    """Leading large-t decay law of the chirality entropy: log2(4t)/(4t)."""
    if t < 1:
        raise ValueError(f"asymptote requires t >= 1, got {t}")
    return math.log2(4.0 * t) / (4.0 * t)
