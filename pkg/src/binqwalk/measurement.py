"""Projective measurements and the unitary measurement-reversal protocol.

A chirality measurement collapses the walker onto one internal component.
Because each component of the classical-like walk stores the full position
distribution of the previous step, the pre-measurement state can be rebuilt
from either branch by a unitary sequence: a homogeneous 2x2 coin, the
chirality-conditional shift, and a uniform one-site shift (left after a
"+" outcome, right after a "-").  The reversal is exact only for states of
the classical-like walk; on arbitrary states the sequence is still unitary
but not a reversal.

Position measurement localizes the walker and resets its chirality to the
balanced initial combination; the decoherence engine builds on it.
"""

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .coin import CoinSpec, evolve
from .lattice import INV_SQRT2, WalkState, initial_state, inner_product, pmf

__all__ = [
    "ChiralityOutcome",
    "RecoveryOp",
    "chirality_branch",
    "measure_chirality",
    "branch_coin",
    "conditional_shift",
    "uniform_shift",
    "recover",
    "wrong_recover_demo",
    "measure_position",
]

Sign = Literal["+", "-"]


@dataclass(frozen=True)
class ChiralityOutcome:
    """Result of a chirality measurement: branch sign and Born probability."""

    sign: Sign
    probability: float

    def __post_init__(self):
        if self.sign not in ("+", "-"):
            raise ValueError(f"sign must be '+' or '-', got {self.sign!r}")
        if not 0.0 <= self.probability <= 1.0 + 1e-12:
            raise ValueError(f"branch probability out of range: {self.probability}")


@dataclass(frozen=True)
class RecoveryOp:
    """Homogeneous reversal coin for one measurement branch."""

    kind: Literal["plus_branch", "minus_branch"]
    p: float

    def __post_init__(self):
        if self.kind not in ("plus_branch", "minus_branch"):
            raise ValueError(f"unknown recovery kind {self.kind!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"bias parameter must lie in [0, 1], got {self.p}")

    def matrix(self) -> np.ndarray:
        """2x2 coin matrix in the (+, -) basis; orthogonal and involutive."""
        a = math.sqrt(self.p)
        b = math.sqrt(1.0 - self.p)
        if self.kind == "plus_branch":
            return np.array([[a, b], [b, -a]])
        return np.array([[-b, a], [a, b]])


def chirality_branch(state: WalkState, sign: Sign) -> tuple[float, WalkState]:
    """Deterministically extract one chirality branch.

    Returns the Born probability of the branch and the renormalized
    post-measurement state.  A zero-probability branch cannot be prepared
    and raises ValueError.
    """
    if sign == "+":
        kept = state.psi_plus
    elif sign == "-":
        kept = state.psi_minus
    else:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    prob = float(kept @ kept)
    if prob <= 0.0:
        raise ValueError(f"branch '{sign}' has zero probability")
    scaled = kept / math.sqrt(prob)
    zero = np.zeros_like(scaled)
    if sign == "+":
        collapsed = WalkState(t=state.t, psi_plus=scaled, psi_minus=zero)
    else:
        collapsed = WalkState(t=state.t, psi_plus=zero, psi_minus=scaled)
    return prob, collapsed


def measure_chirality(
    state: WalkState, rng: np.random.Generator
) -> tuple[ChiralityOutcome, WalkState]:
    """Sample a chirality measurement and collapse accordingly."""
    p_plus = float(state.psi_plus @ state.psi_plus)
    sign: Sign = "+" if rng.random() < p_plus else "-"
    prob, collapsed = chirality_branch(state, sign)
    return ChiralityOutcome(sign=sign, probability=prob), collapsed


def branch_coin(state: WalkState, op: RecoveryOp) -> WalkState:
    """Apply the homogeneous reversal coin sitewise (identity on position)."""
    m = op.matrix()
    new_plus = m[0, 0] * state.psi_plus + m[0, 1] * state.psi_minus
    new_minus = m[1, 0] * state.psi_plus + m[1, 1] * state.psi_minus
    return WalkState(t=state.t, psi_plus=new_plus, psi_minus=new_minus)


def conditional_shift(state: WalkState) -> WalkState:
    """Chirality-conditional shift: + moves one site right, - one left."""
    size = state.psi_plus.size
    new_plus = np.zeros(size + 2)
    new_minus = np.zeros(size + 2)
    new_plus[2:] = state.psi_plus
    new_minus[:size] = state.psi_minus
    return _trimmed(state.t, new_plus, new_minus)


def uniform_shift(state: WalkState, delta: int) -> WalkState:
    """Shift both components by delta sites (-1 left, +1 right)."""
    if delta not in (-1, 1):
        raise ValueError(f"shift must be -1 or +1, got {delta}")
    size = state.psi_plus.size
    new_plus = np.zeros(size + 2)
    new_minus = np.zeros(size + 2)
    new_plus[1 + delta : size + 1 + delta] = state.psi_plus
    new_minus[1 + delta : size + 1 + delta] = state.psi_minus
    return _trimmed(state.t, new_plus, new_minus)


def _trimmed(t: int, plus: np.ndarray, minus: np.ndarray) -> WalkState:
    """Strip exactly-zero window margins, but never below span == t."""
    span = (plus.size - 1) // 2
    lo = 0
    hi = plus.size - 1
    while span > t:
        if plus[lo] == 0.0 and minus[lo] == 0.0 and plus[hi] == 0.0 and minus[hi] == 0.0:
            lo += 1
            hi -= 1
            span -= 1
        else:
            break
    return WalkState(t=t, psi_plus=plus[lo : hi + 1], psi_minus=minus[lo : hi + 1])


def recover(collapsed: WalkState, outcome: ChiralityOutcome, p: float) -> WalkState:
    """Rebuild the pre-measurement state from a known chirality collapse.

    Applies the branch coin, then the conditional shift, then a uniform
    shift left (for "+") or right (for "-").  Exact for collapses of the
    classical-like walk with bias ``p``; total and unitary on any input.
    """
    if outcome.sign == "+":
        op = RecoveryOp(kind="plus_branch", p=p)
        delta = -1
    else:
        op = RecoveryOp(kind="minus_branch", p=p)
        delta = 1
    return uniform_shift(conditional_shift(branch_coin(collapsed, op)), delta)


def wrong_recover_demo(p: float) -> tuple[WalkState, WalkState, float]:
    """One-step walk, "-" collapse, then the "+" reversal protocol.

    Returns the true one-step state, the mis-recovered state, and their
    inner product (zero: the two collapse branches are orthogonal and the
    protocol is unitary).
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"demo requires 0 < p < 1, got {p}")
    psi_one = evolve(initial_state(), CoinSpec(p), 1)
    _, collapsed = chirality_branch(psi_one, "-")
    phi_one = recover(collapsed, ChiralityOutcome(sign="+", probability=p), p)
    return psi_one, phi_one, inner_product(psi_one, phi_one)


def measure_position(
    state: WalkState, rng: np.random.Generator
) -> tuple[int, WalkState]:
    """Sample the walker's position and collapse onto that site.

    The chirality is reset to the balanced combination (amplitude
    1/sqrt(2) in each component), matching the walker's starting coin
    state.  Returns (site, localized state at the same time index).
    """
    dist = pmf(state)
    cum = np.cumsum(dist.mass)
    u = rng.random()
    idx = int(np.searchsorted(cum, u, side="right"))
    idx = min(idx, dist.mass.size - 1)
    plus = np.zeros_like(dist.mass)
    minus = np.zeros_like(dist.mass)
    plus[idx] = INV_SQRT2
    minus[idx] = INV_SQRT2
    return idx - dist.span, WalkState(t=state.t, psi_plus=plus, psi_minus=minus)
