"""Two-component real wave function on the integer line.

A walker state at time ``t`` holds one real amplitude array per internal
(chirality) component on a symmetric site window ``-span .. span``; array
index ``i`` maps to site ``n = i - span``, so the centre index always holds
site 0.  States produced by evolution have ``span == t`` and their support
is contained in ``{-t, -t+2, ..., t}`` (site parity equals ``t mod 2``);
the measurement-recovery operators may temporarily need a wider window,
which is why ``span`` is derived from the array length rather than pinned
to ``t``.

Amplitudes are ordinary float64 reals.  The evolution never produces a
complex phase, so no complex dtype appears anywhere in the package.
"""

import math
from dataclasses import dataclass

import numpy as np

INV_SQRT2 = math.sqrt(0.5)

__all__ = [
    "INV_SQRT2",
    "WalkState",
    "Pmf",
    "initial_state",
    "pmf",
    "moment",
    "inner_product",
]


def _as_amplitudes(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("amplitude array must be one-dimensional")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class WalkState:
    """Walker state: time index plus the two amplitude arrays.

    ``psi_plus[i]`` and ``psi_minus[i]`` are the up/down amplitudes at site
    ``n = i - span`` where ``span = (len - 1) // 2``.  Instances are
    immutable (arrays are marked read-only); every operation returns a new
    state, so sharing across threads is safe.
    """

    t: int
    psi_plus: np.ndarray
    psi_minus: np.ndarray

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"time index must be >= 0, got {self.t}")
        plus = _as_amplitudes(self.psi_plus)
        minus = _as_amplitudes(self.psi_minus)
        if plus.shape != minus.shape:
            raise ValueError("component arrays must have equal length")
        if plus.size % 2 == 0:
            raise ValueError("amplitude arrays must have odd length 2*span+1")
        if (plus.size - 1) // 2 < self.t:
            raise ValueError("site window is narrower than the time index")
        object.__setattr__(self, "psi_plus", plus)
        object.__setattr__(self, "psi_minus", minus)

    @property
    def span(self) -> int:
        return (self.psi_plus.size - 1) // 2

    @property
    def sites(self) -> np.ndarray:
        """Site labels for each array index, ``-span .. span``."""
        return np.arange(-self.span, self.span + 1)

    def index_of(self, n: int) -> int:
        if abs(n) > self.span:
            raise ValueError(f"site {n} outside window [-{self.span}, {self.span}]")
        return n + self.span

    def amplitudes_at(self, n: int) -> tuple[float, float]:
        """(psi_plus, psi_minus) at site ``n``; zero outside the window."""
        if abs(n) > self.span:
            return 0.0, 0.0
        i = n + self.span
        return float(self.psi_plus[i]), float(self.psi_minus[i])

    def norm(self) -> float:
        return math.sqrt(
            float(self.psi_plus @ self.psi_plus + self.psi_minus @ self.psi_minus)
        )


@dataclass(frozen=True)
class Pmf:
    """Probability mass over sites at a fixed time, same window layout."""

    t: int
    mass: np.ndarray

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"time index must be >= 0, got {self.t}")
        mass = _as_amplitudes(self.mass)
        if mass.size % 2 == 0:
            raise ValueError("mass array must have odd length 2*span+1")
        object.__setattr__(self, "mass", mass)

    @property
    def span(self) -> int:
        return (self.mass.size - 1) // 2

    @property
    def sites(self) -> np.ndarray:
        return np.arange(-self.span, self.span + 1)

    def mass_at(self, n: int) -> float:
        if abs(n) > self.span:
            return 0.0
        return float(self.mass[n + self.span])

    def total(self) -> float:
        return float(self.mass.sum())


def initial_state() -> WalkState:
    """Walker at the origin with no preferred chirality direction.

    Both components carry amplitude 1/sqrt(2) at site 0.
    """
    amp = np.array([INV_SQRT2])
    return WalkState(t=0, psi_plus=amp, psi_minus=amp.copy())


def pmf(state: WalkState) -> Pmf:
    """Position distribution: mass(n) = psi_plus(n)^2 + psi_minus(n)^2."""
    mass = state.psi_plus * state.psi_plus + state.psi_minus * state.psi_minus
    return Pmf(t=state.t, mass=mass)


def moment(dist: Pmf, k: int) -> float:
    """k-th raw moment sum(n^k * mass(n)) of a position distribution."""
    if k < 1:
        raise ValueError(f"moment order must be >= 1, got {k}")
    sites = dist.sites.astype(np.float64)
    return float(np.dot(sites**k, dist.mass))


def _aligned(a: np.ndarray, span_a: int, span_b: int) -> np.ndarray:
    if span_a == span_b:
        return a
    pad = span_b - span_a
    return np.pad(a, (pad, pad))


def inner_product(a: WalkState, b: WalkState) -> float:
    """Real inner product of two states taken at the same time.

    Raises ValueError when the time indices differ; amplitudes outside the
    narrower window count as zero.
    """
    if a.t != b.t:
        raise ValueError(
            f"states are incomparable: time indices differ ({a.t} != {b.t})"
        )
    span = max(a.span, b.span)
    ap = _aligned(a.psi_plus, a.span, span)
    am = _aligned(a.psi_minus, a.span, span)
    bp = _aligned(b.psi_plus, b.span, span)
    bm = _aligned(b.psi_minus, b.span, span)
    return float(ap @ bp + am @ bm)
