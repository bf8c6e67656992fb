"""Shared test oracles, independent of the implementation paths they check."""

from collections import defaultdict

import numpy as np

from binqwalk.coin import CoinSpec, coin_angle
from binqwalk.lattice import INV_SQRT2


def path_enumeration(p: float, t_final: int) -> list[dict]:
    """Exhaustive 2^t transition-path sum for the walk amplitudes.

    Follows every branch of the coin recursion separately and accumulates
    per-path weight products, so it shares nothing with the array-based
    evolution except the coin-angle field itself.  Returns one dict per
    time level mapping (site, sign) -> amplitude.
    """
    spec = CoinSpec(p)
    levels = [defaultdict(float) for _ in range(t_final + 1)]
    levels[0][(0, "+")] = INV_SQRT2
    levels[0][(0, "-")] = INV_SQRT2

    def descend(n: int, sign: str, t: int, amp: float) -> None:
        if t == t_final:
            return
        ang = coin_angle(n, t, spec)
        if sign == "+":
            up = ang.cos_theta * amp
            down = ang.sin_theta * amp
        else:
            up = ang.sin_theta * amp
            down = -ang.cos_theta * amp
        levels[t + 1][(n + 1, "+")] += up
        levels[t + 1][(n - 1, "-")] += down
        descend(n + 1, "+", t + 1, up)
        descend(n - 1, "-", t + 1, down)

    descend(0, "+", 0, INV_SQRT2)
    descend(0, "-", 0, INV_SQRT2)
    return [dict(level) for level in levels]


def exact_binomial(n: int, t: int, p: float) -> float:
    """Binomial site mass via exact integer combinatorics (no log-gamma)."""
    import math

    if abs(n) > t or (n - t) % 2 != 0:
        return 0.0
    k = (t + n) // 2
    return math.comb(t, k) * p**k * (1.0 - p) ** (t - k)


def fully_measured_markov_mass(p: float, t_max: int) -> np.ndarray:
    """Exact distribution of the walk measured at every step.

    When every step ends in a position measurement plus chirality reset,
    the process is a Markov chain whose up-step probability from site n at
    time t is ((cos + sin)^2) / 2 with the coin angles of that cell.
    Window layout matches the ensemble output: index i is site i - t_max.
    """
    spec = CoinSpec(p)
    mass = np.zeros(2 * t_max + 1)
    mass[t_max] = 1.0
    for t in range(t_max):
        new = np.zeros_like(mass)
        for i in np.flatnonzero(mass):
            n = int(i) - t_max
            ang = coin_angle(n, t, spec)
            # At the light-cone edges float noise can push this a hair
            # past 1, which would seed negative masses.
            up = min((ang.cos_theta + ang.sin_theta) ** 2 / 2.0, 1.0)
            new[i + 1] += mass[i] * up
            new[i - 1] += mass[i] * (1.0 - up)
        mass = new
    return mass


class FixedUniform:
    """Minimal random() stub feeding predetermined uniforms to samplers."""

    def __init__(self, *values: float):
        self._values = list(values)

    def random(self):
        return self._values.pop(0)
