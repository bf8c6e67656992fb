"""NumPy fallback for the trajectory chunk kernel.

Evolves a batch of measurement-interrupted trajectories with the same
operation order as the compiled kernel; for identical inputs the two
backends return bit-identical outputs.  Keep every arithmetic expression
in sync with ``_cykernel.pyx``; ordering changes alter the floats.
"""

import math

import numpy as np

INV_SQRT2 = math.sqrt(0.5)


def run_chunk(cos_tab, sin_tab, q, u_meas, u_pos, u_final, exact):
    """Run one chunk of trajectories from pre-drawn uniforms.

    cos_tab, sin_tab: (t_max, 2*t_max+1) coin tables, row t = step t -> t+1.
    u_meas, u_pos: (trials, t_max) per-step uniforms (measure? / where?).
    u_final: (trials,) uniform for the final position readout.

    Returns int64 sites (trials,) when ``exact`` is false, else the float64
    sum over trials of the final position distribution (2*t_max+1,).
    """
    n_trials = u_final.shape[0]
    t_max = u_meas.shape[1]
    m = 2 * t_max + 1
    center = t_max

    plus = np.zeros((n_trials, m))
    minus = np.zeros((n_trials, m))
    plus[:, center] = INV_SQRT2
    minus[:, center] = INV_SQRT2

    for t in range(t_max):
        lo = center - t
        hi = center + t
        c = cos_tab[t, lo : hi + 1]
        s = sin_tab[t, lo : hi + 1]
        ps = plus[:, lo : hi + 1]
        ms = minus[:, lo : hi + 1]
        stepped_plus = c * ps + s * ms
        stepped_minus = s * ps - c * ms
        plus[:, lo + 1 : hi + 2] = stepped_plus
        plus[:, lo] = 0.0
        minus[:, lo - 1 : hi] = stepped_minus
        minus[:, hi] = 0.0

        measured = u_meas[:, t] < q
        if measured.any():
            w_lo = center - (t + 1)
            w_hi = center + (t + 1)
            seg_p = plus[:, w_lo : w_hi + 1]
            seg_m = minus[:, w_lo : w_hi + 1]
            cum = np.cumsum(seg_p * seg_p + seg_m * seg_m, axis=1)
            hit = cum > u_pos[:, t : t + 1]
            first = np.argmax(hit, axis=1)
            idx = np.where(hit.any(axis=1), first, cum.shape[1] - 1) + w_lo
            rows = np.flatnonzero(measured)
            plus[rows, :] = 0.0
            minus[rows, :] = 0.0
            plus[rows, idx[rows]] = INV_SQRT2
            minus[rows, idx[rows]] = INV_SQRT2

    if exact:
        masses = plus * plus + minus * minus
        acc = np.zeros(m)
        for b in range(n_trials):
            acc += masses[b]
        return acc

    cum = np.cumsum(plus * plus + minus * minus, axis=1)
    hit = cum > u_final[:, None]
    first = np.argmax(hit, axis=1)
    idx = np.where(hit.any(axis=1), first, m - 1)
    return (idx - center).astype(np.int64)
