# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled trajectory chunk kernel.

Operation-for-operation mirror of ``_pykernel.run_chunk``; both backends
must return bit-identical outputs for identical inputs (the extension is
built with -ffp-contract=off so no fused multiply-adds sneak in).  Tracks
the per-trajectory support window, which the batched NumPy version cannot,
and releases the GIL over the trial loop.
"""

from libc.math cimport sqrt

import numpy as np


def run_chunk(double[:, ::1] cos_tab, double[:, ::1] sin_tab, double q,
              double[:, ::1] u_meas, double[:, ::1] u_pos,
              double[::1] u_final, bint exact):
    """See ``binqwalk._kernels._pykernel.run_chunk`` for the contract."""
    cdef Py_ssize_t n_trials = u_final.shape[0]
    cdef Py_ssize_t t_max = u_meas.shape[1]
    cdef Py_ssize_t m = 2 * t_max + 1
    cdef Py_ssize_t center = t_max
    cdef double inv_sqrt2 = sqrt(0.5)

    plus_buf = np.zeros(m)
    minus_buf = np.zeros(m)
    next_plus_buf = np.zeros(m)
    next_minus_buf = np.zeros(m)
    sites_arr = np.zeros(n_trials, dtype=np.int64)
    acc_arr = np.zeros(m)

    cdef double[::1] plus_mv = plus_buf
    cdef double[::1] minus_mv = minus_buf
    cdef double[::1] next_plus_mv = next_plus_buf
    cdef double[::1] next_minus_mv = next_minus_buf
    cdef long long[::1] sites = sites_arr
    cdef double[::1] acc = acc_arr

    cdef double *plus
    cdef double *minus
    cdef double *next_plus
    cdef double *next_minus
    cdef double *tmp
    cdef double c, s, a, d, cum, target
    cdef Py_ssize_t b, t, i, lo, hi, sel

    if n_trials == 0:
        return acc_arr if exact else sites_arr

    with nogil:
        plus = &plus_mv[0]
        minus = &minus_mv[0]
        next_plus = &next_plus_mv[0]
        next_minus = &next_minus_mv[0]

        for b in range(n_trials):
            lo = center
            hi = center
            plus[center] = inv_sqrt2
            minus[center] = inv_sqrt2

            for t in range(t_max):
                for i in range(lo, hi + 1):
                    c = cos_tab[t, i]
                    s = sin_tab[t, i]
                    a = plus[i]
                    d = minus[i]
                    next_plus[i + 1] = c * a + s * d
                    next_minus[i - 1] = s * a - c * d
                for i in range(lo, hi + 1):
                    plus[i] = 0.0
                    minus[i] = 0.0
                tmp = plus; plus = next_plus; next_plus = tmp
                tmp = minus; minus = next_minus; next_minus = tmp
                lo -= 1
                hi += 1

                if u_meas[b, t] < q:
                    target = u_pos[b, t]
                    cum = 0.0
                    sel = center + (t + 1)
                    for i in range(lo, hi + 1):
                        a = plus[i]
                        d = minus[i]
                        cum = cum + (a * a + d * d)
                        if cum > target:
                            sel = i
                            break
                    for i in range(lo, hi + 1):
                        plus[i] = 0.0
                        minus[i] = 0.0
                    plus[sel] = inv_sqrt2
                    minus[sel] = inv_sqrt2
                    lo = sel
                    hi = sel

            if exact:
                for i in range(lo, hi + 1):
                    a = plus[i]
                    d = minus[i]
                    acc[i] = acc[i] + (a * a + d * d)
            else:
                target = u_final[b]
                cum = 0.0
                sel = m - 1
                for i in range(lo, hi + 1):
                    a = plus[i]
                    d = minus[i]
                    cum = cum + (a * a + d * d)
                    if cum > target:
                        sel = i
                        break
                sites[b] = sel - center

            for i in range(lo, hi + 1):
                plus[i] = 0.0
                minus[i] = 0.0

    return acc_arr if exact else sites_arr
