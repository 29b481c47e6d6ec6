"""Numba-compiled quadrature loops for the singular interface integrals.

Each output point accumulates its quadrature sum in a fixed order
(offsets scanned identically on every call), so results are bitwise
reproducible; parallelism is only across output points.
"""

import numba
import numpy as np


@numba.njit(cache=True, parallel=True)
def quad_sums_1d(f, fx, fxx, h, J):
    """Trapezoid sums of the full and nonlinear integrands over alpha = j*h.

    The alpha = 0 node carries the removable-singularity limits
    fxx/(1+fx^2) (full) and fxx*fx^2/(1+fx^2) (nonlinear); endpoints
    |j| = J get half weight.  Returns (full, nonlinear) without the
    1/pi prefactors.
    """
    n = f.shape[0]
    full = np.empty(n)
    nl = np.empty(n)
    for i in numba.prange(n):
        acc_f = 0.0
        acc_n = 0.0
        for j in range(-J, J + 1):
            w = 0.5 if (j == J or j == -J) else 1.0
            if j == 0:
                slope = fx[i]
                q = 1.0 / (1.0 + slope * slope)
                acc_f += w * fxx[i] * q
                acc_n += w * fxx[i] * slope * slope * q
            else:
                a = j * h
                idx = (i - j) % n
                base = (fx[i] - fx[idx]) / a
                delta = (f[i] - f[idx]) / a
                q = 1.0 / (1.0 + delta * delta)
                acc_f += w * base * q
                acc_n += w * base * delta * delta * q
        full[i] = acc_f * h
        nl[i] = acc_n * h
    return full, nl


@numba.njit(cache=True, parallel=True)
def quad_sums_2d(f, fx, fy, h, ox, oy, ww, r2, inv_r3):
    """Windowed lattice sums of the full and nonlinear integrands over y offsets.

    ``ox, oy`` are integer offsets (the y = 0 node is excluded), ``ww``
    the window weights, ``r2 = |y|^2`` and ``inv_r3 = |y|^-3`` per
    offset.  Returns (full, nonlinear) without the 1/(2 pi) prefactors.
    """
    n = f.shape[0]
    nt = ox.shape[0]
    full = np.zeros((n, n))
    nl = np.zeros((n, n))
    for i1 in numba.prange(n):
        row_f = np.zeros(n)
        row_n = np.zeros(n)
        for t in range(nt):
            i1s = (i1 - ox[t]) % n
            shift = (-oy[t]) % n
            ayt = ox[t] * h
            byt = oy[t] * h
            wt = ww[t]
            r2t = r2[t]
            ir3 = inv_r3[t]
            for i2 in range(n):
                i2s = i2 + shift
                if i2s >= n:
                    i2s -= n
                num = (fx[i1, i2] - fx[i1s, i2s]) * ayt + (fy[i1, i2] - fy[i1s, i2s]) * byt
                df = f[i1, i2] - f[i1s, i2s]
                s = r2t + df * df
                inv32 = 1.0 / (s * np.sqrt(s))
                row_f[i2] += wt * num * inv32
                row_n[i2] += wt * num * (ir3 - inv32)
        for i2 in range(n):
            full[i1, i2] = row_f[i2] * h * h
            nl[i1, i2] = row_n[i2] * h * h
    return full, nl
