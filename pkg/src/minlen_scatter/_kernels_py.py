"""Pure-Python (numpy) implementations of the recurrence kernels.

Every routine here mirrors ``_kernels.pyx`` operation for operation so the
two backends produce bit-identical results. Transcendental seeds (sin x,
cos x) are computed by the caller and passed in for the same reason.
"""

import numpy as np

# Downward (Miller) recurrence starts this many orders above lmax.
MILLER_PAD = 40
_BIG = 1e200
_RESCALE = 1e-200


def legendre_table(lmax, x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty((lmax + 1, x.size))
    out[0] = 1.0
    if lmax >= 1:
        out[1] = x
    for l in range(1, lmax):
        out[l + 1] = ((2 * l + 1) * x * out[l] - l * out[l - 1]) / (l + 1)
    return out


def legendre_series(coef_re, coef_im, x):
    """Return (re, im) of sum_l c_l P_l(x) using the forward recurrence."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    n = len(coef_re)
    re = np.zeros(x.size)
    im = np.zeros(x.size)
    if n == 0:
        return re, im
    p_prev = np.ones(x.size)
    re = re + coef_re[0] * p_prev
    im = im + coef_im[0] * p_prev
    if n == 1:
        return re, im
    p = x.copy()
    re = re + coef_re[1] * p
    im = im + coef_im[1] * p
    for l in range(1, n - 1):
        p_next = ((2 * l + 1) * x * p - l * p_prev) / (l + 1)
        p_prev = p
        p = p_next
        re = re + coef_re[l + 1] * p
        im = im + coef_im[l + 1] * p
    return re, im


def _jn_upward(lmax, x, sinx, cosx):
    out = np.empty((lmax + 1, x.size))
    out[0] = sinx / x
    if lmax >= 1:
        out[1] = (out[0] - cosx) / x
    for l in range(1, lmax):
        out[l + 1] = (2 * l + 1) / x * out[l] - out[l - 1]
    return out


def _jn_miller(lmax, x, sinx, cosx):
    top = 2 * lmax + MILLER_PAD
    out = np.zeros((lmax + 1, x.size))
    upper = np.zeros(x.size)
    cur = np.full(x.size, 1e-300)
    for l in range(top, 0, -1):
        lower = (2 * l + 1) / x * cur - upper
        upper = cur
        cur = lower
        if l - 1 <= lmax:
            out[l - 1] = cur
        big = np.abs(cur) > _BIG
        if big.any():
            cur = np.where(big, cur * _RESCALE, cur)
            upper = np.where(big, upper * _RESCALE, upper)
            out[:, big] = out[:, big] * _RESCALE
    j0 = sinx / x
    j1 = (j0 - cosx) / x
    use0 = np.abs(j0) >= np.abs(j1)
    if lmax >= 1:
        scale = np.where(use0, j0 / out[0], j1 / out[1])
    else:
        scale = j0 / out[0]
    return out * scale


def spherical_jn_table(lmax, x, sinx, cosx):
    """Table j_l(x) for l = 0..lmax; upward where x >= lmax, Miller otherwise."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    sinx = np.ascontiguousarray(sinx, dtype=np.float64)
    cosx = np.ascontiguousarray(cosx, dtype=np.float64)
    out = np.empty((lmax + 1, x.size))
    up = x >= lmax
    if up.any():
        out[:, up] = _jn_upward(lmax, x[up], sinx[up], cosx[up])
    down = ~up
    if down.any():
        out[:, down] = _jn_miller(lmax, x[down], sinx[down], cosx[down])
    return out


def spherical_yn_table(lmax, x, sinx, cosx):
    x = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty((lmax + 1, x.size))
    out[0] = -cosx / x
    if lmax >= 1:
        out[1] = (out[0] - sinx) / x
    for l in range(1, lmax):
        out[l + 1] = (2 * l + 1) / x * out[l] - out[l - 1]
    return out
