"""Numerical integration for damped oscillatory radial integrals and angles.

Radial integrals over (0, inf) are split into cells of one half-period
pi/k (or the decay length, if shorter). Every cell gets a 15-point
Gauss-Kronrod rule; cells are bisected until the summed error estimate
meets the tolerance. Cells are generated outward until the tail, bounded
by a cell's contribution times the number of cells per decay length,
drops below ``1e-2 * max(abs_tol, rel_tol * |total|)``.

Integrands must accept and return numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL = 1e-14
MAX_CELLS = 100_000
_BATCH = 32
_EPS = np.finfo(float).eps
# A smooth integrand never needs intervals narrower than cell / 2**_MAX_ROUNDS.
_MAX_ROUNDS = 200

# QUADPACK qk15 abscissae / weights on [-1, 1].
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# 15 nodes ordered -x0..-x6, 0, x6..x0 with matching weights.
_NODES = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])
_KW = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
_GW = np.zeros(15)
for _i, _w in zip((1, 3, 5), _WG[:3]):
    _GW[_i] = _w
    _GW[14 - _i] = _w
_GW[7] = _WG[3]


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    subdivisions: int
    rel_tol: float = DEFAULT_REL_TOL
    abs_tol: float = DEFAULT_ABS_TOL

    @property
    def converged(self) -> bool:
        return self.abs_error_estimate <= max(self.abs_tol, self.rel_tol * abs(self.value))

    def __float__(self):
        return float(self.value)


def _gk15(f, a, b):
    """Apply the 15-point rule to every interval [a_i, b_i].

    Returns (kronrod, error, integral of |f|) per interval.
    """
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float)
    fx = np.broadcast_to(fx, (x.size,)).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        raise DomainError("integrand returned a non-finite value")
    resk = fx @ _KW
    resg = fx @ _GW
    resabs = np.abs(fx) @ _KW
    reskh = 0.5 * resk
    resasc = np.abs(fx - reskh[:, None]) @ _KW
    resk = resk * half
    resabs = resabs * np.abs(half)
    resasc = resasc * np.abs(half)
    err = np.abs((resk - resg * half))
    # QUADPACK error scaling plus a round-off floor.
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0) & (err != 0), scaled, err)
    floor = 50.0 * _EPS * resabs
    err = np.where(resabs > np.finfo(float).tiny / (50 * _EPS), np.maximum(floor, err), err)
    return resk, err, resabs


def _refine(f, a, b, val, err, tol, budget):
    """Bisect the worst intervals until sum(err) <= tol or the budget runs out."""
    n_sub = 0
    rounds = 0
    while err.sum() > tol:
        rounds += 1
        if a.size + n_sub > budget or rounds > _MAX_ROUNDS:
            raise ConvergenceError(
                "radial quadrature exceeded the subdivision limit",
                abs_error_estimate=float(err.sum()),
                value=float(val.sum()),
            )
        share = tol / a.size
        bad = err > share
        if not bad.any():
            bad = err >= err.max()
        m = 0.5 * (a[bad] + b[bad])
        na = np.concatenate([a[bad], m])
        nb = np.concatenate([m, b[bad]])
        nv, ne, _ = _gk15(f, na, nb)
        n_sub += int(bad.sum())
        a = np.concatenate([a[~bad], na])
        b = np.concatenate([b[~bad], nb])
        val = np.concatenate([val[~bad], nv])
        err = np.concatenate([err[~bad], ne])
    order = np.argsort(a, kind="stable")
    return val[order], err[order], n_sub


def integrate_radial_oscillatory(
    f,
    k: float,
    decay_scale: float,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
    upper: float | None = None,
) -> QuadratureResult:
    """Integrate f over (0, inf), or (0, upper) for compact support.

    ``k`` is the oscillation wave number of the integrand and
    ``decay_scale`` the length beyond which it is exponentially small.
    """
    if not (k > 0 and decay_scale > 0):
        raise DomainError("k and decay_scale must be positive")
    if not (rel_tol > 0 and abs_tol > 0):
        raise DomainError("tolerances must be positive")
    h = min(math.pi / k, decay_scale)
    if upper is not None:
        if not upper > 0:
            raise DomainError("upper limit must be positive")
        h = min(h, upper)

    # Tail of an exponentially decaying sequence of cells, in units of one cell.
    tail_cells = 1.0 + decay_scale / h
    vals, errs, lefts, rights = [], [], [], []
    total = 0.0
    start = 0
    quiet = 0
    done = False
    while not done:
        idx = np.arange(start, start + _BATCH, dtype=float)
        a = idx * h
        b = a + h
        if upper is not None:
            keep = a < upper
            a, b = a[keep], np.minimum(b[keep], upper)
            done = bool(b.size == 0 or b[-1] >= upper)
        if a.size == 0:
            break
        v, e, _ = _gk15(f, a, b)
        for i in range(a.size):
            vals.append(v[i])
            errs.append(e[i])
            lefts.append(a[i])
            rights.append(b[i])
            total += v[i]
            if upper is None and b[i] >= decay_scale:
                cut = 1e-2 * max(abs_tol, rel_tol * abs(total))
                quiet = quiet + 1 if (abs(v[i]) + e[i]) * tail_cells < cut else 0
                if quiet >= 2:
                    done = True
                    break
        start += _BATCH
        if len(vals) > MAX_CELLS:
            raise ConvergenceError(
                "radial quadrature exceeded the cell limit",
                abs_error_estimate=float(sum(errs)),
                value=float(total),
            )

    a = np.array(lefts)
    b = np.array(rights)
    val = np.array(vals)
    err = np.array(errs)
    tol = 0.5 * max(abs_tol, rel_tol * abs(val.sum()))
    val, err, n_sub = _refine(f, a, b, val, err, tol, MAX_CELLS)
    # Cells are accumulated in radial order for reproducibility.
    value = math.fsum(val)
    tail = (abs(vals[-1]) + abs(vals[-2])) * tail_cells if (upper is None and len(vals) > 1) else 0.0
    return QuadratureResult(
        value=value,
        abs_error_estimate=float(err.sum() + tail),
        subdivisions=a.size + n_sub,
        rel_tol=rel_tol,
        abs_tol=abs_tol,
    )


def integrate_angular(g, n_nodes: int) -> float:
    """Solid-angle integral 2 pi * int_0^pi g(theta) sin(theta) dtheta.

    Gauss-Legendre in cos(theta): exact when g is a polynomial in
    cos(theta) of degree <= 2 * n_nodes - 1.
    """
    if n_nodes < 2:
        raise DomainError(f"need at least 2 nodes, got {n_nodes}")
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    theta = np.arccos(x)
    vals = np.broadcast_to(np.asarray(g(theta), dtype=float), theta.shape)
    return float(2.0 * math.pi * (vals @ w))
