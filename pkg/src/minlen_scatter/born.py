"""First-Born amplitudes and differential cross-sections.

In first Born order the deformation enters only through the Green's
function factor g = 1/(1 + 2 beta' hbar^2 k^2), so

    f(theta) = -(2 m g / hbar^2) (1/q) int_0^inf r U(r) sin(q r) dr,

with q = 2 k sin(theta/2). The Coulomb case is reached either through the
closed-form deformed cross-section (:func:`deformed_coulomb_dcs`) or as the
lam -> 0 limit of the screened potential (:func:`coulomb_limit_extrapolate`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .context import REDUCED_UNITS, DeformationParams, PhysicalContext, green_prefactor
from .errors import ConvergenceError, DomainError
from .potentials import ATTRACTIVE, RadialPotential, evaluate
from .quadrature import DEFAULT_ABS_TOL, DEFAULT_REL_TOL, integrate_radial_oscillatory

# Corrections larger than this fraction of the Rutherford term are flagged.
VALIDITY_THRESHOLD = 0.5


@dataclass(frozen=True)
class ScatteringGeometry:
    k: float
    theta: float

    def __post_init__(self):
        if not self.k > 0:
            raise DomainError(f"wave number must be positive, got {self.k}")
        if not (0.0 <= self.theta <= math.pi):
            raise DomainError(f"scattering angle must lie in [0, pi], got {self.theta}")

    @classmethod
    def from_q(cls, k, q):
        if not 0 <= q <= 2 * k:
            raise DomainError(f"momentum transfer q={q} unreachable at k={k}")
        return cls(k, 2.0 * math.asin(q / (2.0 * k)))

    @property
    def q(self) -> float:
        return 2.0 * self.k * math.sin(0.5 * self.theta)

    @property
    def sin2_half(self) -> float:
        return math.sin(0.5 * self.theta) ** 2


@dataclass(frozen=True)
class AmplitudeSample:
    theta: float
    f: complex


@dataclass(frozen=True)
class CrossSectionTable:
    """Rows of (theta, dcs, validity_flag) with run metadata."""

    theta: tuple
    dcs: tuple
    flags: tuple
    meta: dict = field(default_factory=dict)

    def rows(self):
        return list(zip(self.theta, self.dcs, self.flags))


def _require_coulomb_angle(geom):
    if geom.theta <= 0:
        raise DomainError("Coulomb cross-sections diverge in the forward direction (theta = 0)")


def born_amplitude_yukawa(geom: ScatteringGeometry, lam, params: DeformationParams,
                          ctx: PhysicalContext = REDUCED_UNITS, sign=ATTRACTIVE) -> complex:
    """Closed-form first-Born amplitude for sign * e2 exp(-lam r)/r."""
    if not lam > 0:
        raise DomainError("screening lambda must be positive")
    q = geom.q
    amp = -sign * 2.0 * ctx.mass * ctx.coupling_e2 / (ctx.hbar**2 * (q * q + lam * lam))
    return complex(amp * green_prefactor(geom.k, params, ctx))


def born_amplitude_numeric(geom: ScatteringGeometry, pot: RadialPotential, params: DeformationParams,
                           ctx: PhysicalContext = REDUCED_UNITS, rel_tol=DEFAULT_REL_TOL,
                           abs_tol=DEFAULT_ABS_TOL) -> complex:
    """First-Born amplitude by radial quadrature of r U(r) sin(q r)."""
    if not pot.short_range:
        raise DomainError("bare Coulomb has no convergent Born integral; use the lambda -> 0 limit")
    q = geom.q
    if not q > 0:
        raise DomainError("numeric Born amplitude needs q > 0")
    upper = pot.r_cut if pot.kind == "custom" else None
    res = integrate_radial_oscillatory(
        lambda r: r * evaluate(pot, r) * np.sin(q * r),
        q, pot.decay_scale, rel_tol=rel_tol, abs_tol=abs_tol, upper=upper,
    )
    if not res.converged:
        raise ConvergenceError(
            "Born amplitude quadrature did not converge",
            value=res.value, abs_error_estimate=res.abs_error_estimate,
        )
    pref = -2.0 * ctx.mass / ctx.hbar**2 * green_prefactor(geom.k, params, ctx)
    return complex(pref * res.value / q)


def dcs_from_amplitude(f) -> float:
    return abs(f) ** 2


def rutherford_dcs(geom: ScatteringGeometry, ctx: PhysicalContext = REDUCED_UNITS) -> float:
    _require_coulomb_angle(geom)
    me2 = ctx.mass * ctx.coupling_e2
    return me2**2 / (4.0 * ctx.hbar**4 * geom.k**4 * geom.sin2_half**2)


@dataclass(frozen=True)
class DeformedCoulombDcs:
    """Deformed Coulomb cross-section split into its three terms."""

    rutherford: float
    log_term: float
    beta_prime_term: float

    @property
    def value(self) -> float:
        return self.rutherford + self.log_term + self.beta_prime_term

    @property
    def correction(self) -> float:
        return self.log_term + self.beta_prime_term

    @property
    def validity_exceeded(self) -> bool:
        return abs(self.correction) > VALIDITY_THRESHOLD * self.rutherford

    def __float__(self):
        return self.value


def deformed_coulomb_dcs(geom: ScatteringGeometry, params: DeformationParams,
                         ctx: PhysicalContext = REDUCED_UNITS) -> DeformedCoulombDcs:
    """Coulomb cross-section with first-order minimal-length corrections.

    The log-family term is proportional to d ln(d ...), d = 2 beta - beta';
    at d = 0 it takes its limiting value 0.
    """
    _require_coulomb_angle(geom)
    d = params.two_beta_minus_bp
    if d < 0:
        raise DomainError(
            f"log argument hbar^2 (2 beta - beta') k^2 sin^2(theta/2) is negative "
            f"(2 beta - beta' = {d})"
        )
    me2 = ctx.mass * ctx.coupling_e2
    s2 = geom.sin2_half
    k2 = geom.k**2
    outer = me2 / (ctx.hbar**2 * k2 * s2)
    if d == 0:
        log_term = 0.0
    else:
        # log of each factor separately so a tiny d cannot underflow the product
        log_arg = math.log(d) + math.log(ctx.hbar**2 * k2 * s2)
        bracket = log_arg + 2.0 * ctx.euler_gamma - 1.0 - 1.0 / (2.0 * s2)
        log_term = outer * (0.5 * me2 * d * bracket)
    bp_term = outer * (-params.beta_prime * me2 / s2)
    return DeformedCoulombDcs(rutherford_dcs(geom, ctx), log_term, bp_term)


@dataclass(frozen=True)
class ExtrapolationResult:
    value: float
    error_estimate: float
    samples: tuple
    diagonal: tuple


def richardson_to_zero(x, y):
    """Neville tableau of polynomial extrapolation of y(x) to x = 0.

    Returns the diagonal T[0,0], T[1,1], ... of successively higher order.
    """
    x = [float(v) for v in x]
    t = [float(v) for v in y]
    diag = [t[0]]
    n = len(x)
    for m in range(1, n):
        for i in range(n - 1, m - 1, -1):
            t[i] = (x[i - m] * t[i] - x[i] * t[i - 1]) / (x[i - m] - x[i])
        diag.append(t[m])
    return diag


def coulomb_limit_extrapolate(geom: ScatteringGeometry, params: DeformationParams,
                              ctx: PhysicalContext = REDUCED_UNITS,
                              lambdas=(0.1, 0.05, 0.025, 0.0125)) -> ExtrapolationResult:
    """Screened-Coulomb dcs extrapolated to lam = 0, polynomial in lam^2."""
    _require_coulomb_angle(geom)
    lams = [float(v) for v in lambdas]
    if len(lams) < 3:
        raise DomainError("need at least 3 screening values to extrapolate")
    if not all(v > 0 for v in lams) or any(b >= a for a, b in zip(lams, lams[1:])):
        raise DomainError("screening values must be positive and strictly decreasing")
    samples = [dcs_from_amplitude(born_amplitude_yukawa(geom, lam, params, ctx)) for lam in lams]
    diag = richardson_to_zero([lam * lam for lam in lams], samples)
    steps = [abs(b - a) for a, b in zip(diag, diag[1:])]
    floor = 64 * np.finfo(float).eps * abs(diag[-1])
    for prev, cur in zip(steps, steps[1:]):
        if cur > prev and cur > floor:
            raise ConvergenceError(
                "lambda -> 0 extrapolation is not converging monotonically",
                diagonal=tuple(diag), samples=tuple(samples),
            )
    return ExtrapolationResult(diag[-1], steps[-1], tuple(samples), tuple(diag))


def dcs_table(k, thetas, params: DeformationParams, pot: RadialPotential,
              ctx: PhysicalContext = REDUCED_UNITS, coulomb_mode="closed",
              lambdas=(0.1, 0.05, 0.025, 0.0125)) -> CrossSectionTable:
    """Differential cross-section on an angle grid, rows ordered by theta."""
    thetas = sorted(float(t) for t in thetas)
    dcs, flags = [], []
    if pot.kind == "coulomb":
        c = PhysicalContext(ctx.hbar, ctx.mass, pot.strength)
        for th in thetas:
            geom = ScatteringGeometry(k, th)
            if coulomb_mode == "closed":
                res = deformed_coulomb_dcs(geom, params, c)
                dcs.append(res.value)
                flags.append(int(res.validity_exceeded))
            elif coulomb_mode == "limit":
                dcs.append(coulomb_limit_extrapolate(geom, params, c, lambdas).value)
                flags.append(0)
            else:
                raise DomainError(f"unknown coulomb mode {coulomb_mode!r}")
    elif pot.kind == "yukawa":
        c = PhysicalContext(ctx.hbar, ctx.mass, pot.strength)
        for th in thetas:
            geom = ScatteringGeometry(k, th)
            dcs.append(dcs_from_amplitude(born_amplitude_yukawa(geom, pot.screening_lambda, params, c, pot.sign)))
            flags.append(0)
    else:
        for th in thetas:
            geom = ScatteringGeometry(k, th)
            dcs.append(dcs_from_amplitude(born_amplitude_numeric(geom, pot, params, ctx)))
            flags.append(0)
    return CrossSectionTable(tuple(thetas), tuple(dcs), tuple(flags))
