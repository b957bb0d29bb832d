"""Partial-wave analysis with a minimal-length deformation.

Amplitude, total cross-section and the optical theorem keep their
undeformed form; the deformation enters through k and the phase shifts.
First-Born phases are

    sin(delta_l) = -(g / k) int_0^inf chi_l(kr)^2 U_red(r) dr,

with g = 1/(1 + 2 beta' hbar^2 k^2) and U_red = 2 m U / hbar^2. Two radial
kernels chi_l are available:

``"riccati"`` (default)
    the regular free solution kr j_l(kr), whose large-r form is
    sin(kr - l pi/2).
``"asymptotic"``
    sin(kr - l pi/2) itself at every r. For l = 0 the two coincide. For odd
    l this kernel does not vanish at the origin, so the integral diverges
    for 1/r potentials. For even l it gives the same value at every l.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .context import REDUCED_UNITS, DeformationParams, PhysicalContext, green_prefactor
from .errors import BornValidityError, ConvergenceError, DomainError
from .potentials import RadialPotential, reduced_potential
from .quadrature import DEFAULT_ABS_TOL, DEFAULT_REL_TOL, integrate_angular, integrate_radial_oscillatory

KERNELS = ("riccati", "asymptotic")
LMAX_CAP = 64
RELAXATION = 0.5


def legendre_polynomial(l: int, x):
    """P_l(x) by the three-term recurrence."""
    if l < 0:
        raise DomainError(f"degree must be non-negative, got {l}")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(xa) > 1.0):
        raise DomainError("Legendre argument must lie in [-1, 1]")
    val = kernels.legendre_table(l, xa)[l]
    return float(val[0]) if np.ndim(x) == 0 else val


def spherical_jn(l: int, x):
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa <= 0):
        raise DomainError("spherical Bessel argument must be positive")
    val = kernels.spherical_jn_table(l, xa, np.sin(xa), np.cos(xa))[l]
    return float(val[0]) if np.ndim(x) == 0 else val


def spherical_yn(l: int, x):
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa <= 0):
        raise DomainError("spherical Bessel argument must be positive")
    val = kernels.spherical_yn_table(l, xa, np.sin(xa), np.cos(xa))[l]
    return float(val[0]) if np.ndim(x) == 0 else val


@dataclass(frozen=True)
class RadialWaveSample:
    l: int
    k: float
    r: float
    value: float


def free_radial_wave(l: int, k: float, r) -> RadialWaveSample:
    """Free radial solution sqrt(2/pi) k j_l(kr).

    This is the Rayleigh form r^l (-1/r d/dr)^l sin(kr)/r scaled by
    sqrt(2/pi) / k^l, written through the spherical Bessel function.
    """
    r_arr = np.asarray(r, dtype=float)
    if not np.all(r_arr > 0):
        raise DomainError("radial wave needs r > 0")
    value = math.sqrt(2.0 / math.pi) * k * spherical_jn(l, k * r_arr)
    return RadialWaveSample(l, k, r, value)


def _chi(l, rho, kernel):
    """Regular and companion radial functions (chi, chi_tilde) at rho = kr.

    Asymptotically chi -> sin(rho - l pi/2) and chi_tilde -> cos(rho - l pi/2).
    """
    if kernel == "asymptotic":
        phase = rho - 0.5 * l * math.pi
        return np.sin(phase), np.cos(phase)
    s, c = np.sin(rho), np.cos(rho)
    j = kernels.spherical_jn_table(l, rho, s, c)[l]
    y = kernels.spherical_yn_table(l, rho, s, c)[l]
    return rho * j, -rho * y


def _check_kernel(kernel, l, pot):
    if kernel not in KERNELS:
        raise DomainError(f"kernel must be one of {KERNELS}, got {kernel!r}")
    if not pot.short_range:
        raise DomainError("partial-wave phases need a screened potential; bare Coulomb integrals diverge")
    if kernel == "asymptotic" and l % 2 == 1 and pot.kind in ("yukawa", "coulomb"):
        raise DomainError(
            "asymptotic sine kernel does not vanish at r = 0 for odd l; "
            "the 1/r potential makes the integral diverge"
        )


def _radial_integral(integrand, k, pot, rel_tol, abs_tol):
    upper = pot.r_cut if pot.kind == "custom" else None
    res = integrate_radial_oscillatory(
        integrand, 2.0 * k, pot.decay_scale, rel_tol=rel_tol, abs_tol=abs_tol, upper=upper
    )
    if not res.converged:
        raise ConvergenceError(
            "phase-shift quadrature did not converge",
            value=res.value, abs_error_estimate=res.abs_error_estimate,
        )
    return res.value


def phase_integrals(l, k, pot: RadialPotential, ctx: PhysicalContext = REDUCED_UNITS,
                    kernel="riccati", rel_tol=DEFAULT_REL_TOL, abs_tol=DEFAULT_ABS_TOL):
    """Return (int chi^2 U_red dr, int chi chi_tilde U_red dr)."""
    _check_kernel(kernel, l, pot)

    def direct(r):
        chi, _ = _chi(l, k * r, kernel)
        return chi * chi * reduced_potential(pot, r, ctx)

    def cross(r):
        chi, chit = _chi(l, k * r, kernel)
        return chi * chit * reduced_potential(pot, r, ctx)

    return (_radial_integral(direct, k, pot, rel_tol, abs_tol),
            _radial_integral(cross, k, pot, rel_tol, abs_tol))


def _asin_checked(s, l):
    if abs(s) > 1.0:
        raise BornValidityError(f"|sin delta_{l}| = {abs(s):.6g} exceeds 1; Born validity exceeded", s)
    return math.asin(s)


def born_sin_delta(l, k, pot, params: DeformationParams, ctx: PhysicalContext = REDUCED_UNITS,
                   kernel="riccati", rel_tol=DEFAULT_REL_TOL, abs_tol=DEFAULT_ABS_TOL) -> float:
    """Raw first-Born value of sin(delta_l), not clipped to [-1, 1]."""
    if not k > 0:
        raise DomainError("wave number must be positive")
    _check_kernel(kernel, l, pot)

    def direct(r):
        chi, _ = _chi(l, k * r, kernel)
        return chi * chi * reduced_potential(pot, r, ctx)

    integral = _radial_integral(direct, k, pot, rel_tol, abs_tol)
    return -green_prefactor(k, params, ctx) / k * integral


def born_phase_shift(l, k, pot, params: DeformationParams, ctx: PhysicalContext = REDUCED_UNITS,
                     kernel="riccati", rel_tol=DEFAULT_REL_TOL, abs_tol=DEFAULT_ABS_TOL) -> float:
    """First-Born phase shift delta_l in [-pi/2, pi/2]."""
    return _asin_checked(born_sin_delta(l, k, pot, params, ctx, kernel, rel_tol, abs_tol), l)


@dataclass(frozen=True)
class SelfConsistentPhase:
    delta: float
    iterations: int
    residual: float
    relaxed: bool


def self_consistent_phase(l, k, pot, params: DeformationParams, ctx: PhysicalContext = REDUCED_UNITS,
                          max_iter=200, tol=1e-12, kernel="riccati") -> SelfConsistentPhase:
    """Fixed point of the phase relation with the distorted wave in the integral.

    The distorted asymptotic wave is sin(rho - l pi/2 + delta), i.e.
    chi cos(delta) + chi_tilde sin(delta), so the right-hand side is
    -(g/k)(cos(delta) I_direct + sin(delta) I_cross) and both integrals are
    computed once. Iteration starts from the Born phase; if successive
    steps oscillate without shrinking, the update is relaxed by averaging.
    """
    g_over_k = green_prefactor(k, params, ctx) / k
    i_direct, i_cross = phase_integrals(l, k, pot, ctx, kernel)

    def update(d):
        return _asin_checked(-g_over_k * (math.cos(d) * i_direct + math.sin(d) * i_cross), l)

    delta = _asin_checked(-g_over_k * i_direct, l)
    relaxed = False
    prev_step = None
    for it in range(1, max_iter + 1):
        target = update(delta)
        step = target - delta
        if prev_step is not None and step * prev_step < 0 and abs(step) >= abs(prev_step):
            relaxed = True
        new = delta + RELAXATION * step if relaxed else target
        if abs(new - delta) < tol:
            delta = new
            resid = abs(math.sin(delta) + g_over_k * (math.cos(delta) * i_direct + math.sin(delta) * i_cross))
            return SelfConsistentPhase(delta, it, resid, relaxed)
        prev_step = step
        delta = new
    raise ConvergenceError(
        f"phase iteration for l={l} did not converge in {max_iter} steps",
        last=delta, previous=delta - (prev_step or 0.0),
    )


def self_consistent_phase_shift(l, k, pot, params: DeformationParams, ctx: PhysicalContext = REDUCED_UNITS,
                                max_iter=200, tol=1e-12, kernel="riccati") -> float:
    return self_consistent_phase(l, k, pot, params, ctx, max_iter, tol, kernel).delta


def phase_relation_residual(l, k, delta, pot, params: DeformationParams,
                            ctx: PhysicalContext = REDUCED_UNITS, kernel="riccati") -> float:
    """|sin(delta) + (g/k) int chi U_red chibar_delta dr| with the distorted wave built directly."""
    g_over_k = green_prefactor(k, params, ctx) / k
    cd, sd = math.cos(delta), math.sin(delta)

    def integrand(r):
        chi, chit = _chi(l, k * r, kernel)
        if kernel == "asymptotic":
            chibar = np.sin(k * r - 0.5 * l * math.pi + delta)
        else:
            chibar = chi * cd + chit * sd
        return chi * chibar * reduced_potential(pot, r, ctx)

    _check_kernel(kernel, l, pot)
    return abs(sd + g_over_k * _radial_integral(integrand, k, pot, DEFAULT_REL_TOL, DEFAULT_ABS_TOL))


@dataclass(frozen=True)
class PhaseShiftSet:
    """Real phase shifts delta_0..delta_lmax at wave number k."""

    k: float
    deltas: tuple
    method: str = "born"

    def __post_init__(self):
        if not self.k > 0:
            raise DomainError("wave number must be positive")
        vals = np.asarray(self.deltas)
        if np.iscomplexobj(vals):
            raise TypeError("phase shifts must be real")
        if vals.ndim != 1 or vals.size == 0:
            raise DomainError("need at least one phase shift")
        object.__setattr__(self, "deltas", tuple(float(d) for d in vals))

    @property
    def l_max(self) -> int:
        return len(self.deltas) - 1

    def sin_deltas(self):
        return np.sin(np.asarray(self.deltas))


def _amplitude_coefficients(phases: PhaseShiftSet):
    # (i/2k)(2l+1)(1 - e^{2i delta}) = (2l+1) e^{i delta} sin(delta) / k
    d = np.asarray(phases.deltas)
    s = np.sin(d)
    ell = np.arange(d.size)
    w = (2 * ell + 1) * s / phases.k
    return w * np.cos(d), w * s


def partial_amplitude(phases: PhaseShiftSet, theta):
    """f(theta) = (i/2k) sum (2l+1)(1 - exp(2 i delta_l)) P_l(cos theta)."""
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    if np.any((th < 0) | (th > math.pi)):
        raise DomainError("theta must lie in [0, pi]")
    cr, ci = _amplitude_coefficients(phases)
    re, im = kernels.legendre_series(cr, ci, np.cos(th))
    f = re + 1j * im
    return complex(f[0]) if np.ndim(theta) == 0 else f


def forward_amplitude(phases: PhaseShiftSet) -> complex:
    cr, ci = _amplitude_coefficients(phases)
    re, im = kernels.legendre_series(cr, ci, np.ones(1))
    return complex(re[0], im[0])


def total_cross_section(phases: PhaseShiftSet) -> float:
    """sigma = (4 pi / k^2) sum (2l+1) sin^2(delta_l)."""
    s = phases.sin_deltas()
    ell = np.arange(s.size)
    return float(4.0 * math.pi / phases.k**2 * np.sum((2 * ell + 1) * s * s))


def angular_cross_section(phases: PhaseShiftSet, n_nodes=None) -> float:
    """Total cross-section as the solid-angle integral of |f|^2."""
    if n_nodes is None:
        n_nodes = phases.l_max + 8
    return integrate_angular(lambda th: np.abs(partial_amplitude(phases, th)) ** 2, n_nodes)


def optical_theorem_residual(phases: PhaseShiftSet) -> float:
    sigma = total_cross_section(phases)
    optical = 4.0 * math.pi / phases.k * forward_amplitude(phases).imag
    return abs(sigma - optical) / max(sigma, np.finfo(float).tiny)


def asymptotic_wronskian_residual(l, k, delta, params: DeformationParams,
                                  ctx: PhysicalContext = REDUCED_UNITS, r=None) -> float:
    """Residual of the deformed Wronskian on the asymptotic pair at radius r.

    With chi = sin(a), chibar = sin(a + delta), a = kr - l pi/2, the full
    left side (Wronskian, beta' third-derivative terms and the
    l(l+1)/r^2 term) is compared against -k (1 + 2 beta' hbar^2 k^2) sin(delta).
    Only the centrifugal term survives, so the residual is
    2 beta' hbar^2 l(l+1) k |sin delta| / r^2.
    """
    if r is None or not r > 0:
        raise DomainError("radius must be positive")
    a = k * r - 0.5 * l * math.pi
    b = a + delta
    k2, k3 = k * k, k**3
    chi, d1, d2, d3 = math.sin(a), k * math.cos(a), -k2 * math.sin(a), -k3 * math.cos(a)
    bar, bd1, bd2, bd3 = math.sin(b), k * math.cos(b), -k2 * math.sin(b), -k3 * math.cos(b)
    bp_h2 = params.beta_prime * ctx.hbar**2
    wronskian = chi * bd1 - bar * d1
    third = chi * bd3 - bar * d3 - d1 * bd2 + bd1 * d2
    lhs = wronskian - bp_h2 * third + 2.0 * bp_h2 * l * (l + 1) / r**2 * wronskian
    reduced = -k * (1.0 + 2.0 * bp_h2 * k2) * math.sin(delta)
    return abs(lhs - reduced)


def born_phase_set(k, pot, params: DeformationParams, lmax: int, ctx: PhysicalContext = REDUCED_UNITS,
                   kernel="riccati") -> PhaseShiftSet:
    deltas = [born_phase_shift(l, k, pot, params, ctx, kernel) for l in range(lmax + 1)]
    return PhaseShiftSet(k, tuple(deltas), "born")


def select_lmax(pot, k, params: DeformationParams, ctx: PhysicalContext = REDUCED_UNITS,
                tail_tol=1e-3, kernel="riccati") -> int:
    """Smallest l with |sin delta_l| < tail_tol, capped at 64."""
    if not tail_tol > 0:
        raise DomainError("tail_tol must be positive")
    for l in range(LMAX_CAP + 1):
        if abs(born_sin_delta(l, k, pot, params, ctx, kernel)) < tail_tol:
            return l
    raise ConvergenceError(
        f"phase shifts did not fall below {tail_tol} by l = {LMAX_CAP}", cap=LMAX_CAP
    )
