"""Units, deformation parameters and deformed free-particle kinematics.

Everything is in a unit system fixed by a :class:`PhysicalContext`; the
default is reduced units, hbar = m = e^2 = 1. In the representation used
here only ``beta_prime`` enters the free kinematics and the outgoing-wave
Green's function; the combination ``2*beta - beta_prime`` only appears in
the closed-form Coulomb cross-section.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class PhysicalContext:
    hbar: float = 1.0
    mass: float = 1.0
    coupling_e2: float = 1.0
    euler_gamma: float = field(default=EULER_GAMMA, init=False)

    def __post_init__(self):
        if not self.hbar > 0:
            raise DomainError(f"hbar must be positive, got {self.hbar}")
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass}")
        if not self.coupling_e2 >= 0:
            raise DomainError(f"coupling_e2 must be non-negative, got {self.coupling_e2}")


REDUCED_UNITS = PhysicalContext()


@dataclass(frozen=True)
class DeformationParams:
    """Deformation parameters of the minimal-length algebra, both >= 0."""

    beta: float = 0.0
    beta_prime: float = 0.0

    def __post_init__(self):
        if not (self.beta >= 0 and self.beta_prime >= 0):
            raise DomainError(
                f"deformation parameters must be non-negative, got "
                f"beta={self.beta}, beta_prime={self.beta_prime}"
            )

    @property
    def two_beta_minus_bp(self) -> float:
        return 2.0 * self.beta - self.beta_prime

    @property
    def undeformed(self) -> bool:
        return self.beta == 0 and self.beta_prime == 0


UNDEFORMED = DeformationParams()


def _check_k(k):
    if not np.all(np.asarray(k) > 0):
        raise DomainError(f"wave number must be positive, got {k}")


def minimal_length(params: DeformationParams, ctx: PhysicalContext = REDUCED_UNITS) -> float:
    return ctx.hbar * math.sqrt(params.beta + params.beta_prime)


def kinetic_energy(k, params: DeformationParams, ctx: PhysicalContext = REDUCED_UNITS):
    """Free-particle energy (hbar k)^2/2m * (1 + beta' hbar^2 k^2)."""
    _check_k(k)
    hk2 = (ctx.hbar * k) ** 2
    return hk2 / (2.0 * ctx.mass) * (1.0 + params.beta_prime * hk2)


def wavenumber_of_energy(energy, params: DeformationParams, ctx: PhysicalContext = REDUCED_UNITS):
    """Invert :func:`kinetic_energy` for the positive root.

    With u = (hbar k)^2 the dispersion is beta' u^2 + u - 2 m E = 0. The
    root is written as 4mE / (1 + sqrt(1 + 8 beta' m E)), which has no
    cancellation and reduces to u = 2mE at beta' = 0.
    """
    e = np.asarray(energy, dtype=float)
    if not np.all(e > 0):
        raise DomainError(f"energy must be positive, got {energy}")
    with np.errstate(over="ignore", invalid="ignore"):
        two_me = 2.0 * ctx.mass * e
        u = 2.0 * two_me / (1.0 + np.sqrt(1.0 + 4.0 * params.beta_prime * two_me))
        k = np.sqrt(u) / ctx.hbar
    if not (np.all(np.isfinite(k)) and np.all(k > 0)):
        raise DomainError(
            f"no finite positive wave number for energy={energy} at beta_prime={params.beta_prime}"
        )
    return float(k) if k.ndim == 0 else k


def deformed_momentum(k, params: DeformationParams, ctx: PhysicalContext = REDUCED_UNITS):
    _check_k(k)
    return ctx.hbar * k * (1.0 + params.beta_prime * (ctx.hbar * k) ** 2 / 2.0)


def green_prefactor(k, params: DeformationParams, ctx: PhysicalContext = REDUCED_UNITS):
    """The factor 1/(1 + 2 beta' hbar^2 k^2) on the outgoing Green's function."""
    _check_k(k)
    return 1.0 / (1.0 + 2.0 * params.beta_prime * (ctx.hbar * k) ** 2)


def green_function_asymptotic(r_sep, k, params: DeformationParams, ctx: PhysicalContext = REDUCED_UNITS):
    """Outgoing asymptotic Green's function -exp(i k s) g / (4 pi s) at separation s."""
    r_sep = np.asarray(r_sep, dtype=float)
    if not np.all(r_sep > 0):
        raise DomainError("Green's function is singular at zero separation")
    val = -np.exp(1j * k * r_sep) * green_prefactor(k, params, ctx) / (4.0 * math.pi * r_sep)
    return complex(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class Kinematics:
    """Wave number with its deformed energy and momentum."""

    k: float
    energy: float
    momentum: float

    @classmethod
    def from_k(cls, k, params=UNDEFORMED, ctx=REDUCED_UNITS):
        return cls(float(k), float(kinetic_energy(k, params, ctx)), float(deformed_momentum(k, params, ctx)))

    @classmethod
    def from_energy(cls, energy, params=UNDEFORMED, ctx=REDUCED_UNITS):
        k = wavenumber_of_energy(energy, params, ctx)
        return cls(float(k), float(energy), float(deformed_momentum(k, params, ctx)))
