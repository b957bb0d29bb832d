"""Radial scattering potentials.

The screened Coulomb (Yukawa) potential is the decaying form
``sign * e2 * exp(-lam r) / r``. ``sign`` is +1 for repulsion and -1 for
attraction. Phase-shift integrals use the reduced potential 2 m U / hbar^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .context import REDUCED_UNITS, PhysicalContext
from .errors import DomainError

ATTRACTIVE = -1
REPULSIVE = 1

# |U| below this beyond r_cut counts as zero for custom potentials.
CUSTOM_DECAY_TOL = 1e-14


def _parse_sign(sign):
    if isinstance(sign, str):
        try:
            return {"attractive": ATTRACTIVE, "repulsive": REPULSIVE}[sign.lower()]
        except KeyError:
            raise DomainError(f"sign must be 'attractive' or 'repulsive', got {sign!r}") from None
    if sign not in (ATTRACTIVE, REPULSIVE):
        raise DomainError(f"sign must be +1 or -1, got {sign!r}")
    return int(sign)


def _vectorized(func):
    probe = np.array([1.0, 2.0])
    try:
        out = np.asarray(func(probe), dtype=float)
    except Exception:
        out = None
    if out is not None and out.shape in ((), probe.shape):
        return lambda r: np.broadcast_to(np.asarray(func(r), dtype=float), np.shape(r))
    vec = np.vectorize(lambda r: float(func(r)), otypes=[float])
    return vec


@dataclass(frozen=True)
class RadialPotential:
    kind: str
    strength: float = 1.0
    screening_lambda: Optional[float] = None
    sign: int = REPULSIVE
    custom_eval: Optional[Callable] = None
    r_cut: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "sign", _parse_sign(self.sign))
        if self.kind not in ("coulomb", "yukawa", "custom"):
            raise DomainError(f"unknown potential kind {self.kind!r}")
        if self.kind != "custom" and not self.strength >= 0:
            raise DomainError("strength (e2) must be non-negative; use sign for attraction")
        if self.kind == "yukawa" and not (self.screening_lambda is not None and self.screening_lambda > 0):
            raise DomainError(f"yukawa requires screening_lambda > 0, got {self.screening_lambda}")
        if self.kind == "custom":
            if self.custom_eval is None:
                raise DomainError("custom potential needs custom_eval")
            if not (self.r_cut is not None and self.r_cut > 0):
                raise DomainError("custom potential must declare r_cut > 0")
            object.__setattr__(self, "custom_eval", _vectorized(self.custom_eval))
            probe = self.r_cut * np.array([1.0, 2.0, 10.0, 1e3])
            tail = np.abs(self.custom_eval(probe))
            if not np.all(tail < CUSTOM_DECAY_TOL):
                raise DomainError(
                    f"custom potential does not vanish beyond r_cut={self.r_cut}: "
                    f"max |U| = {tail.max():.3e}"
                )

    @classmethod
    def coulomb(cls, e2=1.0, sign=REPULSIVE):
        return cls("coulomb", strength=e2, sign=sign)

    @classmethod
    def yukawa(cls, e2=1.0, lam=1.0, sign=ATTRACTIVE):
        return cls("yukawa", strength=e2, screening_lambda=lam, sign=sign)

    @classmethod
    def custom(cls, func, r_cut):
        return cls("custom", custom_eval=func, r_cut=r_cut)

    @classmethod
    def zero(cls):
        return cls.custom(lambda r: np.zeros_like(r), r_cut=1.0)

    @property
    def short_range(self) -> bool:
        return self.kind != "coulomb"

    @property
    def decay_scale(self) -> float:
        """Length beyond which the potential is negligible (inf for Coulomb)."""
        if self.kind == "yukawa":
            return 1.0 / self.screening_lambda
        if self.kind == "custom":
            return self.r_cut
        return math.inf

    def scaled(self, factor: float) -> "RadialPotential":
        """Same shape with strength multiplied by ``factor``."""
        if self.kind == "custom":
            func = self.custom_eval
            return RadialPotential.custom(lambda r: factor * func(r), self.r_cut)
        return RadialPotential(self.kind, self.strength * factor, self.screening_lambda, self.sign)

    def __call__(self, r):
        return evaluate(self, r)


def evaluate(pot: RadialPotential, r):
    r = np.asarray(r, dtype=float)
    if not np.all(r > 0):
        raise DomainError("potential is only defined for r > 0")
    if pot.kind == "coulomb":
        val = pot.sign * pot.strength / r
    elif pot.kind == "yukawa":
        val = pot.sign * pot.strength * np.exp(-pot.screening_lambda * r) / r
    else:
        val = pot.custom_eval(r)
    return float(val) if np.ndim(val) == 0 else val


def reduced_potential(pot: RadialPotential, r, ctx: PhysicalContext = REDUCED_UNITS):
    """2 m U(r) / hbar^2, in inverse length squared."""
    return 2.0 * ctx.mass / ctx.hbar**2 * evaluate(pot, r)


def yukawa_fourier_transform(q, lam, e2=1.0, sign=REPULSIVE):
    """Three-dimensional Fourier transform 4 pi e2 / (q^2 + lam^2) of e2 exp(-lam r)/r."""
    if not lam > 0:
        raise DomainError("screening lambda must be positive; take the Coulomb case as a limit")
    q = np.asarray(q, dtype=float)
    if not np.all(q >= 0):
        raise DomainError("momentum transfer must be non-negative")
    val = _parse_sign(sign) * 4.0 * math.pi * e2 / (q**2 + lam**2)
    return float(val) if val.ndim == 0 else val
