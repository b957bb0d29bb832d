"""Elastic scattering observables in quantum mechanics with a minimal length."""

__version__ = "0.1.0"

from .context import (
    REDUCED_UNITS,
    UNDEFORMED,
    DeformationParams,
    Kinematics,
    PhysicalContext,
    green_function_asymptotic,
    green_prefactor,
    kinetic_energy,
    minimal_length,
    wavenumber_of_energy,
)
from .errors import BornValidityError, ConvergenceError, DomainError
from .potentials import RadialPotential, evaluate, reduced_potential, yukawa_fourier_transform
from .born import (
    ScatteringGeometry,
    born_amplitude_numeric,
    born_amplitude_yukawa,
    coulomb_limit_extrapolate,
    dcs_from_amplitude,
    deformed_coulomb_dcs,
    rutherford_dcs,
)
from .partial_waves import (
    PhaseShiftSet,
    asymptotic_wronskian_residual,
    born_phase_shift,
    free_radial_wave,
    legendre_polynomial,
    optical_theorem_residual,
    partial_amplitude,
    select_lmax,
    self_consistent_phase_shift,
    total_cross_section,
)
from .quadrature import QuadratureResult, integrate_angular, integrate_radial_oscillatory
