import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minlen_scatter.born import ScatteringGeometry, born_amplitude_yukawa, dcs_from_amplitude
from minlen_scatter.context import DeformationParams as P, green_prefactor
from minlen_scatter.errors import BornValidityError, ConvergenceError, DomainError
from minlen_scatter.partial_waves import (
    PhaseShiftSet,
    angular_cross_section,
    asymptotic_wronskian_residual,
    born_phase_set,
    born_phase_shift,
    born_sin_delta,
    forward_amplitude,
    free_radial_wave,
    legendre_polynomial,
    optical_theorem_residual,
    partial_amplitude,
    phase_relation_residual,
    select_lmax,
    self_consistent_phase,
    spherical_jn,
    spherical_yn,
    total_cross_section,
)
from minlen_scatter.quadrature import integrate_angular
from minlen_scatter.potentials import REPULSIVE, RadialPotential

HALF_LN2 = 0.5 * math.log(2.0)


def yukawa(e2=1.0, lam=2.0, sign=-1):
    return RadialPotential.yukawa(e2, lam, sign)


def q_oracle(l, k, lam, e2=1.0, bp=0.0):
    # sin delta_l = e2 g Q_l(1 + lam^2 / 2k^2) / k for the attractive Yukawa
    z = 1 + lam * lam / (2 * k * k)
    return float(e2 * mp.legenq(l, 0, z, type=3).real / k) / (1 + 2 * bp * k * k)


EXPLICIT_P = {
    0: lambda x: 1.0 + 0 * x,
    1: lambda x: x,
    2: lambda x: (3 * x**2 - 1) / 2,
    3: lambda x: (5 * x**3 - 3 * x) / 2,
    4: lambda x: (35 * x**4 - 30 * x**2 + 3) / 8,
    5: lambda x: (63 * x**5 - 70 * x**3 + 15 * x) / 8,
}


@pytest.mark.parametrize("l", sorted(EXPLICIT_P))
def test_legendre_explicit(l):
    x = np.linspace(-1, 1, 41)
    assert np.allclose(legendre_polynomial(l, x), EXPLICIT_P[l](x), rtol=0, atol=1e-14)
    assert legendre_polynomial(l, 1.0) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(DomainError):
        legendre_polynomial(l, 1.5)


@pytest.mark.parametrize("l", [0, 1, 3, 7, 20])
@pytest.mark.parametrize("x", [1e-3, 0.5, 3.0, 17.0, 250.0])
def test_spherical_bessel_vs_mpmath(l, x):
    j = float(mp.sqrt(mp.pi / (2 * x)) * mp.besselj(l + 0.5, x))
    y = float(mp.sqrt(mp.pi / (2 * x)) * mp.bessely(l + 0.5, x))
    assert spherical_jn(l, x) == pytest.approx(j, rel=1e-12, abs=1e-300)
    if abs(y) < 1e250:
        assert spherical_yn(l, x) == pytest.approx(y, rel=1e-12)


@pytest.mark.parametrize("l", range(6))
def test_free_radial_wave_vs_rayleigh_oracle(l):
    # mpmath evaluation of the Rayleigh form at 30 digits
    mp.mp.dps = 30
    for k, r in [(1.0, 0.7), (2.5, 3.0), (0.4, 40.0)]:
        x = mp.mpf(k) * r
        jl = mp.sqrt(mp.pi / (2 * x)) * mp.besselj(l + 0.5, x)
        expected = float(mp.sqrt(2 / mp.pi) * k * jl)
        assert free_radial_wave(l, k, r).value == pytest.approx(expected, rel=1e-10, abs=1e-16)
    mp.mp.dps = 15


@pytest.mark.parametrize("l", range(6))
def test_free_radial_wave_asymptote(l):
    # r j_l(kr) -> sin(kr - l pi/2)/k with error of order l(l+1)/(2kr)
    k = 1.0
    r = np.linspace(1e3, 1e3 + 2 * math.pi, 50)
    val = free_radial_wave(l, k, r).value
    asym = math.sqrt(2 / math.pi) * np.sin(k * r - l * math.pi / 2) / r
    bound = (l * (l + 1) / (2 * k * 1e3) + 1e-12) * math.sqrt(2 / math.pi) / 1e3
    assert np.max(np.abs(val - asym)) <= 1.01 * bound


def test_free_radial_wave_domain():
    with pytest.raises(DomainError):
        free_radial_wave(0, 1.0, 0.0)


def test_born_phase_examples():
    assert born_sin_delta(0, 1.0, yukawa(), P()) == pytest.approx(HALF_LN2, abs=1e-10)
    assert born_sin_delta(0, 1.0, yukawa(), P(0, 0.1)) == pytest.approx(HALF_LN2 / 1.2, abs=1e-10)
    assert born_sin_delta(0, 1.0, yukawa(sign=REPULSIVE), P()) == pytest.approx(-HALF_LN2, abs=1e-10)
    assert born_phase_shift(0, 1.0, yukawa(), P()) == pytest.approx(math.asin(HALF_LN2), abs=1e-10)


@pytest.mark.parametrize("l", [0, 1, 2, 4, 7])
@pytest.mark.parametrize("k,lam", [(1.0, 2.0), (0.5, 5.0), (3.0, 0.7)])
def test_born_phase_q_oracle(l, k, lam):
    s = born_sin_delta(l, k, yukawa(0.1, lam), P(0.01, 0.02))
    assert s == pytest.approx(q_oracle(l, k, lam, 0.1, 0.02), rel=1e-8, abs=1e-14)


def test_asymptotic_kernel():
    pot = yukawa()
    for l in (0, 2, 4):
        s = born_sin_delta(l, 1.0, pot, P(), kernel="asymptotic")
        assert s == pytest.approx(HALF_LN2, abs=1e-10)
    for l in (1, 3):
        with pytest.raises(DomainError, match="odd l"):
            born_sin_delta(l, 1.0, pot, P(), kernel="asymptotic")
    with pytest.raises(DomainError):
        born_sin_delta(0, 1.0, pot, P(), kernel="wkb")


def test_bare_coulomb_rejected():
    with pytest.raises(DomainError):
        born_sin_delta(0, 1.0, RadialPotential.coulomb(), P())


def test_born_validity_error():
    with pytest.raises(BornValidityError) as exc:
        born_phase_shift(0, 1.0, yukawa(4.0), P())
    assert abs(exc.value.sin_delta) > 1


def test_self_consistent_zero_potential():
    res = self_consistent_phase(0, 1.0, RadialPotential.zero(), P())
    assert res.delta == 0.0


def test_self_consistent_weak_coupling():
    for e2 in (1e-3, 1e-4):
        sc = self_consistent_phase(0, 1.0, yukawa(e2), P()).delta
        born = born_phase_shift(0, 1.0, yukawa(e2), P())
        # second order in e2
        assert abs(sc - born) < 0.5 * (e2 / 1e-3) ** 2 * 1e-6
    sc = self_consistent_phase(0, 1.0, yukawa(1e-4), P()).delta
    assert sc == pytest.approx(born_phase_shift(0, 1.0, yukawa(1e-4), P()), abs=1e-8)


@pytest.mark.parametrize("l,e2", [(0, 0.3), (0, 1.0), (1, 0.5), (2, 1.0)])
def test_self_consistent_residual(l, e2):
    pot = yukawa(e2)
    res = self_consistent_phase(l, 1.0, pot, P(0.01, 0.02))
    assert res.residual < 1e-10
    assert phase_relation_residual(l, 1.0, res.delta, pot, P(0.01, 0.02)) < 1e-10
    assert abs(res.delta) <= math.pi / 2


def test_self_consistent_relaxation():
    res = self_consistent_phase(0, 1.0, RadialPotential.yukawa(3.0, 5.0, REPULSIVE), P())
    assert res.relaxed
    assert res.residual < 1e-10


def test_self_consistent_iteration_limit():
    with pytest.raises(ConvergenceError):
        self_consistent_phase(0, 1.0, yukawa(0.6), P(), max_iter=3)


def test_amplitude_examples():
    ps = PhaseShiftSet(1.0, (math.pi / 2,))
    assert partial_amplitude(ps, 0.7) == pytest.approx(1j, abs=1e-15)
    assert total_cross_section(ps) == pytest.approx(4 * math.pi, rel=1e-15)
    zero = PhaseShiftSet(2.0, (0.0, 0.0, 0.0))
    assert partial_amplitude(zero, 1.0) == 0
    assert total_cross_section(zero) == 0.0


def test_amplitude_matches_direct_sum():
    ps = PhaseShiftSet(1.3, (0.4, -0.2, 0.05, 0.01))
    th = np.linspace(0, math.pi, 9)
    direct = sum(
        (2 * l + 1) * (1 - np.exp(2j * d)) * legendre_polynomial(l, np.cos(th))
        for l, d in enumerate(ps.deltas)
    ) * 1j / (2 * ps.k)
    assert np.allclose(partial_amplitude(ps, th), direct, rtol=1e-13, atol=1e-15)
    assert forward_amplitude(ps) == pytest.approx(direct[0], rel=1e-13)


@settings(max_examples=60)
@given(
    k=st.floats(0.1, 10.0),
    deltas=st.lists(st.floats(-1.5, 1.5), min_size=1, max_size=12),
)
def test_cross_section_identities(k, deltas):
    ps = PhaseShiftSet(k, tuple(deltas))
    sigma = total_cross_section(ps)
    assert angular_cross_section(ps) == pytest.approx(sigma, rel=1e-10, abs=1e-300)
    if sigma > 1e-200:
        assert optical_theorem_residual(ps) < 1e-12


def test_phase_set_rejects_complex():
    with pytest.raises(TypeError):
        PhaseShiftSet(1.0, (0.1 + 0.01j,))
    with pytest.raises(DomainError):
        PhaseShiftSet(1.0, ())


def test_wronskian_residual():
    assert asymptotic_wronskian_residual(0, 1.0, 0.3, P(0, 0.1), r=5.0) < 1e-14
    assert asymptotic_wronskian_residual(3, 1.0, 0.3, P(), r=5.0) < 1e-14
    # centrifugal remainder falls as 1/r^2
    res = [asymptotic_wronskian_residual(2, 1.0, 0.3, P(0, 0.1), r=r) for r in (10.0, 100.0, 1000.0)]
    expected = [2 * 0.1 * 6 * math.sin(0.3) / r**2 for r in (10.0, 100.0, 1000.0)]
    assert res == pytest.approx(expected, rel=1e-6)
    with pytest.raises(DomainError):
        asymptotic_wronskian_residual(0, 1.0, 0.3, P(), r=0.0)


def test_select_lmax():
    assert select_lmax(RadialPotential.zero(), 1.0, P()) == 0
    assert select_lmax(yukawa(1.0, 10.0), 1.0, P()) <= 2
    vals = [select_lmax(yukawa(1.0, 0.5), 1.0, P(), tail_tol=t) for t in (1e-1, 1e-2, 1e-3, 1e-4)]
    assert vals == sorted(vals)
    with pytest.raises(ConvergenceError):
        select_lmax(yukawa(1.0, 0.01), 1.0, P())
    with pytest.raises(DomainError):
        select_lmax(yukawa(), 1.0, P(), tail_tol=0.0)


def test_linear_in_coupling():
    s1 = [born_sin_delta(l, 1.0, yukawa(0.01), P()) for l in range(4)]
    s3 = [born_sin_delta(l, 1.0, yukawa(0.03), P()) for l in range(4)]
    assert s3 == pytest.approx([3 * v for v in s1], rel=1e-12)


@pytest.mark.parametrize("bp", [0.01, 0.1, 0.5])
def test_deformation_ratio(bp):
    for l in range(4):
        ratio = born_sin_delta(l, 1.3, yukawa(0.1), P(0.0, bp)) / born_sin_delta(l, 1.3, yukawa(0.1), P())
        assert ratio == pytest.approx(green_prefactor(1.3, P(0.0, bp)), rel=1e-12)


@pytest.mark.parametrize("lam", [5.0, 10.0])
def test_s_wave_cross_check_with_born_amplitude(lam):
    # short range: the s-wave phase alone reproduces the Born total cross-section
    k = 1.0
    pot = yukawa(0.05, lam)
    ps = born_phase_set(k, pot, P(), 0)
    born = integrate_angular(
        lambda th: np.array([dcs_from_amplitude(born_amplitude_yukawa(ScatteringGeometry(k, t), lam, P()))
                             for t in th]) / 0.05**-2, 64)
    assert total_cross_section(ps) == pytest.approx(born, rel=0.05)
