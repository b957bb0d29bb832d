import math

import numpy as np
import pytest

from minlen_scatter.errors import ConvergenceError, DomainError
from minlen_scatter.partial_waves import legendre_polynomial
from minlen_scatter.quadrature import integrate_angular, integrate_radial_oscillatory

GRID = np.logspace(-1, 1, 5)


def sin2_family(k, lam):
    f = lambda r: np.exp(-lam * r) * np.sin(k * r) ** 2 / r
    return f, 0.25 * math.log1p(4 * k * k / (lam * lam))


def sine_family(q, lam):
    return (lambda r: np.exp(-lam * r) * np.sin(q * r)), q / (q * q + lam * lam)


def test_examples():
    f, exact = sin2_family(1.0, 1.0)
    assert exact == pytest.approx(0.25 * math.log(5))
    res = integrate_radial_oscillatory(f, 2.0, 1.0)
    assert res.value == pytest.approx(0.402359478108525, rel=1e-12)
    f, exact = sine_family(1.0, 1.0)
    assert integrate_radial_oscillatory(f, 1.0, 1.0).value == pytest.approx(0.5, rel=1e-12)
    zero = integrate_radial_oscillatory(lambda r: np.zeros_like(r), 1.0, 1.0)
    assert zero.value == 0.0 and zero.abs_error_estimate == 0.0 and zero.converged


@pytest.mark.parametrize("k", GRID)
@pytest.mark.parametrize("lam", GRID)
def test_error_estimate_is_honest(k, lam):
    for f, exact, wave in (sin2_family(k, lam) + (2 * k,), sine_family(k, lam) + (k,)):
        res = integrate_radial_oscillatory(f, wave, 1 / lam)
        achieved = abs(res.value - exact)
        assert res.converged
        assert achieved <= 1e-10 * abs(exact)
        assert achieved <= 10 * res.abs_error_estimate + 1e-300


def test_compact_support_upper_limit():
    # int_0^2 sin(3r) dr
    res = integrate_radial_oscillatory(lambda r: np.sin(3 * r), 3.0, 2.0, upper=2.0)
    assert res.value == pytest.approx((1 - math.cos(6.0)) / 3, rel=1e-13)


def test_divergent_integrand_fails_fast():
    with pytest.raises((ConvergenceError, DomainError)):
        integrate_radial_oscillatory(lambda r: np.exp(-r) * np.cos(r) ** 2 / r, 2.0, 1.0)


def test_bad_arguments():
    f = lambda r: np.exp(-r)
    with pytest.raises(DomainError):
        integrate_radial_oscillatory(f, 0.0, 1.0)
    with pytest.raises(DomainError):
        integrate_radial_oscillatory(f, 1.0, 1.0, rel_tol=0.0)


def test_deterministic():
    f, _ = sin2_family(3.0, 0.2)
    a = integrate_radial_oscillatory(f, 6.0, 5.0)
    b = integrate_radial_oscillatory(f, 6.0, 5.0)
    assert a == b


def test_angular_examples():
    assert integrate_angular(lambda t: 1.0, 2) == pytest.approx(4 * math.pi, rel=1e-15)
    assert integrate_angular(np.cos, 4) == pytest.approx(0.0, abs=1e-15)
    p2sq = lambda t: legendre_polynomial(2, np.cos(t)) ** 2
    assert integrate_angular(p2sq, 3) == pytest.approx(4 * math.pi / 5, rel=1e-14)
    with pytest.raises(DomainError):
        integrate_angular(np.cos, 1)


@pytest.mark.parametrize("n", [2, 3, 6])
def test_angular_exact_to_degree(n):
    deg = 2 * n - 1
    # int_{-1}^{1} x^deg dx = 0 for odd degree; check the even one below too
    assert integrate_angular(lambda t: np.cos(t) ** deg, n) == pytest.approx(0.0, abs=1e-14)
    even = deg - 1
    exact = 2 * math.pi * 2 / (even + 1)
    assert integrate_angular(lambda t: np.cos(t) ** even, n) == pytest.approx(exact, rel=1e-14)
