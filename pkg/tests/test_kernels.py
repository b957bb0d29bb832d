"""Compiled and pure-Python kernels must agree bit for bit."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minlen_scatter import kernels
from minlen_scatter.kernels import backends

BACKENDS = backends()
needs_both = pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled extension not built")

xs_pos = st.lists(st.floats(1e-3, 200.0), min_size=1, max_size=40).map(np.array)
xs_unit = st.lists(st.floats(-1.0, 1.0), min_size=1, max_size=40).map(np.array)


def test_backend_flag():
    assert kernels.BACKEND in BACKENDS


@needs_both
@settings(max_examples=60, deadline=None)
@given(lmax=st.integers(0, 64), x=xs_pos)
def test_bessel_tables_identical(lmax, x):
    py, c = BACKENDS["python"], BACKENDS["compiled"]
    s, co = np.sin(x), np.cos(x)
    assert np.array_equal(py.spherical_jn_table(lmax, x, s, co), c.spherical_jn_table(lmax, x, s, co))
    assert np.array_equal(py.spherical_yn_table(lmax, x, s, co), c.spherical_yn_table(lmax, x, s, co))


@needs_both
@settings(max_examples=60, deadline=None)
@given(lmax=st.integers(0, 40), x=xs_unit, seed=st.integers(0, 2**32 - 1))
def test_legendre_identical(lmax, x, seed):
    py, c = BACKENDS["python"], BACKENDS["compiled"]
    assert np.array_equal(py.legendre_table(lmax, x), c.legendre_table(lmax, x))
    rng = np.random.default_rng(seed)
    cr, ci = rng.normal(size=lmax + 1), rng.normal(size=lmax + 1)
    a, b = py.legendre_series(cr, ci, x), c.legendre_series(cr, ci, x)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_empty_series(name):
    re, im = BACKENDS[name].legendre_series(np.zeros(0), np.zeros(0), np.array([0.3]))
    assert re[0] == 0.0 and im[0] == 0.0


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_series_matches_table(name):
    mod = BACKENDS[name]
    x = np.linspace(-1, 1, 11)
    c = np.arange(1.0, 8.0)
    re, _ = mod.legendre_series(c, np.zeros_like(c), x)
    assert np.allclose(re, c @ mod.legendre_table(6, x), rtol=1e-14, atol=1e-14)
