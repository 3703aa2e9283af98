import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from photonwm import _accel

pytestmark = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


def hermite_function_reference(m, x):
    c = np.zeros(m + 1)
    c[m] = 1.0
    norm = 1.0 / math.sqrt(2.0**m * math.factorial(m) * math.sqrt(math.pi))
    return norm * np.polynomial.hermite.hermval(x, c) * np.exp(-x * x / 2)


@pytest.mark.parametrize("impl", ["numpy_impl", "numba_impl"])
def test_hermite_functions_match_polynomial_reference(impl):
    x = np.linspace(-6, 6, 41)
    tab = getattr(_accel, impl).hermite_functions(15, x)
    for m in range(16):
        np.testing.assert_allclose(tab[m], hermite_function_reference(m, x), rtol=1e-11, atol=1e-13)


def test_hermite_functions_stay_finite_at_high_order():
    x = np.linspace(-15, 15, 301)
    tab = _accel.numpy_impl.hermite_functions(60, x)
    assert np.all(np.isfinite(tab))
    # orthonormality by a fine Riemann sum
    G = (tab @ tab.T) * (x[1] - x[0])
    assert np.max(np.abs(G - np.eye(61))) < 1e-10


@given(st.integers(1, 12), st.integers(1, 9), st.floats(-3, 3))
def test_dft_eval_paths_agree(nk, nt, t0):
    r = np.random.default_rng(nk * 31 + nt)
    k = np.sort(r.uniform(0.1, 5, nk))
    amp = r.normal(size=nk) + 1j * r.normal(size=nk)
    t = t0 + np.linspace(0, 2, nt)
    a = _accel.numpy_impl.dft_eval(k, amp, t)
    b = _accel.numba_impl.dft_eval(k, amp, t)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


@given(st.integers(1, 20), st.integers(1, 6), st.integers(1, 4), st.floats(-2, 2))
def test_point_eval_paths_agree(K, P, C, t):
    r = np.random.default_rng(K * 101 + P * 7 + C)
    kvec = r.normal(size=(K, 3))
    amp = r.normal(size=(K, C)) + 1j * r.normal(size=(K, C))
    x = r.normal(size=(P, 3))
    a = _accel.numpy_impl.point_eval(kvec, amp, x, t)
    b = _accel.numba_impl.point_eval(kvec, amp, x, t)
    np.testing.assert_allclose(a, b, rtol=1e-11, atol=1e-11)


def test_direct_nonlocal_paths_agree(rng):
    n = (4, 3, 5)
    f = rng.normal(size=n + (3,)) + 1j * rng.normal(size=n + (3,))
    g = rng.normal(size=n + (3,)) + 1j * rng.normal(size=n + (3,))
    kern = rng.normal(size=n)
    a = _accel.numpy_impl.direct_nonlocal(f, g, kern)
    b = _accel.numba_impl.direct_nonlocal(f, g, kern)
    assert abs(a - b) < 1e-10 * abs(a)


def test_direct_nonlocal_matches_brute_force(rng):
    n = (3, 2, 2)
    f = rng.normal(size=n + (3,)) + 1j * rng.normal(size=n + (3,))
    g = rng.normal(size=n + (3,)) + 1j * rng.normal(size=n + (3,))
    kern = rng.normal(size=n)
    total = 0j
    for i in np.ndindex(n):
        for j in np.ndindex(n):
            d = tuple((a - b) % s for a, b, s in zip(i, j, n))
            total += kern[d] * np.vdot(f[i], g[j])
    assert abs(_accel.direct_nonlocal(f, g, kern) - total) < 1e-10 * abs(total)


def test_active_namespace_follows_flag():
    assert _accel.active() is (_accel.numba_impl if _accel.USE_NUMBA else _accel.numpy_impl)
