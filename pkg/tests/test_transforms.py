import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from photonwm.fieldcore import FieldError, KGrid3, VectorField, from_scalar_amplitude
from photonwm.scenarios import random_amplitude
from photonwm.transforms import (
    WeightExponent,
    from_bb_normalization,
    invert_to_momentum,
    lorentz_boost_z,
    multiply_by_kpow,
    packet_center_kz,
    synthesize_coordinate_field,
    to_bb_normalization,
)
from photonwm.wavepackets import build_hg_coefficients

weights = st.sampled_from([-0.5, 0.0, 0.5])


def direct_sum(a, w, x, t):
    """Explicit sum_k mu |k|^w a(k) exp(i(k.x - |k| t)) at one point."""
    g = a.grid
    k = g.kvec.reshape(-1, 3)
    km = g.kmag.reshape(-1)
    amp = a.data[0].reshape(-1, 3)
    keep = km > 0
    fac = km[keep] ** w * np.exp(1j * (k[keep] @ x - km[keep] * t))
    return g.k_measure * (fac[:, None] * amp[keep]).sum(0)


@given(weights, st.floats(-2, 2), st.integers(0, 7), st.integers(0, 7), st.integers(0, 7))
def test_synthesis_matches_direct_fourier_sum(grid8, w, t, i, j, l):
    a = random_amplitude(grid8, 1, np.random.default_rng(i + 8 * j))
    psi = synthesize_coordinate_field(a, w, t)
    x = grid8.xvec[i, j, l]
    np.testing.assert_allclose(psi.data[0, i, j, l], direct_sum(a, w, x, t), atol=1e-12)
    assert psi.weight == w and psi.t == t


@given(weights, st.floats(-3, 3), st.sampled_from([1, -1]))
def test_inversion_recovers_amplitude(grid8, w, t, sigma):
    a = random_amplitude(grid8, sigma, np.random.default_rng(5))
    back = invert_to_momentum(synthesize_coordinate_field(a, w, t))
    np.testing.assert_allclose(back.data, a.data, atol=1e-12 * np.abs(a.data).max())


def test_weight_exponent_values():
    assert float(WeightExponent.PLUS_HALF) == 0.5
    with pytest.raises(ValueError):
        synthesize_coordinate_field(VectorField.zeros(KGrid3(4, 1.0)), 0.25)


def test_synthesis_rejects_bad_inputs(grid8, rng):
    a = VectorField(grid8, rng.normal(size=(1,) + grid8.shape + (3,)) + 0j)
    with pytest.raises(FieldError):
        synthesize_coordinate_field(a)
    f = synthesize_coordinate_field(random_amplitude(grid8, 1, rng))
    with pytest.raises(FieldError):
        synthesize_coordinate_field(f)
    alpha = np.zeros(grid8.shape, complex)
    alpha[0, 0, 0] = 1.0
    # zero vector at k = 0 times a polarization that vanishes there: field is zero
    assert synthesize_coordinate_field(from_scalar_amplitude(grid8, alpha, 1), -0.5).norm2() == 0


def test_bb_normalization_round_trip(grid8, rng):
    a = random_amplitude(grid8, -1, rng)
    bb = to_bb_normalization(a)
    energy = grid8.k_measure * np.sum(grid8.kmag[..., None] * np.abs(a.data[0]) ** 2)
    assert bb.norm2() == pytest.approx(energy, rel=1e-13)
    np.testing.assert_allclose(from_bb_normalization(bb).data, a.data, atol=1e-14)
    np.testing.assert_allclose(multiply_by_kpow(a, 0).data, a.data)


@pytest.fixture(scope="module")
def boost_packet():
    grid = KGrid3((24, 24, 512), (0.5, 0.5, 0.0625))
    return build_hg_coefficients(0, 0, 0, 1.0, 1.0, 1.0, 10.0, grid).amplitude()


def test_boost_preserves_norm_and_shifts_center(boost_packet):
    a = boost_packet
    for eta in (0.5, 0.3):
        b = lorentz_boost_z(a, eta)
        assert abs(b.norm2() - a.norm2()) < 1e-6
        assert packet_center_kz(b) / packet_center_kz(a) == pytest.approx(math.exp(-eta), abs=1e-6)


def test_boost_round_trip_and_identity(boost_packet):
    a = boost_packet
    assert lorentz_boost_z(a, 0.0) is a
    back = lorentz_boost_z(lorentz_boost_z(a, 0.4), -0.4)
    assert np.max(np.abs(back.data - a.data)) < 1e-4 * np.max(np.abs(a.data))


def test_boost_alias_error():
    grid = KGrid3((24, 24, 128), (0.5, 0.5, 0.25))
    a = build_hg_coefficients(0, 0, 0, 1.0, 1.0, 1.0, 10.0, grid).amplitude()
    with pytest.raises(FieldError, match="grid too small"):
        lorentz_boost_z(a, -1.5)
