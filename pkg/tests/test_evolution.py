import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from photonwm.evolution import (
    apply_hamiltonian,
    energy_expectation,
    free_propagate,
    maxwell_residual,
    spectral_divergence,
    time_derivative,
)
from photonwm.fieldcore import FieldError, VectorField, stack_helicities
from photonwm.scenarios import default_parameters, random_amplitude
from photonwm.transforms import synthesize_coordinate_field
from photonwm.wavepackets import WeightExponent, longitudinal_mode, monochromatic_rs_mode


@given(st.integers(0, 1000), st.sampled_from([1, -1]), st.floats(-3, 3))
def test_maxwell_split_holds(grid16, seed, sigma, t):
    a = random_amplitude(grid16, sigma, np.random.default_rng(seed))
    f = synthesize_coordinate_field(a, 0.5, t)
    assert maxwell_residual(f).max() < 1e-12
    assert maxwell_residual(f, sigma=-sigma).max() > 1e-1


def test_maxwell_with_both_helicities(grid16, rng):
    a = stack_helicities([random_amplitude(grid16, 1, rng), random_amplitude(grid16, -1, rng)])
    f = synthesize_coordinate_field(a, -0.5, 0.3)
    assert maxwell_residual(f).max() < 1e-12
    assert maxwell_residual(f, method="fd", h=1e-3).max() < 1e-5


def test_rs_plane_wave(grid16):
    for s in (1, -1):
        f = monochromatic_rs_mode(grid16.kvec[3, 1, 14], s, grid16, t=0.7)
        assert maxwell_residual(f).max() < 1e-12
        assert np.max(np.abs(spectral_divergence(f))) < 1e-12


def test_hamiltonian_generates_time_evolution(grid16, rng):
    a = random_amplitude(grid16, -1, rng)
    for f in (a, synthesize_coordinate_field(a, 0.5, 0.2)):
        lhs = 1j * time_derivative(f)
        np.testing.assert_allclose(apply_hamiltonian(f).data, lhs, atol=1e-12 * np.abs(lhs).max())


def test_propagation_group_and_norm(grid16, rng):
    a = random_amplitude(grid16, 1, rng)
    f = synthesize_coordinate_field(a, 0.5)
    two = free_propagate(free_propagate(f, 0.4), 0.9)
    one = free_propagate(f, 1.3)
    np.testing.assert_allclose(two.data, one.data, atol=1e-13)
    np.testing.assert_allclose(one.data, synthesize_coordinate_field(a, 0.5, 1.3).data, atol=1e-13)
    assert one.norm2() == pytest.approx(f.norm2(), rel=1e-13)
    assert free_propagate(f, 0) is f
    with pytest.raises(ValueError):
        time_derivative(f, "euler")


def test_non_transverse_rejected(grid16, rng):
    data = rng.normal(size=(1,) + grid16.shape + (3,)) + 0j
    with pytest.raises(FieldError):
        apply_hamiltonian(VectorField(grid16, data))
    with pytest.raises(FieldError):
        maxwell_residual(VectorField(grid16, data))


def test_energy_locality(grid16, rng):
    a = random_amplitude(grid16, 1, rng)
    e = energy_expectation(a)
    assert e.difference < 1e-12 * e.momentum
    e2 = energy_expectation(synthesize_coordinate_field(a, 0.5, 2.0))
    assert e2.momentum == pytest.approx(e.momentum, rel=1e-12)
    with pytest.raises(FieldError):
        energy_expectation(synthesize_coordinate_field(a, -0.5))


def test_energy_of_longitudinal_mode():
    kbar, w = default_parameters()
    e = energy_expectation(longitudinal_mode(1, kbar, w))
    assert e.momentum == pytest.approx(kbar, rel=1e-12)
    assert e.difference < 1e-10 * kbar
    with pytest.raises(FieldError):
        energy_expectation(longitudinal_mode(1, kbar, w, WeightExponent.MINUS_HALF))
