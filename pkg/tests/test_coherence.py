import numpy as np
import pytest

from photonwm.coherence import (
    coherence_from_state,
    correlation_weights,
    default_pair_points,
    max_block_difference,
    rs_coherence,
    rs_coherence_direct,
    rs_evolution_residual,
    two_photon_pair_field,
    wolf_first_order_residual,
    wolf_second_order_residual,
)
from photonwm.fieldcore import FieldError
from photonwm.multiphoton import SinglePhotonState, symmetrize_coefficients
from photonwm.scenarios import hg_basis, random_symmetric


@pytest.fixture(scope="module")
def basis():
    return hg_basis()


@pytest.fixture(scope="module")
def state(basis):
    return symmetrize_coefficients(random_symmetric(len(basis), np.random.default_rng(21)), basis)


@pytest.fixture(scope="module")
def cset(state, basis):
    return coherence_from_state(state, x1=default_pair_points(basis.grid, 2) * 0.3)


def test_single_photon_tensor_is_outer_product(basis):
    c = np.array([0.3, 0.5j, -0.6, 0.2])
    c = c / np.linalg.norm(c)
    x = np.array([[0.2, -0.4, 0.1], [1.0, 0.5, -0.7]])
    cs = coherence_from_state(SinglePhotonState(basis, c), x1=x)
    psi = np.tensordot(c, basis.evaluate(x, 0.0), axes=1) / np.sqrt(2)  # E part
    expect = np.einsum("pr,qs->pqrs", psi.conj(), psi)
    np.testing.assert_allclose(cs.E, expect, atol=1e-15)


def test_weights_are_hermitian(state):
    _, W = correlation_weights(state)
    np.testing.assert_allclose(W, W.conj().T, atol=1e-15)
    assert np.trace(W).real == pytest.approx(2.0)
    with pytest.raises(FieldError):
        correlation_weights(object())


def test_hermiticity_pairing(cset, state):
    assert cset.hermiticity_error() < 1e-15
    other = coherence_from_state(state, x1=cset.x1, t1=0.0, t2=0.5)
    with pytest.raises(FieldError):
        other.hermiticity_error()


@pytest.mark.parametrize("slot", [1, 2])
def test_wolf_equations(cset, slot):
    first = wolf_first_order_residual(cset, slot)
    assert max(first.values()) < 1e-8
    assert wolf_second_order_residual(cset, slot) < 1e-8


def test_swapped_tensors_fail_first_order(cset):
    bad = wolf_first_order_residual(cset.swapped("M", "N"), 1)
    assert max(bad.values()) > 1e-1


@pytest.mark.parametrize("slot", [1, 2])
def test_rs_matrix_evolution(cset, state, slot):
    g = rs_coherence(cset)
    assert max_block_difference(g, rs_coherence_direct(cset)) < 1e-12
    r = rs_evolution_residual(g, slot)
    assert r.evolution < 1e-10 and r.divergence < 1e-12
    phi = rs_evolution_residual(two_photon_pair_field(state, cset.x1), slot)
    assert abs(r.evolution - phi.evolution) < 1e-10


def test_sign_convention_control(cset):
    assert rs_evolution_residual(rs_coherence_direct(cset, +1), 1).evolution > 1e-1


def test_rs_values_shape(cset):
    v = rs_coherence(cset).values()
    n = len(cset.x1)
    assert v.shape == (2, 2, n, n, 3, 3)
