import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from photonwm.fieldcore import FieldError, KGrid3
from photonwm.multiphoton import (
    ModeBasis,
    NPhotonState,
    assemble_two_photon,
    assemble_two_photon_direct,
    collapse_at_detection,
    detection_amplitude,
    extraction_rule,
    joint_energy_expectation,
    n_photon_assemble,
    n_photon_propagate,
    n_photon_residual,
    n_photon_symmetrize,
    propagate_in_eigenframe,
    reduced_density_matrix,
    reduced_density_matrix_coordinate,
    symmetrize_coefficients,
    two_photon_propagate,
    two_photon_residual,
    two_time_evaluate,
    two_time_residual,
    wrong_trace_demo,
)
from photonwm.scenarios import hg_basis, orthonormal_random_basis, plane_wave_amplitude, random_symmetric
from photonwm.wavepackets import LongitudinalBasis, diagonalize_energy


@pytest.fixture(scope="module")
def basis():
    return hg_basis()


@pytest.fixture(scope="module")
def points():
    r = np.random.default_rng(3)
    return r.uniform(-3, 3, (6, 3)), r.uniform(-3, 3, (6, 3))


def mixed_plane_wave_basis():
    grid = KGrid3((8, 8, 8), (0.5, 0.5, 0.5))
    pws = [plane_wave_amplitude(grid, k, 1) for k in [(0, 0, 0.5), (0, 0.5, 1.0), (1.0, 0, 0.5)]]
    V, _ = np.linalg.qr(np.random.default_rng(9).normal(size=(3, 3)) + 1j * np.random.default_rng(8).normal(size=(3, 3)))
    amps = [sum((V[j, k] * pws[k] for k in range(1, 3)), V[j, 0] * pws[0]) for j in range(3)]
    return ModeBasis(amps)


def test_symmetrization():
    r = np.random.default_rng(0)
    st_ = symmetrize_coefficients(r.normal(size=(4, 4)))
    assert st_.symmetry_error == 0 and st_.norm2 == pytest.approx(1.0)
    with pytest.raises(FieldError, match="bosonic"):
        symmetrize_coefficients(np.array([[0, 1], [-1, 0]]))
    with pytest.raises(FieldError):
        symmetrize_coefficients(np.zeros((2, 2)))
    with pytest.raises(FieldError):
        symmetrize_coefficients(np.ones((2, 3)))


@given(st.integers(0, 10_000))
def test_exchange_symmetry(basis, points, seed):
    s = symmetrize_coefficients(random_symmetric(4, np.random.default_rng(seed)), basis)
    x1, x2 = points
    P = assemble_two_photon(s, x1, x2, 0.4)
    Q = assemble_two_photon(s, x2, x1, 0.4)
    assert np.max(np.abs(P - np.transpose(Q, (0, 2, 1, 4, 3)))) < 1e-12 * np.max(np.abs(P))


def test_direct_assembly_matches(basis, points, rng):
    s = symmetrize_coefficients(random_symmetric(4, rng), basis)
    x1, x2 = points
    P = assemble_two_photon(s, x1[:2], x2[:2])
    for p in range(2):
        np.testing.assert_allclose(P[p], assemble_two_photon_direct(s, x1[p], x2[p]), atol=1e-14)
    assert assemble_two_photon(s, x1[0], x2[0]).shape == (2, 2, 3, 3)
    with pytest.raises(FieldError):
        two_time_evaluate(s, x1, 0.0, x2[:3], 0.0)


def test_wave_equations(basis, points, rng):
    s = symmetrize_coefficients(random_symmetric(4, rng), basis)
    x1, x2 = points
    assert two_photon_residual(s, x1, x2, 0.7) < 1e-10
    assert two_time_residual(s, x1, -0.5, x2, 2.0).max() < 1e-10


def test_propagation_moves_time(basis, points, rng):
    s = symmetrize_coefficients(random_symmetric(4, rng), basis)
    x1, x2 = points
    later = two_photon_propagate(s, 1.5)
    np.testing.assert_allclose(assemble_two_photon(later, x1, x2), assemble_two_photon(s, x1, x2, 1.5))


def test_eigenframe_propagation_on_invariant_span(rng):
    b = mixed_plane_wave_basis()
    s = symmetrize_coefficients(random_symmetric(3, rng), b)
    d = diagonalize_energy(b.amplitudes)
    dt = 2.3
    C = propagate_in_eigenframe(s.C, d.energies, d.U, dt)
    moved = symmetrize_coefficients(C, b)
    x1, x2 = rng.uniform(-4, 4, (5, 3)), rng.uniform(-4, 4, (5, 3))
    np.testing.assert_allclose(assemble_two_photon(moved, x1, x2, 0.0), assemble_two_photon(s, x1, x2, dt), atol=1e-12)
    ev = np.linalg.eigvalsh(reduced_density_matrix(moved).rho)
    np.testing.assert_allclose(ev, np.linalg.eigvalsh(reduced_density_matrix(s).rho), atol=1e-12)


def test_purities():
    lb = LongitudinalBasis.first(3, 10.0, 2.0)
    c = np.array([0.6, 0.0, 0.8j])
    prod = reduced_density_matrix(symmetrize_coefficients(np.outer(c, c), lb))
    assert prod.purity == pytest.approx(1.0, abs=1e-12)
    assert prod.trace == pytest.approx(1.0, abs=1e-12)
    ent = reduced_density_matrix(symmetrize_coefficients(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]]), lb))
    assert ent.purity == pytest.approx(0.5, abs=1e-12)
    np.testing.assert_allclose(ent.eigenvalues, [0, 0.5, 0.5], atol=1e-12)
    assert ent.hermiticity_error == 0


def test_coordinate_trace_oracle(rng):
    g = KGrid3((10, 10, 10), (0.6, 0.6, 0.6))
    b = orthonormal_random_basis(g, (1, -1, 1), rng)
    s = symmetrize_coefficients(random_symmetric(3, rng), b)
    a = reduced_density_matrix(s).rho
    c = reduced_density_matrix_coordinate(s).rho
    assert np.max(np.abs(a - c)) < 1e-4


def test_non_orthonormal_basis_rejected():
    g = KGrid3((8, 8, 8), (0.5, 0.5, 0.5))
    pw = plane_wave_amplitude(g, (0, 0, 0.5), 1)
    b = ModeBasis([pw, pw * 2.0])
    with pytest.raises(FieldError, match="orthonormal"):
        reduced_density_matrix(symmetrize_coefficients(np.eye(2), b))


def test_naive_trace_deviation():
    narrow = wrong_trace_demo(symmetrize_coefficients(np.array([[0.3, 0.7], [0.7, 0.5j]]), LongitudinalBasis.first(2, 1e4, 1.0)))
    assert narrow.shape_difference < 1e-3
    g = KGrid3((8, 8, 8), (0.5, 0.5, 0.5))
    b = ModeBasis([plane_wave_amplitude(g, k, 1) for k in [(0, 0, 0.5), (0, 0, 1.5)]])
    broad = wrong_trace_demo(symmetrize_coefficients(np.array([[0.2, 1], [1, 0.4]]), b))
    assert broad.shape_difference > 1e-2
    assert broad.trace_ratio != pytest.approx(1.0)


def test_joint_energy_of_product_state(basis):
    c = np.array([0.6, 0, 0.8, 0])
    s = symmetrize_coefficients(np.outer(c, c), basis)
    H = basis.energy_matrix()
    assert joint_energy_expectation(s) == pytest.approx(np.real(c @ H @ c) ** 2, rel=1e-12)


def test_collapse_of_product_state(basis, points):
    c = np.array([0.6, 0.8j, 0, 0])
    s = symmetrize_coefficients(np.outer(c, c), basis)
    res = collapse_at_detection(s, points[0][0], 0.0, per_component=True, renormalize=True)
    # conditioned state is proportional to the single-photon factor
    overlap = abs(np.vdot(c, res.coefficients)) / (np.linalg.norm(c) * np.linalg.norm(res.coefficients))
    assert overlap == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.norm(res.direction) == pytest.approx(1.0)
    assert res.components.shape == (3, 4)


def test_extraction_rule(basis, points, rng):
    x1, x2 = points
    c = rng.normal(size=4) + 0j
    single = extraction_rule(c, basis, 1)
    np.testing.assert_allclose(single(x1, 0.2), np.tensordot(c, basis.evaluate(x1, 0.2), axes=1))
    C = random_symmetric(4, rng)
    pair = extraction_rule(C, basis, 2)
    np.testing.assert_allclose(pair(x1, x2, 0.0), assemble_two_photon(symmetrize_coefficients(C, basis), x1, x2, 0.0))
    with pytest.raises(FieldError):
        extraction_rule(c[:2], basis, 1)
    with pytest.raises(FieldError):
        extraction_rule(c, basis, 3)


def test_detection_decomposition(basis, points, rng):
    s = symmetrize_coefficients(random_symmetric(4, rng), basis)
    rep = detection_amplitude(s, *points)
    assert rep.closure_error < 1e-12 * np.max(np.abs(rep.psi))
    assert rep.b_route_error < 1e-12 * np.max(np.abs(basis.evaluate(points[0], 0.0)))
    assert rep.amplitude is rep.ee


def test_n_photon_states(basis, points, rng):
    C3 = rng.normal(size=(4, 4, 4)) + 1j * rng.normal(size=(4, 4, 4))
    s3 = n_photon_symmetrize(C3, basis)
    assert s3.n == 3 and s3.symmetry_error < 1e-15
    x1, x2 = points
    x3 = x1[::-1]
    assert max(n_photon_residual(s3, [x1, x2, x3], 0.3)) < 1e-10
    psi = n_photon_assemble(s3, [x1, x2, x3])
    swapped = n_photon_assemble(s3, [x2, x1, x3])
    assert np.max(np.abs(psi - np.transpose(swapped, (0, 2, 1, 3, 5, 4, 6)))) < 1e-12 * np.max(np.abs(psi))
    assert n_photon_propagate(s3, 1.0).t == 1.0
    s2 = n_photon_symmetrize(random_symmetric(4, rng), basis)
    np.testing.assert_allclose(n_photon_assemble(s2, [x1, x2]), assemble_two_photon(symmetrize_coefficients(s2.C, basis), x1, x2))
    with pytest.raises(FieldError, match="combinatorial"):
        n_photon_symmetrize(np.ones((2,) * 5), basis)
    with pytest.raises(FieldError):
        NPhotonState(basis, np.ones((3, 3)))
    with pytest.raises(FieldError):
        n_photon_assemble(s3, [x1, x2])
