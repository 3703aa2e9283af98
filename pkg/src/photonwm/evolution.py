"""Single-photon dynamics: Hamiltonian, exact propagation, Maxwell split
and energy expectation values."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fieldcore import COORDINATE, MOMENTUM, FieldError, VectorField, transversality_error
from .transforms import TRANSVERSE_TOL, WeightExponent, invert_to_momentum, synthesize_coordinate_field
from .wavepackets import LongitudinalMode


def _fft(f: VectorField) -> np.ndarray:
    return np.fft.fftn(f.data, axes=(1, 2, 3))


def _ifft(spec: np.ndarray) -> np.ndarray:
    return np.fft.ifftn(spec, axes=(1, 2, 3))


def _sigmas(f: VectorField) -> np.ndarray:
    return np.array(f.helicities, dtype=float).reshape((-1, 1, 1, 1, 1))


def _check_transverse(f: VectorField):
    if f.space == MOMENTUM:
        err = transversality_error(f)
    else:
        spec = _fft(f)
        kdot = np.abs(np.einsum("...i,h...i->h...", f.grid.kvec, spec))
        scale = np.max(f.grid.kmag) * np.max(np.abs(spec))
        err = float(kdot.max() / scale) if scale > 0 else 0.0
    if err > TRANSVERSE_TOL:
        raise FieldError("input field is not transverse")


def spectral_curl(f: VectorField) -> np.ndarray:
    """curl of a coordinate field per helicity block, via FFT."""
    spec = _fft(f)
    return _ifft(1j * np.cross(np.broadcast_to(f.grid.kvec, spec.shape), spec))


def spectral_divergence(f: VectorField) -> np.ndarray:
    spec = _fft(f)
    return _ifft(1j * np.einsum("...i,h...i->h...", f.grid.kvec, spec)[..., None])[..., 0]


def apply_hamiltonian(f: VectorField) -> VectorField:
    """sigma curl in coordinate space; i sigma k x a in momentum space."""
    _check_transverse(f)
    sig = _sigmas(f)
    if f.space == MOMENTUM:
        kvec = np.broadcast_to(f.grid.kvec, f.data.shape)
        return f.with_data(1j * sig * np.cross(kvec, f.data))
    return f.with_data(sig * spectral_curl(f))


def _phase(f: VectorField, dt: float) -> np.ndarray:
    return np.exp(-1j * f.grid.kmag * dt)[None, ..., None]


def free_propagate(f: VectorField, dt: float) -> VectorField:
    """Multiply every k component by exp(-i|k| dt) and advance the stamp."""
    if dt == 0:
        return f
    if f.space == MOMENTUM:
        return f.with_data(f.data * _phase(f, dt), t=f.t + dt)
    return f.with_data(_ifft(_fft(f) * _phase(f, dt)), t=f.t + dt)


def time_derivative(f: VectorField, method: str = "spectral", h: float = 1e-4) -> np.ndarray:
    """d/dt of a positive-frequency field: spectral generator or central
    difference of the exact propagator."""
    if method == "spectral":
        if f.space == MOMENTUM:
            return f.data * (-1j * f.grid.kmag)[None, ..., None]
        return _ifft(_fft(f) * (-1j * f.grid.kmag)[None, ..., None])
    if method == "fd":
        return (free_propagate(f, h).data - free_propagate(f, -h).data) / (2 * h)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class MaxwellResidual:
    faraday: float  # || d_t psi_R - curl psi_I || / ||f||
    ampere: float  # || d_t psi_I + curl psi_R || / ||f||
    div_real: float
    div_imag: float

    def as_tuple(self):
        return (self.faraday, self.ampere, self.div_real, self.div_imag)

    def max(self) -> float:
        return max(self.as_tuple())


def _real_curl(grid, v: np.ndarray) -> np.ndarray:
    spec = np.fft.fftn(v, axes=(0, 1, 2))
    return np.fft.ifftn(1j * np.cross(grid.kvec, spec), axes=(0, 1, 2)).real


def _real_div(grid, v: np.ndarray) -> np.ndarray:
    spec = np.fft.fftn(v, axes=(0, 1, 2))
    return np.fft.ifftn(1j * np.einsum("...i,...i->...", grid.kvec, spec), axes=(0, 1, 2)).real


def maxwell_residual(f: VectorField, sigma=None, method: str = "spectral", h: float = 1e-4) -> MaxwellResidual:
    """Split f = psi_R + i sigma psi_I and check the real field equations.

    ``sigma`` (one per block) defaults to the stored helicity labels; pass
    the opposite sign to run the negative control.
    """
    if f.space != COORDINATE:
        raise FieldError("maxwell_residual expects a coordinate field")
    sig = f.helicities if sigma is None else tuple(np.broadcast_to(sigma, len(f.helicities)))
    dfdt = time_derivative(f, method, h)
    grid = f.grid
    norm = np.sqrt(grid.x_measure * np.sum(np.abs(f.data) ** 2))
    if norm == 0:
        return MaxwellResidual(0.0, 0.0, 0.0, 0.0)
    acc = np.zeros(4)
    for b, s in enumerate(sig):
        psi_r, psi_i = f.data[b].real, s * f.data[b].imag
        dr, di = dfdt[b].real, s * dfdt[b].imag
        r1 = dr - _real_curl(grid, psi_i)
        r2 = di + _real_curl(grid, psi_r)
        d1 = _real_div(grid, psi_r)
        d2 = _real_div(grid, psi_i)
        acc += [np.sum(r1**2), np.sum(r2**2), np.sum(d1**2), np.sum(d2**2)]
    vals = np.sqrt(grid.x_measure * acc) / norm
    return MaxwellResidual(*map(float, vals))


@dataclass(frozen=True)
class EnergyReport:
    momentum: float
    coordinate: float

    @property
    def difference(self) -> float:
        return abs(self.momentum - self.coordinate)


def energy_expectation(state) -> EnergyReport:
    """Energy from the momentum form sum |k||a|^2 and the local form sum |psi|^2.

    Accepts a momentum amplitude, a weight +1/2 coordinate field or a
    longitudinal mode (weight +1/2).
    """
    if isinstance(state, LongitudinalMode):
        if state.weight != 0.5:
            raise FieldError("energy locality holds for weight +1/2 only")
        g = state.grid
        c = state.prefactor * state.spectrum
        mom = float(g.dk / (2 * np.pi) * np.sum(g.k * np.abs(c) ** 2))
        coord = float(g.dt * np.sum(np.abs(state.samples) ** 2))
        return EnergyReport(mom, coord)
    if state.space == MOMENTUM:
        a = state
        f = synthesize_coordinate_field(a, WeightExponent.PLUS_HALF, a.t)
    else:
        if state.weight != 0.5:
            raise FieldError("energy locality holds for weight +1/2 only")
        f = state
        a = invert_to_momentum(f, 0.5)
    grid = a.grid
    mom = float(grid.k_measure * np.sum(grid.kmag[None, ..., None] * np.abs(a.data) ** 2))
    coord = float(grid.x_measure * np.sum(np.abs(f.data) ** 2))
    return EnergyReport(mom, coord)
