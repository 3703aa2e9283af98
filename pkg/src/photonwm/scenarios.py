"""Standard parameter sets, bases and states used by the suites and CLI."""

from __future__ import annotations

import numpy as np

from .fieldcore import KGrid3, UnitsPolicy, VectorField, from_scalar_amplitude
from .multiphoton import ModeBasis
from .wavepackets import build_hg_coefficients

DEFAULT_LAMBDA_NM = 810.0
DEFAULT_TAU_FS = 60.0


def default_parameters(lambda_nm: float = DEFAULT_LAMBDA_NM, tau_fs: float = DEFAULT_TAU_FS) -> tuple[float, float]:
    """(kbar in 1/um, w_z = c tau in um)."""
    return UnitsPolicy.wavenumber_from_nm(lambda_nm), UnitsPolicy.length_from_fs(tau_fs)


def band_mask(grid: KGrid3, frac: float = 0.6) -> np.ndarray:
    """k != 0 and |k| below frac times the smallest Nyquist wave number."""
    kny = min(n * d / 2 for n, d in zip(grid.n, grid.dk))
    return (grid.kmag > 0) & (grid.kmag < frac * kny)


def random_amplitude(grid: KGrid3, sigma: int, rng: np.random.Generator, frac: float = 0.6) -> VectorField:
    """Random band-limited single-helicity amplitude with unit norm."""
    alpha = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    alpha = alpha * band_mask(grid, frac)
    a = from_scalar_amplitude(grid, alpha, sigma)
    return a * (1.0 / np.sqrt(a.norm2()))


def orthonormal_random_basis(grid: KGrid3, sigmas, rng: np.random.Generator, frac: float = 0.6) -> ModeBasis:
    """Gram-Schmidt over random amplitudes (orthonormal in the flat product)."""
    out: list[VectorField] = []
    for s in sigmas:
        a = random_amplitude(grid, s, rng, frac)
        for b in out:
            if b.helicities == a.helicities:
                ov = grid.k_measure * np.vdot(b.data, a.data)
                a = a - b * ov
        a = a * (1.0 / np.sqrt(a.norm2()))
        out.append(a)
    return ModeBasis(out)


def plane_wave_amplitude(grid: KGrid3, k, sigma: int) -> VectorField:
    """Unit-norm single grid component at wave vector k."""
    idx = grid.index_of(k)
    alpha = np.zeros(grid.shape, complex)
    alpha[idx] = 1.0 / np.sqrt(grid.k_measure)
    return from_scalar_amplitude(grid, alpha, sigma)


# a small anisotropic grid that resolves HG modes with kbar w_z = 12
HG_GRID = KGrid3((28, 28, 80), (0.25, 0.25, 0.125))
HG_KBAR = 3.0
HG_WIDTHS = (2.0, 2.0, 4.0)
HG_LABELS = ((0, 0, 0, 1), (1, 0, 0, 1), (0, 1, 0, -1), (0, 0, 1, -1))


def hg_basis(labels=HG_LABELS, grid: KGrid3 = HG_GRID, kbar: float = HG_KBAR, widths=HG_WIDTHS) -> ModeBasis:
    amps, names = [], []
    for l, m, n, s in labels:
        c = build_hg_coefficients(l, m, n, *widths, kbar, grid, sigma=s)
        amps.append(c.amplitude())
        names.append(f"hg{l}{m}{n}{'+' if s > 0 else '-'}")
    return ModeBasis(amps, names)


def random_symmetric(n: int, rng: np.random.Generator) -> np.ndarray:
    C = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    C = C + C.T
    return C / np.linalg.norm(C)
