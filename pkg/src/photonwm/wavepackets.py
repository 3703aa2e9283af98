"""Hermite-Gaussian wave-packet modes, their duals, energy matrices and
monochromatic eigenmodes.

3D modes are vector fields on a ``KGrid3``. Longitudinal (1D) modes are
scalar functions of retarded time sampled on a periodic window whose
k nodes are integer multiples of 2 pi / T, which makes the time quadrature
of products exact.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _accel
from .fieldcore import (
    COORDINATE,
    MOMENTUM,
    FieldError,
    KGrid3,
    VectorField,
    circular_polarization_vector,
    from_scalar_amplitude,
    require_space,
    stack_helicities,
)
from .innerprod import momentum_scalar_product, nonlocal_scalar_product
from .transforms import WeightExponent, synthesize_coordinate_field

MAX_HERMITE_ORDER = 60
NORM_TOL = 1e-10


class RegimeWarning(UserWarning):
    """k-bar times w_z is small enough that the k > 0 truncation matters."""


# ---------------------------------------------------------------------------
# Hermite-Gaussian amplitudes
# ---------------------------------------------------------------------------


def hermite_gaussian_table(mmax: int, w: float, k) -> np.ndarray:
    """Amplitudes for orders 0..mmax, shape (mmax + 1,) + shape(k)."""
    if mmax > MAX_HERMITE_ORDER:
        raise FieldError("recurrence accuracy not guaranteed")
    if mmax < 0 or w <= 0:
        raise FieldError("need m >= 0 and w > 0")
    k = np.asarray(k, dtype=float)
    h = _accel.hermite_functions(mmax, (w * k).ravel()).reshape((mmax + 1,) + k.shape)
    return np.sqrt(2 * np.pi * w) * h


def hermite_gaussian_amplitude(m: int, w: float, k):
    """Normalized so that int dk/(2 pi) psi_m(k)^2 = 1."""
    out = hermite_gaussian_table(int(m), w, k)[int(m)]
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# 3D modes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModeCoefficients:
    """Sampled U_j(k) for a single-helicity wave-packet mode."""

    label: tuple[int, ...]
    sigma: int
    grid: KGrid3
    U: np.ndarray
    kbar: float
    widths: tuple[float, float, float]

    @property
    def norm2(self) -> float:
        return float(self.grid.k_measure * np.sum(np.abs(self.U) ** 2))

    def amplitude(self) -> VectorField:
        return from_scalar_amplitude(self.grid, self.U, self.sigma)


def check_regime(kbar: float, wz: float):
    prod = kbar * wz
    if prod < 3:
        raise FieldError(f"kbar*w_z = {prod:.3g} is below 3; k > 0 truncation invalid")
    if prod < 10:
        warnings.warn(f"kbar*w_z = {prod:.3g} is below 10", RegimeWarning, stacklevel=3)


def build_hg_coefficients(
    l: int,
    m: int,
    n: int,
    wx: float,
    wy: float,
    wz: float,
    kbar: float,
    grid: KGrid3,
    sigma: int = 1,
    norm_tol: float = NORM_TOL,
) -> ModeCoefficients:
    """U(k) = psi_l(kx) psi_m(ky) psi_n(kz - kbar) sampled on the grid."""
    check_regime(kbar, wz)
    kx, ky, kz = grid.axes_k
    ux = hermite_gaussian_amplitude(l, wx, kx)
    uy = hermite_gaussian_amplitude(m, wy, ky)
    uz = hermite_gaussian_amplitude(n, wz, kz - kbar)
    U = ux[:, None, None] * uy[None, :, None] * uz[None, None, :]
    U[grid.kmag == 0] = 0.0
    coeffs = ModeCoefficients((l, m, n), int(sigma), grid, U, float(kbar), (wx, wy, wz))
    if abs(coeffs.norm2 - 1.0) > norm_tol:
        raise FieldError(f"sampled coefficients have norm {coeffs.norm2:.12f}; refine or enlarge the grid")
    return coeffs


@dataclass(frozen=True, eq=False)
class WavePacketMode:
    coefficients: ModeCoefficients
    amplitude: VectorField
    mode: VectorField
    dual: VectorField


def wave_packet_mode(coeffs: ModeCoefficients, t: float = 0.0) -> WavePacketMode:
    a = coeffs.amplitude()
    return WavePacketMode(
        coeffs,
        a,
        synthesize_coordinate_field(a, WeightExponent.PLUS_HALF, t),
        synthesize_coordinate_field(a, WeightExponent.MINUS_HALF, t),
    )


def _as_amplitude(mode) -> VectorField:
    if isinstance(mode, WavePacketMode):
        return mode.amplitude
    if isinstance(mode, ModeCoefficients):
        return mode.amplitude()
    require_space(mode, MOMENTUM)
    return mode


def embed_helicities(a: VectorField, helicities=(1, -1)) -> VectorField:
    """Place the blocks of ``a`` into a field carrying ``helicities``."""
    if a.helicities == tuple(helicities):
        return a
    data = np.zeros((len(helicities),) + a.data.shape[1:], complex)
    for h, s in enumerate(a.helicities):
        data[list(helicities).index(s)] = a.data[h]
    return a.with_data(data, helicities=tuple(helicities))


def _common_helicities(fields: Sequence[VectorField]) -> list[VectorField]:
    hel = {f.helicities for f in fields}
    if len(hel) == 1:
        return list(fields)
    return [embed_helicities(f) for f in fields]


# ---------------------------------------------------------------------------
# energy matrix and eigenmodes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnergyMatrix:
    H: np.ndarray

    @property
    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.H - self.H.conj().T)))


def energy_matrix(modes) -> EnergyMatrix:
    """H_jk = sum_k mu |k| U_j^* U_k, i.e. the overlap of mode_j and mode_k."""
    if isinstance(modes, LongitudinalBasis):
        return EnergyMatrix(modes.energy_matrix())
    amps = _common_helicities([_as_amplitude(m) for m in modes])
    grid = amps[0].grid
    if any(a.grid != grid for a in amps):
        raise FieldError("grid mismatch")
    flat = np.stack([a.data.reshape(len(a.helicities), -1, 3) for a in amps])
    weight = np.broadcast_to(grid.kmag.reshape(-1)[None, :, None], flat.shape[1:])
    H = grid.k_measure * np.einsum("jhpi,hpi,khpi->jk", flat.conj(), weight, flat)
    return EnergyMatrix(H)


@dataclass(frozen=True, eq=False)
class EnergyDiagonalization:
    energies: np.ndarray
    U: np.ndarray
    eigenmodes: list
    condition: float


def diagonalize_energy(modes) -> EnergyDiagonalization:
    """Unitary diagonalization of the energy matrix (numpy eigh)."""
    H = energy_matrix(modes).H
    Hs = 0.5 * (H + H.conj().T)
    try:
        vals, U = np.linalg.eigh(Hs)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise FieldError(f"diagonalization failed: {exc}") from exc
    cond = float(abs(vals).max() / abs(vals).min()) if np.all(vals != 0) else np.inf
    if isinstance(modes, LongitudinalBasis):
        eig = [U[:, j] @ modes.spectra for j in range(len(vals))]
    else:
        amps = _common_helicities([_as_amplitude(m) for m in modes])
        eig = [expand_state(U[:, j], amps) for j in range(len(vals))]
    return EnergyDiagonalization(vals, U, eig, cond)


def monochromatic_rs_mode(
    k, sigma: int, grid: KGrid3, normalized: bool = False, t: float = 0.0
) -> VectorField:
    """Box eigenmode i sqrt(omega) e_{k,sigma} exp(i(k.x - omega t)) / sqrt(V).

    Its overlap norm is omega, and 1 when ``normalized``; ``k`` must be a
    grid wave vector.
    """
    k = np.asarray(k, dtype=float)
    if not np.any(k):
        raise FieldError("zero wave vector")
    grid.index_of(k)
    omega = float(np.linalg.norm(k))
    e = circular_polarization_vector(k, sigma)
    amp = 1j * (1.0 if normalized else np.sqrt(omega)) / np.sqrt(grid.volume)
    phase = np.exp(1j * (grid.xvec @ k - omega * t))
    data = amp * phase[..., None] * e
    return VectorField(grid, data[None], (int(sigma),), t, COORDINATE, 0.5)


def expand_state(B, modes) -> VectorField:
    """Linear combination sum_j B_j mode_j of fields on a common grid."""
    B = np.asarray(B, dtype=complex)
    fields = [m.mode if isinstance(m, WavePacketMode) else m for m in modes]
    if len(B) != len(fields):
        raise FieldError("length mismatch between coefficients and modes")
    fields = _common_helicities(fields)
    data = np.tensordot(B, np.stack([f.data for f in fields]), axes=1)
    return fields[0].with_data(data)


def project_coefficients(psi: VectorField, modes) -> np.ndarray:
    """B_j = (mode_j || psi) with the non-local (or momentum) product."""
    fields = [m.mode if isinstance(m, WavePacketMode) else m for m in modes]
    if psi.space == COORDINATE:
        prod = nonlocal_scalar_product
    else:
        prod = momentum_scalar_product
    out = []
    for f in fields:
        f2, p2 = _common_helicities([f, psi]) if f.helicities != psi.helicities else (f, psi)
        out.append(prod(f2, p2))
    return np.array(out)


# ---------------------------------------------------------------------------
# longitudinal (retarded-time) modes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LongitudinalGrid:
    """k nodes i*dk (i integer, k > 0) and a periodic retarded-time window.

    The window is [-T/2, T/2) with T = 2 * window * w and dk = 2 pi / T.
    """

    kbar: float
    w: float
    i_min: int
    i_max: int
    n_t: int
    window: float

    @cached_property
    def T(self) -> float:
        return 2.0 * self.window * self.w

    @cached_property
    def dk(self) -> float:
        return 2 * np.pi / self.T

    @cached_property
    def k(self) -> np.ndarray:
        return np.arange(self.i_min, self.i_max + 1) * self.dk

    @cached_property
    def dt(self) -> float:
        return self.T / self.n_t

    @cached_property
    def t(self) -> np.ndarray:
        return -0.5 * self.T + np.arange(self.n_t) * self.dt

    @property
    def coverage(self) -> tuple[float, float]:
        """Spectral reach below and above kbar in units of 1/w."""
        return ((self.kbar - self.k[0]) * self.w, (self.k[-1] - self.kbar) * self.w)

    def describe(self) -> dict:
        return {
            "kbar": self.kbar,
            "w": self.w,
            "i_min": self.i_min,
            "i_max": self.i_max,
            "n_t": self.n_t,
            "window": self.window,
        }


def longitudinal_grid(
    kbar: float,
    w: float,
    coverage: float = 12.0,
    window: float = 10.0,
    samples_per_period: int = 8,
    n_t: int | None = None,
    min_coverage: float = 8.0,
) -> LongitudinalGrid:
    """Build the k/t grids for retarded-time modes centered at ``kbar``."""
    if kbar <= 0 or w <= 0:
        raise FieldError("need kbar > 0 and w > 0")
    dk = 2 * np.pi / (2.0 * window * w)
    i_min = max(1, math.ceil((kbar - coverage / w) / dk))
    i_max = math.floor((kbar + coverage / w) / dk)
    if n_t is None:
        n_t = samples_per_period * i_max
    grid = LongitudinalGrid(float(kbar), float(w), i_min, i_max, int(n_t), float(window))
    lo, hi = grid.coverage
    if min(lo, hi) < min_coverage:
        raise FieldError("spectrum truncated")
    return grid


@dataclass(frozen=True, eq=False)
class LongitudinalMode:
    m: int
    weight: float
    grid: LongitudinalGrid
    spectrum: np.ndarray  # psi_m(k - kbar) on grid.k
    samples: np.ndarray  # psi(t_R) on grid.t
    prefactor: float = 1.0

    @property
    def t(self) -> np.ndarray:
        return self.grid.t

    @property
    def envelope(self) -> np.ndarray:
        return np.abs(self.samples)

    @cached_property
    def carrier_k(self) -> float:
        """Frequency of the largest spectral bin of the samples."""
        g = self.grid
        spec = np.fft.ifft(self.samples)
        freqs = 2 * np.pi * np.fft.fftfreq(g.n_t, g.dt)
        return float(abs(freqs[np.argmax(np.abs(spec))]))

    @property
    def endpoint_decay(self) -> float:
        peak = np.max(np.abs(self.samples))
        return float(np.abs(self.samples[0]) / peak) if peak > 0 else 0.0

    @property
    def coefficients(self) -> np.ndarray:
        """Fourier amplitude |k|^weight * prefactor * psi_m on grid.k."""
        return self.prefactor * self.grid.k**self.weight * self.spectrum


def synthesize_longitudinal(grid: LongitudinalGrid, coeffs: np.ndarray) -> np.ndarray:
    """i sum_k dk/(2 pi) c(k) exp(-i k t) on the grid's retarded times."""
    amp = 1j * grid.dk / (2 * np.pi) * np.asarray(coeffs, complex)
    return _accel.dft_eval(grid.k, amp, grid.t)


def longitudinal_mode(
    m: int,
    kbar: float,
    w: float,
    weight=WeightExponent.PLUS_HALF,
    grid: LongitudinalGrid | None = None,
    decay_tol: float = 1e-10,
) -> LongitudinalMode:
    """Retarded-time mode (weight +1/2) or dual mode (weight -1/2)."""
    grid = grid or longitudinal_grid(kbar, w)
    wexp = float(WeightExponent(float(weight)).value)
    spectrum = hermite_gaussian_amplitude(m, w, grid.k - kbar)
    samples = synthesize_longitudinal(grid, grid.k**wexp * spectrum)
    mode = LongitudinalMode(int(m), wexp, grid, spectrum, samples)
    if mode.endpoint_decay > decay_tol:
        raise FieldError(f"window too short: edge/peak = {mode.endpoint_decay:.2e}")
    return mode


def time_overlap(a, b) -> complex:
    """sum dt conj(a) b over a common retarded-time grid."""
    ga = a.grid if isinstance(a, LongitudinalMode) else None
    gb = b.grid if isinstance(b, LongitudinalMode) else None
    if ga is not None and gb is not None and ga.describe() != gb.describe():
        raise FieldError("grid mismatch")
    g = ga or gb
    sa = a.samples if isinstance(a, LongitudinalMode) else np.asarray(a)
    sb = b.samples if isinstance(b, LongitudinalMode) else np.asarray(b)
    if sa.shape != sb.shape:
        raise FieldError("grid mismatch")
    return complex(g.dt * np.vdot(sa, sb))


@dataclass(frozen=True, eq=False)
class LongitudinalBasis:
    """Hermite-Gaussian longitudinal modes 0..mmax on one grid."""

    kbar: float
    w: float
    orders: tuple[int, ...]
    grid: LongitudinalGrid = field(default=None)

    def __post_init__(self):
        if self.grid is None:
            object.__setattr__(self, "grid", longitudinal_grid(self.kbar, self.w))

    @classmethod
    def first(cls, n: int, kbar: float, w: float, grid=None) -> "LongitudinalBasis":
        return cls(float(kbar), float(w), tuple(range(n)), grid)

    def __len__(self):
        return len(self.orders)

    @cached_property
    def spectra(self) -> np.ndarray:
        tab = hermite_gaussian_table(max(self.orders), self.w, self.grid.k - self.kbar)
        return tab[list(self.orders)]

    def mode(self, j: int) -> LongitudinalMode:
        return longitudinal_mode(self.orders[j], self.kbar, self.w, WeightExponent.PLUS_HALF, self.grid)

    def dual(self, j: int) -> LongitudinalMode:
        return longitudinal_mode(self.orders[j], self.kbar, self.w, WeightExponent.MINUS_HALF, self.grid)

    def gram(self) -> np.ndarray:
        """Non-local (flat momentum) products of the modes."""
        S = self.spectra
        return self.grid.dk / (2 * np.pi) * (S @ S.T).astype(complex)

    def energy_matrix(self) -> np.ndarray:
        S = self.spectra
        return self.grid.dk / (2 * np.pi) * ((S * self.grid.k) @ S.T).astype(complex)

    def dual_overlap_matrix(self) -> np.ndarray:
        """(dual_j || mode_m) by retarded-time quadrature."""
        modes = [self.mode(j).samples for j in range(len(self))]
        duals = [self.dual(j).samples for j in range(len(self))]
        D = np.stack(duals)
        M = np.stack(modes)
        return self.grid.dt * (D.conj() @ M.T)
