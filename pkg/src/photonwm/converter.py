"""Mode-to-dual conversion: the 1/k spectral filter, an idealized
pulse-shaper chain, and homodyne overlap readout."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fieldcore import FieldError
from .wavepackets import (
    LongitudinalMode,
    WeightExponent,
    longitudinal_mode,
    synthesize_longitudinal,
    time_overlap,
)

LEAK_TOL = 1e-12


def _floor(mode: LongitudinalMode, k_floor: float | None) -> float:
    return mode.grid.kbar / 10.0 if k_floor is None else float(k_floor)


def _with_coefficients(mode: LongitudinalMode, coeffs: np.ndarray, weight: float) -> LongitudinalMode:
    samples = synthesize_longitudinal(mode.grid, coeffs)
    spectrum = coeffs / mode.grid.k**weight
    return LongitudinalMode(mode.m, weight, mode.grid, spectrum, samples)


def spectral_filter_one_over_k(
    mode: LongitudinalMode, k_floor: float | None = None, constant: float = 1.0
) -> LongitudinalMode:
    """Multiply the mode's Fourier amplitude by constant/k and resynthesize.

    With constant = 1 a weight +1/2 mode maps onto its dual. The physical
    filter constant in natural units is 2, available through ``constant``.
    """
    kf = _floor(mode, k_floor)
    g = mode.grid
    c = mode.coefficients
    below = g.k <= kf
    if np.any(np.abs(c[below]) > LEAK_TOL * np.max(np.abs(c))):
        raise FieldError("spectrum extends below k_floor")
    out = constant * c / g.k
    res = _with_coefficients(mode, out, mode.weight - 1.0)
    return res if constant == 1.0 else _rescaled(res, constant)


def _rescaled(mode: LongitudinalMode, constant: float) -> LongitudinalMode:
    return LongitudinalMode(mode.m, mode.weight, mode.grid, mode.spectrum / constant, mode.samples, constant)


def spectral_multiply_by_k(mode: LongitudinalMode, power: int = 1) -> LongitudinalMode:
    """Inverse operation of the filter: Fourier amplitude times k^power."""
    c = mode.coefficients * mode.grid.k**power
    return _with_coefficients(mode, c, mode.weight + power)


@dataclass(frozen=True)
class ShaperConfig:
    """Ideal grating/lens map: position p = x0 + gain * omega in the Fourier
    plane. ``mask`` maps positions to complex transmission; the default is
    x_floor / (p - x0), a passive 1/x mask normalized at the lowest
    supported frequency."""

    gain: float = 1.0
    x0: float = 1.0
    mask: Callable[[np.ndarray], np.ndarray] | None = None
    k_floor: float | None = None

    def __post_init__(self):
        if self.gain <= 0 or self.x0 <= 0:
            raise FieldError("gain and x0 must be positive")


@dataclass(frozen=True)
class ConversionReport:
    mode_label: str
    fidelity: float
    efficiency: float
    grid: dict

    def to_json(self) -> dict:
        return {
            "mode_label": self.mode_label,
            "fidelity": repr(float(self.fidelity)),
            "efficiency": repr(float(self.efficiency)),
            "grid": self.grid,
        }


def fidelity(a, b) -> float:
    """|<a, b>| / (||a|| ||b||) with the retarded-time product."""
    na = np.sqrt(time_overlap(a, a).real)
    nb = np.sqrt(time_overlap(b, b).real)
    return float(abs(time_overlap(a, b)) / (na * nb))


def pulse_shaper_simulate(mode: LongitudinalMode, cfg: ShaperConfig | None = None):
    """Disperse the sampled pulse, apply the Fourier-plane mask, recombine.

    Returns (output samples as a LongitudinalMode, ConversionReport). The
    fidelity compares against the analytic dual of the same order.
    """
    cfg = cfg or ShaperConfig()
    g = mode.grid
    n = g.n_t
    # samples are sum_k c_k exp(-i k t); recover c on the FFT frequency grid
    omega = 2 * np.pi * np.fft.fftfreq(n, g.dt)
    spec = np.fft.ifft(mode.samples) * np.exp(1j * omega * g.t[0])
    kf = _floor(mode, cfg.k_floor)
    power = np.abs(spec) ** 2
    leak = power[omega <= kf].sum()
    if leak > LEAK_TOL * power.sum():
        raise FieldError("spectrum leaking to x <= 0")
    pos = cfg.x0 + cfg.gain * omega
    if cfg.mask is None:
        x_floor = cfg.gain * g.k[0]
        support = omega > kf
        trans = np.zeros(n)
        trans[support] = x_floor / (pos[support] - cfg.x0)
    else:
        trans = np.asarray(cfg.mask(pos), complex)
        if not np.all(np.isfinite(trans[omega > kf])):
            raise FieldError("mask not finite on the spectral support")
    out_spec = spec * trans
    samples = np.fft.fft(out_spec * np.exp(-1j * omega * g.t[0]))
    # Fourier amplitude on the mode's k nodes (bin i holds k = i dk)
    coeffs = out_spec[np.arange(g.i_min, g.i_max + 1)] / (1j * g.dk / (2 * np.pi))
    weight = mode.weight - 1.0
    out = LongitudinalMode(mode.m, weight, g, coeffs / g.k**weight, samples)
    dual = longitudinal_mode(mode.m, g.kbar, g.w, WeightExponent.MINUS_HALF, g)
    eff = float(time_overlap(out, out).real / time_overlap(mode, mode).real)
    report = ConversionReport(f"hg{mode.m}", fidelity(out, dual), eff, g.describe())
    return out, report


def homodyne_overlap(local_oscillator, signal) -> complex:
    """int dt conj(LO) * signal over the shared retarded-time grid."""
    return time_overlap(local_oscillator, signal)


def convert_mode(m: int, kbar: float, w: float, grid=None, cfg: ShaperConfig | None = None):
    """Filter a mode both ways and report fidelities and route agreement."""
    mode = longitudinal_mode(m, kbar, w, WeightExponent.PLUS_HALF, grid)
    dual = longitudinal_mode(m, kbar, w, WeightExponent.MINUS_HALF, mode.grid)
    filt = spectral_filter_one_over_k(mode)
    shaped, report = pulse_shaper_simulate(mode, cfg)
    scale = np.vdot(shaped.samples, filt.samples) / np.vdot(shaped.samples, shaped.samples)
    route = float(np.max(np.abs(scale * shaped.samples - filt.samples)) / np.max(np.abs(filt.samples)))
    return {
        "mode_label": f"hg{m}",
        "filter_fidelity": fidelity(filt, dual),
        "shaper_fidelity": report.fidelity,
        "efficiency": report.efficiency,
        "route_deviation": route,
        "route_constant": complex(scale),
        "grid": mode.grid.describe(),
    }
