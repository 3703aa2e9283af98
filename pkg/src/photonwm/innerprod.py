"""Scalar products, analytic kernels and their regularized numeric oracles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import _accel
from .fieldcore import COORDINATE, MOMENTUM, FieldError, VectorField, require_space

IR_TOL = 1e-10
LIGHT_CONE_TOL = 1e-9
DIRECT_MAX_POINTS = 12**3


def _check_pair(f: VectorField, g: VectorField, space: str, same_time: bool = True):
    require_space(f, space)
    require_space(g, space)
    if f.grid != g.grid or f.helicities != g.helicities:
        raise FieldError("grid mismatch")
    if same_time and f.t != g.t:
        raise FieldError("fields carry different time stamps")


def overlap_integral(f: VectorField, g: VectorField) -> complex:
    """Local product sum_x dx^3 f^dagger g, summed over helicity blocks."""
    _check_pair(f, g, COORDINATE)
    return complex(f.grid.x_measure * np.vdot(f.data, g.data))


def momentum_scalar_product(a: VectorField, b: VectorField) -> complex:
    """sum_k mu a^dagger b; amplitudes must refer to the same time."""
    _check_pair(a, b, MOMENTUM)
    return complex(a.grid.k_measure * np.vdot(a.data, b.data))


def _spectrum(f: VectorField) -> np.ndarray:
    return np.fft.fftn(f.data, axes=(1, 2, 3)) * f.grid.x_measure


def nonlocal_scalar_product(f: VectorField, g: VectorField) -> complex:
    """Product with kernel 1/(2 pi^2 |x - x'|^2), evaluated spectrally as
    sum_k mu F^dagger G / |k|."""
    _check_pair(f, g, COORDINATE)
    grid = f.grid
    F, G = _spectrum(f), _spectrum(g)
    zero = grid.kmag == 0
    for S in (F, G):
        tot = np.sum(np.abs(S) ** 2)
        if tot > 0 and np.sum(np.abs(S[:, zero]) ** 2) > IR_TOL * tot:
            raise FieldError("infrared-singular input")
    inv = np.zeros_like(grid.kmag)
    np.divide(1.0, grid.kmag, out=inv, where=~zero)
    return complex(grid.k_measure * np.sum(F.conj() * G * inv[None, ..., None]))


def lattice_kernel(grid) -> np.ndarray:
    """Periodic lattice version of 1/(2 pi^2 r^2): sum_{k != 0} mu e^{ik.x}/|k|."""
    zero = grid.kmag == 0
    inv = np.zeros_like(grid.kmag)
    np.divide(1.0, grid.kmag, out=inv, where=~zero)
    kern = np.fft.ifftn(inv) * grid.size * grid.k_measure
    return np.ascontiguousarray(kern.real)


def direct_nonlocal_product(f: VectorField, g: VectorField, kernel: np.ndarray | None = None) -> complex:
    """O(N^2) coordinate double sum with the lattice kernel (test oracle)."""
    _check_pair(f, g, COORDINATE)
    grid = f.grid
    if grid.size > DIRECT_MAX_POINTS:
        raise FieldError("direct double sum limited to 12^3 points")
    kern = lattice_kernel(grid) if kernel is None else kernel
    total = 0j
    for h in range(len(f.helicities)):
        total += _accel.direct_nonlocal(f.data[h], g.data[h], kern)
    return complex(total * grid.x_measure**2)


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

_KINDS = ("G", "K", "J")


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    prefactor: float = 1.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"kernel kind must be one of {_KINDS}")


def kernel_eval(spec: KernelSpec, r: float, tau: float = 0.0) -> float:
    """Closed-form kernel value in natural units."""
    if r <= 0:
        raise FieldError("kernel undefined at r = 0")
    if spec.kind == "G":
        val = 1.0 / (2 * np.pi**2 * r * r)
    elif spec.kind == "K":
        val = 1.0 / (np.pi**2 * r * r)
    else:
        if abs(r - abs(tau)) < LIGHT_CONE_TOL:
            raise FieldError("kernel singular on light cone")
        val = 1.0 / (2 * np.pi**2 * (r * r - tau * tau))
    return spec.prefactor * val


@dataclass(frozen=True)
class RegularizationSchedule:
    """Regulator values eps_i = factor_i * scale, extrapolated in eps^2."""

    factors: tuple[float, ...] = (0.2, 0.1, 0.05)

    def __post_init__(self):
        f = tuple(float(v) for v in self.factors)
        if len(f) < 3:
            raise ValueError("need at least three regulator values")
        if any(v <= 0 for v in f) or any(b >= a for a, b in zip(f, f[1:])):
            raise ValueError("regulator values must be positive and strictly decreasing")
        object.__setattr__(self, "factors", f)


@dataclass(frozen=True)
class OracleResult:
    value: float
    error: float
    samples: tuple[float, ...]

    def __float__(self):
        return self.value


class ExtrapolationError(FieldError):
    def __init__(self, msg, estimate):
        super().__init__(f"{msg} (estimate {estimate:.3e})")
        self.estimate = estimate


def _extrapolate_eps2(eps: np.ndarray, vals: np.ndarray) -> tuple[float, float]:
    """Neville extrapolation to eps = 0 in the variable eps^2.

    Returns the final value and the gap to the best lower-order estimate.
    """
    x = eps**2
    table = [np.array(vals, dtype=float)]
    for level in range(1, len(vals)):
        prev = table[-1]
        nxt = (x[level:] * prev[:-1] - x[:-level] * prev[1:]) / (x[level:] - x[:-level])
        table.append(nxt)
    best = table[-1][0]
    lower = table[-2][-1]
    return float(best), float(abs(best - lower))


def _damped_sine(a: float, eps: float, power: int = 0) -> float:
    """int_0^inf k^power exp(-eps k) sin(a k) dk by QAWF quadrature."""
    if a == 0:
        return 0.0
    sign = np.sign(a)
    val, _ = quad(lambda k: k**power * np.exp(-eps * k), 0, np.inf, weight="sin", wvar=abs(a), limlst=200)
    return float(sign * val)


def kernel_numeric_oracle(
    spec: KernelSpec,
    r: float,
    tau: float = 0.0,
    sched: RegularizationSchedule | None = None,
    tol: float = 1e-3,
) -> OracleResult:
    """Radial Fourier integral of the kernel with an exp(-eps k) regulator.

    J_eps = (1/(4 pi^2 r)) int_0^inf e^{-eps k} [sin k(r - tau) + sin k(r + tau)] dk,
    extrapolated to eps -> 0. The regulator scale is the distance r - |tau|
    to the light cone. G is J at tau = 0 and K = 2 G.
    """
    sched = sched or RegularizationSchedule()
    if r <= 0:
        raise FieldError("kernel undefined at r = 0")
    tau_eff = 0.0 if spec.kind in ("G", "K") else float(tau)
    gap = abs(r - abs(tau_eff))
    if gap < LIGHT_CONE_TOL:
        raise FieldError("kernel singular on light cone")
    eps = np.array(sched.factors) * gap
    vals = np.array(
        [
            (_damped_sine(r - tau_eff, e) + _damped_sine(r + tau_eff, e)) / (4 * np.pi**2 * r)
            for e in eps
        ]
    )
    mult = 2.0 if spec.kind == "K" else 1.0
    vals = vals * mult * spec.prefactor
    value, est = _extrapolate_eps2(eps, vals)
    if est > tol * abs(value):
        raise ExtrapolationError("regulator extrapolation did not converge", est)
    return OracleResult(value, est, tuple(vals))


@dataclass(frozen=True)
class ReferenceOverlap:
    """Magnitude of the reference-state overlap and the sign found numerically."""

    magnitude: float
    sign: int = -1
    note: str = "direct evaluation of the k-integral gives a negative value"

    def __float__(self):
        return self.magnitude


def reference_state_overlap(r: float) -> ReferenceOverlap:
    """|int d^3k/(2pi)^3 |k| e^{ik.x}| = 1/(pi^2 r^4) for r > 0."""
    if r <= 0:
        raise FieldError("overlap undefined at r = 0")
    return ReferenceOverlap(1.0 / (np.pi**2 * r**4))


def reference_state_overlap_oracle(
    r: float, sched: RegularizationSchedule | None = None, tol: float = 1e-2
) -> OracleResult:
    """Signed regulated value of (1/(2 pi^2 r)) int k^2 sin(kr) e^{-eps k} dk."""
    sched = sched or RegularizationSchedule()
    if r <= 0:
        raise FieldError("overlap undefined at r = 0")
    eps = np.array(sched.factors) * r
    vals = np.array([_damped_sine(r, e, power=2) / (2 * np.pi**2 * r) for e in eps])
    value, est = _extrapolate_eps2(eps, vals)
    if est > tol * abs(value):
        raise ExtrapolationError("regulator extrapolation did not converge", est)
    return OracleResult(value, est, tuple(vals))
