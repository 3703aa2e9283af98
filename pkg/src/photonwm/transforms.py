"""Weighted Fourier synthesis and inversion, BB normalization, z boosts."""

from __future__ import annotations

import enum

import numpy as np
from scipy.interpolate import CubicSpline

from .fieldcore import (
    COORDINATE,
    MOMENTUM,
    FieldError,
    VectorField,
    require_space,
    transversality_error,
)

TRANSVERSE_TOL = 1e-12


class WeightExponent(float, enum.Enum):
    MINUS_HALF = -0.5
    ZERO = 0.0
    PLUS_HALF = 0.5


def _weight_value(w) -> float:
    return float(WeightExponent(float(w)).value)


def _kpow(kmag: np.ndarray, w: float) -> np.ndarray:
    out = np.zeros_like(kmag)
    np.power(kmag, w, out=out, where=kmag > 0)
    if w == 0:
        out[kmag == 0] = 1.0
    return out


def _require_transverse(a: VectorField):
    if transversality_error(a) > TRANSVERSE_TOL:
        raise FieldError("input amplitude is not transverse")


def synthesize_coordinate_field(a: VectorField, w=WeightExponent.PLUS_HALF, t: float | None = None) -> VectorField:
    """psi(x, t) = sum_k mu |k|^w a(k) exp(i(k.x - |k|(t - a.t)))."""
    require_space(a, MOMENTUM)
    _require_transverse(a)
    w = _weight_value(w)
    grid = a.grid
    t = a.t if t is None else float(t)
    if w < 0 and np.any(np.abs(a.data[:, grid.kmag == 0]) > 0):
        raise FieldError("singular weight")
    factor = _kpow(grid.kmag, w) * np.exp(-1j * grid.kmag * (t - a.t))
    spec = a.data * factor[None, ..., None]
    psi = np.fft.ifftn(spec, axes=(1, 2, 3)) * (grid.size * grid.k_measure)
    return VectorField(grid, psi, a.helicities, t, COORDINATE, w)


def invert_to_momentum(f: VectorField, w=None, t: float | None = None) -> VectorField:
    """Recover the amplitude at time 0 from a synthesized coordinate field."""
    require_space(f, COORDINATE)
    if w is None:
        if f.weight is None:
            raise FieldError("weight exponent unknown for this field")
        w = f.weight
    w = _weight_value(w)
    grid = f.grid
    t = f.t if t is None else float(t)
    spec = np.fft.fftn(f.data, axes=(1, 2, 3)) * grid.x_measure
    zero = grid.kmag == 0
    if w > 0:
        k0 = np.abs(spec[:, zero]) ** 2
        if k0.sum() * grid.k_measure > 1e-24 * max(1.0, f.norm2()):
            raise FieldError("spectral content at k = 0 cannot be divided by |k|^w")
    inv = np.zeros_like(grid.kmag)
    np.power(grid.kmag, -w, out=inv, where=~zero)
    if w == 0:
        inv[zero] = 1.0
    factor = inv * np.exp(1j * grid.kmag * t)
    return VectorField(grid, spec * factor[None, ..., None], f.helicities, 0.0, MOMENTUM)


def multiply_by_kpow(a: VectorField, w: float) -> VectorField:
    """Pointwise |k|^w a(k); negative powers require no content at k = 0."""
    require_space(a, MOMENTUM)
    zero = a.grid.kmag == 0
    if w < 0 and np.any(np.abs(a.data[:, zero]) > 0):
        raise FieldError("content at k = 0 cannot be divided by |k|")
    return a.with_data(a.data * _kpow(a.grid.kmag, w)[None, ..., None])


def to_bb_normalization(a: VectorField) -> VectorField:
    """Multiply by sqrt|k|; the plain norm of the result is the mean energy."""
    _require_transverse(a)
    return multiply_by_kpow(a, 0.5)


def from_bb_normalization(a: VectorField) -> VectorField:
    return multiply_by_kpow(a, -0.5)


# ---------------------------------------------------------------------------
# boosts along z
# ---------------------------------------------------------------------------

BOOST_ALIAS_TOL = 1e-6


def _eval_columns(values: np.ndarray, knots: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Evaluate one cubic spline per (ix, iy) column at its own query points.

    ``values`` and ``query`` have shape (nx, ny, nz); the spline runs along
    the last axis over ``knots``. Queries outside the knot range give 0.
    """
    spl = CubicSpline(knots, values, axis=-1, bc_type="natural")
    coef = spl.c  # (4, nz - 1, nx, ny)
    idx = np.clip(np.searchsorted(knots, query, side="right") - 1, 0, len(knots) - 2)
    dq = query - knots[idx]
    ix, iy = np.meshgrid(np.arange(values.shape[0]), np.arange(values.shape[1]), indexing="ij")
    ix, iy = ix[..., None], iy[..., None]
    out = np.zeros(query.shape, complex)
    for m in range(4):
        out = out * dq + coef[m, idx, ix, iy]
    inside = (query >= knots[0]) & (query <= knots[-1])
    return np.where(inside, out, 0.0)


def lorentz_boost_z(a: VectorField, eta: float) -> VectorField:
    """Boost a momentum amplitude along z with rapidity ``eta``.

    Wave vectors map as kz' = cosh(eta) kz - sinh(eta)|k| with kx, ky fixed,
    and the helicity amplitude picks up sqrt(|k|/|k'|). Each (kx, ky) column
    is resampled with a cubic spline in kz; values outside the grid range
    are zero. No renormalization is applied.
    """
    require_space(a, MOMENTUM)
    _require_transverse(a)
    if eta == 0:
        return a
    grid = a.grid
    ch, sh = np.cosh(eta), np.sinh(eta)
    kx, ky, kz = (grid.kvec[..., i] for i in range(3))
    kmag = grid.kmag

    # fraction of the norm mapped outside the kz range
    kz_axis = grid.axes_k[2]
    lo, hi = kz_axis.min(), kz_axis.max()
    kz_image = ch * kz - sh * kmag
    outside = (kz_image < lo) | (kz_image > hi)
    weight = np.sum(np.abs(a.data) ** 2, axis=(0, -1))
    total = weight.sum()
    if total > 0 and weight[outside].sum() > BOOST_ALIAS_TOL * total:
        raise FieldError("grid too small for boost")

    # preimage of every output grid point
    kz_src = ch * kz + sh * kmag
    kmag_src = ch * kmag + sh * kz
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(kmag > 0, np.sqrt(kmag_src / kmag), 0.0)

    order = np.argsort(kz_axis)
    kz_sorted = kz_axis[order]
    blocks = []
    for h, sigma in enumerate(a.helicities):
        e = grid.polarization(sigma)
        alpha = np.einsum("...i,...i->...", e.conj(), a.data[h])[..., order]
        out = _eval_columns(alpha, kz_sorted, kz_src) * scale
        blocks.append(out[..., None] * e)
    return a.with_data(np.stack(blocks))


def packet_center_kz(a: VectorField, sigma: int | None = None) -> float:
    """Peak position of |alpha| along the kx = ky = 0 column, spline refined."""
    require_space(a, MOMENTUM)
    sigma = a.helicities[0] if sigma is None else sigma
    e = a.grid.polarization(sigma)
    col = np.einsum("...i,...i->...", e[0, 0].conj(), a.block(sigma)[0, 0])
    kz = a.grid.axes_k[2]
    order = np.argsort(kz)
    kz, mag = kz[order], np.abs(col[order])
    i = int(np.argmax(mag))
    if i == 0 or i == len(kz) - 1:
        raise FieldError("packet peak sits on the grid edge")
    spl = CubicSpline(kz, mag)
    d = spl.derivative()
    roots = d.roots(extrapolate=False)
    roots = roots[(roots >= kz[i - 1]) & (roots <= kz[i + 1])]
    if roots.size == 0:
        return float(kz[i])
    return float(roots[np.argmax(spl(roots))])
