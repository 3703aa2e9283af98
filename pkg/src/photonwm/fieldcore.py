"""Grids, helicity, vector fields, spin-1 algebra and polarization vectors.

Everything is computed in natural units (hbar = c = eps0 = 1) with the
micrometer as the length unit. ``UnitsPolicy`` converts SI values at the
I/O boundary only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

C_LIGHT = 299792458.0  # m/s
LENGTH_SCALE = 1e6  # natural length unit is the micrometer
C_UM_PER_FS = C_LIGHT * LENGTH_SCALE * 1e-15  # 0.299792458 um/fs


class FieldError(ValueError):
    """Raised when a field or grid violates a precondition."""


# ---------------------------------------------------------------------------
# units
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnitsPolicy:
    """Conversions between SI inputs and the internal natural units."""

    mode: str = "natural"

    def __post_init__(self):
        if self.mode not in ("natural", "si"):
            raise FieldError(f"unknown units mode {self.mode!r}")

    def length_in(self, value):
        return value * LENGTH_SCALE if self.mode == "si" else value

    def length_out(self, value):
        return value / LENGTH_SCALE if self.mode == "si" else value

    def time_in(self, value):
        return value * C_LIGHT * LENGTH_SCALE if self.mode == "si" else value

    def time_out(self, value):
        return value / (C_LIGHT * LENGTH_SCALE) if self.mode == "si" else value

    @staticmethod
    def wavenumber_from_nm(lambda_nm: float) -> float:
        """Vacuum wave number in 1/um for a wavelength given in nm."""
        return 2.0 * np.pi / (lambda_nm * 1e-3)

    @staticmethod
    def length_from_fs(tau_fs):
        return tau_fs * C_UM_PER_FS

    @staticmethod
    def fs_from_length(t_um):
        return t_um / C_UM_PER_FS


# ---------------------------------------------------------------------------
# helicity and spin
# ---------------------------------------------------------------------------


class Helicity(enum.IntEnum):
    PLUS = 1
    MINUS = -1

    @classmethod
    def of(cls, value) -> "Helicity":
        try:
            return cls(int(value))
        except ValueError:
            raise FieldError(f"helicity must be +1 or -1, got {value!r}") from None


def helicity_index(sigma: int) -> int:
    """Block index used for helicity-resolved tensors: +1 -> 0, -1 -> 1."""
    return 0 if int(sigma) > 0 else 1


class SpinTriple(NamedTuple):
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray

    def dot(self, v) -> np.ndarray:
        v = np.asarray(v)
        return v[0] * self.sx + v[1] * self.sy + v[2] * self.sz


def build_spin_matrices() -> SpinTriple:
    """Spin-1 generators with (s_i)_{jk} = -i eps_{ijk}."""
    sx = np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]])
    sy = np.array([[0, 0, 1j], [0, 0, 0], [-1j, 0, 0]])
    sz = np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]])
    return SpinTriple(sx, sy, sz)


# ---------------------------------------------------------------------------
# polarization
# ---------------------------------------------------------------------------

_AXIS_TOL = 1e-6


def polarization_field(kvec: np.ndarray, sigma: int) -> np.ndarray:
    """Helicity vectors e_{k,sigma} for an array of wave vectors (..., 3).

    The gauge uses x as reference axis and switches to z when k is within
    1e-6 of the x axis. Entries at k = 0 are zero.
    """
    kvec = np.asarray(kvec, dtype=float)
    kmag = np.linalg.norm(kvec, axis=-1, keepdims=True)
    zero = kmag[..., 0] == 0.0
    khat = np.divide(kvec, kmag, out=np.zeros_like(kvec), where=kmag > 0)
    use_z = np.abs(khat[..., 0]) > 1.0 - _AXIS_TOL
    ref = np.zeros_like(kvec)
    ref[..., 0] = np.where(use_z, 0.0, 1.0)
    ref[..., 2] = np.where(use_z, 1.0, 0.0)
    theta = ref - (ref * khat).sum(-1, keepdims=True) * khat
    tnorm = np.linalg.norm(theta, axis=-1, keepdims=True)
    theta = np.divide(theta, tnorm, out=np.zeros_like(theta), where=tnorm > 0)
    phi = np.cross(khat, theta)
    e = (theta + 1j * sigma * phi) / np.sqrt(2.0)
    e[zero] = 0.0
    return e


def circular_polarization_vector(k, sigma) -> np.ndarray:
    """Unit helicity vector for a single nonzero wave vector."""
    k = np.asarray(k, dtype=float)
    if k.shape != (3,):
        raise FieldError("wave vector must have shape (3,)")
    if not np.any(k):
        raise FieldError("undefined polarization")
    return polarization_field(k, int(Helicity.of(sigma)))


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KGrid3:
    """Periodic momentum grid in FFT layout with an implied coordinate grid."""

    n: tuple[int, int, int]
    dk: tuple[float, float, float]

    def __post_init__(self):
        n = tuple(int(v) for v in np.broadcast_to(self.n, 3))
        dk = tuple(float(v) for v in np.broadcast_to(self.dk, 3))
        if min(n) <= 0:
            raise FieldError("grid sizes must be positive")
        if min(dk) <= 0:
            raise FieldError("grid spacings must be positive")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "dk", dk)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.n

    @property
    def size(self) -> int:
        return int(np.prod(self.n))

    @cached_property
    def dx(self) -> tuple[float, float, float]:
        return tuple(2 * np.pi / (n * d) for n, d in zip(self.n, self.dk))

    @cached_property
    def k_measure(self) -> float:
        """Quadrature weight replacing d^3k/(2 pi)^3."""
        return float(np.prod(self.dk)) / (2 * np.pi) ** 3

    @cached_property
    def x_measure(self) -> float:
        return float(np.prod(self.dx))

    @cached_property
    def volume(self) -> float:
        return float(np.prod([n * d for n, d in zip(self.n, self.dx)]))

    @cached_property
    def axes_k(self) -> tuple[np.ndarray, ...]:
        return tuple(np.fft.fftfreq(n) * n * d for n, d in zip(self.n, self.dk))

    @cached_property
    def axes_x(self) -> tuple[np.ndarray, ...]:
        return tuple(np.arange(n) * d for n, d in zip(self.n, self.dx))

    @cached_property
    def kvec(self) -> np.ndarray:
        kx, ky, kz = np.meshgrid(*self.axes_k, indexing="ij")
        return np.stack([kx, ky, kz], axis=-1)

    @cached_property
    def xvec(self) -> np.ndarray:
        x, y, z = np.meshgrid(*self.axes_x, indexing="ij")
        return np.stack([x, y, z], axis=-1)

    @cached_property
    def kmag(self) -> np.ndarray:
        return np.sqrt((self.kvec**2).sum(-1))

    @cached_property
    def khat(self) -> np.ndarray:
        k = self.kmag[..., None]
        return np.divide(self.kvec, k, out=np.zeros_like(self.kvec), where=k > 0)

    def polarization(self, sigma: int) -> np.ndarray:
        return polarization_field(self.kvec, sigma)

    def index_of(self, k) -> tuple[int, int, int]:
        """Grid index of a wave vector that lies on the grid."""
        idx = []
        for comp, n, d in zip(np.asarray(k, float), self.n, self.dk):
            m = comp / d
            mi = int(round(m))
            if abs(m - mi) > 1e-9 or not (-(n // 2) <= mi < n - n // 2):
                raise FieldError(f"wave vector {tuple(k)} is not on the grid")
            idx.append(mi % n)
        return tuple(idx)

    def describe(self) -> dict:
        return {"n": list(self.n), "dk": [float(v) for v in self.dk]}


@dataclass(frozen=True)
class KGrid1:
    """One-dimensional k > 0 quadrature grid.

    ``uniform`` places ``n`` equally spaced nodes on [k_min, k_max] with
    weights dk/(2 pi). ``gauss-hermite`` places nodes about ``center`` with
    spread ``1/width`` and the matching Gaussian-corrected weights.
    """

    n: int
    k_min: float
    k_max: float
    rule: str = "uniform"
    center: float | None = None
    width: float | None = None

    def __post_init__(self):
        if self.n <= 0:
            raise FieldError("n must be positive")
        if self.rule not in ("uniform", "gauss-hermite"):
            raise FieldError(f"unknown rule {self.rule!r}")
        if self.rule == "uniform" and not (0 < self.k_min < self.k_max):
            raise FieldError("need 0 < k_min < k_max")
        if self.rule == "gauss-hermite":
            if self.center is None or self.width is None:
                raise FieldError("gauss-hermite rule needs center and width")
            if self.nodes.min() <= 0:
                raise FieldError("gauss-hermite nodes reach k <= 0")

    @cached_property
    def _rule(self):
        if self.rule == "uniform":
            k = np.linspace(self.k_min, self.k_max, self.n)
            wts = np.full(self.n, (k[1] - k[0]) / (2 * np.pi) if self.n > 1 else 1.0)
            return k, wts
        x, wx = np.polynomial.hermite.hermgauss(self.n)
        k = self.center + x / self.width
        return k, wx * np.exp(x * x) / self.width / (2 * np.pi)

    @property
    def nodes(self) -> np.ndarray:
        return self._rule[0]

    @property
    def weights(self) -> np.ndarray:
        return self._rule[1]


# ---------------------------------------------------------------------------
# vector fields
# ---------------------------------------------------------------------------

MOMENTUM = "momentum"
COORDINATE = "coordinate"


@dataclass(frozen=True, eq=False)
class VectorField:
    """Complex 3-vector samples per helicity on a ``KGrid3``.

    ``data`` has shape (H, nx, ny, nz, 3). In momentum space ``t`` is the
    time the amplitude refers to (phase exp(-i|k|t) already applied). In
    coordinate space ``weight`` records the Fourier weight exponent used.
    """

    grid: KGrid3
    data: np.ndarray
    helicities: tuple[int, ...] = (1,)
    t: float = 0.0
    space: str = MOMENTUM
    weight: float | None = None

    def __post_init__(self):
        hel = tuple(int(Helicity.of(s)) for s in self.helicities)
        object.__setattr__(self, "helicities", hel)
        data = np.asarray(self.data, dtype=np.complex128)
        want = (len(hel),) + self.grid.shape + (3,)
        if data.shape != want:
            raise FieldError(f"data shape {data.shape} does not match {want}")
        if self.space not in (MOMENTUM, COORDINATE):
            raise FieldError(f"unknown space {self.space!r}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def zeros(cls, grid, helicities=(1,), space=MOMENTUM, t=0.0, weight=None):
        data = np.zeros((len(helicities),) + grid.shape + (3,), complex)
        return cls(grid, data, tuple(helicities), t, space, weight)

    def with_data(self, data, **changes) -> "VectorField":
        return replace(self, data=data, **changes)

    def block(self, sigma: int) -> np.ndarray:
        return self.data[self.helicities.index(int(sigma))]

    def norm2(self) -> float:
        """Plain L2 norm squared with the grid measure of this space."""
        meas = self.grid.k_measure if self.space == MOMENTUM else self.grid.x_measure
        return float(meas * np.vdot(self.data, self.data).real)

    def __add__(self, other: "VectorField") -> "VectorField":
        _check_compatible(self, other)
        return self.with_data(self.data + other.data)

    def __sub__(self, other: "VectorField") -> "VectorField":
        _check_compatible(self, other)
        return self.with_data(self.data - other.data)

    def __mul__(self, c) -> "VectorField":
        return self.with_data(self.data * c)

    __rmul__ = __mul__


def _check_compatible(a: VectorField, b: VectorField):
    if a.grid != b.grid or a.helicities != b.helicities or a.space != b.space:
        raise FieldError("fields live on different grids or spaces")
    if a.t != b.t:
        raise FieldError("fields carry different time stamps")


def require_space(f: VectorField, space: str):
    if f.space != space:
        raise FieldError(f"expected a {space}-space field, got {f.space}")


def transversality_error(a: VectorField) -> float:
    """max |k . a| / max(|k| |a|) over the grid, 0 for a zero field."""
    require_space(a, MOMENTUM)
    kdot = np.abs(np.einsum("...i,h...i->h...", a.grid.kvec, a.data))
    scale = np.max(a.grid.kmag) * np.max(np.abs(a.data))
    return float(kdot.max() / scale) if scale > 0 else 0.0


def transverse_longitudinal_split(a: VectorField) -> tuple[VectorField, VectorField]:
    """Split a momentum amplitude into parts orthogonal and parallel to k."""
    require_space(a, MOMENTUM)
    khat = a.grid.khat
    par = np.einsum("...i,h...i->h...", khat, a.data)[..., None] * khat
    # at k = 0 the whole vector counts as longitudinal so the sum stays exact
    zero = a.grid.kmag == 0
    par[:, zero] = a.data[:, zero]
    return a.with_data(a.data - par), a.with_data(par)


def helicity_apply(a: VectorField) -> VectorField:
    """Apply (k/|k|) . s pointwise; equals i khat x a."""
    require_space(a, MOMENTUM)
    zero = a.grid.kmag == 0
    if np.any(np.abs(a.data[:, zero]) > 0):
        raise FieldError("helicity undefined at zero momentum")
    khat = np.broadcast_to(a.grid.khat, a.data.shape)
    return a.with_data(1j * np.cross(khat, a.data))


def from_scalar_amplitude(grid: KGrid3, alpha: np.ndarray, sigma: int, t: float = 0.0) -> VectorField:
    """Momentum amplitude alpha(k) e_{k,sigma} for a single helicity."""
    e = grid.polarization(sigma)
    return VectorField(grid, (alpha[..., None] * e)[None], (int(sigma),), t, MOMENTUM)


def scalar_amplitude(a: VectorField, sigma: int | None = None) -> np.ndarray:
    """Project a single-helicity amplitude onto its helicity vector: e^dagger a."""
    require_space(a, MOMENTUM)
    sigma = a.helicities[0] if sigma is None else sigma
    e = a.grid.polarization(sigma)
    return np.einsum("...i,...i->...", e.conj(), a.block(sigma))


def stack_helicities(fields: Sequence[VectorField]) -> VectorField:
    """Combine single-helicity fields on one grid into a multi-helicity field."""
    first = fields[0]
    hel = tuple(h for f in fields for h in f.helicities)
    if len(set(hel)) != len(hel):
        raise FieldError("duplicate helicity blocks")
    data = np.concatenate([f.data for f in fields], axis=0)
    return VectorField(first.grid, data, hel, first.t, first.space, first.weight)


__all__ = [
    "C_LIGHT",
    "C_UM_PER_FS",
    "COORDINATE",
    "FieldError",
    "Helicity",
    "KGrid1",
    "KGrid3",
    "MOMENTUM",
    "SpinTriple",
    "UnitsPolicy",
    "VectorField",
    "build_spin_matrices",
    "circular_polarization_vector",
    "from_scalar_amplitude",
    "helicity_apply",
    "helicity_index",
    "polarization_field",
    "require_space",
    "scalar_amplitude",
    "stack_helicities",
    "transversality_error",
    "transverse_longitudinal_split",
]
