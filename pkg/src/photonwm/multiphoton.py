"""Two- and n-photon wave functions over a basis of single-photon modes.

States are coefficient arrays over a basis; each basis mode is a
single-helicity momentum amplitude on a common ``KGrid3``. Mode values at
arbitrary space-time points come from a direct Fourier sum over the
nonzero k components, so wave functions can be sampled at independent
points in each photon slot.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _accel
from .fieldcore import MOMENTUM, FieldError, VectorField, helicity_index, require_space
from .innerprod import direct_nonlocal_product, lattice_kernel
from .transforms import WeightExponent, synthesize_coordinate_field
from .wavepackets import LongitudinalBasis, embed_helicities

GRAM_TOL = 1e-6
MAX_PHOTONS = 4

# k-space operators applied to an amplitude a(k) before evaluation
_OPS = ("value", "dt", "curl", "hcurl", "div", "d0", "d1", "d2", "lap", "bfield")


class ModeBasis:
    """Single-helicity momentum amplitudes sharing one grid and time stamp."""

    CACHE_SIZE = 512

    def __init__(self, amplitudes: Sequence[VectorField], labels: Sequence[str] | None = None):
        amps = list(amplitudes)
        if not amps:
            raise FieldError("empty basis")
        grid = amps[0].grid
        for a in amps:
            require_space(a, MOMENTUM)
            if len(a.helicities) != 1:
                raise FieldError("basis modes must carry a single helicity")
            if a.grid != grid or a.t != amps[0].t:
                raise FieldError("basis modes must share grid and time stamp")
        self.amplitudes = amps
        self.grid = grid
        self.t0 = amps[0].t
        self.sigmas = np.array([a.helicities[0] for a in amps])
        self.labels = list(labels) if labels is not None else [f"mode{j}" for j in range(len(amps))]
        self._cache: dict = {}

    def __len__(self):
        return len(self.amplitudes)

    @cached_property
    def _support(self):
        data = np.stack([a.data[0] for a in self.amplitudes])  # (J, nx, ny, nz, 3)
        mask = np.any(np.abs(data) > 0, axis=(0, -1))
        kvec = self.grid.kvec[mask]
        kmag = self.grid.kmag[mask]
        amps = data[:, mask, :] * (self.grid.k_measure * np.sqrt(kmag))[None, :, None]
        return kvec, kmag, amps

    @property
    def max_k(self) -> float:
        kmag = self._support[1]
        return float(kmag.max()) if kmag.size else 0.0

    def _op_amps(self, op: str) -> np.ndarray:
        if op not in self._op_cache:
            self._op_cache[op] = self._build_op_amps(op)
        return self._op_cache[op]

    @cached_property
    def _op_cache(self) -> dict:
        return {}

    def _build_op_amps(self, op: str) -> np.ndarray:
        kvec, kmag, amps = self._support
        if op == "value":
            return amps
        if op == "dt":
            return -1j * kmag[None, :, None] * amps
        if op in ("curl", "hcurl"):
            out = 1j * np.cross(kvec[None], amps)
            if op == "hcurl":
                out = out * self.sigmas[:, None, None]
            return out
        if op == "div":
            d = 1j * np.einsum("ki,jki->jk", kvec, amps)
            out = np.zeros_like(amps)
            out[..., 0] = d
            return out
        if op in ("d0", "d1", "d2"):
            return 1j * kvec[None, :, int(op[1])][..., None] * amps
        if op == "lap":
            return -(kmag**2)[None, :, None] * amps
        if op == "bfield":
            khat = kvec / kmag[:, None]
            return np.cross(khat[None], amps)
        raise ValueError(f"unknown operator {op!r}; expected one of {_OPS}")

    def evaluate(self, x, t: float, op: str = "value") -> np.ndarray:
        """Mode values (J, P, 3) at points x (P, 3) and time t.

        For ``div`` only component 0 is meaningful.
        """
        x = np.ascontiguousarray(np.atleast_2d(np.asarray(x, dtype=float)))
        key = (x.shape, x.tobytes(), float(t), op)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        kvec, _, _ = self._support
        amps = self._op_amps(op)
        tt = float(t) - self.t0
        J, K = amps.shape[:2]
        flat = np.ascontiguousarray(np.transpose(amps, (1, 0, 2)).reshape(K, J * 3))
        vals = _accel.point_eval(kvec, flat, x, tt)  # (P, J*3)
        out = np.ascontiguousarray(np.transpose(vals.reshape(len(x), J, 3), (1, 0, 2)))
        out.setflags(write=False)
        if len(self._cache) >= self.CACHE_SIZE:
            self._cache.pop(next(iter(self._cache)))
        self._cache[key] = out
        return out

    def gram(self) -> np.ndarray:
        """Momentum-space products, equal to the non-local products of the modes."""
        mu = self.grid.k_measure
        flat = np.stack([embed_helicities(a).data.ravel() for a in self.amplitudes])
        return mu * flat.conj() @ flat.T

    def energy_matrix(self) -> np.ndarray:
        mu = self.grid.k_measure
        flat = np.stack([embed_helicities(a).data for a in self.amplitudes])
        w = np.sqrt(self.grid.kmag)[None, None, ..., None]
        f = (flat * w).reshape(len(self), -1)
        return mu * f.conj() @ f.T

    def coordinate_fields(self, t: float | None = None) -> list[VectorField]:
        t = self.t0 if t is None else t
        return [synthesize_coordinate_field(a, WeightExponent.PLUS_HALF, t) for a in self.amplitudes]

    def combine(self, b) -> VectorField:
        """Momentum amplitude sum_j b_j a_j (helicity blocks +1, -1)."""
        b = np.asarray(b, complex)
        data = np.tensordot(b, np.stack([embed_helicities(a).data for a in self.amplitudes]), axes=1)
        return embed_helicities(self.amplitudes[0]).with_data(data)


def _basis_matrices(basis) -> tuple[np.ndarray, np.ndarray]:
    return np.asarray(basis.gram()), np.asarray(basis.energy_matrix())


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SinglePhotonState:
    basis: object
    c: np.ndarray
    t: float = 0.0


@dataclass(frozen=True, eq=False)
class TwoPhotonState:
    """C_jm over basis labels (helicity folded into the label)."""

    basis: object
    C: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        C = np.asarray(self.C, dtype=complex)
        n = len(self.basis)
        if C.shape != (n, n):
            raise FieldError(f"coefficient matrix must be {n}x{n}")
        object.__setattr__(self, "C", C)

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.C) ** 2))

    @property
    def symmetry_error(self) -> float:
        return float(np.max(np.abs(self.C - self.C.T)))


def symmetrize_coefficients(C, basis=None, t: float = 0.0) -> TwoPhotonState:
    """(C + C^T) scaled to unit Frobenius norm."""
    C = np.asarray(C, dtype=complex)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise FieldError("coefficient matrix must be square")
    total = np.linalg.norm(C)
    if total == 0:
        raise FieldError("zero coefficient matrix")
    S = C + C.T
    sn = np.linalg.norm(S)
    if sn <= 1e-14 * total:
        raise FieldError("no bosonic component")
    S = S / sn
    if basis is None:
        return TwoPhotonState(_IndexBasis(len(S)), S, t)
    return TwoPhotonState(basis, S, t)


class _IndexBasis:
    """Placeholder basis for coefficient-only manipulations."""

    def __init__(self, n):
        self.n = n

    def __len__(self):
        return self.n

    def gram(self):
        return np.eye(self.n)

    def energy_matrix(self):
        raise FieldError("basis without spectral data")


def _points(x) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    return np.atleast_2d(x), x.ndim == 1


def _helicity_stack(basis: ModeBasis, V: np.ndarray) -> np.ndarray:
    """Split mode values (J, P, ...) into helicity blocks (2, J, P, ...)."""
    out = np.zeros((2,) + V.shape, V.dtype)
    for j, s in enumerate(basis.sigmas):
        out[helicity_index(s), j] = V[j]
    return out


_LETTERS = "abcdefgh"


def _contract(C: np.ndarray, blocks: Sequence[np.ndarray]) -> np.ndarray:
    """sum C[j1..jn] prod_i blocks_i[b_i, j_i, p, r_i] -> (P, b1..bn, r1..rn)."""
    n = len(blocks)
    js = _LETTERS[:n]
    bs = "BCDE"[:n]
    rs = "rstu"[:n]
    terms = [js] + [f"{bs[i]}{js[i]}p{rs[i]}" for i in range(n)]
    return np.einsum(",".join(terms) + "->p" + bs + rs, C, *blocks, optimize=True)


def two_time_evaluate(state: TwoPhotonState, x1, t1, x2, t2, op1="value", op2="value") -> np.ndarray:
    """Phi(x1, t1; x2, t2) per helicity pair, shape (P, 2, 2, 3, 3).

    A single point per slot gives shape (2, 2, 3, 3).
    """
    basis = state.basis
    p1, single = _points(x1)
    p2, _ = _points(x2)
    if len(p1) != len(p2):
        raise FieldError("slot point lists differ in length")
    V1 = _helicity_stack(basis, basis.evaluate(p1, t1, op1))
    V2 = _helicity_stack(basis, basis.evaluate(p2, t2, op2))
    out = _contract(state.C, [V1, V2])
    return out[0] if single else out


def assemble_two_photon(state: TwoPhotonState, x1, x2, t: float | None = None) -> np.ndarray:
    """Psi(x1, x2, t) = sum C_jm psi_j(x1, t) (x) psi_m(x2, t)."""
    t = state.t if t is None else t
    return two_time_evaluate(state, x1, t, x2, t)


def assemble_two_photon_direct(state: TwoPhotonState, x1, x2, t: float | None = None) -> np.ndarray:
    """Brute-force double loop over (j, m); slow reference for tests."""
    t = state.t if t is None else t
    basis = state.basis
    v1 = basis.evaluate(np.atleast_2d(x1), t)[:, 0]
    v2 = basis.evaluate(np.atleast_2d(x2), t)[:, 0]
    out = np.zeros((2, 2, 3, 3), complex)
    for j in range(len(basis)):
        for m in range(len(basis)):
            b1, b2 = helicity_index(basis.sigmas[j]), helicity_index(basis.sigmas[m])
            out[b1, b2] += state.C[j, m] * np.outer(v1[j], v2[m])
    return out


def two_photon_propagate(state: TwoPhotonState, dt: float) -> TwoPhotonState:
    """Free evolution: the basis modes evolve, coefficients stay fixed."""
    return replace(state, t=state.t + dt)


def propagate_in_eigenframe(C: np.ndarray, energies: np.ndarray, U: np.ndarray, dt: float) -> np.ndarray:
    """Evolve coefficients with phases exp(-i(E_a + E_b) dt) in the basis that
    diagonalizes the energy matrix (columns of U), returning them in the
    original labels."""
    Ce = U.conj().T @ C @ U.conj()
    ph = np.exp(-1j * energies * dt)
    Ce = ph[:, None] * Ce * ph[None, :]
    return U @ Ce @ U.T


def _rel(num: np.ndarray, den: np.ndarray) -> float:
    d = np.linalg.norm(den)
    return float(np.linalg.norm(num) / d) if d > 0 else float(np.linalg.norm(num))


@dataclass(frozen=True)
class TwoTimeResidual:
    slot1: float
    slot2: float
    div1: float
    div2: float

    def max(self) -> float:
        return max(self.slot1, self.slot2, self.div1, self.div2)


def two_time_residual(state: TwoPhotonState, x1, t1, x2, t2) -> TwoTimeResidual:
    """Per-slot residuals of i d_t Phi = sigma curl Phi and slot divergences,
    each relative to ||Phi|| over the sample points."""
    phi = two_time_evaluate(state, x1, t1, x2, t2)
    r1 = 1j * two_time_evaluate(state, x1, t1, x2, t2, op1="dt") - two_time_evaluate(
        state, x1, t1, x2, t2, op1="hcurl"
    )
    r2 = 1j * two_time_evaluate(state, x1, t1, x2, t2, op2="dt") - two_time_evaluate(
        state, x1, t1, x2, t2, op2="hcurl"
    )
    d1 = two_time_evaluate(state, x1, t1, x2, t2, op1="div")[..., 0, :]
    d2 = two_time_evaluate(state, x1, t1, x2, t2, op2="div")[..., :, 0]
    return TwoTimeResidual(_rel(r1, phi), _rel(r2, phi), _rel(d1, phi), _rel(d2, phi))


def two_photon_residual(state: TwoPhotonState, x1, x2, t: float | None = None) -> float:
    """Residual of i d_t Psi = (sigma_1 curl_1 + sigma_2 curl_2) Psi at equal times."""
    t = state.t if t is None else t
    psi = assemble_two_photon(state, x1, x2, t)
    ev = lambda a, b: two_time_evaluate(state, x1, t, x2, t, a, b)  # noqa: E731
    lhs = 1j * (ev("dt", "value") + ev("value", "dt"))
    rhs = ev("hcurl", "value") + ev("value", "hcurl")
    return _rel(lhs - rhs, psi)


# ---------------------------------------------------------------------------
# collapse
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CollapseResult:
    amplitude: VectorField
    coefficients: np.ndarray  # b_m
    direction: np.ndarray  # detected polarization in slot 1
    norm: float
    components: np.ndarray | None = None  # (3, J) per-component coefficients


def collapse_at_detection(
    state: TwoPhotonState, R1, T1: float, per_component: bool = False, renormalize: bool = False
) -> CollapseResult:
    """Condition the two-photon function on detecting photon 1 at (R1, T1).

    c_{m,r} = sum_j C_jm psi_{j,r}(R1, T1); the reported coefficients are
    b_m = sum_r c_{m,r} conj(d_r) with d the dominant right singular vector
    of c (the detected local polarization).
    """
    basis = state.basis
    v = basis.evaluate(np.atleast_2d(R1), T1)[:, 0]  # (J, 3)
    c = state.C.T @ v  # (M, 3): sum_j C_jm v_j
    if np.max(np.abs(c)) == 0:
        raise FieldError("detection impossible at this point")
    _, s, vh = np.linalg.svd(c)
    d = vh[0].conj()  # unit polarization vector
    # fix the phase so the largest component of d is real positive
    i = int(np.argmax(np.abs(d)))
    d = d * np.exp(-1j * np.angle(d[i]))
    b = c @ d.conj()
    G = basis.gram()
    norm = float(np.real(b.conj() @ G @ b))
    if norm <= 1e-300:
        raise FieldError("detection impossible at this point")
    if renormalize:
        b = b / np.sqrt(norm)
    comps = c.T.copy() if per_component else None
    return CollapseResult(basis.combine(b), b, d, norm, comps)


# ---------------------------------------------------------------------------
# energy and reduced density matrices
# ---------------------------------------------------------------------------


def joint_energy_expectation(state: TwoPhotonState) -> float:
    """sum C*_{jm} C_{j'm'} H_{jj'} H_{mm'} with H the energy matrix."""
    H = np.asarray(state.basis.energy_matrix())
    return float(np.real(np.sum(state.C.conj() * (H @ state.C @ H.T))))


@dataclass(frozen=True, eq=False)
class ReducedDensityMatrix:
    rho: np.ndarray

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.rho)))

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))

    @property
    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.rho - self.rho.conj().T)))

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(0.5 * (self.rho + self.rho.conj().T))


def _check_gram(basis, tol=GRAM_TOL):
    G = np.asarray(basis.gram())
    dev = float(np.max(np.abs(G - np.eye(len(G)))))
    if dev > tol:
        raise FieldError(f"basis is not orthonormal (Gram deviation {dev:.2e})")
    return G


def reduced_density_matrix(state: TwoPhotonState, gram_tol: float = GRAM_TOL) -> ReducedDensityMatrix:
    """rho_jk = sum_m C_jm C*_km for a basis orthonormal under the non-local product."""
    _check_gram(state.basis, gram_tol)
    return ReducedDensityMatrix(state.C @ state.C.conj().T)


def reduced_density_matrix_coordinate(state: TwoPhotonState, t: float | None = None) -> ReducedDensityMatrix:
    """Same matrix through coordinate-space double sums with the lattice kernel.

    Every non-local product (trace over photon 2 and projection of photon 1)
    is evaluated as an O(N^2) sum over grid point pairs.
    """
    basis = state.basis
    t = state.t if t is None else t
    fields = [embed_helicities(f) for f in basis.coordinate_fields(t)]
    kern = lattice_kernel(basis.grid)
    n = len(fields)
    G = np.zeros((n, n), complex)
    for a in range(n):
        for b in range(a, n):
            G[a, b] = direct_nonlocal_product(fields[a], fields[b], kern)
            G[b, a] = np.conj(G[a, b])
    C = state.C
    return ReducedDensityMatrix(G @ C @ G.T @ C.conj().T @ G)


@dataclass(frozen=True, eq=False)
class WrongTraceReport:
    proper: np.ndarray
    naive: np.ndarray
    naive_normalized: np.ndarray
    trace_ratio: float
    shape_difference: float
    purity_proper: float
    purity_naive: float


def wrong_trace_demo(state: TwoPhotonState) -> WrongTraceReport:
    """Compare the non-local trace with the local trace over photon 2.

    The local trace weights photon 2 by its energy matrix, giving C H^T C^dagger.
    """
    proper = reduced_density_matrix(state).rho
    H = np.asarray(state.basis.energy_matrix())
    naive = state.C @ H.T @ state.C.conj().T
    tr = np.real(np.trace(naive))
    nn = naive / tr
    return WrongTraceReport(
        proper,
        naive,
        nn,
        float(tr / np.real(np.trace(proper))),
        float(np.max(np.abs(nn - proper / np.real(np.trace(proper))))),
        float(np.real(np.trace(proper @ proper))),
        float(np.real(np.trace(nn @ nn))),
    )


# ---------------------------------------------------------------------------
# extraction rule and detection amplitude
# ---------------------------------------------------------------------------


def extraction_rule(coeffs, basis, order: int):
    """Wave-function evaluator built from field-state coefficients.

    order 1: x, t -> sum_k C_k psi_k(x, t) with shape (P, 3).
    order 2: (x1, x2, t) -> symmetrized two-photon tensor.
    """
    if order == 1:
        c = np.asarray(coeffs, complex)
        if c.shape != (len(basis),):
            raise FieldError("coefficient list length mismatch")

        def single(x, t):
            return np.tensordot(c, basis.evaluate(x, t), axes=1)

        return single
    if order == 2:
        st = symmetrize_coefficients(coeffs, basis)

        def pair(x1, x2, t):
            return assemble_two_photon(st, x1, x2, t)

        return pair
    raise FieldError(f"unsupported order {order}")


@dataclass(frozen=True, eq=False)
class DetectionReport:
    psi: np.ndarray
    ee: np.ndarray
    eb: np.ndarray
    be: np.ndarray
    bb: np.ndarray
    closure_error: float  # |ee + eb + be + bb - psi|
    b_route_error: float  # k-space B vs -i sigma psi / sqrt 2

    @property
    def amplitude(self) -> np.ndarray:
        return self.ee


def detection_amplitude(state: TwoPhotonState, x1, x2, t: float | None = None) -> DetectionReport:
    """E and B decomposition of the two-photon function.

    For helicity sigma the mode's E part is psi / sqrt 2 and its B part is
    khat x E in k-space. The E-only amplitude is (1/2) sum C E_j (x) E_m.
    """
    basis = state.basis
    t = state.t if t is None else t
    p1, single = _points(x1)
    p2, _ = _points(x2)
    sig = basis.sigmas
    psi1 = basis.evaluate(p1, t)
    psi2 = basis.evaluate(p2, t)
    E1, E2 = psi1 / np.sqrt(2), psi2 / np.sqrt(2)
    B1 = basis.evaluate(p1, t, "bfield") / np.sqrt(2)
    B2 = basis.evaluate(p2, t, "bfield") / np.sqrt(2)
    alt = -1j * sig[:, None, None] * psi1 / np.sqrt(2)
    b_err = float(np.max(np.abs(B1 - alt)))
    s = sig[:, None, None]
    H = lambda V: _helicity_stack(basis, V)  # noqa: E731
    C = state.C
    ee = 0.5 * _contract(C, [H(E1), H(E2)])
    eb = 0.5 * _contract(C, [H(E1), H(1j * s * B2)])
    be = 0.5 * _contract(C, [H(1j * s * B1), H(E2)])
    bb = 0.5 * _contract(C, [H(-s * B1), H(s * B2)])
    psi = _contract(C, [H(psi1), H(psi2)])
    closure = float(np.max(np.abs(ee + eb + be + bb - psi)))
    if single:
        psi, ee, eb, be, bb = psi[0], ee[0], eb[0], be[0], bb[0]
    return DetectionReport(psi, ee, eb, be, bb, closure, b_err)


# ---------------------------------------------------------------------------
# n photons
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NPhotonState:
    basis: object
    C: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        C = np.asarray(self.C, dtype=complex)
        if C.ndim > MAX_PHOTONS:
            raise FieldError("combinatorial limit")
        if any(s != len(self.basis) for s in C.shape):
            raise FieldError("coefficient tensor does not match the basis")
        object.__setattr__(self, "C", C)

    @property
    def n(self) -> int:
        return self.C.ndim

    @property
    def symmetry_error(self) -> float:
        return max(
            float(np.max(np.abs(self.C - np.transpose(self.C, p))))
            for p in itertools.permutations(range(self.n))
        )


def n_photon_symmetrize(C, basis, t: float = 0.0) -> NPhotonState:
    """Average over all index permutations, then unit Frobenius norm."""
    C = np.asarray(C, complex)
    n = C.ndim
    if n > MAX_PHOTONS:
        raise FieldError("combinatorial limit")
    S = sum(np.transpose(C, p) for p in itertools.permutations(range(n))) / math.factorial(n)
    sn = np.linalg.norm(S)
    if sn == 0:
        raise FieldError("no bosonic component")
    return NPhotonState(basis, S / sn, t)


def n_photon_assemble(state: NPhotonState, xs, t: float | None = None, ops=None) -> np.ndarray:
    """Psi(x_1..x_n, t) with shape (P,) + (2,)*n + (3,)*n.

    ``xs`` is a sequence of n point arrays (each (P, 3) or (3,)).
    """
    t = state.t if t is None else t
    basis = state.basis
    if len(xs) != state.n:
        raise FieldError("need one point set per photon")
    ops = ops or ["value"] * state.n
    pts = [np.atleast_2d(np.asarray(x, float)) for x in xs]
    blocks = [_helicity_stack(basis, basis.evaluate(p, t, op)) for p, op in zip(pts, ops)]
    return _contract(state.C, blocks)


def n_photon_propagate(state: NPhotonState, dt: float) -> NPhotonState:
    return replace(state, t=state.t + dt)


def n_photon_residual(state: NPhotonState, xs, t: float | None = None) -> list[float]:
    """Per-slot residual of i d_t = sigma curl, relative to ||Psi||."""
    psi = n_photon_assemble(state, xs, t)
    out = []
    for i in range(state.n):
        ops_dt = ["value"] * state.n
        ops_c = ["value"] * state.n
        ops_dt[i], ops_c[i] = "dt", "hcurl"
        r = 1j * n_photon_assemble(state, xs, t, ops_dt) - n_photon_assemble(state, xs, t, ops_c)
        out.append(_rel(r, psi))
    return out


__all__ = [
    "CollapseResult",
    "DetectionReport",
    "LongitudinalBasis",
    "ModeBasis",
    "NPhotonState",
    "ReducedDensityMatrix",
    "SinglePhotonState",
    "TwoPhotonState",
    "TwoTimeResidual",
    "WrongTraceReport",
    "assemble_two_photon",
    "assemble_two_photon_direct",
    "collapse_at_detection",
    "detection_amplitude",
    "extraction_rule",
    "joint_energy_expectation",
    "n_photon_assemble",
    "n_photon_propagate",
    "n_photon_residual",
    "n_photon_symmetrize",
    "propagate_in_eigenframe",
    "reduced_density_matrix",
    "reduced_density_matrix_coordinate",
    "symmetrize_coefficients",
    "two_photon_propagate",
    "two_photon_residual",
    "two_time_evaluate",
    "two_time_residual",
    "wrong_trace_demo",
]
