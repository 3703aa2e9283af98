"""Second-order coherence tensors, the RS coherence matrix and residual
checks of their first- and second-order evolution equations.

A pair field is a sum of terms  coef * sum_jk W_jk f_j(x1, t1) (x) g_k(x2, t2)
where f, g are mode families (E part, B part, RS vectors, ...) evaluated at
two independent point sets. Spatial derivatives are applied exactly in
k-space per mode; time derivatives use an 8th-order central difference in
the chosen time slot so the checks do not merely restate the generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .fieldcore import FieldError, helicity_index
from .multiphoton import ModeBasis, SinglePhotonState, TwoPhotonState

_D1 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
_D2 = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])
_OFFSETS = np.arange(-4, 5)


# ---------------------------------------------------------------------------
# mode families
# ---------------------------------------------------------------------------


def _mapped_basis(basis: ModeBasis, fn) -> ModeBasis:
    amps = [a.with_data(fn(a)) for a in basis.amplitudes]
    return ModeBasis(amps, basis.labels)


def _cross_khat(a):
    khat = np.broadcast_to(a.grid.khat, a.data.shape)
    return np.cross(khat, a.data)


class ModeFamilies:
    """E, B and RS-vector parts of every basis mode, as evaluable bases."""

    def __init__(self, basis: ModeBasis):
        self.basis = basis
        s2 = np.sqrt(2.0)
        self.psi = basis
        self.E = _mapped_basis(basis, lambda a: a.data / s2)
        self.B = _mapped_basis(basis, lambda a: _cross_khat(a) / s2)
        self._rs = {}

    def F(self, sigma: int) -> ModeBasis:
        """RS vector (E + i sigma B)/sqrt 2 of each mode."""
        sigma = int(sigma)
        if sigma not in self._rs:
            self._rs[sigma] = _mapped_basis(self.basis, lambda a: (a.data + 1j * sigma * _cross_khat(a)) / 2.0)
        return self._rs[sigma]


@dataclass(frozen=True, eq=False)
class PairTerm:
    coef: complex
    W: np.ndarray
    slot1: ModeBasis
    conj1: bool
    slot2: ModeBasis


def _eval(basis: ModeBasis, x, t, op, conj):
    v = basis.evaluate(x, t, op)
    return v.conj() if conj else v


@dataclass(frozen=True, eq=False)
class PairField:
    """Linear combination of pair terms on the point sets x1, x2."""

    terms: tuple[PairTerm, ...]
    x1: np.ndarray
    x2: np.ndarray

    def evaluate(self, t1: float, t2: float, op1: str = "value", op2: str = "value") -> np.ndarray:
        out = np.zeros((len(self.x1), len(self.x2), 3, 3), complex)
        for term in self.terms:
            V1 = _eval(term.slot1, self.x1, t1, op1, term.conj1)
            V2 = _eval(term.slot2, self.x2, t2, op2, False)
            out += term.coef * np.einsum("jk,jpr,kqs->pqrs", term.W, V1, V2, optimize=True)
        return out

    def combine(self, coefs: Sequence[complex], others: Sequence["PairField"]) -> "PairField":
        terms = []
        for c, f in zip(coefs, others):
            terms.extend(PairTerm(c * t.coef, t.W, t.slot1, t.conj1, t.slot2) for t in f.terms)
        return PairField(tuple(terms), self.x1, self.x2)

    def time_derivative(self, t1, t2, slot: int, h: float, order: int = 1, op1="value", op2="value"):
        stencil = _D1 if order == 1 else _D2
        acc = 0.0
        for off, c in zip(_OFFSETS, stencil):
            if c == 0:
                continue
            dt = off * h
            a, b = (t1 + dt, t2) if slot == 1 else (t1, t2 + dt)
            acc = acc + c * self.evaluate(a, b, op1, op2)
        return acc / h**order


def _scale(x: PairField) -> float:
    k = max(max(t.slot1.max_k, t.slot2.max_k) for t in x.terms)
    return k if k > 0 else 1.0


# ---------------------------------------------------------------------------
# coherence sets
# ---------------------------------------------------------------------------

TENSORS = ("E", "H", "M", "N")


def default_pair_points(grid, per_axis: int = 4) -> np.ndarray:
    """A regular sub-lattice of the periodic box, per_axis^3 points."""
    axes = [np.arange(per_axis) * (n * d / per_axis) for n, d in zip(grid.n, grid.dx)]
    X = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, 3)
    return X + 0.123 * np.asarray(grid.dx)  # stay off the lattice origin


@dataclass(frozen=True, eq=False)
class CoherenceMatrixSet:
    E: np.ndarray
    H: np.ndarray
    M: np.ndarray
    N: np.ndarray
    t1: float
    t2: float
    fields: dict = field(repr=False)
    weights: np.ndarray = field(repr=False)
    families: ModeFamilies = field(repr=False)

    @property
    def x1(self):
        return self.fields["E"].x1

    @property
    def x2(self):
        return self.fields["E"].x2

    def tensor(self, name: str) -> np.ndarray:
        return getattr(self, name)

    def swapped(self, a: str, b: str) -> "CoherenceMatrixSet":
        """Negative-control copy with tensors a and b exchanged."""
        f = dict(self.fields)
        f[a], f[b] = f[b], f[a]
        vals = {n: self.tensor(n) for n in TENSORS}
        vals[a], vals[b] = vals[b], vals[a]
        return CoherenceMatrixSet(**vals, t1=self.t1, t2=self.t2, fields=f, weights=self.weights, families=self.families)

    def hermiticity_error(self) -> float:
        """max over E, H of |T(x1,x2) - T(x2,x1)^dagger| and |M - N^dagger|."""
        if self.x1.shape != self.x2.shape or not np.array_equal(self.x1, self.x2) or self.t1 != self.t2:
            raise FieldError("pairing check needs equal point sets and times")
        dag = lambda T: np.conj(np.transpose(T, (1, 0, 3, 2)))  # noqa: E731
        errs = [np.max(np.abs(self.E - dag(self.E))), np.max(np.abs(self.H - dag(self.H)))]
        errs.append(np.max(np.abs(self.M - dag(self.N))))
        return float(max(errs))


def correlation_weights(state) -> tuple[ModeBasis, np.ndarray]:
    """N_jk = <b_j^dagger b_k> for the supported pure states."""
    if isinstance(state, TwoPhotonState):
        C = state.C
        return state.basis, 2.0 * (C @ C.conj().T).T
    if isinstance(state, SinglePhotonState):
        c = np.asarray(state.c, complex)
        return state.basis, np.outer(c.conj(), c)
    raise FieldError("state type not supported")


def coherence_from_state(state, x1=None, x2=None, t1: float = 0.0, t2: float = 0.0) -> CoherenceMatrixSet:
    """Normally ordered E, H, M, N tensors from the mode expansion."""
    basis, W = correlation_weights(state)
    if not isinstance(basis, ModeBasis):
        raise FieldError("basis without spectral data")
    fam = ModeFamilies(basis)
    x1 = default_pair_points(basis.grid) if x1 is None else np.atleast_2d(x1)
    x2 = x1 if x2 is None else np.atleast_2d(x2)
    spec = {"E": (fam.E, fam.E), "H": (fam.B, fam.B), "M": (fam.E, fam.B), "N": (fam.B, fam.E)}
    fields = {n: PairField((PairTerm(1.0, W, a, True, b),), x1, x2) for n, (a, b) in spec.items()}
    vals = {n: fields[n].evaluate(t1, t2) for n in TENSORS}
    return CoherenceMatrixSet(**vals, t1=t1, t2=t2, fields=fields, weights=W, families=fam)


# ---------------------------------------------------------------------------
# RS coherence matrix
# ---------------------------------------------------------------------------

SIGMAS = (1, -1)


@dataclass(frozen=True, eq=False)
class RSCoherenceMatrix:
    """Blocks gamma_{s1 s2}; index 0 is helicity +1, index 1 is -1."""

    blocks: dict  # (s1, s2) -> PairField
    t1: float
    t2: float

    def values(self, t1=None, t2=None) -> np.ndarray:
        t1 = self.t1 if t1 is None else t1
        t2 = self.t2 if t2 is None else t2
        first = next(iter(self.blocks.values()))
        out = np.zeros((2, 2, len(first.x1), len(first.x2), 3, 3), complex)
        for (s1, s2), f in self.blocks.items():
            out[helicity_index(s1), helicity_index(s2)] = f.evaluate(t1, t2)
        return out


def rs_coherence(cset: CoherenceMatrixSet) -> RSCoherenceMatrix:
    """gamma = (1/2){E + i[s1 N + s2 M] - s1 s2 H} for each helicity pair."""
    f = cset.fields
    blocks = {}
    for s1 in SIGMAS:
        for s2 in SIGMAS:
            coefs = [0.5, 0.5j * s1, 0.5j * s2, -0.5 * s1 * s2]
            blocks[(s1, s2)] = f["E"].combine(coefs, [f["E"], f["N"], f["M"], f["H"]])
    return RSCoherenceMatrix(blocks, cset.t1, cset.t2)


def rs_coherence_direct(cset: CoherenceMatrixSet, first_sign: int = -1) -> RSCoherenceMatrix:
    """<F_{first_sign*s1}^- (x) F_{s2}^+> built from RS vectors directly.

    ``first_sign = +1`` drops the helicity flip in slot 1 (negative control).
    """
    fam, W = cset.families, cset.weights
    x1, x2 = cset.x1, cset.x2
    blocks = {
        (s1, s2): PairField((PairTerm(1.0, W, fam.F(first_sign * s1), True, fam.F(s2)),), x1, x2)
        for s1 in SIGMAS
        for s2 in SIGMAS
    }
    return RSCoherenceMatrix(blocks, cset.t1, cset.t2)


def two_photon_pair_field(state: TwoPhotonState, x1, x2=None) -> RSCoherenceMatrix:
    """Phi(x1, t1; x2, t2) on a point-pair grid, blocked by helicity pair."""
    basis = state.basis
    x1 = np.atleast_2d(x1)
    x2 = x1 if x2 is None else np.atleast_2d(x2)
    blocks = {}
    for s1 in SIGMAS:
        for s2 in SIGMAS:
            mask = np.outer(basis.sigmas == s1, basis.sigmas == s2)
            blocks[(s1, s2)] = PairField((PairTerm(1.0, state.C * mask, basis, False, basis),), x1, x2)
    return RSCoherenceMatrix(blocks, state.t, state.t)


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------


def _step(f: PairField, h):
    return 0.05 / _scale(f) if h is None else h


def _slot_ops(slot: int, op: str) -> tuple[str, str]:
    if slot not in (1, 2):
        raise ValueError("slot must be 1 or 2")
    return (op, "value") if slot == 1 else ("value", op)


def _div_part(T: np.ndarray, slot: int) -> np.ndarray:
    return T[..., 0, :] if slot == 1 else T[..., :, 0]


_FIRST_ORDER_PAIRS = {
    1: (("E", "N", 1.0), ("M", "H", 1.0), ("N", "E", -1.0), ("H", "M", -1.0)),
    2: (("E", "M", 1.0), ("M", "E", -1.0), ("N", "H", 1.0), ("H", "N", -1.0)),
}


def wolf_first_order_residual(cset: CoherenceMatrixSet, slot: int, h: float | None = None) -> dict:
    """||curl_j A + d_{t_j} B|| / ||A|| for the Maxwell pairs of slot j,
    plus ||div_j F|| / ||F|| for each tensor."""
    out = {}
    f = cset.fields
    h = _step(f["E"], h)
    curl_ops = _slot_ops(slot, "curl")
    div_ops = _slot_ops(slot, "div")
    for a, b, sign in _FIRST_ORDER_PAIRS[slot]:
        A = f[a].evaluate(cset.t1, cset.t2)
        curl = f[a].evaluate(cset.t1, cset.t2, *curl_ops)
        dB = f[b].time_derivative(cset.t1, cset.t2, slot, h)
        out[f"{a},{'-' if sign < 0 else ''}{b}"] = _relnorm(curl + sign * dB, A)
    for name in TENSORS:
        F = f[name].evaluate(cset.t1, cset.t2)
        out[f"div {name}"] = _relnorm(_div_part(f[name].evaluate(cset.t1, cset.t2, *div_ops), slot), F)
    return out


def _relnorm(num, den) -> float:
    d = np.linalg.norm(den)
    n = np.linalg.norm(num)
    return float(n / d) if d > 0 else float(n)


def _second_order(f: PairField, t1, t2, slot, h) -> float:
    F = f.evaluate(t1, t2)
    lap = f.evaluate(t1, t2, *_slot_ops(slot, "lap"))
    d2 = f.time_derivative(t1, t2, slot, h, order=2)
    R = lap - d2
    norm = np.linalg.norm(F)
    if norm == 0:
        return 0.0
    per_comp = np.sqrt(np.sum(np.abs(R) ** 2, axis=(0, 1)))
    return float(per_comp.max() / norm)


def wolf_second_order_residual(obj, slot: int, h: float | None = None) -> float:
    """max over components of ||(lap_j - d^2_{t_j}) F_rs|| / ||F||, maximized
    over the tensors (or RS blocks) of ``obj``."""
    if isinstance(obj, CoherenceMatrixSet):
        fields, t1, t2 = [obj.fields[n] for n in TENSORS], obj.t1, obj.t2
    elif isinstance(obj, RSCoherenceMatrix):
        fields, t1, t2 = list(obj.blocks.values()), obj.t1, obj.t2
    else:
        raise FieldError("unsupported object")
    out = 0.0
    for f in fields:
        if not any(np.any(t.W) for t in f.terms):
            continue
        out = max(out, _second_order(f, t1, t2, slot, _step(f, h)))
    return out


@dataclass(frozen=True)
class SlotResidual:
    evolution: float
    divergence: float


def rs_evolution_residual(gamma: RSCoherenceMatrix, slot: int, h: float | None = None) -> SlotResidual:
    """||i d_{t_j} G - alpha_j curl_j G|| / ||G|| with alpha_j the slot-j
    helicity of each block, plus the slot divergence."""
    first = next(iter(gamma.blocks.values()))
    h = _step(first, h)
    num = den = dnum = 0.0
    curl_ops = _slot_ops(slot, "curl")
    div_ops = _slot_ops(slot, "div")
    for (s1, s2), f in gamma.blocks.items():
        alpha = s1 if slot == 1 else s2
        G = f.evaluate(gamma.t1, gamma.t2)
        dG = f.time_derivative(gamma.t1, gamma.t2, slot, h)
        curl = f.evaluate(gamma.t1, gamma.t2, *curl_ops)
        R = 1j * dG - alpha * curl
        D = _div_part(f.evaluate(gamma.t1, gamma.t2, *div_ops), slot)
        num += np.sum(np.abs(R) ** 2)
        dnum += np.sum(np.abs(D) ** 2)
        den += np.sum(np.abs(G) ** 2)
    if den == 0:
        return SlotResidual(0.0, 0.0)
    return SlotResidual(float(np.sqrt(num / den)), float(np.sqrt(dnum / den)))


def max_block_difference(a: RSCoherenceMatrix, b: RSCoherenceMatrix) -> float:
    return float(np.max(np.abs(a.values() - b.values())))
