"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly and the environment
variable ``PHOTONWM_NUMBA`` is not set to ``0``/``false``/``no``. Both
implementations are always importable (``numpy_impl`` / ``numba_impl``)
so tests and the benchmark can compare them directly.

None of the numba kernels use parallel reductions, so results do not
depend on the thread count.
"""

from __future__ import annotations

import os
import types
import warnings

import numpy as np

try:  # pragma: no cover - exercised implicitly
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False


def _env_enabled() -> bool:
    flag = os.environ.get("PHOTONWM_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "no", "off")


USE_NUMBA = HAVE_NUMBA and _env_enabled()


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def _hermite_functions_np(mmax, x):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty((mmax + 1,) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if mmax >= 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for m in range(1, mmax):
        out[m + 1] = np.sqrt(2.0 / (m + 1)) * x * out[m] - np.sqrt(m / (m + 1.0)) * out[m - 1]
    return out


def _dft_eval_np(k, amp, t):
    # sum_n amp[n] exp(-i k[n] t[j])
    phase = np.exp(-1j * np.outer(t, k))
    return phase @ amp


def _point_eval_np(kvec, amp, x, t):
    # kvec (N,3), amp (N,C) complex, x (P,3) -> (P,C)
    kmag = np.sqrt((kvec * kvec).sum(axis=1))
    phase = np.exp(1j * (x @ kvec.T - kmag[None, :] * t))
    return phase @ amp


def _direct_nonlocal_np(f, g, kernel):
    # f, g: (nx, ny, nz, C); kernel: (nx, ny, nz) periodic in index difference
    nx, ny, nz, _ = f.shape
    ix, iy, iz = np.meshgrid(np.arange(nx), np.arange(ny), np.arange(nz), indexing="ij")
    ix, iy, iz = ix.ravel(), iy.ravel(), iz.ravel()
    kmat = kernel[
        (ix[:, None] - ix[None, :]) % nx,
        (iy[:, None] - iy[None, :]) % ny,
        (iz[:, None] - iz[None, :]) % nz,
    ]
    fr = f.reshape(-1, f.shape[-1])
    gr = g.reshape(-1, g.shape[-1])
    return complex(np.einsum("ac,ab,bc->", fr.conj(), kmat, gr))


numpy_impl = types.SimpleNamespace(
    hermite_functions=_hermite_functions_np,
    dft_eval=_dft_eval_np,
    point_eval=_point_eval_np,
    direct_nonlocal=_direct_nonlocal_np,
)


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _hermite_functions_nb(mmax, x):
        n = x.shape[0]
        out = np.empty((mmax + 1, n))
        c0 = np.pi ** -0.25
        for i in range(n):
            xi = x[i]
            h_prev = c0 * np.exp(-0.5 * xi * xi)
            out[0, i] = h_prev
            if mmax >= 1:
                h = np.sqrt(2.0) * xi * h_prev
                out[1, i] = h
                for m in range(1, mmax):
                    h_next = np.sqrt(2.0 / (m + 1)) * xi * h - np.sqrt(m / (m + 1.0)) * h_prev
                    out[m + 1, i] = h_next
                    h_prev = h
                    h = h_next
        return out

    @njit(cache=True)
    def _dft_eval_nb(k, amp, t):
        nt = t.shape[0]
        nk = k.shape[0]
        out = np.zeros(nt, dtype=np.complex128)
        for j in range(nt):
            acc = 0.0 + 0.0j
            for n in range(nk):
                acc += amp[n] * np.exp(-1j * k[n] * t[j])
            out[j] = acc
        return out

    @njit(cache=True)
    def _point_eval_nb(kvec, amp, x, t):
        npts = x.shape[0]
        nk = kvec.shape[0]
        nc = amp.shape[1]
        out = np.zeros((npts, nc), dtype=np.complex128)
        for p in range(npts):
            for n in range(nk):
                kx, ky, kz = kvec[n, 0], kvec[n, 1], kvec[n, 2]
                kmag = np.sqrt(kx * kx + ky * ky + kz * kz)
                ph = np.exp(1j * (kx * x[p, 0] + ky * x[p, 1] + kz * x[p, 2] - kmag * t))
                for c in range(nc):
                    out[p, c] += amp[n, c] * ph
        return out

    @njit(cache=True)
    def _direct_nonlocal_nb(f, g, kernel):
        nx, ny, nz, nc = f.shape
        acc = 0.0 + 0.0j
        for ax in range(nx):
            for ay in range(ny):
                for az in range(nz):
                    for bx in range(nx):
                        dx = (ax - bx) % nx
                        for by in range(ny):
                            dy = (ay - by) % ny
                            for bz in range(nz):
                                kv = kernel[dx, dy, (az - bz) % nz]
                                s = 0.0 + 0.0j
                                for c in range(nc):
                                    s += np.conj(f[ax, ay, az, c]) * g[bx, by, bz, c]
                                acc += kv * s
        return acc

    numba_impl = types.SimpleNamespace(
        hermite_functions=lambda mmax, x: _hermite_functions_nb(
            int(mmax), np.ascontiguousarray(np.atleast_1d(x), dtype=np.float64)
        ).reshape((int(mmax) + 1,) + np.shape(x)),
        dft_eval=lambda k, amp, t: _dft_eval_nb(
            np.ascontiguousarray(k, dtype=np.float64),
            np.ascontiguousarray(amp, dtype=np.complex128),
            np.ascontiguousarray(t, dtype=np.float64),
        ),
        point_eval=lambda kvec, amp, x, t: _point_eval_nb(
            np.ascontiguousarray(kvec, dtype=np.float64),
            np.ascontiguousarray(amp, dtype=np.complex128),
            np.ascontiguousarray(x, dtype=np.float64),
            float(t),
        ),
        direct_nonlocal=lambda f, g, kernel: complex(
            _direct_nonlocal_nb(
                np.ascontiguousarray(f, dtype=np.complex128),
                np.ascontiguousarray(g, dtype=np.complex128),
                np.ascontiguousarray(kernel, dtype=np.float64),
            )
        ),
    )
else:  # pragma: no cover
    numba_impl = numpy_impl


def active():
    """Return the kernel namespace selected by the environment flag."""
    return numba_impl if USE_NUMBA else numpy_impl


def set_threads(n: int | None) -> int:
    """Set numba's worker thread count (no-op on the numpy path); return it."""
    if not HAVE_NUMBA:
        return 1
    if n is None:
        return int(numba.config.NUMBA_NUM_THREADS)
    with warnings.catch_warnings():
        # the threading layer probe warns about old TBB builds; no kernel here uses it
        warnings.simplefilter("ignore", numba.NumbaWarning)
        numba.set_num_threads(int(n))
    return int(n)


def hermite_functions(mmax, x):
    return active().hermite_functions(mmax, x)


def dft_eval(k, amp, t):
    return active().dft_eval(k, amp, t)


def point_eval(kvec, amp, x, t):
    return active().point_eval(kvec, amp, x, t)


def direct_nonlocal(f, g, kernel):
    return active().direct_nonlocal(f, g, kernel)
