"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The first numba call (JIT compile or cache load) is excluded from timings.
Each row also reports the max deviation between the two paths.
"""

import argparse
import time

import numpy as np

from photonwm import _accel


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(rng):
    k = rng.uniform(5, 15, 4000)
    amp = rng.normal(size=4000) + 1j * rng.normal(size=4000)
    t = np.linspace(-50, 50, 2000)
    yield "dft_eval 4000x2000", (k, amp, t)

    kvec = rng.normal(size=(6000, 3))
    amp3 = rng.normal(size=(6000, 3)) + 1j * rng.normal(size=(6000, 3))
    x = rng.uniform(-3, 3, size=(200, 3))
    yield "point_eval 6000x200", (kvec, amp3, x, 0.7)

    n = 8
    f = rng.normal(size=(n, n, n, 3)) + 1j * rng.normal(size=(n, n, n, 3))
    g = rng.normal(size=(n, n, n, 3)) + 1j * rng.normal(size=(n, n, n, 3))
    kern = rng.uniform(size=(n, n, n))
    yield "direct_nonlocal 8^3", (f, g, kern)

    xs = np.linspace(-12, 12, 20000)
    yield "hermite_functions 60x20000", (60, xs)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        print("numba not installed; nothing to compare")
        return
    rng = np.random.default_rng(7)
    print(f"{'kernel':30s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s} {'max dev':>9s}")
    for label, call_args in cases(rng):
        name = label.split()[0]
        f_np = getattr(_accel.numpy_impl, name)
        f_nb = getattr(_accel.numba_impl, name)
        ref = np.asarray(f_np(*call_args))
        dev = np.max(np.abs(np.asarray(f_nb(*call_args)) - ref)) / max(np.max(np.abs(ref)), 1e-300)
        t_np = best_of(lambda: f_np(*call_args), args.repeat)
        t_nb = best_of(lambda: f_nb(*call_args), args.repeat)
        print(f"{label:30s} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:8.1f} {dev:9.1e}")


if __name__ == "__main__":
    main()
