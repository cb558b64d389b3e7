"""Compare the numba and numpy kernel backends.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Both backends
are called directly, so the ``CONETWIST_BACKEND`` flag does not matter here.
Each line reports the best time per call and the max relative difference
between the two results.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from conetwist import _kernels


def _cases(rng: np.random.Generator) -> dict:
    mats = rng.normal(size=(8, 2, 2)) + 1j * rng.normal(size=(8, 2, 2))
    mats /= np.sqrt(np.linalg.det(mats))[:, None, None]
    letters = rng.integers(0, 8, size=400).astype(np.int64)
    exps = rng.choice([-1, 1], size=400).astype(np.int64)
    v = rng.normal(size=(20000, 2, 2)) + 1j * rng.normal(size=(20000, 2, 2))
    v[:, 1, 1] = -v[:, 0, 0]
    a = rng.normal(size=(2000, 3))
    a /= np.linalg.norm(a, axis=1)[:, None]
    b = a + 0.05 * rng.normal(size=a.shape)
    b /= np.linalg.norm(b, axis=1)[:, None]
    axis = np.array([0.0, 0.6, 0.8])
    return {
        "word_product (400 letters)": ("word_product", (mats, letters, exps)),
        "exp_traceless (20000 matrices)": ("exp_traceless", (v,)),
        "azimuth_increments (2000 arcs)": ("azimuth_increments", (a, b, axis)),
        "arc_rates (2000 arcs)": ("arc_rates", (a, b, axis, 0.01)),
    }


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    if _kernels.numba_kernels is None:
        raise SystemExit("numba is not importable; nothing to compare")
    _kernels.active = _kernels.numba_kernels
    _kernels.warmup()
    rng = np.random.default_rng(0)
    print(f"{'kernel':34s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s} {'rel diff':>9s}")
    for label, (name, call_args) in _cases(rng).items():
        f_np = getattr(_kernels.numpy_kernels, name)
        f_nb = getattr(_kernels.numba_kernels, name)
        times = []
        for f in (f_np, f_nb):
            n = 3
            t = min(timeit.repeat(lambda: f(*call_args), number=n, repeat=args.repeat)) / n
            times.append(1e3 * t)
        r_np, r_nb = np.asarray(f_np(*call_args)), np.asarray(f_nb(*call_args))
        diff = float(np.abs(r_np - r_nb).max() / max(1.0, np.abs(r_np).max()))
        print(f"{label:34s} {times[0]:11.3f} {times[1]:11.3f} {times[0] / times[1]:8.1f} {diff:9.1e}")


if __name__ == "__main__":
    main()
