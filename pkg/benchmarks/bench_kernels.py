"""Time the numba kernels against their pure-numpy fallbacks.

Run with ``python benchmarks/bench_kernels.py``. The same inputs go through
both paths and the outputs are compared, so this doubles as a coarse
equivalence check on realistic sizes.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from recallscan import kernels


def _timeit(fn, *args, repeats: int = 3) -> tuple[float, object]:
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_dbscan(sizes: list[int], seed: int) -> None:
    rng = np.random.default_rng(seed)
    print(f"{'dbscan n':>10} {'numpy (s)':>12} {'numba (s)':>12} {'speedup':>9}")
    for n in sizes:
        pts = rng.random(n)
        dist = np.abs(pts[:, None] - pts[None, :])
        weights = np.ones(n, dtype=np.int64)
        eps, min_pts = 0.01, 4
        t_py, out_py = _timeit(kernels.dbscan_labels_py, dist, eps, min_pts, weights)
        if kernels.HAVE_NUMBA:
            kernels.dbscan_labels_jit(dist[:4, :4].copy(), eps, min_pts, weights[:4])  # warm
            t_jit, out_jit = _timeit(kernels.dbscan_labels_jit, dist, eps, min_pts, weights)
            assert np.array_equal(out_py, out_jit), "kernel paths disagree"
            print(f"{n:>10} {t_py:>12.4f} {t_jit:>12.4f} {t_py / t_jit:>8.1f}x")
        else:
            print(f"{n:>10} {t_py:>12.4f} {'n/a':>12} {'n/a':>9}")


def bench_lcs(lengths: list[int], seed: int) -> None:
    rng = np.random.default_rng(seed)
    print(f"\n{'lcs len':>10} {'numpy (s)':>12} {'numba (s)':>12} {'speedup':>9}")
    for n in lengths:
        a = rng.integers(97, 123, size=n).astype(np.int64)
        b = rng.integers(97, 123, size=n).astype(np.int64)
        t_py, out_py = _timeit(kernels.lcs_length_py, a, b)
        if kernels.HAVE_NUMBA:
            kernels.lcs_length_jit(a[:4].copy(), b[:4].copy())  # warm
            t_jit, out_jit = _timeit(kernels.lcs_length_jit, a, b)
            assert int(out_py) == int(out_jit), "kernel paths disagree"
            print(f"{n:>10} {t_py:>12.4f} {t_jit:>12.4f} {t_py / t_jit:>8.1f}x")
        else:
            print(f"{n:>10} {t_py:>12.4f} {'n/a':>12} {'n/a':>9}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--dbscan-sizes", type=int, nargs="+", default=[200, 1000, 3000],
        help="point counts for the clustering kernel",
    )
    parser.add_argument(
        "--lcs-lengths", type=int, nargs="+", default=[100, 500, 2000],
        help="string lengths for the LCS kernel",
    )
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    flag = "set" if kernels._numba_disabled_by_env() else "unset"
    print(
        f"numba available: {kernels.HAVE_NUMBA}; active path: "
        f"{'numba' if kernels.USING_NUMBA else 'numpy'} ({kernels.NO_NUMBA_ENV} {flag})\n"
    )
    bench_dbscan(args.dbscan_sizes, args.seed)
    bench_lcs(args.lcs_lengths, args.seed)


if __name__ == "__main__":
    main()
