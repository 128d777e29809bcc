"""Timing comparison of the jit and numpy kernel paths.

Runs each workload on both implementations, checks they agree, and prints
a small table with the speedup. Invoke as:

    python3 benchmarks/bench_backends.py [--repeats K]

The jit path is warmed once per signature before timing so compilation
cost stays out of the numbers.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from groversim import kernels


def _random_amps(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    dim = 2**n
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return np.ascontiguousarray(v / np.linalg.norm(v))


def best_of(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5, help="timing repeats, best taken")
    args = parser.parse_args()

    if not kernels.HAVE_NUMBA:
        print("numba is not importable here; nothing to compare.")
        return 0

    workloads = []

    for n, tau in ((14, 50), (18, 30)):
        amps = _random_amps(n, n)
        marked = np.array([0, 3], dtype=np.int64)
        workloads.append((
            f"evolve n={n} tau={tau}",
            lambda a=amps, m=marked, t=tau: kernels._evolve_numba(a, m, t),
            lambda a=amps, m=marked, t=tau: kernels._evolve_numpy(a, m, t),
        ))

    amps = _random_amps(16, 7)
    marked = np.array([1, 100, 5000], dtype=np.int64)
    workloads.append((
        "trajectory n=16 tau=60",
        lambda: kernels._trajectory_numba(amps, marked, 60),
        lambda: kernels._trajectory_numpy(amps, marked, 60),
    ))

    for n, r, tau in ((5, 3, 8), (7, 2, 10), (8, 2, 8)):
        a = _random_amps(n, 10 * n + r)
        workloads.append((
            f"average n={n} r={r} tau={tau}",
            lambda v=a, rr=r, t=tau: kernels._average_trajectory_numba(v, rr, t),
            lambda v=a, rr=r, t=tau: kernels._average_trajectory_numpy(v, rr, t),
        ))

    print(f"{'workload':<26} {'jit (ms)':>10} {'numpy (ms)':>11} {'speedup':>8}   agreement")
    for label, jit_fn, np_fn in workloads:
        jit_out = jit_fn()  # warm the compiler before timing
        np_out = np_fn()
        gap = float(np.max(np.abs(np.asarray(jit_out) - np.asarray(np_out))))
        if gap > 1e-12:
            print(f"{label}: backends disagree by {gap:.3e}")
            return 1
        t_jit = best_of(jit_fn, args.repeats) * 1e3
        t_np = best_of(np_fn, args.repeats) * 1e3
        print(f"{label:<26} {t_jit:>10.2f} {t_np:>11.2f} {t_np / t_jit:>7.1f}x   {gap:.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
