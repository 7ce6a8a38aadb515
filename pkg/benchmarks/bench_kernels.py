"""Timing comparison of the compiled kernels against the pure-numpy fallback.

Runs each hot kernel in two child processes, one with the default
(numba-compiled) path and one with FOCKPROJ_NO_NUMBA=1, and prints a table.

Usage: python3 benchmarks/bench_kernels.py
"""
import json
import os
import subprocess
import sys
import time

import numpy as np


def _bench_child():
    from fockproj import _kernels

    rng = np.random.default_rng(0)
    results = {"path": "numba" if _kernels.USE_NUMBA else "numpy"}

    # stratified-sampling workhorse: one value per 6-coordinate row
    n = 200_000
    a = np.exp(rng.uniform(-2.0, 2.0, n))
    d = np.exp(rng.uniform(-2.0, 2.0, n))
    b = rng.uniform(-0.95, 0.95, n) * np.sqrt(a * d)
    coords = np.column_stack([a, d, b, rng.normal(scale=2.0, size=(n, 3))])
    _kernels.objective_batch(coords[:100], 3.0)  # warm up (JIT compile)
    t0 = time.perf_counter()
    _kernels.objective_batch(coords, 3.0)
    results["objective_batch_200k"] = time.perf_counter() - t0

    # full-grid oscillatory sum used by the independent quadrature engine
    w = rng.normal(size=(3, 3))
    a_mat = (w @ w.T / 3 + 0.3 * np.eye(3)).astype(complex) + 0.2j * (w + w.T)
    v_vec = (rng.normal(size=3) + 1j * rng.normal(size=3)) * 0.3
    transform = np.linalg.cholesky(np.real(a_mat)).T
    y = np.linspace(-6.0, 6.0, 101)
    _kernels.grid_expquad_sum(y[:9], transform, a_mat, v_vec)  # warm up
    t0 = time.perf_counter()
    _kernels.grid_expquad_sum(y, transform, a_mat, v_vec)
    results["grid_expquad_sum_101^3"] = time.perf_counter() - t0

    # kernel-times-factors contraction (double-quadrature checks)
    m = 2000
    zs = rng.normal(size=m) + 1j * rng.normal(size=m)
    ws = rng.normal(size=m) + 1j * rng.normal(size=m)
    factors = rng.normal(size=m) + 1j * rng.normal(size=m)
    _kernels.kernel_colsum(zs[:50], ws[:50], factors[:50], 1.0)  # warm up
    t0 = time.perf_counter()
    _kernels.kernel_colsum(zs, ws, factors, 1.0)
    results["kernel_colsum_2000x2000"] = time.perf_counter() - t0

    print(json.dumps(results))


def main():
    if "--child" in sys.argv:
        _bench_child()
        return

    timings = {}
    for label, extra_env in (("numba", {"FOCKPROJ_NO_NUMBA": ""}), ("numpy", {"FOCKPROJ_NO_NUMBA": "1"})):
        env = {k: v for k, v in os.environ.items() if k != "FOCKPROJ_NO_NUMBA"}
        env.update({k: v for k, v in extra_env.items() if v})
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--child"],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        timings[label] = json.loads(out.stdout.strip().splitlines()[-1])

    if timings["numba"]["path"] != "numba":
        print("note: numba unavailable in this environment; both runs used numpy")
    kernels = [k for k in timings["numba"] if k != "path"]
    width = max(len(k) for k in kernels)
    print(f"{'kernel':<{width}}  {'numba':>10}  {'numpy':>10}  {'speedup':>8}")
    for kernel in kernels:
        fast = timings["numba"][kernel]
        slow = timings["numpy"][kernel]
        print(f"{kernel:<{width}}  {fast * 1e3:>8.2f}ms  {slow * 1e3:>8.2f}ms  {slow / fast:>7.2f}x")


if __name__ == "__main__":
    main()
