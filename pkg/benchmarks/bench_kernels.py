#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the four hot kernels at working sizes and one end-to-end
reconstruction per backend, and prints a speedup table. Usage:

    python benchmarks/bench_kernels.py [--repeats 20]
"""

import argparse
from contextlib import contextmanager
from time import perf_counter

import numpy as np

from chacs import _kernels_py as python_backend
from chacs import kernels
from chacs.dictionary import (build_real_fourier_dictionary, choose_scale,
                              sample_sparse_coefficients, synthesize_signal)
from chacs.harness import DEFAULT_INIT, DEFAULT_PARAMS, derive_seed
from chacs.henon import measure
from chacs.reconstruction import IRNLSConfig, irnls_reconstruct

try:
    from chacs import _speedups as compiled_backend
except ImportError:
    compiled_backend = None

KERNEL_NAMES = ("henon_orbit", "impulsive_slave", "excited_slave",
                "lyapunov_sum")


@contextmanager
def active_backend(module):
    """Point chacs.kernels at the given backend for the duration."""
    saved = {name: getattr(kernels, name) for name in KERNEL_NAMES}
    try:
        for name in KERNEL_NAMES:
            setattr(kernels, name, getattr(module, name))
        yield
    finally:
        for name, fn in saved.items():
            setattr(kernels, name, fn)


def best_of(repeats, fn, *args):
    best = float("inf")
    for _ in range(repeats):
        start = perf_counter()
        fn(*args)
        best = min(best, perf_counter() - start)
    return best


def kernel_cases():
    rng = np.random.default_rng(0)
    n, lam = 128, 2
    exc = np.ascontiguousarray(rng.normal(scale=0.01, size=n))
    orbit, _ = python_backend.henon_orbit(1.4, 0.3, 0.25, 0.25,
                                          np.zeros(100_000), 10.0)
    master_x = np.ascontiguousarray(orbit[:20_001, 0])
    z = np.ascontiguousarray(orbit[lam:lam * (n // lam) + 1:lam, 0].copy())
    sbar = np.ascontiguousarray(rng.normal(scale=0.01, size=n))
    dphi = np.ascontiguousarray(rng.normal(size=(n, n)) * 0.01)
    return [
        ("henon_orbit (1e5 steps)", "henon_orbit",
         (1.4, 0.3, 0.25, 0.25, np.zeros(100_000), 10.0)),
        ("impulsive_slave (2e4 steps)", "impulsive_slave",
         (1.4, 0.3, master_x, 4, 0.0, 0.0, 10.0)),
        ("excited_slave N=128 + jacobian", "excited_slave",
         (1.4, 0.3, 0.25, 0.25, lam, z, sbar, dphi, 10.0)),
        ("excited_slave N=128 residual only", "excited_slave",
         (1.4, 0.3, 0.25, 0.25, lam, z, exc, None, 10.0)),
        ("lyapunov_sum (1e5 steps)", "lyapunov_sum",
         (1.4, 0.3, 0.25, 0.25, np.zeros(100_000), 1000, 10.0)),
    ]


def end_to_end():
    d = build_real_fourier_dictionary(128)
    coeffs = sample_sparse_coefficients(128, 15, "gaussian",
                                        derive_seed(0, "coefficients"))
    scale = choose_scale(d, coeffs, DEFAULT_PARAMS, DEFAULT_INIT, 0.1)
    signal = synthesize_signal(d, coeffs, scale)
    record = measure(DEFAULT_PARAMS, DEFAULT_INIT, 2, signal)

    def run():
        irnls_reconstruct(record, d, IRNLSConfig(), derive_seed(0, "start"))

    return run


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    if compiled_backend is None:
        print("compiled backend unavailable; nothing to compare")
        return

    rows = []
    for label, name, case_args in kernel_cases():
        t_compiled = best_of(args.repeats, getattr(compiled_backend, name),
                             *case_args)
        t_python = best_of(max(3, args.repeats // 4),
                           getattr(python_backend, name), *case_args)
        rows.append((label, t_compiled, t_python))

    run = end_to_end()
    with active_backend(compiled_backend):
        t_compiled = best_of(3, run)
    with active_backend(python_backend):
        t_python = best_of(1, run)
    rows.append(("irnls_reconstruct K=15 N=128", t_compiled, t_python))

    width = max(len(r[0]) for r in rows)
    print(f"{'case':<{width}}  {'compiled':>10}  {'python':>10}  {'speedup':>8}")
    for label, tc, tp in rows:
        print(f"{label:<{width}}  {tc * 1e3:>8.2f}ms  {tp * 1e3:>8.2f}ms  "
              f"{tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
