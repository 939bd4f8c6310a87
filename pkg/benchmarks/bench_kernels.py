"""Benchmark: compiled vs pure-Python mod-p row reduction.

Runs both backends on the same random matrices (dense rank computations,
the hot loop of every homology/closure computation here) and on one
end-to-end bar-homology call.  Usage: python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import os
import time

import numpy as np

from fphomalg._kernels import modp_py

try:
    from fphomalg._kernels import _modp

    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False


def time_backend(core, mats, p, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        copies = [np.ascontiguousarray(m.copy()) for m in mats]
        t0 = time.perf_counter()
        for m in copies:
            core(m, p)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_rref():
    rng = np.random.default_rng(0)
    print(f"{'size':>10} {'p':>3} {'python':>10} {'cython':>10} {'speedup':>8}")
    for size in (32, 64, 128, 256, 400):
        for p in (2, 97):
            mats = [rng.integers(0, p, size=(size, size), dtype=np.int64) for _ in range(6)]
            t_py = time_backend(modp_py.rref_core, mats, p)
            if HAVE_COMPILED:
                t_cy = time_backend(_modp.rref_core, mats, p)
                print(f"{size:>10} {p:>3} {t_py:>9.4f}s {t_cy:>9.4f}s {t_py / t_cy:>7.1f}x")
            else:
                print(f"{size:>10} {p:>3} {t_py:>9.4f}s {'n/a':>10} {'':>8}")


def bench_end_to_end():
    from fphomalg.homalg import bar_homology_dims
    from fphomalg.monalg import MonomialAlgebra

    A = MonomialAlgebra.mixed(3, [("u", 2)], [("x", 3)])
    results = {}
    for label, force in (("python", "1"), ("cython", "0")):
        if force == "0" and not HAVE_COMPILED:
            continue
        os.environ["FPHOMALG_PURE"] = force
        import importlib

        import fphomalg._kernels as kernels

        importlib.reload(kernels)
        t0 = time.perf_counter()
        bar_homology_dims(A, cap=14)
        results[label] = time.perf_counter() - t0
    os.environ.pop("FPHOMALG_PURE", None)
    print("\nbar homology of a mixed algebra, cap 14:")
    for label, t in results.items():
        print(f"  {label:>7}: {t:.4f}s")


if __name__ == "__main__":
    if not HAVE_COMPILED:
        print("compiled kernel not built; showing the pure backend only\n")
    bench_rref()
    bench_end_to_end()
