#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the pure-Python fallback.

Times the four hot paths (range counting, counter updates, rough-estimator
rows, syndrome decoding) plus a whole-sketch ingest, and prints per-path
speedups. Run after building the extension:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from l1diff._kernels import _pure

try:
    from l1diff._kernels import _core
except ImportError:
    _core = None

from l1diff import kset
from l1diff.estimator import L1DiffSketch


def timeit(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_floor_sums(mod):
    rng = np.random.default_rng(0)
    qs = [
        (
            int(rng.integers(m)), int(rng.integers(m)), m,
            int(rng.integers(1 << 40)), int(rng.integers(1000)),
        )
        for m in rng.integers(2, 10_000, 20_000).tolist()
    ]

    def run():
        for a, b, m, x, r in qs:
            mod.count_range(a, b, m, x, r, 0, m // 2)

    return run


def bench_kset_apply(mod):
    p = 30983
    t1, _ = _pure.build_exp_tables(p, 5)
    rng = np.random.default_rng(1)
    x = np.zeros((4, 88), dtype=np.int64)
    rows = rng.integers(0, 4, 20_000)
    dlogs = rng.integers(0, p - 1, 20_000)
    vals = rng.integers(1, p, 20_000)
    return lambda: mod.kset_apply(x, rows, dlogs, vals, t1, p)


def bench_rough(mod):
    rng = np.random.default_rng(2)
    acc = np.zeros(600)
    idxs = rng.integers(1, 10_000, 2000)
    vals = rng.integers(1, 100, 2000)
    return lambda: mod.rough_apply(acc, idxs, vals, 0xDEADBEEF)


def bench_decode(mod):
    p, g = 524309, 2
    rng = np.random.default_rng(3)
    syndromes = []
    for _ in range(100):
        sup = rng.choice(np.arange(1, p), size=12, replace=False)
        vals = rng.integers(1, p, 12)
        syndromes.append(
            np.asarray(
                [
                    sum(int(v) * pow(int(x), z, p) for x, v in zip(sup, vals)) % p
                    for z in range(1, 129)
                ],
                dtype=np.int64,
            )
        )

    def run():
        for s in syndromes:
            assert mod.decode_power_sums(s, p, g, 64) is not None

    return run


def bench_ingest(backend_name):
    import importlib

    import l1diff._kernels as kern
    import os

    def run():
        prev = os.environ.get("L1DIFF_PURE_KERNELS")
        os.environ["L1DIFF_PURE_KERNELS"] = "1" if backend_name == "pure" else "0"
        importlib.reload(kern)
        try:
            rng = np.random.default_rng(4)
            sk = L1DiffSketch.new(0.5, 4096, 50, bytes(32))
            sk.ingest_vector(rng.integers(-50, 51, 4096))
        finally:
            if prev is None:
                del os.environ["L1DIFF_PURE_KERNELS"]
            else:
                os.environ["L1DIFF_PURE_KERNELS"] = prev
            importlib.reload(kern)

    return run


def main():
    if _core is None:
        print("compiled core not built; only timing the pure backend")
    benches = [
        ("count_range x20k", bench_floor_sums),
        ("kset_apply 20k tokens", bench_kset_apply),
        ("rough_apply 2k tokens", bench_rough),
        ("decode 100 syndromes", bench_decode),
    ]
    print(f"{'kernel':<24} {'pure':>10} {'compiled':>10} {'speedup':>8}")
    for name, make in benches:
        t_pure = timeit(make(_pure))
        if _core is not None:
            t_core = timeit(make(_core))
            print(f"{name:<24} {t_pure:>9.3f}s {t_core:>9.3f}s {t_pure / t_core:>7.1f}x")
        else:
            print(f"{name:<24} {t_pure:>9.3f}s {'-':>10} {'-':>8}")
    if _core is not None:
        kset.ctx_for_budget.cache_clear()
        t_pure = timeit(bench_ingest("pure"), repeat=1)
        t_core = timeit(bench_ingest("compiled"), repeat=1)
        print(
            f"{'full ingest n=4096':<24} {t_pure:>9.3f}s {t_core:>9.3f}s "
            f"{t_pure / t_core:>7.1f}x"
        )


if __name__ == "__main__":
    main()
