#!/usr/bin/env python3
"""Benchmark the compiled bound-search kernel against its pure-Python twin.

Both kernels implement identical semantics (the test suite pins their
values against each other); this script measures the throughput gap that
justifies shipping the compiled extension for the sampling experiments.

Usage: python benchmarks/bench_kernels.py [--samples 2000]
"""

import argparse
import time

import numpy as np

from choreknife.bounds import _pykernel, kernel_name

try:
    from choreknife.bounds import _speedups
except ImportError:
    _speedups = None


def bench(module, weights, family, depth):
    start = time.perf_counter()
    best = 0.0
    for row in weights:
        value = module.eval_bound(row, family, depth, best)
        if value > best:
            best = value
    return time.perf_counter() - start, best


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--samples", type=int, default=2000)
    parser.add_argument("--depth", type=int, default=3)
    args = parser.parse_args()

    if _speedups is None:
        print("compiled kernel unavailable; showing pure-Python timings only")
    print(f"active kernel at import: {kernel_name}")
    print(f"{'n':>3} {'family':>10} {'python':>12} {'compiled':>12} {'speedup':>9}")

    rng = np.random.default_rng(0)
    for n in (3, 4, 5, 6, 8, 10):
        count = args.samples if n <= 6 else max(args.samples // 10, 50)
        weights = rng.dirichlet(np.ones(n), size=count)
        family = 0
        py_time, py_best = bench(_pykernel, weights, family, args.depth)
        if _speedups is not None:
            c_time, c_best = bench(_speedups, weights, family, args.depth)
            assert abs(py_best - c_best) < 1e-9, (py_best, c_best)
            print(f"{n:>3} {'auto':>10} {py_time / count * 1e6:>10.1f}us "
                  f"{c_time / count * 1e6:>10.1f}us {py_time / c_time:>8.1f}x")
        else:
            print(f"{n:>3} {'auto':>10} {py_time / count * 1e6:>10.1f}us "
                  f"{'-':>12} {'-':>9}")


if __name__ == "__main__":
    main()
