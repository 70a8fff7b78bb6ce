#!/usr/bin/env python3
"""Benchmark the compiled vs pure-numpy series kernels.

Times the batch evaluators that dominate verification sweeps: interval
image sums, eigenfunction sums, and the Robin half-line closed form.
Run:  python benchmarks/bench_backends.py [batch_size]
"""

import sys
import time

import numpy as np

from heatbound import _series_numpy as np_impl

try:
    from heatbound import _series_numba as nb_impl
except ImportError:
    nb_impl = None


def _time(fn, *args, repeats=7):
    fn(*args)  # warm up (JIT compile / cache load)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    rng = np.random.default_rng(0)
    x = rng.uniform(0.05, 0.95, n)
    y = rng.uniform(0.05, 0.95, n)
    t = 10 ** rng.uniform(-3, -0.5, n)

    cases = [
        ("interval images (9 refl.)",
         lambda impl: impl.interval_images_batch(-1.0, 1.0, x, y, t, 1.0, 4)),
        ("interval images dev",
         lambda impl: impl.interval_images_dev_batch(-1.0, 1.0, x, y, t, 1.0, 4)),
        ("interval eigen (60 modes)",
         lambda impl: impl.interval_eigen_batch(-1.0, 1.0, x, y, t, 1.0, 60)),
        ("halfline Robin sigma=5",
         lambda impl: impl.halfline_batch(1.0, 5.0, x, y, t)),
    ]

    print(f"batch size {n}")
    print(f"{'kernel':<28} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for label, call in cases:
        t_np = _time(lambda: call(np_impl))
        if nb_impl is None:
            print(f"{label:<28} {t_np * 1e3:9.2f}ms {'n/a':>10} {'n/a':>9}")
            continue
        t_nb = _time(lambda: call(nb_impl))
        a = call(np_impl)
        b = call(nb_impl)
        worst = float(np.max(np.abs(a - b)))
        print(
            f"{label:<28} {t_np * 1e3:9.2f}ms {t_nb * 1e3:9.2f}ms "
            f"{t_np / t_nb:8.1f}x  (max |diff| {worst:.1e})"
        )


if __name__ == "__main__":
    main()
