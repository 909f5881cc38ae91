"""Benchmark the compiled kernels against the numpy fallback.

Times the two hot kernels (series evaluation at mapped nodes, monotone
inversion) and one full geodesic RK4 step through each backend.

Run:  python benchmarks/bench_kernels.py [--n 256] [--repeats 20]
"""

import argparse
import time

import numpy as np

from circleflow import _kernels_py

try:
    from circleflow import _kernels_c
except ImportError:
    _kernels_c = None

from circleflow.spectral import Grid, SymbolSpec, field_from_modes


def timeit(fn, repeats):
    fn()  # warm up
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_backend(impl, n, repeats):
    grid = Grid(n)
    f = 0.4 * np.sin(grid.nodes) - 0.15 * np.cos(3 * grid.nodes)
    c = np.fft.fftshift(np.fft.fft(f)) / n
    y = grid.nodes + f
    bound = float(np.sum(np.abs(c))) + 1e-9

    t_eval = timeit(lambda: impl.eval_series(c, y), repeats)
    t_inv = timeit(lambda: impl.invert_monotone(c, grid.nodes, bound, 1e-12, 50),
                   repeats)
    return t_eval, t_inv


def bench_geodesic_step(n, repeats, force_python):
    import importlib
    import os

    if force_python:
        os.environ["CIRCLEFLOW_FORCE_PYTHON_KERNELS"] = "1"
    else:
        os.environ.pop("CIRCLEFLOW_FORCE_PYTHON_KERNELS", None)
    import circleflow.kernels
    importlib.reload(circleflow.kernels)
    import circleflow.lagrangian
    importlib.reload(circleflow.lagrangian)

    grid = Grid(n)
    geo = circleflow.lagrangian.GeodesicEngine(grid, SymbolSpec.bessel(2.0))
    f = np.zeros(grid.n)
    v = field_from_modes(grid, [(1, 1.0, 0.0)]).values
    return timeit(lambda: geo.rk4(f, v, 1e-3), repeats)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=256)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    print(f"grid n = {args.n}, best of {args.repeats}\n")
    print(f"{'kernel':26s} {'python':>12s} {'compiled':>12s} {'speedup':>9s}")

    py_eval, py_inv = bench_backend(_kernels_py, args.n, args.repeats)
    if _kernels_c is not None:
        c_eval, c_inv = bench_backend(_kernels_c, args.n, args.repeats)
        print(f"{'eval_series (n points)':26s} {1e3 * py_eval:10.3f}ms "
              f"{1e3 * c_eval:10.3f}ms {py_eval / c_eval:8.1f}x")
        print(f"{'invert_monotone':26s} {1e3 * py_inv:10.3f}ms "
              f"{1e3 * c_inv:10.3f}ms {py_inv / c_inv:8.1f}x")
    else:
        print(f"{'eval_series (n points)':26s} {1e3 * py_eval:10.3f}ms "
              f"{'(not built)':>12s}")
        print(f"{'invert_monotone':26s} {1e3 * py_inv:10.3f}ms "
              f"{'(not built)':>12s}")

    t_py = bench_geodesic_step(args.n, max(3, args.repeats // 4), True)
    if _kernels_c is not None:
        t_c = bench_geodesic_step(args.n, max(3, args.repeats // 4), False)
        print(f"{'geodesic rk4 step':26s} {1e3 * t_py:10.3f}ms "
              f"{1e3 * t_c:10.3f}ms {t_py / t_c:8.1f}x")
    else:
        print(f"{'geodesic rk4 step':26s} {1e3 * t_py:10.3f}ms {'(not built)':>12s}")


if __name__ == "__main__":
    main()
