"""Time the compiled grid kernel against the pure-Python fallback.

    python benchmarks/bench_kernel.py --points 200000 --repeat 3
"""
import argparse
import time

import numpy as np

from xchannel import _kernel_py

try:
    from xchannel import _kernel
except ImportError:
    _kernel = None


def best_time(fn, args, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    a2 = 10.0 ** rng.uniform(-1, 2, args.points)
    b2 = 10.0 ** rng.uniform(-3, 1, args.points)
    grid = (a2, b2, 0.5, 0.5, 0.2)

    py = best_time(_kernel_py.evaluate_grid, grid, args.repeat)
    print(f"points {args.points}")
    print(f"python  {py:.4f} s  {args.points / py:,.0f} points/s")
    if _kernel is None:
        print("cython  not built")
        return
    cy = best_time(_kernel.evaluate_grid, grid, args.repeat)
    print(f"cython  {cy:.4f} s  {args.points / cy:,.0f} points/s")
    print(f"speedup {py / cy:.1f}x")
    same = all(
        np.array_equal(x, y, equal_nan=True)
        for x, y in zip(_kernel.evaluate_grid(*grid), _kernel_py.evaluate_grid(*grid))
    )
    print(f"identical output {same}")


if __name__ == "__main__":
    main()
