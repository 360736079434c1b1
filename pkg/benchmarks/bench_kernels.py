"""Compare the numba and numpy jet kernels.

    python3 benchmarks/bench_kernels.py            # kernels only
    python3 benchmarks/bench_kernels.py --pipeline # also a full stratification per backend

The pipeline comparison runs each backend in a fresh interpreter because the
backend is fixed at import time by ``FRONTINDEX_NUMBA``.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from frontindex import _kernels
from frontindex.jets import ncoef, table

PIPELINE = """
import time
from frontindex.morin import FrontHomomorphism
from frontindex.strata import stratify
from frontindex.surfaces import ParallelFront, BumpyBody
field = FrontHomomorphism(ParallelFront(BumpyBody(seed=2), -1.0202))
stratify(field, 64)  # warm-up and JIT
t0 = time.perf_counter()
stratify(field, {grid})
print(time.perf_counter() - t0)
"""


def best_of(fn, repeat=5):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def bench_kernels(orders, sizes):
    rng = np.random.default_rng(0)
    rows = []
    for order in orders:
        t = table(order)
        for n in sizes:
            a = rng.normal(size=(ncoef(order), n))
            b = rng.normal(size=(ncoef(order), n))
            b[0] = 1.0 + np.abs(b[0])
            p = np.abs(a)
            p[0] += 1.0
            for name, fn, args in (("mul", _kernels.mul, (a, b)), ("div", _kernels.div, (a, b)), ("sqrt", _kernels.sqrt, (p,))):
                fn(*args, t, use_numba=True)  # compile outside the timing
                tn = best_of(lambda: fn(*args, t, use_numba=True))
                tp = best_of(lambda: fn(*args, t, use_numba=False))
                rows.append((name, order, n, tp, tn))
    return rows


def bench_pipeline(grid):
    out = {}
    for backend, flag in (("numpy", "0"), ("numba", "1")):
        env = dict(os.environ, FRONTINDEX_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", PIPELINE.format(grid=grid)], env=env, capture_output=True, text=True, check=True)
        out[backend] = float(res.stdout.strip().splitlines()[-1])
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--orders", type=int, nargs="+", default=[2, 4, 6])
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 4096, 65536])
    ap.add_argument("--pipeline", action="store_true")
    ap.add_argument("--grid", type=int, default=256)
    args = ap.parse_args()
    if not _kernels.HAS_NUMBA:
        sys.exit("numba is not importable; nothing to compare")
    print(f"{'kernel':6} {'order':>5} {'points':>7} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for name, order, n, tp, tn in bench_kernels(args.orders, args.sizes):
        print(f"{name:6} {order:5d} {n:7d} {tp * 1e3:10.3f} {tn * 1e3:10.3f} {tp / tn:8.2f}")
    if args.pipeline:
        res = bench_pipeline(args.grid)
        print(f"\nstratify parallel front at grid {args.grid}: numpy {res['numpy']:.2f} s, numba {res['numba']:.2f} s")


if __name__ == "__main__":
    main()
