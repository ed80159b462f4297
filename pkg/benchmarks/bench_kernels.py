"""Time the compiled feasibility kernel against the numpy fallback.

    python3 benchmarks/bench_kernels.py --case B.1 --samples 400
"""
import argparse
import time

import numpy as np

from gorbit import _kernels_py, catalog
from gorbit.geodesic import MetricSpec, _kernel_tensors, go_samples, metric_endomorphism

try:
    from gorbit import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--case", action="append", help="catalog case (repeatable); default B.3 B.7 B.1")
    ap.add_argument("--samples", type=int, default=400)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    print(f"{'case':6} {'dim_m':>5} {'dim_k':>5} {'numpy s':>9} {'cython s':>9} {'speedup':>8} {'max |dz|':>9}")
    for case in args.case or ["B.3", "B.7", "B.1"]:
        space = catalog.lookup(case).build_space()
        c_hm, c_mm = _kernel_tensors(space)
        xs = go_samples(space, args.samples, 0)
        ws = xs @ metric_endomorphism(space, MetricSpec.diagonal(1.7, 0.6)).T
        t_py, (z_py, _) = best_of(lambda: _kernels_py.feasibility_batch(c_hm, c_mm, xs, ws), args.repeats)
        if _kernels is None:
            print(f"{case:6} {space.dim_m:5d} {space.dim_k:5d} {t_py:9.4f} {'n/a':>9}")
            continue
        t_cy, (z_cy, _) = best_of(lambda: _kernels.feasibility_batch(c_hm, c_mm, xs, ws), args.repeats)
        diff = float(np.max(np.abs(np.asarray(z_cy) - z_py)))
        print(f"{case:6} {space.dim_m:5d} {space.dim_k:5d} {t_py:9.4f} {t_cy:9.4f} {t_py / t_cy:8.1f} {diff:9.1e}")


if __name__ == "__main__":
    main()
