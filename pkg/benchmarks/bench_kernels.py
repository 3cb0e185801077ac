"""Time the numba kernels against the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat 3] [--samples 200]

Each case is run once to warm up (numba compiles on first call), then timed
`repeat` times; the best time is reported. Results of the two backends are
checked for equality before timing counts.
"""

import argparse
import time

import numpy as np

from kgff import _kernels
from kgff.algebra import FieldSpec
from kgff.approx import Psi
from kgff.experiment import RunConfig, run, runs_csv


def best_of(fn, repeat):
    out = fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return out, min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--samples", type=int, default=200)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    rows2 = rng.integers(0, 2, size=(20, 24))
    rows3 = rng.integers(0, 3, size=(12, 10))
    cases = {
        "count GF(2), 2^20 digit vectors": lambda be: _kernels.count_prefix_zero(
            rows2, 2, 0, 1 << 20, 20, be),
        "count GF(3), 3^12 digit vectors": lambda be: _kernels.count_prefix_zero(
            rows3, 3, 0, 3 ** 12, 8, be),
        "gcd histogram F_2, m=2, r=8": lambda be: _kernels.gcd_histogram(FieldSpec(2), 2, 8, be),
        f"run F_2 m=2 Q=8, {args.samples} samples": lambda be: runs_csv(run(
            RunConfig(FieldSpec(2), 2, 1, Psi.linear(2, 1), 8, args.samples, 42),
            backend=be, with_T=False)),
    }

    print(f"{'case':<40} {'numba [s]':>10} {'numpy [s]':>10} {'speedup':>8}")
    for name, fn in cases.items():
        a, t_nb = best_of(lambda: fn("numba"), args.repeat)
        b, t_np = best_of(lambda: fn("numpy"), args.repeat)
        assert a == b, f"backends disagree on {name}"
        print(f"{name:<40} {t_nb:>10.4f} {t_np:>10.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
