#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Runs the LSTM recurrence and the 1-d convolution forward+backward at the
default training shape (batch 128, sequence 50) and at single-example
prediction shape, printing the median wall time per call for each backend.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import statistics
import time

import numpy as np

from hingsent.nn import kernels_py

try:
    from hingsent.nn import _kernels as kernels_c
except ImportError:
    kernels_c = None


def timeit(fn, repeats):
    times = []
    fn()  # warm-up
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def lstm_case(mod, n, t, d, h, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, t, d))
    wx = rng.normal(size=(d, 4 * h)) * 0.1
    wh = rng.normal(size=(h, 4 * h)) * 0.1
    b = rng.normal(size=4 * h)
    dh = rng.normal(size=(n, t, h))

    def run():
        hs, cs, gs = mod.lstm_forward(x, wx, wh, b)
        mod.lstm_backward(x, wx, wh, hs, cs, gs, dh)

    return run


def conv_case(mod, n, t, c, f, w, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, t, c))
    k = rng.normal(size=(f, w, c)) * 0.1
    b = rng.normal(size=f)
    dz = rng.normal(size=(n, t - w + 1, f))

    def run():
        mod.conv1d_forward(x, k, b)
        mod.conv1d_backward(x, k, dz)

    return run


CASES = [
    ("lstm fwd+bwd  batch=128 T=50 D=128 H=64",
     lambda mod: lstm_case(mod, 128, 50, 128, 64)),
    ("lstm fwd+bwd  batch=1   T=50 D=128 H=64",
     lambda mod: lstm_case(mod, 1, 50, 128, 64)),
    ("conv fwd+bwd  batch=128 T=50 C=128 F=64 k=3",
     lambda mod: conv_case(mod, 128, 50, 128, 64, 3)),
    ("conv fwd+bwd  batch=1   T=50 C=128 F=64 k=3",
     lambda mod: conv_case(mod, 1, 50, 128, 64, 3)),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=9)
    args = parser.parse_args()

    if kernels_c is None:
        print("compiled kernels not built; showing NumPy fallback only\n")

    header = f"{'case':<46}{'numpy':>12}"
    if kernels_c:
        header += f"{'compiled':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, make in CASES:
        t_py = timeit(make(kernels_py), args.repeats)
        line = f"{name:<46}{t_py * 1e3:>10.2f}ms"
        if kernels_c:
            t_c = timeit(make(kernels_c), args.repeats)
            line += f"{t_c * 1e3:>10.2f}ms{t_py / t_c:>9.2f}x"
        print(line)


if __name__ == "__main__":
    main()
