"""Microbenchmark of the compiled kernels against the pure-Python twins.

Times the scaled power sums and the fixed-point shape solve on the bundled
transformer data and on a larger synthetic dataset, then prints per-call
timings and the speedup. Run as `python benchmarks/bench_backends.py`.
"""

import argparse
import time

import numpy as np

from ltrcweibull._kernels import pyimpl
from ltrcweibull.data_model import load_transformer_dataset

try:
    from ltrcweibull._kernels import _cyimpl
except ImportError:
    _cyimpl = None


def _synthetic(n, seed=0):
    rng = np.random.default_rng(seed)
    t = rng.weibull(2.0, size=n) * 3.0 + 0.05
    trunc = rng.random(n) < 0.3
    tau = t[trunc] * rng.uniform(0.2, 0.9, size=trunc.sum())
    return np.log(t), np.log(tau), float(np.log(t).max())


def _time_call(fn, args, repeat, number):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - start) / number)
    return best


def _report(label, py_time, cy_time):
    line = f"{label:<38} python {py_time * 1e6:9.2f} us"
    if cy_time is not None:
        line += f"   cython {cy_time * 1e6:9.2f} us   speedup {py_time / cy_time:5.1f}x"
    print(line)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repetitions (best is reported)")
    parser.add_argument("--number", type=int, default=200,
                        help="calls per repetition")
    args = parser.parse_args()

    ds = load_transformer_dataset()
    cases = [
        ("transformer (n=100)", ds.log_t, ds.log_tau_trunc, ds.log_t_max, ds.m, ds.w1),
    ]
    for n in (1_000, 10_000):
        logt, logtau, lmax = _synthetic(n)
        w1 = float(logt.sum())
        cases.append((f"synthetic (n={n})", logt, logtau, lmax, len(logt), w1))

    print(f"cython backend available: {_cyimpl is not None}")
    for label, logt, logtau, lmax, m, w1 in cases:
        sums_args = (logt, logtau, 2.5, lmax)
        solve_args = (m, w1, logt, logtau, lmax, 1.0, 1e-8, 500)
        py_sums = _time_call(pyimpl.w_scaled_sums, sums_args, args.repeat, args.number)
        py_solve = _time_call(pyimpl.fixed_point_alpha, solve_args, args.repeat,
                              max(1, args.number // 10))
        cy_sums = cy_solve = None
        if _cyimpl is not None:
            cy_sums = _time_call(_cyimpl.w_scaled_sums, sums_args, args.repeat,
                                 args.number)
            cy_solve = _time_call(_cyimpl.fixed_point_alpha, solve_args, args.repeat,
                                  max(1, args.number // 10))
        _report(f"w_scaled_sums, {label}", py_sums, cy_sums)
        _report(f"fixed_point_alpha, {label}", py_solve, cy_solve)


if __name__ == "__main__":
    main()
