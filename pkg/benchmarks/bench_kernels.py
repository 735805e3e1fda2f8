"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--n 100000] [--max-lag 1024] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from hurstci import _kernels_py

try:
    from hurstci import _kernels
except ImportError:
    _kernels = None


def _cases(n, max_lag):
    rng = np.random.default_rng(0)
    values = np.concatenate([[0.0], np.cumsum(rng.standard_normal(n + 1))])
    x = np.ascontiguousarray(np.diff(values, 2))
    lags = np.arange(max_lag + 1, dtype=np.int64)
    return {
        "second_difference_energy": lambda k: k.second_difference_energy(values),
        "lagged_quadratic": lambda k: k.lagged_quadratic(x, k.rho_values(0.7, lags)),
        "rho_values": lambda k: k.rho_values(0.7, np.arange(100_000, dtype=np.int64)),
        "rho_abs_partial_sum": lambda k: k.rho_abs_partial_sum(0.3, 4096),
    }


def _best(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=100_000)
    parser.add_argument("--max-lag", type=int, default=1024)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if _kernels is None:
        print("compiled extension not built; only the numpy fallback is timed")
    print(f"{'kernel':<26}{'numpy [ms]':>12}{'cython [ms]':>13}{'speed-up':>10}")
    for name, call in _cases(args.n, args.max_lag).items():
        t_py = _best(lambda: call(_kernels_py), args.repeat)
        if _kernels is None:
            print(f"{name:<26}{t_py * 1e3:>12.3f}{'-':>13}{'-':>10}")
            continue
        t_c = _best(lambda: call(_kernels), args.repeat)
        print(f"{name:<26}{t_py * 1e3:>12.3f}{t_c * 1e3:>13.3f}{t_py / t_c:>9.1f}x")


if __name__ == "__main__":
    main()
