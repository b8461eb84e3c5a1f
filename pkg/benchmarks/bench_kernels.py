"""Time the numba kernels against their numpy counterparts.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel runs once before timing so numba compilation is excluded.
"""

import argparse
import timeit

import numpy as np

from toricbl import _kernels as K


def cases(rng):
    leads = rng.integers(0, 6, size=(400, 16), dtype=np.int64)
    target = rng.integers(3, 8, size=16, dtype=np.int64)
    verts = rng.integers(-50, 51, size=(12, 2), dtype=np.int64)
    dirs = rng.integers(-8, 9, size=(2000, 2), dtype=np.int64)
    plus = rng.integers(0, 3, size=(8, 16), dtype=np.int64)
    minus = rng.integers(0, 3, size=(8, 16), dtype=np.int64)
    return {
        "find_divisor": (lambda f: f(leads, leads.shape[0], target), K.find_divisor, K.find_divisor_numpy),
        "widths": (lambda f: f(verts, dirs), K.widths, K.widths_numpy),
        "square_triples": (lambda f: f(plus, minus), K.square_triples, K.square_triples_numpy),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()
    print(f"numba active: {K.USING_NUMBA}")
    print(f"{'kernel':<16}{'default (us)':>14}{'numpy (us)':>14}{'ratio':>8}")
    for name, (call, fast, slow) in cases(np.random.default_rng(0)).items():
        call(fast)
        call(slow)
        tf = min(timeit.repeat(lambda: call(fast), number=args.repeat, repeat=3)) / args.repeat * 1e6
        ts = min(timeit.repeat(lambda: call(slow), number=args.repeat, repeat=3)) / args.repeat * 1e6
        print(f"{name:<16}{tf:>14.1f}{ts:>14.1f}{ts / tf:>8.1f}")


if __name__ == "__main__":
    main()
