"""Time each combinatorial kernel compiled against its interpreted fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Both paths run the same source; the interpreted one is ``kernel.py_func``,
which is also what the package uses when LATINQUOT_DISABLE_JIT=1.
"""

import argparse
import random
import time

import numpy as np

from latinquot import _kernels, backend_name
from latinquot.hyper import SupportSet, _latin_patterns


def random_cells(rng, k, p):
    cells = [(a, b, c) for a in range(k) for b in range(k) for c in range(k) if rng.random() < p]
    return np.array(cells, dtype=np.int64).reshape(-1, 3)


def cases():
    rng = random.Random(0)
    supports4 = [random_cells(rng, 4, 0.35) for _ in range(20)]
    supports3 = [random_cells(rng, 3, 0.5) for _ in range(50)]
    adj = [np.array([[rng.random() < 0.5 for _ in range(12)] for _ in range(12)], dtype=np.uint8) for _ in range(200)]
    t2 = np.full((3, 3), 2, dtype=np.int64)
    r = [1, 2, 2]
    t122 = np.array([[a * b for b in r] for a in r], dtype=np.int64)
    pats = _latin_patterns(3)
    return [
        ("min_line_cover k=4 x20", _kernels.min_line_cover, [(s, 4) for s in supports4]),
        ("max_independent k=3 x50", _kernels.max_independent, [(s, 3) for s in supports3]),
        ("lex_perfect_matching 12x12 x200", _kernels.lex_perfect_matching, [(a,) for a in adj]),
        ("enumerate_cubes sums 2", _kernels.enumerate_cubes, [(t2, t2, t2, 2, pats, 10_000)]),
        ("enumerate_cubes r=(1,2,2)", _kernels.enumerate_cubes, [(t122, t122, t122, 4, pats, 1 << 20)]),
    ]


def timed(fn, args_list, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for args in args_list:
            fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if backend_name() != "numba":
        print("numba unavailable or disabled; only the interpreted path can be timed")
    print(f"{'kernel':36} {'compiled':>10} {'python':>10} {'speedup':>8}")
    for name, fn, arglist in cases():
        py = fn.py_func
        if backend_name() == "numba":
            fn(*arglist[0])  # trigger compilation outside the timing
            fast = timed(fn, arglist, args.repeat)
        else:
            fast = float("nan")
        slow = timed(py, arglist, args.repeat)
        print(f"{name:36} {fast:10.4f} {slow:10.4f} {slow / fast:8.1f}x")


if __name__ == "__main__":
    main()
