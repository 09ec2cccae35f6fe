"""Compare the compiled and numpy kernels on full multiplication tables.

    python3 benchmarks/bench_kernels.py [--max-n 5] [--repeat 5]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from hyperoct import _pykernels
from hyperoct.group import enumerate_group

try:
    from hyperoct import _ckernels
except ImportError:
    _ckernels = None


def bench(impl, idx, repeat: int) -> float:
    rows = np.arange(len(idx))
    return min(timeit.repeat(lambda: impl.product_codes(idx.etas, idx.perms, rows), number=1, repeat=repeat))


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=5)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    print(f"{'n':>2} {'order':>6} {'numpy [s]':>10} {'cython [s]':>11} {'speedup':>8}")
    for n in range(2, args.max_n + 1):
        idx = enumerate_group(n, max_n=args.max_n)
        py = bench(_pykernels, idx, args.repeat)
        if _ckernels is None:
            print(f"{n:>2} {len(idx):>6} {py:>10.4f} {'n/a':>11} {'n/a':>8}")
            continue
        cy = bench(_ckernels, idx, args.repeat)
        assert (_pykernels.product_codes(idx.etas, idx.perms, np.arange(len(idx)))
                == _ckernels.product_codes(idx.etas, idx.perms, np.arange(len(idx)))).all()
        print(f"{n:>2} {len(idx):>6} {py:>10.4f} {cy:>11.4f} {py / cy:>7.1f}x")


if __name__ == "__main__":
    main()
