"""Compare the compiled and pure-Python kernels.

Usage: ``python benchmarks/bench_kernels.py [--repeat 5]``
"""
import argparse
import math
import timeit

import numpy as np

from hetorbit import _pykernels

try:
    from hetorbit import _ckernels
except ImportError:
    _ckernels = None


def cases():
    rng = np.random.default_rng(0)
    ext = rng.uniform(-10, 10, 20_002)
    vals = ext[1:-1]
    return {
        "orbit 10^4 steps": lambda k: k.orbit(1.0, 0.0, -1.0, 10_000, 1e6),
        "orbit 10^5 steps": lambda k: k.orbit(0.3, 0.5, -0.1, 100_000, 1e6),
        "residual n=2e4": lambda k: k.residual(ext, 1.0),
        "action_sum n=2e4": lambda k: k.action_sum(vals, 0.0, 2 * math.pi, 1.0),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"{'kernel':<20}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>10}")
    for name, fn in cases().items():
        t_py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat)) * 1e3
        if _ckernels is None:
            print(f"{name:<20}{t_py:14.3f}{'n/a':>14}{'':>10}")
            continue
        t_c = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<20}{t_py:14.3f}{t_c:14.3f}{t_py / t_c:9.1f}x")


if __name__ == "__main__":
    main()
