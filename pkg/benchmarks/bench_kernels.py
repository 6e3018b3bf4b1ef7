"""Compare the compiled and pure-Python coefficient kernels.

Run with ``python3 benchmarks/bench_kernels.py [--sizes 64 256 1024] [--repeat 5]``.
Both backends are checked for identical output before timing.
"""

import argparse
import random
import timeit

from charp_nbg import _kernels_py
from charp_nbg.basefield import get_field

try:
    from charp_nbg import _kernels
except ImportError:
    _kernels = None


def cases(size, rng):
    F4 = get_field(2, 2)
    a2 = bytes(rng.randrange(2) for _ in range(size))
    b2 = bytes(rng.randrange(2) for _ in range(size))
    a3 = bytes(rng.randrange(3) for _ in range(size))
    b3 = bytes(rng.randrange(3) for _ in range(size))
    a4 = bytes(rng.randrange(4) for _ in range(size))
    b4 = bytes(rng.randrange(4) for _ in range(size))
    u3 = b"\x01" + a3[1:]
    u4 = b"\x01" + a4[1:]
    return {
        "mul_prime p=2": ("mul_prime", (a2, b2, 2 * size - 1, 2)),
        "mul_prime p=3": ("mul_prime", (a3, b3, 2 * size - 1, 3)),
        "mul_table q=4": ("mul_table", (a4, b4, 2 * size - 1, F4.add_tab, F4.mul_tab, 4)),
        "axpy_prime p=3": ("axpy_prime", (a3, 0, b3, 3, 2, size + 3, 3)),
        "inv_prime p=3": ("inv_prime", (u3, size, 3, 1)),
        "inv_table q=4": ("inv_table", (u4, size, F4.add_tab, F4.mul_tab, F4.neg_tab, 4, 1)),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[64, 256, 1024])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    if _kernels is None:
        print("compiled kernels unavailable; timing the pure-Python backend only")
    print(f"{'kernel':<18}{'size':>6}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for size in args.sizes:
        for label, (name, call) in cases(size, rng).items():
            py = getattr(_kernels_py, name)
            number = max(1, 20000 // (size * 4))
            t_py = min(timeit.repeat(lambda: py(*call), number=number, repeat=args.repeat)) / number
            if _kernels is None:
                print(f"{label:<18}{size:>6}{t_py * 1e3:>14.3f}{'-':>14}{'-':>10}")
                continue
            cy = getattr(_kernels, name)
            if bytes(cy(*call)) != bytes(py(*call)):
                raise SystemExit(f"backends disagree on {label} at size {size}")
            t_cy = min(timeit.repeat(lambda: cy(*call), number=number, repeat=args.repeat)) / number
            print(f"{label:<18}{size:>6}{t_py * 1e3:>14.3f}{t_cy * 1e3:>14.4f}{t_py / t_cy:>10.1f}")


if __name__ == "__main__":
    main()
