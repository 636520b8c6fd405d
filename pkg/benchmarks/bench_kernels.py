"""Time the Cython kernels against the pure-Python recurrences.

    python3 benchmarks/bench_kernels.py [--sizes 2000,5000,10000] [--repeat 3]

Both backends are checked for identical output before timings are printed.
"""

from __future__ import annotations

import argparse
import time

from meinardus.counting import coeffs_convolution, coeffs_pentagonal, kernel_available
from meinardus.model import parse_preset


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="2000,5000,10000")
    ap.add_argument("--presets", default="pentagonal,ones,plane,polygonal:3,so5")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not kernel_available():
        raise SystemExit("compiled kernel not importable; build with pip install -e . --no-build-isolation")
    sizes = [int(x) for x in args.sizes.split(",")]
    print(f"{'preset':<14}{'N':>8}{'kernel s':>12}{'python s':>12}{'speedup':>10}")
    for name in args.presets.split(","):
        for N in sizes:
            if name == "pentagonal":
                run = lambda b: coeffs_pentagonal(N, backend=b)  # noqa: E731
            else:
                w = parse_preset(name)
                run = lambda b: coeffs_convolution(w, N, backend=b)  # noqa: E731
            tk, a = best_of(lambda: run("kernel"), args.repeat)
            tp, b = best_of(lambda: run("python"), args.repeat)
            if a.values != b.values:
                raise SystemExit(f"backends disagree for {name} at N={N}")
            print(f"{name:<14}{N:>8}{tk:>12.3f}{tp:>12.3f}{tp / tk:>10.1f}")


if __name__ == "__main__":
    main()
