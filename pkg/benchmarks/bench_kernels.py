#!/usr/bin/env python3
"""Timing comparison of the compiled and pure-numpy kernel paths.

The compiled path is measured in-process; the fallback is measured in a
subprocess with ``PANNG_NO_NUMBA=1`` so module-level backend selection is
exercised exactly the way a user without numba would hit it.

Usage: python3 benchmarks/bench_kernels.py [--sizes 200,500,1000] [--repeats 5]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _bench_inline(sizes, repeats):
    from panng._kernels import BACKEND, kde_values, kl_gradient, pairwise_sq_dists

    rng = np.random.default_rng(0)
    results = {"backend": BACKEND, "timings": {}}
    for n in sizes:
        x = rng.normal(size=(n, 10))
        f = rng.normal(size=n)
        px = rng.random(n) + 1e-3
        px /= px.sum()
        row = {}
        for name, fn in (
            ("pairwise_sq_dists", lambda: pairwise_sq_dists(x)),
            ("kde_values", lambda: kde_values(x, 0.5)),
            ("kl_gradient", lambda: kl_gradient(f, px, 0.5)),
        ):
            fn()  # warm-up (includes JIT compilation on the compiled path)
            best = min(_timed(fn) for _ in range(repeats))
            row[name] = best
        results["timings"][str(n)] = row
    return results


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="200,500,1000")
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--_inline", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if args._inline:
        print(json.dumps(_bench_inline(sizes, args.repeats)))
        return

    active = _bench_inline(sizes, args.repeats)

    env = dict(os.environ, PANNG_NO_NUMBA="1")
    out = subprocess.run(
        [sys.executable, __file__, "--_inline", "--sizes", args.sizes,
         "--repeats", str(args.repeats)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    fallback = json.loads(out.stdout.strip().splitlines()[-1])

    print(f"active backend: {active['backend']}   fallback: {fallback['backend']}\n")
    header = f"{'kernel':<20}{'n':>6}{active['backend']:>12}{'numpy':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        for kernel in ("pairwise_sq_dists", "kde_values", "kl_gradient"):
            a = active["timings"][str(n)][kernel]
            b = fallback["timings"][str(n)][kernel]
            print(f"{kernel:<20}{n:>6}{a:>11.4f}s{b:>11.4f}s{b / a:>9.2f}x")


if __name__ == "__main__":
    main()
