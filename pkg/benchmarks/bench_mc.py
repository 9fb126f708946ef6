"""Benchmark the compiled trajectory kernel against the pure-Python fallback.

Both kernels consume the same pre-generated uniforms and must produce
bit-identical trajectories; this script times them side by side and checks
that equivalence on the way.

Usage: python3 benchmarks/bench_mc.py [--n 12] [--trials 200000] [--a0 0.75]
"""

import argparse
import time

import numpy as np

from belldistil import werner
from belldistil import _trajectory_py
from belldistil.iterative_scheme import _depth_tables

try:
    from belldistil import _trajectory_cy
except ImportError:
    _trajectory_cy = None


def run(kernel, u, n, psucc, fid):
    out = np.empty(u.shape[0])
    failed = np.zeros(u.shape[0], dtype=np.uint8)
    start = time.perf_counter()
    kernel.simulate(u, n, psucc, fid, True, True, 0.5, out, failed)
    return time.perf_counter() - start, out, failed


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=12)
    parser.add_argument("--trials", type=int, default=200_000)
    parser.add_argument("--a0", type=float, default=0.75)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    fid, psucc = _depth_tables(werner(args.a0), args.n)
    u = np.random.Generator(np.random.Philox(key=args.seed)).random(
        (args.trials, args.n)
    )

    t_py, out_py, failed_py = run(_trajectory_py, u, args.n, psucc, fid)
    print(f"python   kernel: {t_py:8.4f} s   mean={out_py.mean():.9f}")

    if _trajectory_cy is None:
        print("compiled kernel: not built (pip install -e . --no-build-isolation)")
        return

    t_cy, out_cy, failed_cy = run(_trajectory_cy, u, args.n, psucc, fid)
    print(f"compiled kernel: {t_cy:8.4f} s   mean={out_cy.mean():.9f}")
    identical = np.array_equal(out_py, out_cy) and np.array_equal(failed_py, failed_cy)
    print(f"bit-identical:   {identical}")
    print(f"speedup:         {t_py / t_cy:.1f}x")
    if not identical:
        raise SystemExit("kernel outputs diverged")


if __name__ == "__main__":
    main()
