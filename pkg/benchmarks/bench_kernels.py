"""Time the compiled and numpy grid-search backends on the built-in example.

Usage: python benchmarks/bench_kernels.py [--grid 101 201 401] [--repeat 5]
"""
from __future__ import annotations

import argparse
import math
import time

import numpy as np

from fairgeom import kernels
from fairgeom.examples import example_prior
from fairgeom.oracle import TIE_TOL, ZERO_MASS_Y, column_grid


def best_of(fn, repeat: int) -> tuple[float, tuple]:
    times, out = [], None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, nargs="+", default=[101, 201, 401])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--epsilon", type=float, default=0.02)
    ap.add_argument("--rate", type=float, default=0.2)
    args = ap.parse_args()

    stx = np.ascontiguousarray(example_prior().joint_stx())
    names = sorted(kernels.BACKENDS)
    if "cython" not in names:
        print("compiled kernel not built; timing numpy only")
    print(f"{'grid':>6} {'candidates':>11} " + " ".join(f"{n + ' [s]':>12}" for n in names) + f" {'speedup':>8}  agree")
    for n in args.grid:
        grid = np.ascontiguousarray(column_grid(n, 2))
        results = {}
        for name in names:
            fn = kernels.BACKENDS[name]
            results[name] = best_of(
                lambda: fn(grid, stx, args.rate, args.epsilon**2, 1e-9, ZERO_MASS_Y, TIE_TOL), args.repeat
            )
        outs = [r[1] for r in results.values()]
        agree = all(o[0] == outs[0][0] and math.isclose(o[1], outs[0][1], abs_tol=1e-14) for o in outs)
        speedup = results["numpy"][0] / results["cython"][0] if "cython" in results else float("nan")
        cells = " ".join(f"{results[name][0]:12.4f}" for name in names)
        print(f"{n:6d} {outs[0][6]:11d} {cells} {speedup:8.1f}  {agree}")


if __name__ == "__main__":
    main()
