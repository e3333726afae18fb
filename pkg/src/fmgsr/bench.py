"""Benchmark of the two kernel lanes: ``python -m fmgsr.bench``.

Times the patch smoother and a full multigrid solve under each available
backend and verifies that the lanes agree bit for bit.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from . import backends, problem
from .cycles import SolverConfig, fmg_solve
from .mesh import HaloMode, build_hierarchy
from .smoothers import CrContext, SmootherConfig, smooth_level
from .stencils import restrict


def _time_best(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best * 1e3


def run_bench(m: int = 10, repeats: int = 5) -> dict[str, dict[str, float]]:
    """Collect best-of-``repeats`` timings per backend; returns ms by task."""
    n = 2 ** m
    rng = np.random.default_rng(7)
    u = rng.standard_normal(n)
    f = rng.standard_normal(n)
    cr = CrContext(u_coarse=restrict(u))
    smoother = SmootherConfig(ns=2, halo_mode=HaloMode.HALO2)
    cfg = SolverConfig(
        hierarchy=build_hierarchy(2, m), n_sr=1, smoother=smoother
    )
    forcing = problem.manufactured_rhs(n)

    results: dict[str, dict[str, float]] = {}
    outputs = {}
    previous = backends.get_backend()
    try:
        for name in backends.available_backends():
            backends.set_backend(name)
            smooth_level(u, f, smoother, 2, cr=cr)  # warm (JIT compile)
            fmg_solve(cfg, forcing)
            results[name] = {
                "smooth_level": _time_best(
                    lambda: smooth_level(u, f, smoother, 2, cr=cr), repeats
                ),
                "fmg_solve": _time_best(lambda: fmg_solve(cfg, forcing), repeats),
            }
            outputs[name] = (
                smooth_level(u, f, smoother, 2, cr=cr),
                fmg_solve(cfg, forcing)[0],
            )
    finally:
        backends.set_backend(previous)

    names = sorted(outputs)
    for a, b in zip(names, names[1:]):
        for got_a, got_b in zip(outputs[a], outputs[b]):
            if not np.array_equal(got_a, got_b):
                raise AssertionError(f"backends {a} and {b} disagree")
    return results


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="python -m fmgsr.bench", description=__doc__
    )
    parser.add_argument("--m", type=int, default=10, help="finest-level exponent")
    parser.add_argument("--repeats", type=int, default=5, help="best-of repeats")
    args = parser.parse_args(argv)

    results = run_bench(args.m, args.repeats)
    print(f"N = {2 ** args.m} cells, best of {args.repeats}")
    print(f"{'backend':>8} {'smooth_level':>14} {'fmg_solve':>12}")
    for name, times in results.items():
        print(
            f"{name:>8} {times['smooth_level']:>11.3f} ms "
            f"{times['fmg_solve']:>9.3f} ms"
        )
    if "numba" in results and "numpy" in results:
        speedup = results["numpy"]["fmg_solve"] / results["numba"]["fmg_solve"]
        print(f"numba speedup on fmg_solve: {speedup:.1f}x")
        print("lanes agree bit for bit")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
