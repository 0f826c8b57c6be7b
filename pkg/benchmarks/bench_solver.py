"""Compare the compiled and pure-Python search kernels on generated instances.

    python3 benchmarks/bench_solver.py --n 10 15 20 --seeds 5
"""

from __future__ import annotations

import argparse
import statistics
import sys

from eospuc import optsol
from eospuc.instance_gen import GenConfig, generate
from eospuc.optsol import solve


def bench(n: int, seeds: int, time_limit: float) -> dict:
    times = {"python": [], "cython": []}
    nodes = []
    for seed in range(seeds):
        inst, hidden, _ = generate(GenConfig(n=n, seed=seed))
        py = solve(inst, hidden, time_limit, backend="python")
        cy = solve(inst, hidden, time_limit, backend="cython")
        if py.proven_optimal and cy.proven_optimal and py.nodes_explored != cy.nodes_explored:
            raise AssertionError(f"n={n} seed={seed}: kernels explored different trees")
        times["python"].append(py.elapsed)
        times["cython"].append(cy.elapsed)
        nodes.append(cy.nodes_explored)
    py_t, cy_t = statistics.fmean(times["python"]), statistics.fmean(times["cython"])
    return {
        "n": n,
        "nodes": statistics.fmean(nodes),
        "python_s": py_t,
        "cython_s": cy_t,
        "speedup": py_t / cy_t if cy_t > 0 else float("inf"),
    }


def main(argv: list[str] | None = None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, nargs="+", default=[10, 15, 20])
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--time-limit", type=float, default=20.0)
    args = p.parse_args(argv)
    if optsol.BACKEND != "cython":
        print("compiled kernel not available; build the package first", file=sys.stderr)
        return 1
    print(f"{'n':>4} {'nodes':>10} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in args.n:
        r = bench(n, args.seeds, args.time_limit)
        print(f"{r['n']:>4} {r['nodes']:>10.0f} {r['python_s']:>10.4f} {r['cython_s']:>10.5f} {r['speedup']:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
