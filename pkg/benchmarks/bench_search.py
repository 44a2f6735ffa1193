"""Compare the pure-Python and compiled search kernels.

Runs the same alpha-beta searches on both backends over a shared batch
of random positions and reports throughput. The compiled kernel is
skipped (with a note) when the extension is not built.

Usage: python3 benchmarks/bench_search.py [--positions N] [--depth D] [--seed S]
"""

import argparse
import time

from moraba._kernel import pycore

try:
    from moraba._kernel import cycore
except ImportError:
    cycore = None

from moraba.ai import DEFAULT_WEIGHTS, _tables, load_state
from moraba.board import standard_topology
from moraba.classic import random_positions, terminal


def build_core(backend, topology):
    count, adjacency, mills, order, _ = _tables(topology)
    return backend.Core(count, adjacency, mills, order)


def run(backend, states, depth):
    topology = standard_topology()
    core = build_core(backend, topology)
    results = []
    started = time.perf_counter()
    for state in states:
        load_state(core, state)
        results.append(core.search(depth, *DEFAULT_WEIGHTS))
    elapsed = time.perf_counter() - started
    return elapsed, results


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--positions", type=int, default=40)
    parser.add_argument("--depth", type=int, default=3)
    parser.add_argument("--seed", type=int, default=2024)
    args = parser.parse_args(argv)

    states = [s for s in random_positions(args.seed, args.positions) if terminal(s) is None]
    print(f"{len(states)} positions, depth {args.depth}, weights {DEFAULT_WEIGHTS}")

    py_elapsed, py_results = run(pycore, states, args.depth)
    print(f"python : {py_elapsed:8.3f}s  {len(states) / py_elapsed:8.1f} pos/s")

    if cycore is None:
        print("cython : extension not built (pip install -e . rebuilds it)")
        return 0
    cy_elapsed, cy_results = run(cycore, states, args.depth)
    speedup = py_elapsed / cy_elapsed
    print(f"cython : {cy_elapsed:8.3f}s  {len(states) / cy_elapsed:8.1f} pos/s  ({speedup:.1f}x)")

    mismatches = sum(1 for a, b in zip(py_results, cy_results) if a != b)
    print(f"agreement: {len(states) - mismatches}/{len(states)} identical results")
    return 0 if mismatches == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
