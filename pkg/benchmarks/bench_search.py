#!/usr/bin/env python3
"""Benchmark the two lanes of the certificate-search filter.

Runs exhaustive none-within-bound searches (the worst case: every candidate
in the window is evaluated) and a found-certificate case, on both the
pure-Python lane and the compiled lane, printing nodes/second for each.

Usage: python benchmarks/bench_search.py [--bound 2] [--budget 2000000]
"""

import argparse
import time

from flattori import kernels
from flattori.equivalence import intertwiner_space
from flattori.exactlinear import Q, RatMatrix
from flattori.torus import TorusData, square_torus


def stretched(d):
    if d == 1:
        return TorusData(1, RatMatrix([[0, -2], [Q(1, 2), 0]]),
                         RatMatrix.diag([1, 4]), RatMatrix.zero(2, 2), "stretched")
    base = stretched(1)
    sq = square_torus(1)
    z = RatMatrix.zero(2, 2)
    return TorusData(
        2,
        RatMatrix.from_blocks([[base.I, z], [z, sq.I]]),
        RatMatrix.from_blocks([[base.G, z], [z, sq.G]]),
        RatMatrix.zero(4, 4),
        "stretched2",
    )


def instances():
    sq1 = square_torus(1)
    sq2 = square_torus(2)
    yield "d=1 mirror (certificate at node 1)", sq1, sq1, "mirror"
    yield "d=1 iso vs stretched (exhaustive)", sq1, stretched(1), "iso"
    yield "d=2 iso vs stretched (exhaustive)", sq2, stretched(2), "iso"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bound", type=int, default=2)
    ap.add_argument("--budget", type=int, default=2_000_000)
    args = ap.parse_args()

    lanes = kernels.available_lanes()
    print(f"available lanes: {', '.join(lanes)}")
    header = f"{'instance':42s} {'lane':9s} {'nodes':>10s} {'time':>9s} {'nodes/s':>12s}"
    print(header)
    print("-" * len(header))
    for name, t1, t2, kind in instances():
        basis = intertwiner_space(t1, t2, kind)
        n = 4 * t1.d
        flat = [[int(m.entries[i][j]) for i in range(n) for j in range(n)]
                for m in basis]
        for lane in lanes:
            start = time.perf_counter()
            hits, nodes, exhausted = kernels.run_filter(
                flat, n, args.bound, args.budget, max_hits=1, lane=lane)
            elapsed = time.perf_counter() - start
            rate = nodes / elapsed if elapsed > 0 else float("inf")
            status = "hit" if hits else ("done" if exhausted else "budget")
            print(f"{name:42s} {lane:9s} {nodes:10d} {elapsed:8.3f}s {rate:12.0f}"
                  f"  [{status}]")


if __name__ == "__main__":
    main()
