#!/usr/bin/env python3
"""Benchmark the braid-search kernels: numba backend vs numpy fallback.

The orbit search spends essentially all of its time expanding BFS frontiers
of unipotent int64 matrices and sign-canonicalizing the children.  This
script times that inner loop for both backends on identical workloads and
checks they produce byte-identical output.

Run:  python3 benchmarks/bench_braid.py [--levels N] [--n DIM]
The active backend for the library is chosen by QUIVERSTOKES_BACKEND
(numba when available, else numpy); both are exercised here regardless.
"""

import argparse
import time

import numpy as np

from quiverstokes import _kernels


def frontier_workload(n: int, levels: int, expand, canonical, entry_bound=64):
    """Expand `levels` BFS layers from the bidiagonal seed; returns
    (#states, elapsed seconds)."""
    seed = np.eye(n, dtype=np.int64)
    for i in range(n - 1):
        seed[i, i + 1] = -1
    start = time.perf_counter()
    canon, _ = canonical(seed)
    seen = {canon.tobytes()}
    frontier = [canon]
    for _ in range(levels):
        batch = np.stack(frontier)
        children, ok = expand(batch, entry_bound)
        frontier = []
        for idx in range(children.shape[0]):
            if not ok[idx]:
                continue
            canon, _ = canonical(children[idx])
            key = canon.tobytes()
            if key not in seen:
                seen.add(key)
                frontier.append(canon)
        if not frontier:
            break
    return len(seen), time.perf_counter() - start


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--levels", type=int, default=6)
    ap.add_argument("--n", type=int, default=5)
    args = ap.parse_args()

    backends = [("numpy", _kernels._py_expand_frontier, _kernels._py_sign_canonical)]
    if _kernels.backend_name() == "numba":
        # warm up the jit so compile time is reported separately
        warm = time.perf_counter()
        frontier_workload(3, 1, _kernels.expand_frontier, _kernels.sign_canonical)
        print(f"numba warm-up (jit compile/load): {time.perf_counter() - warm:.2f}s")
        backends.append(("numba", _kernels.expand_frontier, _kernels.sign_canonical))
    else:
        print("numba backend not active (QUIVERSTOKES_BACKEND or missing numba); "
              "timing the numpy fallback only")

    results = {}
    for name, expand, canonical in backends:
        states, elapsed = frontier_workload(args.n, args.levels, expand, canonical)
        results[name] = (states, elapsed)
        print(f"{name:>6}: {states} states over {args.levels} levels "
              f"(n={args.n}) in {elapsed:.3f}s")

    if len(results) == 2:
        s_np, t_np = results["numpy"]
        s_nb, t_nb = results["numba"]
        assert s_np == s_nb, "backends disagree on the reachable state set"
        print(f"speedup numba/numpy: {t_np / t_nb:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
