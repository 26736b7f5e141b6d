"""Compare the numba kernels against the pure-numpy fallback.

Run as a script:  python3 benchmarks/bench_kernels.py [--sizes 100,200,400]

Times all-pairs BFS, the incremental distance update, and the
per-candidate addition row sums on random connected graphs.  The
selected backend for normal library use is controlled by the
DEGPRICE_NO_NUMBA environment variable; this script times both
variants explicitly regardless of that setting.
"""

import argparse
import random
import time

import numpy as np

from degprice import _kernels


def random_connected_adjacency(n, extra_edges, rng):
    adj = np.zeros((n, n), dtype=np.bool_)
    order = list(range(n))
    rng.shuffle(order)
    for a, b in zip(order, order[1:]):
        adj[a, b] = adj[b, a] = True
    added = 0
    while added < extra_edges:
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b and not adj[a, b]:
            adj[a, b] = adj[b, a] = True
            added += 1
    return adj


def timeit(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_size(n, rng):
    adj = random_connected_adjacency(n, 2 * n, rng)
    rows = []

    variants = [("numpy", _kernels.apsp_np)]
    if _kernels.HAS_NUMBA:
        variants.append(("numba", _kernels.apsp_nb))
    results = {}
    for label, fn in variants:
        t, dist = timeit(fn, adj)
        results[label] = dist
        rows.append(("apsp", label, t))
    if len(results) == 2:
        assert np.array_equal(results["numpy"], results["numba"]), "apsp outputs differ"
    dist = next(iter(results.values()))

    u, v = 0, n - 1
    variants = [("numpy", _kernels.apsp_update_add_np)]
    if _kernels.HAS_NUMBA:
        variants.append(("numba", _kernels.apsp_update_add_nb))
    updated = {}
    for label, fn in variants:
        d = dist.copy()
        t, _ = timeit(lambda f=fn, dd=d: f(dd, u, v), repeat=1)
        updated[label] = d
        rows.append(("apsp_update_add", label, t))
    if len(updated) == 2:
        assert np.array_equal(updated["numpy"], updated["numba"]), "update outputs differ"

    variants = [("numpy", _kernels.addition_row_sums_np)]
    if _kernels.HAS_NUMBA:
        variants.append(("numba", _kernels.addition_row_sums_nb))
    sums = {}
    for label, fn in variants:
        t, s = timeit(fn, dist, 0)
        sums[label] = s
        rows.append(("addition_row_sums", label, t))
    if len(sums) == 2:
        assert np.array_equal(sums["numpy"], sums["numba"]), "row sum outputs differ"

    return rows


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="100,200,400")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = random.Random(args.seed)

    print(f"numba available: {_kernels.HAS_NUMBA} (library backend: {_kernels.BACKEND})")
    if _kernels.HAS_NUMBA:
        # warm the JIT cache so compile time is not billed to the first size
        warm = random_connected_adjacency(16, 8, rng)
        d = _kernels.apsp_nb(warm)
        _kernels.apsp_update_add_nb(d, 0, 1)
        _kernels.addition_row_sums_nb(d, 0)

    print(f"{'kernel':<20} {'backend':<8} " + " ".join(f"n={n:<8}" for n in sizes))
    table = {}
    for n in sizes:
        for kernel, label, t in bench_size(n, rng):
            table.setdefault((kernel, label), []).append(t)
    for (kernel, label), times in table.items():
        cells = " ".join(f"{t * 1000:8.2f}ms" for t in times)
        print(f"{kernel:<20} {label:<8} {cells}")


if __name__ == "__main__":
    main()
