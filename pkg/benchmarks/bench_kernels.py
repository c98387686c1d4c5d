"""Time the numba and pure-numpy kernel paths on the same inputs and check they agree.

    python benchmarks/bench_kernels.py [--nodes 300] [--reps 1000] [--repeat 3]
"""
import argparse
import time

import numpy as np

from maximin_access import _kernels_numba as nb
from maximin_access import _kernels_numpy as npk
from maximin_access.cascade import bonds
from maximin_access.graph import Graph
from maximin_access.rng import split_many


def random_graph(n: int, degree: int, seed: int) -> Graph:
    gen = np.random.default_rng(seed)
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [tuple(e) for e in gen.integers(0, n, size=(n * degree // 2, 2))]
    return Graph.from_edges(n, edges, directed=False)


def best_of(fn, repeat):
    out, best = None, float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, default=300)
    ap.add_argument("--degree", type=int, default=6)
    ap.add_argument("--reps", type=int, default=1000)
    ap.add_argument("--alpha", type=float, default=0.2)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    g = random_graph(args.nodes, args.degree, 7)
    keys = split_many(11, args.reps)
    seeds = np.array([0], dtype=np.int64)
    state = nb.reached_state(g.indptr, g.indices, seeds, args.alpha, keys)
    cands = np.arange(1, min(g.n, 60), dtype=np.int64)
    small = random_graph(10, 3, 3)
    bu, bv, bs = bonds(small)
    mask = np.zeros(small.n, dtype=np.bool_)
    mask[0] = True

    cases = {
        "simulate_hits": lambda k: k.simulate_hits(g.indptr, g.indices, seeds, args.alpha, keys),
        "reached_state": lambda k: k.reached_state(g.indptr, g.indices, seeds, args.alpha, keys),
        "candidate_scores": lambda k: k.candidate_scores(g.indptr, g.indices, args.alpha, keys, state, cands),
        "bfs_distances": lambda k: k.bfs_distances(g.indptr, g.indices, seeds),
        "exact_probs": lambda k: k.exact_probs(small.n, bu, bv, bs, mask, 0.3),
    }
    print(f"graph: n={g.n} arcs={g.num_arcs} reps={args.reps}; exact case: {bu.size} bonds")
    print(f"{'kernel':<18}{'numba s':>12}{'numpy s':>12}{'speedup':>10}  match")
    for name, call in cases.items():
        call(nb)  # compile outside the timed region
        t_nb, r_nb = best_of(lambda: call(nb), args.repeat)
        t_np, r_np = best_of(lambda: call(npk), args.repeat)
        if isinstance(r_nb, tuple):
            same = all(np.array_equal(a, b) for a, b in zip(r_nb, r_np))
        elif r_nb.dtype.kind == "f":
            same = bool(np.allclose(r_nb, r_np, rtol=0, atol=1e-12))
        else:
            same = bool(np.array_equal(r_nb, r_np))
        print(f"{name:<18}{t_nb:>12.5f}{t_np:>12.5f}{t_np / max(t_nb, 1e-9):>10.1f}  {same}")


if __name__ == "__main__":
    main()
