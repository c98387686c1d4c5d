"""Pure-numpy kernels, vectorized across replications.

Same signatures and, for the Monte Carlo kernels, bit-identical outputs to
``_kernels_numba``.
"""
import numpy as np

from .rng import GOLDEN, INV_2_53, mix64_array

_BATCH_CELLS = 1 << 22  # replications x arcs held in memory at once


def _batches(reps, m):
    step = max(1, _BATCH_CELLS // max(m, 1))
    for lo in range(0, reps, step):
        yield lo, min(reps, lo + step)


def live_arcs(keys, m, alpha):
    """Boolean ``(len(keys), m)`` matrix of live arcs."""
    arc_offsets = np.uint64(GOLDEN) * np.arange(1, m + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        h = mix64_array(keys[:, None] + arc_offsets[None, :])
    return (h >> np.uint64(11)).astype(np.float64) * INV_2_53 < alpha


class _ArcIndex:
    def __init__(self, indptr, indices):
        self.n = indptr.shape[0] - 1
        self.src = np.repeat(np.arange(self.n), np.diff(indptr))
        self.dst = np.asarray(indices, dtype=np.int64)
        self.order = np.argsort(self.dst, kind="stable")
        sorted_dst = self.dst[self.order]
        self.targets, self.starts = np.unique(sorted_dst, return_index=True)


def _propagate(ax, live, frontier, reached):
    """Grow ``reached`` (in place) along live arcs starting from ``frontier``."""
    if ax.dst.size == 0:
        return reached
    while frontier.any():
        fired = frontier[:, ax.src] & live
        hit = np.logical_or.reduceat(fired[:, ax.order], ax.starts, axis=1)
        new = np.zeros_like(reached)
        new[:, ax.targets] = hit
        new &= ~reached
        reached |= new
        frontier = new
    return reached


def _seed_rows(rows, n, seeds):
    init = np.zeros((rows, n), dtype=bool)
    init[:, np.asarray(seeds, dtype=np.int64)] = True
    return init


def simulate_hits(indptr, indices, seeds, alpha, keys):
    ax = _ArcIndex(indptr, indices)
    hits = np.zeros(ax.n, np.int64)
    for lo, hi in _batches(keys.shape[0], ax.dst.size):
        live = live_arcs(keys[lo:hi], ax.dst.size, alpha)
        init = _seed_rows(hi - lo, ax.n, seeds)
        reached = _propagate(ax, live, init.copy(), init)
        hits += reached.sum(axis=0)
    return hits


def simulate_once(indptr, indices, seeds, alpha, key):
    keys = np.array([key], dtype=np.uint64)
    return reached_state(indptr, indices, seeds, alpha, keys)[0]


def reached_state(indptr, indices, seeds, alpha, keys):
    ax = _ArcIndex(indptr, indices)
    out = np.zeros((keys.shape[0], ax.n), dtype=bool)
    for lo, hi in _batches(keys.shape[0], ax.dst.size):
        live = live_arcs(keys[lo:hi], ax.dst.size, alpha)
        init = _seed_rows(hi - lo, ax.n, seeds)
        out[lo:hi] = _propagate(ax, live, init.copy(), init)
    return out


def _reach_from(ax, keys, alpha, state, node):
    """Rows of nodes informed once ``node`` joins ``state`` (state itself untouched)."""
    out = state.copy()
    for lo, hi in _batches(keys.shape[0], ax.dst.size):
        live = live_arcs(keys[lo:hi], ax.dst.size, alpha)
        block = out[lo:hi]
        frontier = np.zeros_like(block)
        frontier[:, node] = ~block[:, node]
        block |= frontier
        _propagate(ax, live, frontier, block)
    return out


def extend_state(indptr, indices, alpha, keys, state, node):
    ax = _ArcIndex(indptr, indices)
    grown = _reach_from(ax, keys, alpha, state, node)
    gained = int(grown.sum() - state.sum())
    state[...] = grown
    return gained


def candidate_scores(indptr, indices, alpha, keys, state, candidates):
    ax = _ArcIndex(indptr, indices)
    out_min = np.empty(len(candidates), np.int64)
    out_sum = np.empty(len(candidates), np.int64)
    for c, j in enumerate(candidates):
        counts = _reach_from(ax, keys, alpha, state, int(j)).sum(axis=0)
        out_min[c] = counts.min()
        out_sum[c] = counts.sum()
    return out_min, out_sum


def bfs_distances(indptr, indices, sources):
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, np.int64)
    frontier = np.unique(np.asarray(sources, dtype=np.int64))
    dist[frontier] = 0
    d = 0
    while frontier.size:
        starts, stops = indptr[frontier], indptr[frontier + 1]
        lengths = stops - starts
        if lengths.sum() == 0:
            break
        offsets = np.repeat(starts - np.cumsum(lengths) + lengths, lengths)
        nbrs = indices[offsets + np.arange(lengths.sum())]
        nbrs = np.unique(nbrs[dist[nbrs] < 0])
        d += 1
        dist[nbrs] = d
        frontier = nbrs
    return dist


def exact_probs(n, bond_u, bond_v, bond_sym, seed_mask, alpha):
    m = bond_u.shape[0]
    weight = np.array([alpha ** c * (1.0 - alpha) ** (m - c) for c in range(m + 1)])
    probs = np.zeros(n, np.float64)
    bits = np.arange(m, dtype=np.int64)
    chunk = 1 << 14
    for lo in range(0, 1 << m, chunk):
        masks = np.arange(lo, min(lo + chunk, 1 << m), dtype=np.int64)
        live = ((masks[:, None] >> bits[None, :]) & 1).astype(bool)
        reach = np.tile(np.asarray(seed_mask, dtype=bool), (masks.size, 1))
        while True:
            before = reach.copy()
            for b in range(m):
                u, v = bond_u[b], bond_v[b]
                reach[:, v] |= reach[:, u] & live[:, b]
                if bond_sym[b]:
                    reach[:, u] |= reach[:, v] & live[:, b]
            if np.array_equal(before, reach):
                break
        w = weight[live.sum(axis=1)]
        probs += w @ reach
    return probs
