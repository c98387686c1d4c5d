"""numba kernels. Each function mirrors one in ``_kernels_numpy`` exactly."""
import numpy as np
from numba import config, get_num_threads, njit, prange

# the bundled TBB is too old for numba; prefer the layers that load cleanly
config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV_2_53 = 1.0 / 9007199254740992.0


@njit(inline="always")
def _mix(z):
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(inline="always")
def _live(key, arc, alpha):
    h = _mix(key + _GOLDEN * np.uint64(arc + 1))
    return float(h >> _S11) * _INV_2_53 < alpha


@njit(inline="always")
def _cascade(indptr, indices, alpha, key, mark, stamp, queue, tail, blocked, row):
    # BFS over live arcs from queue[0:tail]; skips nodes with blocked[row, w] set.
    head = 0
    while head < tail:
        u = queue[head]
        head += 1
        for e in range(indptr[u], indptr[u + 1]):
            w = indices[e]
            if stamp[w] != mark and not blocked[row, w] and _live(key, e, alpha):
                stamp[w] = mark
                queue[tail] = w
                tail += 1
    return tail


def simulate_hits(indptr, indices, seeds, alpha, keys):
    nchunks = min(keys.shape[0], 4 * get_num_threads())
    return _simulate_hits(indptr, indices, seeds, alpha, keys, max(1, nchunks))


@njit(parallel=True, cache=True)
def _simulate_hits(indptr, indices, seeds, alpha, keys, nchunks):
    n = indptr.shape[0] - 1
    reps = keys.shape[0]
    partial = np.zeros((nchunks, n), np.int64)
    no_block = np.zeros((1, n), np.bool_)
    for c in prange(nchunks):
        lo = c * reps // nchunks
        hi = (c + 1) * reps // nchunks
        stamp = np.zeros(n, np.int64)
        queue = np.empty(n, np.int64)
        for i in range(lo, hi):
            mark = i + 1
            tail = 0
            for s in seeds:
                if stamp[s] != mark:
                    stamp[s] = mark
                    queue[tail] = s
                    tail += 1
            tail = _cascade(indptr, indices, alpha, keys[i], mark, stamp, queue, tail, no_block, 0)
            for q in range(tail):
                partial[c, queue[q]] += 1
    hits = np.zeros(n, np.int64)
    for c in range(nchunks):
        for v in range(n):
            hits[v] += partial[c, v]
    return hits


@njit(cache=True)
def simulate_once(indptr, indices, seeds, alpha, key):
    n = indptr.shape[0] - 1
    stamp = np.zeros(n, np.int64)
    queue = np.empty(n, np.int64)
    no_block = np.zeros((1, n), np.bool_)
    tail = 0
    for s in seeds:
        if stamp[s] != 1:
            stamp[s] = 1
            queue[tail] = s
            tail += 1
    _cascade(indptr, indices, alpha, key, 1, stamp, queue, tail, no_block, 0)
    return stamp == 1


@njit(parallel=True, cache=True)
def reached_state(indptr, indices, seeds, alpha, keys):
    """``state[i, v]``: v is informed in replication i."""
    n = indptr.shape[0] - 1
    reps = keys.shape[0]
    state = np.zeros((reps, n), np.bool_)
    no_block = np.zeros((1, n), np.bool_)
    for i in prange(reps):
        stamp = np.zeros(n, np.int64)
        queue = np.empty(n, np.int64)
        tail = 0
        for s in seeds:
            if stamp[s] != 1:
                stamp[s] = 1
                queue[tail] = s
                tail += 1
        tail = _cascade(indptr, indices, alpha, keys[i], 1, stamp, queue, tail, no_block, 0)
        for q in range(tail):
            state[i, queue[q]] = True
    return state


@njit(parallel=True, cache=True)
def extend_state(indptr, indices, alpha, keys, state, node):
    """Add ``node`` as a seed to ``state`` in place; returns newly informed count."""
    n = indptr.shape[0] - 1
    reps = keys.shape[0]
    gained = np.zeros(reps, np.int64)
    for i in prange(reps):
        if state[i, node]:
            continue
        stamp = np.zeros(n, np.int64)
        queue = np.empty(n, np.int64)
        stamp[node] = 1
        queue[0] = node
        tail = _cascade(indptr, indices, alpha, keys[i], 1, stamp, queue, 1, state, i)
        for q in range(tail):
            state[i, queue[q]] = True
        gained[i] = tail
    return gained.sum()


@njit(parallel=True, cache=True)
def candidate_scores(indptr, indices, alpha, keys, state, candidates):
    """Per candidate j: (min_v hits_v, sum_v hits_v) for the seed set state ∪ {j}."""
    n = indptr.shape[0] - 1
    reps = keys.shape[0]
    base = np.zeros(n, np.int64)
    for i in range(reps):
        for v in range(n):
            if state[i, v]:
                base[v] += 1
    base_total = base.sum()
    nc = candidates.shape[0]
    out_min = np.empty(nc, np.int64)
    out_sum = np.empty(nc, np.int64)
    for c in prange(nc):
        j = candidates[c]
        extra = np.zeros(n, np.int64)
        stamp = np.zeros(n, np.int64)
        queue = np.empty(n, np.int64)
        added = 0
        for i in range(reps):
            if state[i, j]:
                continue
            mark = i + 1
            stamp[j] = mark
            queue[0] = j
            tail = _cascade(indptr, indices, alpha, keys[i], mark, stamp, queue, 1, state, i)
            for q in range(tail):
                extra[queue[q]] += 1
            added += tail
        best = reps + 1
        for v in range(n):
            val = base[v] + extra[v]
            if val < best:
                best = val
        out_min[c] = best
        out_sum[c] = base_total + added
    return out_min, out_sum


@njit(cache=True)
def bfs_distances(indptr, indices, sources):
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    tail = 0
    for s in sources:
        if dist[s] < 0:
            dist[s] = 0
            queue[tail] = s
            tail += 1
    head = 0
    while head < tail:
        u = queue[head]
        head += 1
        for e in range(indptr[u], indptr[u + 1]):
            w = indices[e]
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue[tail] = w
                tail += 1
    return dist


@njit(cache=True)
def exact_probs(n, bond_u, bond_v, bond_sym, seed_mask, alpha):
    m = bond_u.shape[0]
    weight = np.empty(m + 1, np.float64)
    for c in range(m + 1):
        weight[c] = alpha ** c * (1.0 - alpha) ** (m - c)
    probs = np.zeros(n, np.float64)
    reach = np.empty(n, np.bool_)
    for mask in range(1 << m):
        live = 0
        for b in range(m):
            if (mask >> b) & 1:
                live += 1
        for x in range(n):
            reach[x] = seed_mask[x]
        changed = True
        while changed:
            changed = False
            for b in range(m):
                if (mask >> b) & 1:
                    u = bond_u[b]
                    v = bond_v[b]
                    if reach[u] and not reach[v]:
                        reach[v] = True
                        changed = True
                    elif bond_sym[b] and reach[v] and not reach[u]:
                        reach[u] = True
                        changed = True
        w = weight[live]
        for x in range(n):
            if reach[x]:
                probs[x] += w
    return probs
