"""Independent-cascade simulation, Monte Carlo estimation and an exact oracle."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from . import kernels, rng
from .graph import Graph

DEFAULT_MAX_BONDS = 24


class CascadeError(ValueError):
    pass


class ExactCapExceeded(CascadeError):
    """Exact enumeration refused: too many independent edge coins."""


@dataclass(frozen=True)
class CascadeConfig:
    alpha: float
    reps: int = 1000
    master_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise CascadeError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.reps < 1:
            raise CascadeError(f"reps must be >= 1, got {self.reps}")

    def keys(self) -> np.ndarray:
        return rng.split_many(self.master_seed, self.reps)


def as_seeds(seeds: Iterable[int], n: int | None = None) -> np.ndarray:
    """Sorted, duplicate-free int64 seed array."""
    arr = np.unique(np.asarray(list(seeds), dtype=np.int64))
    if n is not None and arr.size and (arr[0] < 0 or arr[-1] >= n):
        raise CascadeError(f"seed ids must lie in [0, {n})")
    return arr


def simulate_once(g: Graph, seeds: Iterable[int], alpha: float, stream: int) -> set[int]:
    """One cascade; ``stream`` is a replication key such as ``rng.split(seed, i)``."""
    s = as_seeds(seeds, g.n)
    if s.size == 0:
        raise CascadeError("simulate_once needs at least one seed")
    mask = kernels.simulate_once(g.indptr, g.indices, s, float(alpha), np.uint64(stream))
    return set(np.flatnonzero(mask).tolist())


def prob_est(g: Graph, seeds: Iterable[int], cfg: CascadeConfig) -> np.ndarray:
    """Fraction of ``cfg.reps`` simulated cascades that inform each node."""
    s = as_seeds(seeds, g.n)
    if s.size == 0:
        raise CascadeError("prob_est needs at least one seed")
    hits = kernels.simulate_hits(g.indptr, g.indices, s, float(cfg.alpha), cfg.keys())
    return hits / cfg.reps


def bonds(g: Graph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Independent edge coins: reciprocal arc pairs merge into one symmetric bond.

    With a constant transmission probability only the arc leaving whichever
    endpoint is informed first can ever fire, so a pair u->v, v->u carries the
    same information as a single coin.
    """
    us, vs, sym = [], [], []
    for u, v in g.arcs():
        u, v = int(u), int(v)
        back = g.has_edge(v, u)
        if back and v < u:
            continue
        us.append(u)
        vs.append(v)
        sym.append(back)
    return (np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64),
            np.array(sym, dtype=np.bool_))


def exact_probabilities(g: Graph, seeds: Iterable[int], alpha: float,
                        max_bonds: int = DEFAULT_MAX_BONDS) -> np.ndarray:
    """Exact informed probabilities by enumerating every live-edge subgraph.

    Exponential in the number of edge coins; refuses above ``max_bonds``.
    """
    s = as_seeds(seeds, g.n)
    if s.size == 0:
        raise CascadeError("exact_probabilities needs at least one seed")
    bu, bv, bsym = bonds(g)
    if bu.size > max_bonds:
        raise ExactCapExceeded(
            f"{bu.size} independent edges exceed the exact-enumeration cap of {max_bonds}")
    seed_mask = np.zeros(g.n, dtype=np.bool_)
    seed_mask[s] = True
    probs = kernels.exact_probs(g.n, bu, bv, bsym, seed_mask, float(alpha))
    probs[s] = 1.0
    return np.clip(probs, 0.0, 1.0)


def hlevel_recurrence(ell: int, alpha: float = 0.5) -> float:
    """Iterate p_0 = 1, p_{k+1} = 1 - (1 - alpha p_k)^2 for ``ell`` steps."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    p = 1.0
    for _ in range(ell):
        p = 1.0 - (1.0 - alpha * p) ** 2
    return p


def hoeffding_tolerance(n: int, reps: int, delta: float = 0.01) -> float:
    """Deviation bound holding for all n estimates at once with prob. >= 1 - delta."""
    return math.sqrt(math.log(2 * n / delta) / (2 * reps))


def write_prob_csv(probs: np.ndarray, g: Graph, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["node_id", "probability"])
    for v, p in enumerate(probs):
        writer.writerow([g.original_ids[v], format(float(p), ".9g")])


class MonteCarloEvaluator:
    """Probability backend built on ``prob_est``; every call reuses ``cfg``'s streams."""

    exact = False

    def __init__(self, g: Graph, cfg: CascadeConfig):
        self.g = g
        self.cfg = cfg
        self.calls = 0
        self._keys = cfg.keys()

    def probs(self, seeds) -> np.ndarray:
        self.calls += 1
        s = as_seeds(seeds, self.g.n)
        if s.size == 0:
            return np.zeros(self.g.n)
        hits = kernels.simulate_hits(self.g.indptr, self.g.indices, s, float(self.cfg.alpha), self._keys)
        return hits / self.cfg.reps

    def state(self, seeds) -> np.ndarray:
        """Per-replication informed matrix for ``seeds`` (reps x n)."""
        s = as_seeds(seeds, self.g.n)
        if s.size == 0:
            return np.zeros((self.cfg.reps, self.g.n), dtype=np.bool_)
        return kernels.reached_state(self.g.indptr, self.g.indices, s, float(self.cfg.alpha), self._keys)

    def extend(self, state: np.ndarray, node: int) -> int:
        return int(kernels.extend_state(self.g.indptr, self.g.indices, float(self.cfg.alpha),
                                        self._keys, state, int(node)))

    def candidate_stats(self, seeds, candidates) -> tuple[np.ndarray, np.ndarray]:
        """min_v p_v and mean_v p_v of ``seeds ∪ {j}`` for each candidate j."""
        cands = np.asarray(candidates, dtype=np.int64)
        self.calls += cands.size
        mins, sums = self.candidate_counts(self.state(seeds), cands)
        return mins / self.cfg.reps, sums / (self.cfg.reps * self.g.n)

    def candidate_counts(self, state, candidates) -> tuple[np.ndarray, np.ndarray]:
        return kernels.candidate_scores(self.g.indptr, self.g.indices, float(self.cfg.alpha),
                                        self._keys, state, np.asarray(candidates, dtype=np.int64))


class ExactEvaluator:
    """Probability oracle backed by ``exact_probabilities`` (memoized per seed set)."""

    exact = True

    def __init__(self, g: Graph, alpha: float, max_bonds: int = DEFAULT_MAX_BONDS):
        self.g = g
        self.alpha = alpha
        self.max_bonds = max_bonds
        count = bonds(g)[0].size
        if count > max_bonds:
            raise ExactCapExceeded(
                f"{count} independent edges exceed the exact-enumeration cap of {max_bonds}")
        self.calls = 0
        self._cache: dict[tuple, np.ndarray] = {}

    def probs(self, seeds) -> np.ndarray:
        self.calls += 1
        key = tuple(as_seeds(seeds, self.g.n).tolist())
        if key not in self._cache:
            self._cache[key] = (exact_probabilities(self.g, key, self.alpha, self.max_bonds)
                                if key else np.zeros(self.g.n))
        return self._cache[key]

    def candidate_stats(self, seeds, candidates) -> tuple[np.ndarray, np.ndarray]:
        base = list(as_seeds(seeds, self.g.n))
        results = [self.probs(base + [int(j)]) for j in candidates]
        return (np.array([p.min() for p in results]), np.array([p.mean() for p in results]))
