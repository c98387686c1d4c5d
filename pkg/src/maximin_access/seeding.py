"""Seed-selection heuristics for maximin access, plus Random and a reach baseline.

Every heuristic takes an evaluation backend: ``MonteCarloEvaluator`` (the
default, built from a ``CascadeConfig``) or ``ExactEvaluator``. Ties in any
argmin/argmax go to the smallest node id; values within ``TIE_TOL`` are ties.
"""
from __future__ import annotations

import heapq
import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .cascade import CascadeConfig, MonteCarloEvaluator, as_seeds
from .graph import Graph, bfs_hop_distances, max_degree_node
from .welfare import TIE_TOL

METHODS = ("greedy", "myopic", "naive-myopic", "gonzalez", "random", "reach-greedy")


class SelectionError(ValueError):
    pass


@dataclass
class SelectionResult:
    method: str
    seeds: tuple[int, ...]
    added: tuple[int, ...]
    per_round_min: list[float] = field(default_factory=list)
    wall_time: float = 0.0
    evaluations: int = 0


def _smallest_at_min(values: np.ndarray) -> int:
    return int(np.flatnonzero(values <= values.min() + TIE_TOL)[0])


def _smallest_at_max(values: np.ndarray) -> int:
    return int(np.flatnonzero(values >= values.max() - TIE_TOL)[0])


class _Run:
    """Shared bookkeeping: seed list, first-seed rule, timing and round tracking."""

    def __init__(self, method, g, initial, k, evaluator=None, first_seed="degree"):
        if k < 0:
            raise SelectionError("k must be >= 0")
        self.method, self.g, self.evaluator = method, g, evaluator
        self.initial = as_seeds(initial, g.n).tolist()
        if k > g.n - len(self.initial):
            raise SelectionError(f"k={k} exceeds the {g.n - len(self.initial)} available non-seeds")
        self.seeds = list(self.initial)
        self.added: list[int] = []
        self.rounds = k
        self.start = time.perf_counter()
        if not self.seeds and k > 0 and first_seed == "degree":
            self.add(max_degree_node(g))
            self.rounds = k - 1
        elif first_seed not in ("degree", "evaluate"):
            raise SelectionError(f"unknown first_seed rule {first_seed!r}")

    def add(self, v: int) -> None:
        self.seeds.append(int(v))
        self.added.append(int(v))

    def candidates(self) -> np.ndarray:
        mask = np.ones(self.g.n, dtype=bool)
        mask[self.seeds] = False
        return np.flatnonzero(mask)

    def finish(self, track: bool) -> SelectionResult:
        elapsed = time.perf_counter() - self.start
        calls = self.evaluator.calls if self.evaluator is not None else 0
        per_round = []
        if track and self.evaluator is not None:
            prefix = list(self.initial)
            for v in self.added:
                prefix.append(v)
                per_round.append(float(self.evaluator.probs(prefix).min()))
        return SelectionResult(self.method, tuple(sorted(self.seeds)), tuple(self.added),
                               per_round, elapsed, calls)


def _backend(g, cfg, evaluator):
    if evaluator is not None:
        return evaluator
    if cfg is None:
        raise SelectionError("need a CascadeConfig or an evaluator")
    return MonteCarloEvaluator(g, cfg)


def greedy_maximin(g: Graph, initial, k: int, cfg: CascadeConfig | None = None, *,
                   evaluator=None, first_seed: str = "degree", track: bool = True) -> SelectionResult:
    """Each round add the non-seed whose addition maximizes the minimum probability.

    ``first_seed="evaluate"`` runs a full greedy round even from an empty seed
    set instead of starting at the highest-degree vertex.
    """
    ev = _backend(g, cfg, evaluator)
    run = _Run("greedy", g, initial, k, ev, first_seed)
    for _ in range(run.rounds):
        cands = run.candidates()
        mins, _ = ev.candidate_stats(run.seeds, cands)
        run.add(cands[_smallest_at_max(mins)])
    return run.finish(track)


def myopic(g: Graph, initial, k: int, cfg: CascadeConfig | None = None, *,
           evaluator=None, track: bool = True) -> SelectionResult:
    """Each round re-estimate probabilities and seed the least-informed node."""
    ev = _backend(g, cfg, evaluator)
    run = _Run("myopic", g, initial, k, ev)
    for _ in range(run.rounds):
        probs = ev.probs(run.seeds)
        cands = run.candidates()
        run.add(cands[_smallest_at_min(probs[cands])])
    return run.finish(track)


def naive_myopic(g: Graph, initial, k: int, cfg: CascadeConfig | None = None, *,
                 evaluator=None, track: bool = True) -> SelectionResult:
    """One estimate, then seed the k' least-informed non-seeds at once."""
    ev = _backend(g, cfg, evaluator)
    run = _Run("naive-myopic", g, initial, k, ev)
    if run.rounds:
        probs = ev.probs(run.seeds)
        cands = run.candidates()
        remaining = probs[cands].copy()
        for _ in range(run.rounds):
            i = _smallest_at_min(remaining)
            run.add(cands[i])
            remaining[i] = math.inf
    return run.finish(track)


def gonzalez(g: Graph, initial, k: int, *, evaluator=None, track: bool = True) -> SelectionResult:
    """Farthest-point rule on undirected hop distance; disconnected nodes are farthest."""
    run = _Run("gonzalez", g, initial, k, evaluator)
    view = g.undirected_view()
    if run.rounds:
        dist = bfs_hop_distances(view, run.seeds)
        for _ in range(run.rounds):
            cands = run.candidates()
            d = dist[cands]
            v = int(cands[np.flatnonzero(d == d.max())[0]])
            run.add(v)
            dist = np.minimum(dist, bfs_hop_distances(view, [v]))
    return run.finish(track)


def random_seeds(g: Graph, initial, k: int, rng: np.random.Generator | int | None = None, *,
                 evaluator=None, track: bool = True) -> SelectionResult:
    """k non-seeds sampled uniformly without replacement."""
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    run = _Run("random", g, initial, k, evaluator, first_seed="evaluate")
    if run.rounds:
        for v in gen.choice(run.candidates(), size=run.rounds, replace=False):
            run.add(int(v))
    return run.finish(track)


def reach_greedy(g: Graph, initial, k: int, cfg: CascadeConfig | None = None, *,
                 evaluator=None, lazy: bool = True, track: bool = True) -> SelectionResult:
    """Greedy maximization of expected reach (mean probability).

    With the Monte Carlo backend all rounds share one set of live-edge samples,
    on which reach is a coverage function; ``lazy`` then runs CELF on integer
    gains and returns exactly the plain-greedy set.
    """
    ev = _backend(g, cfg, evaluator)
    run = _Run("reach-greedy", g, initial, k, ev, first_seed="evaluate")
    if not run.rounds:
        return run.finish(track)
    if lazy and isinstance(ev, MonteCarloEvaluator):
        _celf(ev, run)
    else:
        for _ in range(run.rounds):
            cands = run.candidates()
            _, means = ev.candidate_stats(run.seeds, cands)
            run.add(cands[_smallest_at_max(means)])
    return run.finish(track)


def _celf(ev: MonteCarloEvaluator, run: _Run) -> None:
    state = ev.state(run.seeds)
    covered = int(state.sum())
    cands = run.candidates()
    _, totals = ev.candidate_counts(state, cands)
    ev.calls += cands.size
    heap = [(-(int(t) - covered), int(j), 0) for t, j in zip(totals, cands)]
    heapq.heapify(heap)
    for rnd in range(run.rounds):
        while True:
            neg_gain, j, stamp = heapq.heappop(heap)
            if stamp == rnd:
                break
            _, total = ev.candidate_counts(state, [j])
            ev.calls += 1
            heapq.heappush(heap, (-(int(total[0]) - covered), j, rnd))
        covered += ev.extend(state, j)
        run.add(j)


def minimax_distance_seeds(g: Graph, initial, k: int, max_sets: int = 250_000) -> tuple[int, ...]:
    """Exact k-center: additions minimizing the largest undirected hop distance to a seed."""
    init = as_seeds(initial, g.n).tolist()
    pool = [v for v in range(g.n) if v not in set(init)]
    if math.comb(len(pool), k) > max_sets:
        raise SelectionError("minimax-distance search too large")
    view = g.undirected_view()
    single = {v: bfs_hop_distances(view, [v]) for v in range(g.n)}
    base = np.full(g.n, math.inf)
    for s in init:
        base = np.minimum(base, single[s])
    best = (math.inf, ())
    for add in itertools.combinations(pool, k):
        d = base
        for v in add:
            d = np.minimum(d, single[v])
        radius = d.max()
        if radius < best[0]:
            best = (radius, add)
    return tuple(sorted(init + list(best[1])))


def select(method: str, g: Graph, initial, k: int, cfg: CascadeConfig, *, evaluator=None,
           rng_seed: int | None = None, track: bool = True) -> SelectionResult:
    """Dispatch by CLI method name."""
    if method == "greedy":
        return greedy_maximin(g, initial, k, cfg, evaluator=evaluator, track=track)
    if method == "myopic":
        return myopic(g, initial, k, cfg, evaluator=evaluator, track=track)
    if method == "naive-myopic":
        return naive_myopic(g, initial, k, cfg, evaluator=evaluator, track=track)
    if method == "reach-greedy":
        return reach_greedy(g, initial, k, cfg, evaluator=evaluator, track=track)
    tracker = evaluator if evaluator is not None or not track else MonteCarloEvaluator(g, cfg)
    if method == "gonzalez":
        return gonzalez(g, initial, k, evaluator=tracker, track=track)
    if method == "random":
        seed = cfg.master_seed if rng_seed is None else rng_seed
        return random_seeds(g, initial, k, seed, evaluator=tracker, track=track)
    raise SelectionError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
