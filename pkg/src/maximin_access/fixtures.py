"""Deterministic generators for the small constructions used as regression inputs.

Every generator returns a ``Fixture``: the graph (dense integer ids), the
canonical initial seeds, and special vertices by label. The imbalance fixtures
also carry their bipartition and budget.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph
from .welfare import Bipartition

NAMES = ("fig2", "greed_is_bad", "h_level", "h_composite", "star_imbalance",
         "disjoint_imbalance", "path", "star")

_PARAMS = {
    "fig2": (),
    "greed_is_bad": ("ell",),
    "h_level": ("ell",),
    "h_composite": ("ell",),
    "star_imbalance": ("n",),
    "disjoint_imbalance": ("n",),
    "path": ("n",),
    "star": ("n",),
}


class FixtureError(ValueError):
    pass


@dataclass(frozen=True)
class FixtureSpec:
    name: str
    params: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.name not in _PARAMS:
            raise FixtureError(f"unknown fixture {self.name!r}; expected one of {', '.join(NAMES)}")
        need = set(_PARAMS[self.name])
        given = set(self.params)
        if need != given:
            raise FixtureError(f"fixture {self.name} takes params {sorted(need) or 'none'}, got {sorted(given)}")
        for key, val in self.params.items():
            if not isinstance(val, int) or isinstance(val, bool) or val < 1:
                raise FixtureError(f"param {key} must be a positive integer, got {val!r}")


@dataclass(frozen=True)
class Fixture:
    name: str
    params: dict
    graph: Graph
    initial: tuple[int, ...]
    labels: dict[str, int]
    k: int | None = None
    bipartition: Bipartition | None = None


def fig2() -> Fixture:
    """v1 -> v2 -> {v3, v4}, seeded at v1."""
    g = Graph.from_edges(4, [(0, 1), (1, 2), (1, 3)], directed=True)
    return Fixture("fig2", {}, g, (0,), {"v1": 0, "v2": 1, "v3": 2, "v4": 3})


def greed_is_bad(ell: int) -> Fixture:
    """Directed path s=c0 -> ... -> c_{ell-1} -> t, back-arcs t -> c_i, and t -> v1, t -> v2.

    Ids: c_i = i, t = ell, v1 = ell+1, v2 = ell+2. Seed {s}.
    """
    t, v1, v2 = ell, ell + 1, ell + 2
    arcs = [(i, i + 1) for i in range(ell)]
    arcs += [(t, i) for i in range(ell)]
    arcs += [(t, v1), (t, v2)]
    g = Graph.from_edges(ell + 3, arcs, directed=True)
    return Fixture("greed_is_bad", {"ell": ell}, g, (0,), {"s": 0, "t": t, "v1": v1, "v2": v2})


def _h_arcs(ell: int, offset: int) -> tuple[list[tuple[int, int]], int, int]:
    """Diamond chain of depth ell rooted at ``offset``; returns (arcs, t, node count)."""
    s = offset
    if ell == 1:
        return [(s, s + 1)], s + 1, 2
    levels = [[s]] + [[s + 2 * i - 1, s + 2 * i] for i in range(1, ell)]
    t = s + 2 * ell - 1
    levels.append([t])
    arcs = [(a, b) for lo, hi in zip(levels, levels[1:]) for a in lo for b in hi]
    return arcs, t, 2 * ell


def h_level(ell: int) -> Fixture:
    """s at depth 0, two vertices at each depth 1..ell-1, t at depth ell; arcs between adjacent depths."""
    arcs, t, n = _h_arcs(ell, 0)
    g = Graph.from_edges(n, arcs, directed=True)
    return Fixture("h_level", {"ell": ell}, g, (), {"s": 0, "t": t})


def h_composite(ell: int) -> Fixture:
    """Undirected path of length ell/2 from v (id 0) to s, then a depth-ell/2 diamond chain from s.

    Stored as a directed graph; path edges appear as reciprocal arcs.
    """
    if ell % 2:
        raise FixtureError("h_composite needs an even ell")
    half = ell // 2
    s = half
    arcs = []
    for i in range(half):
        arcs += [(i, i + 1), (i + 1, i)]
    h, t, h_nodes = _h_arcs(half, s)
    g = Graph.from_edges(s + h_nodes, arcs + h, directed=True)
    return Fixture("h_composite", {"ell": ell}, g, (), {"v": 0, "s": s, "t": t})


def star_imbalance(n: int) -> Fixture:
    """Star on 2n vertices, k = n/2.

    V' is the center (0), the extra seeds 1..n/2-1 and the leaves n/2..n-1;
    V is the leaves n..2n-1.
    """
    if n % 2:
        raise FixtureError("star_imbalance needs an even n")
    g = Graph.from_edges(2 * n, [(0, v) for v in range(1, 2 * n)], directed=False)
    bp = Bipartition.of(range(n, 2 * n), range(n))
    return Fixture("star_imbalance", {"n": n}, g, tuple(range(n // 2)), {"center": 0},
                   k=n // 2, bipartition=bp)


def disjoint_imbalance(n: int) -> Fixture:
    """n isolated vertices; V' = 0..n/2-1 holds the n/4 seeds 0..n/4-1; k = n/4."""
    if n % 4:
        raise FixtureError("disjoint_imbalance needs n divisible by 4")
    g = Graph.from_edges(n, [], directed=False)
    bp = Bipartition.of(range(n // 2, n), range(n // 2))
    return Fixture("disjoint_imbalance", {"n": n}, g, tuple(range(n // 4)), {}, k=n // 4,
                   bipartition=bp)


def path(n: int) -> Fixture:
    """Undirected path 0 - 1 - ... - n-1."""
    g = Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], directed=False)
    return Fixture("path", {"n": n}, g, (), {})


def star(n: int) -> Fixture:
    """Undirected star: center 0 joined to leaves 1..n."""
    g = Graph.from_edges(n + 1, [(0, v) for v in range(1, n + 1)], directed=False)
    return Fixture("star", {"n": n}, g, (), {"center": 0})


_BUILDERS = {
    "fig2": fig2,
    "greed_is_bad": greed_is_bad,
    "h_level": h_level,
    "h_composite": h_composite,
    "star_imbalance": star_imbalance,
    "disjoint_imbalance": disjoint_imbalance,
    "path": path,
    "star": star,
}


def generate(spec: FixtureSpec) -> Fixture:
    spec.validate()
    return _BUILDERS[spec.name](**spec.params)


def all_small(max_edges: int = 12) -> list[Fixture]:
    """A sweep of fixture instances with at most ``max_edges`` edges."""
    candidates = [fig2()]
    candidates += [greed_is_bad(ell) for ell in range(1, 5)]
    candidates += [h_level(ell) for ell in range(1, 5)]
    candidates += [h_composite(ell) for ell in (2, 4)]
    candidates += [star_imbalance(n) for n in (2, 4, 6)]
    candidates += [disjoint_imbalance(n) for n in (4, 8)]
    candidates += [path(n) for n in range(2, 14)]
    candidates += [star(n) for n in (1, 3, 6)]
    return [f for f in candidates if f.graph.num_edges <= max_edges]
