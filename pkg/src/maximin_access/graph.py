"""Graph representation, edge-list I/O, connectivity, distances and centers."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from . import kernels

UNREACHABLE = math.inf


class GraphError(ValueError):
    """Malformed or unusable graph input."""


class EdgeListParseError(GraphError):
    def __init__(self, line_no: int, line: str, reason: str):
        super().__init__(f"line {line_no}: {reason}: {line.rstrip()!r}")
        self.line_no = line_no


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable directed adjacency structure over dense node ids ``0..n-1``.

    Out-neighbors live in CSR form (``indptr``/``indices``), sorted per node.
    Undirected graphs store every edge in both directions.
    """

    n: int
    directed: bool
    indptr: np.ndarray
    indices: np.ndarray
    original_ids: tuple = field(default=())

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], directed: bool,
                   original_ids: Sequence | None = None) -> "Graph":
        if n < 1:
            raise GraphError("graph has no nodes")
        arcs = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                continue
            arcs.add((u, v))
            if not directed:
                arcs.add((v, u))
        if arcs:
            arr = np.array(sorted(arcs), dtype=np.int64)
            src, dst = arr[:, 0], arr[:, 1]
        else:
            src = dst = np.empty(0, dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        ids = tuple(original_ids) if original_ids is not None else tuple(range(n))
        if len(ids) != n:
            raise GraphError("original_ids length does not match n")
        indptr.flags.writeable = False
        dst = np.ascontiguousarray(dst)
        dst.flags.writeable = False
        return cls(n, bool(directed), indptr, dst, ids)

    @property
    def num_arcs(self) -> int:
        return int(self.indices.shape[0])

    @property
    def num_edges(self) -> int:
        """Edge count as the user sees it: arcs if directed, unordered pairs otherwise."""
        return self.num_arcs if self.directed else self.num_arcs // 2

    def out_neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    @property
    def out_adj(self) -> list[list[int]]:
        return [self.out_neighbors(u).tolist() for u in range(self.n)]

    def arcs(self) -> np.ndarray:
        """All arcs as an ``(m, 2)`` array, in CSR order (arc id = row)."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
        return np.stack([src, self.indices], axis=1)

    def edges(self) -> list[tuple[int, int]]:
        """Canonical edge list in dense ids: arcs, or ``u < v`` pairs if undirected."""
        return [(int(u), int(v)) for u, v in self.arcs() if self.directed or u < v]

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.out_neighbors(u)
        i = np.searchsorted(nbrs, v)
        return bool(i < nbrs.shape[0] and nbrs[i] == v)

    def undirected_view(self) -> "Graph":
        if not self.directed:
            return self
        return Graph.from_edges(self.n, self.edges(), directed=False,
                                original_ids=self.original_ids)

    def to_csr(self) -> csr_matrix:
        data = np.ones(self.num_arcs, dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def subgraph(self, nodes: Sequence[int]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph on ``nodes`` (kept in the given order)."""
        mapping = {int(old): new for new, old in enumerate(nodes)}
        edges = [(mapping[u], mapping[v]) for u, v in self.edges()
                 if u in mapping and v in mapping]
        ids = [self.original_ids[old] for old in mapping]
        return Graph.from_edges(len(mapping), edges, self.directed, ids), mapping

    def node_of(self, label) -> int:
        """Dense id for an original label (int or str). Integers given as text also match."""
        lookup = self._label_index()
        if label in lookup:
            return lookup[label]
        if isinstance(label, str):
            try:
                as_int = int(label)
            except ValueError:
                pass
            else:
                if as_int in lookup:
                    return lookup[as_int]
        raise KeyError(label)

    def _label_index(self) -> dict:
        cache = self.__dict__.get("_labels")
        if cache is None:
            cache = {lab: i for i, lab in enumerate(self.original_ids)}
            object.__setattr__(self, "_labels", cache)
        return cache

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"Graph(n={self.n}, edges={self.num_edges}, {kind})"


NODES_HEADER = "# nodes:"


def load_edge_list(stream: TextIO | str | bytes, directed: bool) -> Graph:
    """Parse a whitespace-separated edge list.

    Ids are remapped to ``0..n-1`` in first-appearance order. A leading
    ``# nodes: ...`` comment (as written by :func:`write_edge_list`) pre-registers
    ids in that order, which keeps isolated nodes and makes round trips exact.
    """
    if isinstance(stream, bytes):
        stream = stream.decode("utf-8")
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    ids: dict[int, int] = {}
    edges = []

    def intern(x: int) -> int:
        if x not in ids:
            ids[x] = len(ids)
        return ids[x]

    for line_no, line in enumerate(stream, start=1):
        text = line.strip()
        if not text:
            continue
        if text.startswith("#"):
            if text.startswith(NODES_HEADER) and not edges:
                for tok in text[len(NODES_HEADER):].split():
                    intern(_parse_id(tok, line_no, line))
            continue
        parts = text.split()
        if len(parts) != 2:
            raise EdgeListParseError(line_no, line, "expected two node ids")
        u = intern(_parse_id(parts[0], line_no, line))
        v = intern(_parse_id(parts[1], line_no, line))
        edges.append((u, v))
    if not ids:
        raise GraphError("empty graph")
    return Graph.from_edges(len(ids), edges, directed, original_ids=list(ids))


def _parse_id(tok: str, line_no: int, line: str) -> int:
    if not tok.isdigit():
        raise EdgeListParseError(line_no, line, f"not a non-negative integer: {tok!r}")
    return int(tok)


def read_edge_list(path: str | Path, directed: bool) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh, directed)


def write_edge_list(g: Graph, out: TextIO | None = None, ids: Sequence[int] | None = None) -> str:
    """Canonical serialization: nodes header, then ascending ``u v`` lines with LF endings.

    ``ids`` gives the integer written for each dense node; defaults to the
    original ids when they are all integers, else the dense ids.
    """
    if ids is None:
        ids = g.original_ids if all(isinstance(x, (int, np.integer)) for x in g.original_ids) \
            else range(g.n)
    ids = [int(x) for x in ids]
    pairs = sorted((ids[u], ids[v]) for u, v in g.edges())
    if not g.directed:
        pairs = sorted((min(a, b), max(a, b)) for a, b in pairs)
    lines = [NODES_HEADER + " " + " ".join(map(str, ids))]
    lines += [f"{a} {b}" for a, b in pairs]
    text = "\n".join(lines) + "\n"
    if out is not None:
        out.write(text)
    return text


def largest_scc(g: Graph) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on the largest strongly connected component.

    For undirected graphs this is the largest connected component. Ties go to the
    component containing the smallest original id.
    """
    ncomp, labels = connected_components(g.to_csr(), directed=g.directed, connection="strong")
    sizes = np.bincount(labels, minlength=ncomp)
    keys = [_sort_key(x) for x in g.original_ids]
    best = None
    for c in np.flatnonzero(sizes == sizes.max()):
        members = np.flatnonzero(labels == c)
        key = min(keys[i] for i in members)
        if best is None or key < best[0]:
            best = (key, members)
    return g.subgraph(best[1].tolist())


def _sort_key(label):
    return (0, label, "") if isinstance(label, (int, np.integer)) else (1, 0, str(label))


def degrees(g: Graph) -> np.ndarray:
    """Total degree (in + out) for directed graphs, neighbor count for undirected."""
    out_deg = np.diff(g.indptr)
    if not g.directed:
        return out_deg.astype(np.int64)
    in_deg = np.bincount(g.indices, minlength=g.n)
    return (out_deg + in_deg).astype(np.int64)


def max_degree_node(g: Graph) -> int:
    return int(np.argmax(degrees(g)))  # argmax returns the first, i.e. smallest id


def bfs_hop_distances(g: Graph, sources: Iterable[int], treat_as_undirected: bool = False) -> np.ndarray:
    """Minimum hop count from any source; unreachable nodes get ``inf``."""
    src = np.unique(np.asarray(list(sources), dtype=np.int64))
    if src.size == 0:
        raise GraphError("bfs needs at least one source")
    h = g.undirected_view() if treat_as_undirected else g
    dist = kernels.bfs_distances(h.indptr, h.indices, src)
    out = dist.astype(np.float64)
    out[dist < 0] = UNREACHABLE
    return out


def eccentricities(g: Graph) -> np.ndarray:
    """Undirected-view eccentricity of every node (``inf`` when disconnected)."""
    d = shortest_path(g.undirected_view().to_csr(), method="D", directed=False, unweighted=True)
    return d.max(axis=1)


def graph_center(g: Graph) -> int:
    """Vertex of minimum eccentricity on the undirected view, smallest id on ties."""
    ecc = eccentricities(g)
    if not np.all(np.isfinite(ecc)):
        raise GraphError("graph_center needs a connected graph")
    return int(np.argmin(ecc))
