"""Directed graphs: parsing, generation, connectivity and distances.

Vertices carry dense integer ids 0..n-1; the labels from the input are
kept only for reporting. Self-loops are rejected everywhere because walk
laziness is a matrix parameter, never a loop edge.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphFormatError

__all__ = [
    "DirectedGraph",
    "parse_edge_list",
    "parse_json_graph",
    "load_graph_text",
    "is_strongly_connected",
    "distance",
    "cycle_graph",
    "complete_bidirected_graph",
    "random_strongly_connected_graph",
]


@dataclass(frozen=True)
class DirectedGraph:
    """Immutable simple directed graph.

    Construct through :meth:`from_edges` or the parsers, which enforce the
    invariants (no self-loops, no duplicate edges, consistent adjacency).
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...]
    out_adj: tuple[tuple[int, ...], ...]
    in_adj: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   labels: Sequence[str] | None = None) -> "DirectedGraph":
        if n < 1:
            raise GraphFormatError("graph needs at least one vertex")
        if labels is None:
            labels = tuple(str(i) for i in range(n))
        else:
            labels = tuple(str(lab) for lab in labels)
            if len(labels) != n:
                raise GraphFormatError(f"expected {n} labels, got {len(labels)}")
            if len(set(labels)) != n:
                raise GraphFormatError("vertex labels must be unique")
        seen: set[tuple[int, int]] = set()
        out_lists: list[list[int]] = [[] for _ in range(n)]
        in_lists: list[list[int]] = [[] for _ in range(n)]
        clean: list[tuple[int, int]] = []
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {labels[u]!r} is not allowed")
            if (u, v) in seen:
                raise GraphFormatError(f"duplicate edge ({labels[u]!r}, {labels[v]!r})")
            seen.add((u, v))
            clean.append((u, v))
            out_lists[u].append(v)
            in_lists[v].append(u)
        return cls(n=n,
                   edges=tuple(clean),
                   labels=labels,
                   out_adj=tuple(tuple(js) for js in out_lists),
                   in_adj=tuple(tuple(js) for js in in_lists))

    def out_degree(self, u: int) -> int:
        return len(self.out_adj[u])

    def in_degree(self, u: int) -> int:
        return len(self.in_adj[u])

    def adjacency_matrix(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix, a[u, v] = 1 iff (u, v) is an edge."""
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u, v] = 1.0
        return a

    def relabel(self, perm: Sequence[int]) -> "DirectedGraph":
        """Graph with vertex u renamed to perm[u]; labels follow their vertex."""
        perm = list(perm)
        if sorted(perm) != list(range(self.n)):
            raise ValueError("perm must be a permutation of 0..n-1")
        new_labels = [""] * self.n
        for u in range(self.n):
            new_labels[perm[u]] = self.labels[u]
        return DirectedGraph.from_edges(
            self.n, [(perm[u], perm[v]) for u, v in self.edges], new_labels)

    def to_edge_list_text(self) -> str:
        return "".join(f"{self.labels[u]} {self.labels[v]}\n" for u, v in self.edges)


def parse_edge_list(text: str) -> DirectedGraph:
    """Parse line-oriented ``u v`` pairs into a graph.

    Vertices are numbered in order of first appearance; blank lines and
    lines starting with ``#`` are skipped. Duplicate edges and self-loops
    are rejected with their line number.
    """
    ids: dict[str, int] = {}
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {ln}: expected two labels, got {len(parts)}")
        u_lab, v_lab = parts
        if u_lab == v_lab:
            raise GraphFormatError(f"line {ln}: self-loop {u_lab!r} -> {v_lab!r} is not allowed")
        u = ids.setdefault(u_lab, len(ids))
        v = ids.setdefault(v_lab, len(ids))
        if (u, v) in seen:
            raise GraphFormatError(f"line {ln}: duplicate edge {u_lab!r} -> {v_lab!r}")
        seen.add((u, v))
        edges.append((u, v))
    if not ids:
        raise GraphFormatError("empty graph: no edges found")
    return DirectedGraph.from_edges(len(ids), edges, tuple(ids))


def parse_json_graph(text: str) -> DirectedGraph:
    """Parse ``{"vertices": [...], "edges": [[u, v], ...]}``.

    Edge endpoints may be integer indices into the vertex list or vertex
    labels; booleans and fractional numbers are rejected.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise GraphFormatError('JSON graph must be an object with "vertices" and "edges"')
    labels = [str(v) for v in doc["vertices"]]
    if not labels:
        raise GraphFormatError("empty graph: no vertices")
    if len(set(labels)) != len(labels):
        raise GraphFormatError("duplicate vertex labels")
    index = {lab: i for i, lab in enumerate(labels)}

    def resolve(endpoint, pos):
        if isinstance(endpoint, bool):
            raise GraphFormatError(f"edge #{pos}: boolean endpoint {endpoint!r}")
        if isinstance(endpoint, int):
            if not 0 <= endpoint < len(labels):
                raise GraphFormatError(f"edge #{pos}: vertex index {endpoint} out of range")
            return endpoint
        if isinstance(endpoint, str):
            if endpoint not in index:
                raise GraphFormatError(f"edge #{pos}: unknown vertex label {endpoint!r}")
            return index[endpoint]
        raise GraphFormatError(f"edge #{pos}: endpoint must be an index or label")

    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    for pos, pair in enumerate(doc["edges"]):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise GraphFormatError(f"edge #{pos}: expected a [u, v] pair")
        u = resolve(pair[0], pos)
        v = resolve(pair[1], pos)
        if u == v:
            raise GraphFormatError(f"edge #{pos}: self-loop at {labels[u]!r} is not allowed")
        if (u, v) in seen:
            raise GraphFormatError(f"edge #{pos}: duplicate edge {labels[u]!r} -> {labels[v]!r}")
        seen.add((u, v))
        edges.append((u, v))
    return DirectedGraph.from_edges(len(labels), edges, labels)


def load_graph_text(text: str, fmt: str = "auto") -> DirectedGraph:
    """Dispatch to the edge-list or JSON parser; ``auto`` sniffs a leading '{'."""
    if fmt == "auto":
        fmt = "json" if text.lstrip().startswith("{") else "edge-list"
    if fmt == "json":
        return parse_json_graph(text)
    if fmt == "edge-list":
        return parse_edge_list(text)
    raise ValueError(f"unknown graph format {fmt!r}")


def _reaches_all(adj: Sequence[Sequence[int]], n: int) -> bool:
    seen = bytearray(n)
    seen[0] = 1
    count = 1
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = 1
                count += 1
                stack.append(w)
    return count == n


def is_strongly_connected(g: DirectedGraph) -> bool:
    """True iff every vertex reaches every other along directed edges.

    Double search from vertex 0: forward over out-neighbors and backward
    over in-neighbors.
    """
    if g.n <= 1:
        return True
    return _reaches_all(g.out_adj, g.n) and _reaches_all(g.in_adj, g.n)


def distance(g: DirectedGraph, x: int, y: int) -> int | float:
    """Directed shortest-path length from x to y; ``math.inf`` if unreachable.

    Asymmetric in general; d(x, x) = 0.
    """
    if not (0 <= x < g.n and 0 <= y < g.n):
        raise ValueError(f"vertex ids ({x}, {y}) out of range for n={g.n}")
    if x == y:
        return 0
    dist = [-1] * g.n
    dist[x] = 0
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for w in g.out_adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                if w == y:
                    return dist[w]
                queue.append(w)
    return math.inf


def cycle_graph(n: int) -> DirectedGraph:
    """Directed n-cycle 0 -> 1 -> ... -> n-1 -> 0."""
    if n < 2:
        raise ValueError("cycle needs n >= 2")
    return DirectedGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_bidirected_graph(n: int) -> DirectedGraph:
    """All n(n-1) ordered pairs as edges."""
    if n < 2:
        raise ValueError("complete graph needs n >= 2")
    return DirectedGraph.from_edges(
        n, [(u, v) for u in range(n) for v in range(n) if u != v])


def random_strongly_connected_graph(n: int, p: float = 0.4, seed: int = 0,
                                    max_tries: int = 1000,
                                    rng: np.random.Generator | None = None) -> DirectedGraph:
    """Rejection-sample an Erdos-Renyi style digraph until strongly connected.

    Each ordered pair (u, v), u != v, becomes an edge with probability p.
    Deterministic for a fixed seed (or caller-supplied generator).
    """
    if n < 2:
        raise ValueError("random graph needs n >= 2")
    if not 0.0 < p <= 1.0:
        raise ValueError("edge probability p must lie in (0, 1]")
    if rng is None:
        rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        mask = rng.random((n, n)) < p
        np.fill_diagonal(mask, False)
        g = DirectedGraph.from_edges(
            n, [(int(u), int(v)) for u, v in np.argwhere(mask)])
        if is_strongly_connected(g):
            return g
    raise RuntimeError(
        f"no strongly connected draw in {max_tries} tries (n={n}, p={p}); increase p")
