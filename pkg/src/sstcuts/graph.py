"""Weighted undirected graphs, DIMACS .col I/O, cliques, and instance generators.

Nodes are 0-based internally; DIMACS files and all other text formats are
1-based.  Graphs are immutable after construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from collections.abc import Iterable


class DimacsParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class CliqueCapError(ValueError):
    """Raised when clique enumeration is attempted beyond its node cap."""


def _normalize_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected graph with integer node weights (default all 1).

    No loops, no parallel edges; `adjacency[v]` is the sorted neighbor tuple.
    """

    n: int
    edges: frozenset[tuple[int, int]]
    weights: tuple[int, ...]
    adjacency: tuple[tuple[int, ...], ...] = field(compare=False)

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]], weights=None) -> "Graph":
        if n < 0:
            raise ValueError("node count must be nonnegative")
        edge_set = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"loop edge at node {u}")
            edge_set.add(_normalize_edge(u, v))
        if weights is None:
            weights = (1,) * n
        else:
            weights = tuple(int(w) for w in weights)
            if len(weights) != n:
                raise ValueError("weight vector length must equal node count")
        adjacency = [[] for _ in range(n)]
        for u, v in edge_set:
            adjacency[u].append(v)
            adjacency[v].append(u)
        return Graph(
            n,
            frozenset(edge_set),
            weights,
            tuple(tuple(sorted(nbrs)) for nbrs in adjacency),
        )

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _normalize_edge(u, v) in self.edges

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def with_weights(self, weights) -> "Graph":
        return Graph.from_edges(self.n, self.edges, weights)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def complement(g: Graph) -> Graph:
    edges = [
        (u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
        if not g.has_edge(u, v)
    ]
    return Graph.from_edges(g.n, edges, g.weights)


def induced_subgraph(g: Graph, nodes: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Subgraph on `nodes` plus the old->new index map of the kept nodes."""
    kept = sorted(set(nodes))
    for v in kept:
        if not 0 <= v < g.n:
            raise ValueError(f"node {v} out of range")
    node_map = {old: new for new, old in enumerate(kept)}
    edges = [
        (node_map[u], node_map[v])
        for u, v in g.edges
        if u in node_map and v in node_map
    ]
    weights = [g.weights[v] for v in kept]
    return Graph.from_edges(len(kept), edges, weights), node_map


def is_clique(g: Graph, nodes: Iterable[int]) -> bool:
    nodes = sorted(set(nodes))
    return all(g.has_edge(u, v) for i, u in enumerate(nodes) for v in nodes[i + 1 :])


def is_stable_set(g: Graph, nodes: Iterable[int]) -> bool:
    nodes = sorted(set(nodes))
    return not any(g.has_edge(u, v) for i, u in enumerate(nodes) for v in nodes[i + 1 :])


# --- DIMACS .col ------------------------------------------------------------


def parse_dimacs(text: str) -> Graph:
    """Parse DIMACS .col: `c` comments, one `p edge n m`, `e u v` edge lines.

    `w v c` lines are a nonstandard extension setting node weights (default 1).
    Duplicate edge lines collapse; loops and out-of-range nodes are errors.
    """
    n = None
    edges = set()
    weights = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise DimacsParseError(lineno, "duplicate p line")
            if len(parts) != 4 or parts[1] != "edge":
                raise DimacsParseError(lineno, f"malformed p line: {line!r}")
            try:
                n = int(parts[2])
                int(parts[3])
            except ValueError:
                raise DimacsParseError(lineno, f"malformed p line: {line!r}") from None
            if n < 0:
                raise DimacsParseError(lineno, "negative node count")
        elif parts[0] == "e":
            if n is None:
                raise DimacsParseError(lineno, "edge line before p line")
            if len(parts) != 3:
                raise DimacsParseError(lineno, f"malformed e line: {line!r}")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise DimacsParseError(lineno, f"malformed e line: {line!r}") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsParseError(lineno, f"node index out of range in {line!r}")
            if u == v:
                raise DimacsParseError(lineno, f"loop edge at node {u}")
            edges.add(_normalize_edge(u - 1, v - 1))
        elif parts[0] == "w":
            if n is None:
                raise DimacsParseError(lineno, "weight line before p line")
            if len(parts) != 3:
                raise DimacsParseError(lineno, f"malformed w line: {line!r}")
            try:
                v, c = int(parts[1]), int(parts[2])
            except ValueError:
                raise DimacsParseError(lineno, f"malformed w line: {line!r}") from None
            if not 1 <= v <= n:
                raise DimacsParseError(lineno, f"node index out of range in {line!r}")
            weights[v - 1] = c
        else:
            raise DimacsParseError(lineno, f"unknown line type {parts[0]!r}")
    if n is None:
        raise DimacsParseError(0, "missing p line")
    weight_vec = [weights.get(v, 1) for v in range(n)]
    return Graph.from_edges(n, edges, weight_vec)


def write_dimacs(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        for part in comment.splitlines():
            lines.append(f"c {part}")
    lines.append(f"p edge {g.n} {g.m}")
    for v in range(g.n):
        if g.weights[v] != 1:
            lines.append(f"w {v + 1} {g.weights[v]}")
    for u, v in g.sorted_edges():
        lines.append(f"e {u + 1} {v + 1}")
    return "\n".join(lines) + "\n"


# --- cliques ----------------------------------------------------------------


def maximal_cliques(g: Graph, cap: int = 200) -> list[tuple[int, ...]]:
    """All inclusionwise maximal cliques via Bron-Kerbosch with pivoting.

    Each clique is a sorted tuple and the list is sorted lexicographically.
    """
    if g.n > cap:
        raise CliqueCapError(
            f"n={g.n} exceeds the clique enumeration cap {cap}; for trivially "
            "perfect graphs use the forest representation's root-leaf paths"
        )
    neighbor_sets = [set(g.adjacency[v]) for v in range(g.n)]
    cliques: list[tuple[int, ...]] = []

    def expand(r: set[int], p: set[int], x: set[int]) -> None:
        if not p and not x:
            cliques.append(tuple(sorted(r)))
            return
        pivot = max(p | x, key=lambda u: len(p & neighbor_sets[u]))
        for v in sorted(p - neighbor_sets[pivot]):
            expand(r | {v}, p & neighbor_sets[v], x & neighbor_sets[v])
            p.remove(v)
            x.add(v)

    expand(set(), set(range(g.n)), set())
    return sorted(cliques)


@dataclass(frozen=True)
class CliqueMatrix:
    """Maximal-clique x node 0/1 incidence matrix."""

    rows: tuple[tuple[int, ...], ...]
    entries: tuple[tuple[int, ...], ...]


def clique_matrix(g: Graph, cap: int = 200) -> CliqueMatrix:
    rows = tuple(maximal_cliques(g, cap))
    entries = tuple(
        tuple(1 if v in set(row) else 0 for v in range(g.n)) for row in rows
    )
    return CliqueMatrix(rows, entries)


def greedy_clique_cover(g: Graph, subset: Iterable[int]) -> list[tuple[int, ...]]:
    """Disjoint cliques covering `subset` within the induced subgraph.

    Greedy rule: repeatedly start from the smallest-index uncovered node and
    extend by smallest-index compatible nodes.
    """
    remaining = sorted(set(subset))
    for v in remaining:
        if not 0 <= v < g.n:
            raise ValueError(f"node {v} out of range")
    uncovered = set(remaining)
    cover = []
    for start in remaining:
        if start not in uncovered:
            continue
        clique = [start]
        uncovered.remove(start)
        for v in remaining:
            if v in uncovered and all(g.has_edge(v, u) for u in clique):
                clique.append(v)
                uncovered.remove(v)
        cover.append(tuple(sorted(clique)))
    return cover


# --- instance generators ----------------------------------------------------


def random_graph(seed: int, n: int, p: float, weights=None) -> Graph:
    rng = random.Random(seed)
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return Graph.from_edges(n, edges, weights)


def random_forest_parents(seed: int, n: int) -> list[int | None]:
    """A random rooted forest: node i attaches to a uniform earlier node or roots."""
    rng = random.Random(seed)
    parents: list[int | None] = [None] * n
    for i in range(1, n):
        choice = rng.randrange(i + 1)
        parents[i] = None if choice == i else choice
    return parents


def graph_from_forest(parents: list[int | None], weights=None) -> Graph:
    """Comparability graph of a rooted forest: edge iff ancestor/descendant."""
    n = len(parents)
    edges = []
    for v in range(n):
        a = parents[v]
        while a is not None:
            edges.append((a, v))
            a = parents[a]
    return Graph.from_edges(n, edges, weights)


def random_tp_graph(seed: int, n: int, weights=None) -> Graph:
    """A random trivially perfect graph (comparability graph of a random forest)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return graph_from_forest(random_forest_parents(seed, n), weights)


def union_of_cliques(sizes: Iterable[int]) -> Graph:
    """Disjoint union of complete graphs; highly symmetric by construction."""
    sizes = list(sizes)
    n = sum(sizes)
    edges = []
    offset = 0
    for size in sizes:
        for i in range(size):
            for j in range(i + 1, size):
                edges.append((offset + i, offset + j))
        offset += size
    return Graph.from_edges(n, edges)


def balanced_tp_graph(branching: int, depth: int) -> Graph:
    """Comparability graph of the complete `branching`-ary tree of given depth.

    Depth 0 is a single root; all leaves sit at the same level, so the graph
    has a large automorphism group.
    """
    parents: list[int | None] = [None]
    frontier = [0]
    for _ in range(depth):
        next_frontier = []
        for node in frontier:
            for _ in range(branching):
                parents.append(node)
                next_frontier.append(len(parents) - 1)
        frontier = next_frontier
    return graph_from_forest(parents)
