"""Symmetry-based stable set presolving: the deletion and addition operations.

Deletion drops a follower that shares an edge with its leader (the cut
x_f <= x_l then forces x_f = 0).  Addition connects a non-adjacent follower to
all current neighbors of its leader, encoding the implication x_f = 1 =>
x_l = 1 into the graph.  Cuts are processed in table order against the
mutating working graph, so an edge added earlier can trigger a later deletion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from collections.abc import Iterable

from .graph import Graph, _normalize_edge
from .sst import SstCliqueCut, Cut


class WeightHypothesisError(ValueError):
    """Addition-based presolving requires nonzero node weights."""


@dataclass(frozen=True)
class PresolveStats:
    """Proportions surviving presolve, as exact rationals.

    node_ratio and edge_ratio describe the deletion-only pipeline;
    edge_plus_ratio additionally applies the addition operation.  Empty
    denominators count as ratio 1.
    """

    node_ratio: Fraction
    edge_ratio: Fraction
    edge_plus_ratio: Fraction


@dataclass(frozen=True)
class PresolveResult:
    reduced_graph: Graph
    removed_nodes: tuple[int, ...]
    added_edges: tuple[tuple[int, int], ...]
    node_map: dict[int, int]
    stats: PresolveStats


def expand_to_pairs(cuts: Iterable[Cut]) -> list[tuple[int, int]]:
    """Flatten plain and clique cuts into leader/follower pairs in order."""
    pairs = []
    for cut in cuts:
        if isinstance(cut, SstCliqueCut):
            pairs.extend((cut.leader, f) for f in cut.clique)
        else:
            leader, follower = cut
            pairs.append((int(leader), int(follower)))
    return pairs


def _check_pairs(g: Graph, pairs):
    for leader, follower in pairs:
        if not (0 <= leader < g.n and 0 <= follower < g.n):
            raise ValueError(f"cut ({leader},{follower}) out of range for n={g.n}")
        if leader == follower:
            raise ValueError(f"cut ({leader},{follower}) has equal endpoints")


def _run_pipeline(g: Graph, pairs, delete: bool, add: bool, fixpoint: bool):
    alive = set(range(g.n))
    edges = set(g.edges)
    removed: list[int] = []
    added: list[tuple[int, int]] = []
    while True:
        changed = False
        for leader, follower in pairs:
            if leader not in alive or follower not in alive:
                continue
            edge = _normalize_edge(leader, follower)
            if edge in edges:
                if delete:
                    alive.remove(follower)
                    edges = {e for e in edges if follower not in e}
                    removed.append(follower)
                    changed = True
            elif add:
                for v in sorted(alive):
                    if v == follower:
                        continue
                    e = _normalize_edge(leader, v)
                    if e in edges:
                        new_edge = _normalize_edge(v, follower)
                        if new_edge not in edges:
                            edges.add(new_edge)
                            added.append(new_edge)
                            changed = True
        if not (fixpoint and changed):
            break
    return alive, edges, removed, added


def _build_result(g: Graph, alive, edges, removed, added, stats) -> PresolveResult:
    kept = sorted(alive)
    node_map = {old: new for new, old in enumerate(kept)}
    new_edges = [(node_map[u], node_map[v]) for u, v in edges]
    reduced = Graph.from_edges(len(kept), new_edges, [g.weights[v] for v in kept])
    return PresolveResult(reduced, tuple(removed), tuple(added), node_map, stats)


def _ratio(num: int, den: int) -> Fraction:
    return Fraction(num, den) if den else Fraction(1)


def deletion_operation(g: Graph, cuts: Iterable[Cut]) -> PresolveResult:
    """Remove every follower currently adjacent to its leader, in cut order."""
    pairs = expand_to_pairs(cuts)
    _check_pairs(g, pairs)
    alive, edges, removed, added = _run_pipeline(g, pairs, delete=True, add=False, fixpoint=False)
    edge_ratio = _ratio(len(edges), g.m)
    stats = PresolveStats(_ratio(len(alive), g.n), edge_ratio, edge_ratio)
    return _build_result(g, alive, edges, removed, added, stats)


def addition_operation(g: Graph, cuts: Iterable[Cut]) -> PresolveResult:
    """For each non-adjacent pair, connect the follower to all current
    neighbors of the leader.  Idempotent on re-run."""
    pairs = expand_to_pairs(cuts)
    _check_pairs(g, pairs)
    alive, edges, removed, added = _run_pipeline(g, pairs, delete=False, add=True, fixpoint=False)
    stats = PresolveStats(Fraction(1), Fraction(1), _ratio(len(edges), g.m))
    return _build_result(g, alive, edges, removed, added, stats)


def sst_presolve(
    g: Graph,
    cuts: Iterable[Cut],
    use_addition: bool = False,
    fixpoint: bool = False,
) -> PresolveResult:
    """Full presolve pass: delete adjacent followers, otherwise (optionally)
    apply the addition operation, per cut in table order.

    Stats always report the deletion-only node and edge ratios plus the edge
    ratio of the deletion+addition pipeline, mirroring the nodes / edges /
    edges+ reduction columns.
    """
    pairs = expand_to_pairs(cuts)
    _check_pairs(g, pairs)
    if use_addition and any(w == 0 for w in g.weights):
        raise WeightHypothesisError(
            "the addition operation preserves optimality only when every "
            "node weight is nonzero; found a zero weight"
        )
    del_alive, del_edges, del_removed, _ = _run_pipeline(
        g, pairs, delete=True, add=False, fixpoint=fixpoint
    )
    if use_addition:
        alive, edges, removed, added = _run_pipeline(
            g, pairs, delete=True, add=True, fixpoint=fixpoint
        )
    else:
        alive, edges, removed, added = del_alive, del_edges, del_removed, []
    stats = PresolveStats(
        _ratio(len(del_alive), g.n),
        _ratio(len(del_edges), g.m),
        _ratio(len(edges), g.m),
    )
    return _build_result(g, alive, edges, removed, added, stats)
