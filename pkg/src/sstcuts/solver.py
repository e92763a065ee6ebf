"""Exact maximum-weight stable set solvers, with optional cut enforcement.

The brute-force enumerator is the oracle; branch and bound uses a greedy
clique cover bound and propagates cut implications (a chosen follower forces
its leader in, an excluded leader forces its followers out).
"""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Iterable

from .graph import Graph
from .sst import Cut, SstCliqueCut, satisfies_cuts


@dataclass(frozen=True)
class StableSetSolution:
    members: tuple[int, ...]
    value: int
    nodes_explored: int


def _cut_pairs_and_cliques(cuts):
    pairs = []
    cliques = []
    for cut in cuts or ():
        if isinstance(cut, SstCliqueCut):
            cliques.append((cut.leader, tuple(cut.clique)))
        else:
            leader, follower = cut
            pairs.append((int(leader), int(follower)))
    return pairs, cliques


def brute_force_max_stable(
    g: Graph, cuts: Iterable[Cut] | None = None
) -> StableSetSolution:
    """Exhaustive search over stable sets (adjacency-pruned), filtered by the
    cuts when given.  Ties go to the lexicographically smallest member set."""
    if g.n > 25:
        raise ValueError(f"n={g.n} is too large for brute force (cap 25)")
    cut_list = list(cuts) if cuts is not None else None
    adj_masks = [sum(1 << u for u in g.adjacency[v]) for v in range(g.n)]
    best: tuple[int, tuple[int, ...]] | None = None
    explored = 0

    def consider(members_mask: int, value: int):
        nonlocal best
        members = tuple(v for v in range(g.n) if members_mask >> v & 1)
        if cut_list is not None:
            x = [1 if members_mask >> v & 1 else 0 for v in range(g.n)]
            if not satisfies_cuts(x, cut_list):
                return
        if best is None or value > best[0] or (value == best[0] and members < best[1]):
            best = (value, members)

    def explore(v: int, members_mask: int, banned_mask: int, value: int):
        nonlocal explored
        explored += 1
        if v == g.n:
            consider(members_mask, value)
            return
        explore(v + 1, members_mask, banned_mask, value)
        if not banned_mask >> v & 1:
            explore(
                v + 1,
                members_mask | 1 << v,
                banned_mask | adj_masks[v],
                value + g.weights[v],
            )

    explore(0, 0, 0, 0)
    assert best is not None
    return StableSetSolution(best[1], best[0], explored)


def all_max_stable_sets(g: Graph, cuts: Iterable[Cut] | None = None) -> list[tuple[int, ...]]:
    """All optimum stable sets (cut-feasible ones when cuts are given)."""
    cut_list = list(cuts) if cuts is not None else None
    adj_masks = [sum(1 << u for u in g.adjacency[v]) for v in range(g.n)]
    results: dict[int, list[tuple[int, ...]]] = {}

    def explore(v, members_mask, banned_mask, value):
        if v == g.n:
            if cut_list is not None:
                x = [1 if members_mask >> u & 1 else 0 for u in range(g.n)]
                if not satisfies_cuts(x, cut_list):
                    return
            members = tuple(u for u in range(g.n) if members_mask >> u & 1)
            results.setdefault(value, []).append(members)
            return
        explore(v + 1, members_mask, banned_mask, value)
        if not banned_mask >> v & 1:
            explore(v + 1, members_mask | 1 << v, banned_mask | adj_masks[v], value + g.weights[v])

    explore(0, 0, 0, 0)
    return sorted(results[max(results)])


def branch_and_bound_max_stable(
    g: Graph, cuts: Iterable[Cut] | None = None
) -> StableSetSolution:
    """Exact branch and bound; equals the brute-force oracle wherever it runs.

    Upper bound: greedy clique cover of the undecided nodes, each clique
    contributing max(0, largest weight).  Branching: max-degree undecided
    node within the free subgraph, ties to the smallest index.
    """
    n = g.n
    pairs, cliques = _cut_pairs_and_cliques(cuts)
    adj_masks = [sum(1 << u for u in g.adjacency[v]) for v in range(n)]
    followers_of = {}
    for leader, follower in pairs:
        followers_of.setdefault(leader, []).append(follower)
    clique_masks = [(leader, sum(1 << f for f in clq), clq) for leader, clq in cliques]

    full_mask = (1 << n) - 1
    best_value = 0
    best_members: tuple[int, ...] = ()
    explored = 0

    def propagate(in_mask: int, out_mask: int):
        """Close the decision pair under edge and cut implications; None on conflict."""
        changed = True
        while changed:
            changed = False
            nbr_out = 0
            mask = in_mask
            while mask:
                v = (mask & -mask).bit_length() - 1
                mask &= mask - 1
                nbr_out |= adj_masks[v]
            if nbr_out & in_mask:
                return None
            if nbr_out & ~out_mask & full_mask:
                out_mask |= nbr_out
                changed = True
            for leader, follower in pairs:
                if in_mask >> follower & 1:
                    if out_mask >> leader & 1:
                        return None
                    if not in_mask >> leader & 1:
                        in_mask |= 1 << leader
                        changed = True
                if out_mask >> leader & 1 and not out_mask >> follower & 1:
                    if in_mask >> follower & 1:
                        return None
                    out_mask |= 1 << follower
                    changed = True
            for leader, cmask, clq in clique_masks:
                chosen = in_mask & cmask
                if chosen:
                    if chosen & (chosen - 1):
                        return None  # two clique followers cannot both be in
                    if out_mask >> leader & 1:
                        return None
                    if not in_mask >> leader & 1:
                        in_mask |= 1 << leader
                        changed = True
                    others = cmask & ~chosen
                    if others & ~out_mask:
                        if others & in_mask:
                            return None
                        out_mask |= others
                        changed = True
                if out_mask >> leader & 1 and cmask & ~out_mask:
                    if cmask & in_mask:
                        return None
                    out_mask |= cmask
                    changed = True
        return in_mask, out_mask

    def greedy_cover_bound(free_mask: int) -> int:
        bound = 0
        remaining = free_mask
        while remaining:
            v = (remaining & -remaining).bit_length() - 1
            clique_mask = 1 << v
            best_w = g.weights[v]
            common = adj_masks[v] & remaining
            remaining &= ~(1 << v)
            while common:
                u = (common & -common).bit_length() - 1
                clique_mask |= 1 << u
                best_w = max(best_w, g.weights[u])
                remaining &= ~(1 << u)
                common &= adj_masks[u]
            bound += max(0, best_w)
        return bound

    def value_of(mask: int) -> int:
        return sum(g.weights[v] for v in range(n) if mask >> v & 1)

    def search(in_mask: int, out_mask: int):
        nonlocal best_value, best_members, explored
        explored += 1
        free = full_mask & ~in_mask & ~out_mask
        value = value_of(in_mask)
        # a propagated in-set is itself stable and cut-feasible
        if value > best_value:
            best_value = value
            best_members = tuple(v for v in range(n) if in_mask >> v & 1)
        if not free:
            return
        if value + greedy_cover_bound(free) <= best_value:
            return
        branch = max(
            (v for v in range(n) if free >> v & 1),
            key=lambda v: (bin(adj_masks[v] & free).count("1"), -v),
        )
        state = propagate(in_mask | 1 << branch, out_mask)
        if state is not None:
            search(*state)
        state = propagate(in_mask, out_mask | 1 << branch)
        if state is not None:
            search(*state)

    start = propagate(0, 0)
    if start is not None:
        search(*start)
    return StableSetSolution(best_members, best_value, explored)
