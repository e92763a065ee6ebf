"""Adjacency- and weight-preserving automorphism groups of weighted graphs.

The generator search individualizes base points 0, 1, 2, ... in order: for
each base point it looks for one verified automorphism per fresh orbit image
(fixing all earlier base points), which by the orbit-stabilizer argument
yields generators of the full group, never a silent subgroup.
"""

from __future__ import annotations

from .graph import Graph
from .perm import GeneratorSet, Permutation


class SearchBudgetExceeded(RuntimeError):
    """Raised when the backtracking search exceeds its node budget."""


def is_automorphism(g: Graph, p: Permutation) -> bool:
    """True iff p maps edges onto edges and preserves node weights."""
    if p.n != g.n:
        return False
    for v in range(g.n):
        if g.weights[p(v)] != g.weights[v]:
            return False
    return all(g.has_edge(p(u), p(v)) for u, v in g.edges)


def refine_colors(g: Graph) -> tuple[int, ...]:
    """Stable node coloring: start from weights, refine by neighbor colors.

    Every automorphism preserves the refined colors, so equal color is a
    necessary condition for two nodes to lie in a common orbit.
    """
    colors = _canonical([(w,) for w in g.weights])
    while True:
        signature = [
            (colors[v], tuple(sorted(colors[u] for u in g.adjacency[v])))
            for v in range(g.n)
        ]
        refined = _canonical(signature)
        if refined == colors:
            return colors
        colors = refined


def _canonical(keys) -> tuple[int, ...]:
    order = {key: i for i, key in enumerate(sorted(set(keys)))}
    return tuple(order[key] for key in keys)


def automorphism_generators(
    g: Graph, cap: int = 500, node_budget: int = 2_000_000
) -> GeneratorSet:
    """Generators of the full weight-preserving automorphism group of g.

    Every returned permutation is re-verified with is_automorphism.  Raises
    SearchBudgetExceeded rather than returning an incomplete group when the
    backtracking search grows beyond `node_budget` nodes.
    """
    if g.n > cap:
        raise ValueError(f"n={g.n} exceeds the automorphism search cap {cap}")
    colors = refine_colors(g)
    budget = [node_budget]
    gens: list[Permutation] = []
    for base in range(g.n):
        candidates = [w for w in range(base + 1, g.n) if colors[w] == colors[base]]
        if not candidates:
            continue
        level: list[Permutation] = []
        reached = {base}
        for w in candidates:
            if w in reached:
                continue
            perm = _search_automorphism(g, colors, base, w, budget)
            if perm is None:
                continue
            if not is_automorphism(g, perm):
                raise AssertionError("search produced a non-automorphism")
            gens.append(perm)
            level.append(perm)
            reached = _closure(reached, level)
    return GeneratorSet(g.n, tuple(gens))


def _closure(points: set[int], perms: list[Permutation]) -> set[int]:
    closed = set(points)
    frontier = list(points)
    while frontier:
        p = frontier.pop()
        for perm in perms:
            q = perm(p)
            if q not in closed:
                closed.add(q)
                frontier.append(q)
    return closed


def _search_automorphism(g, colors, base, target, budget):
    """One automorphism fixing 0..base-1 pointwise with base -> target, or None."""
    n = g.n
    mapping = list(range(base)) + [-1] * (n - base)
    used = set(range(base))
    if not _consistent(g, mapping, base, target):
        return None
    mapping[base] = target
    used.add(target)

    def extend(source: int):
        budget[0] -= 1
        if budget[0] < 0:
            raise SearchBudgetExceeded(
                "automorphism search exceeded its node budget"
            )
        while source < n and mapping[source] >= 0:
            source += 1
        if source == n:
            return Permutation(tuple(mapping))
        for cand in range(n):
            if cand in used or colors[cand] != colors[source]:
                continue
            if not _consistent(g, mapping, source, cand):
                continue
            mapping[source] = cand
            used.add(cand)
            found = extend(source + 1)
            if found is not None:
                return found
            mapping[source] = -1
            used.remove(cand)
        return None

    return extend(0)


def _consistent(g, mapping, source, cand) -> bool:
    for a in g.adjacency[source]:
        b = mapping[a]
        if b >= 0 and not g.has_edge(cand, b):
            return False
    for a, b in enumerate(mapping):
        if b >= 0 and g.has_edge(cand, b) and not g.has_edge(source, a):
            return False
    return True
