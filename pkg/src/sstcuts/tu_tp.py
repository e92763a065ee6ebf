"""Trivially perfect graph structure and total unimodularity verification.

A trivially perfect (TP) graph is the comparability graph of a rooted forest;
root-leaf paths of that forest are exactly the maximal cliques.  This module
builds the forest representation, contracts orbit chains into the auxiliary
graph, assembles clique matrices extended by cut rows, and decides total
unimodularity two independent ways: exhaustively over square submatrix
determinants, and through the equitable-bicoloring criterion on row subsets.
It also contains the constructive equicolorings for path-disjoint node sets
and for families with the recursion property.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from collections.abc import Iterable, Sequence

import numpy as np

from .graph import Graph, maximal_cliques
from .perm import Orbit
from .presolve import deletion_operation, expand_to_pairs
from .sst import SstCliqueCut, SstRound, SstTable


class NotTriviallyPerfectError(ValueError):
    pass


class ChainDecompositionError(ValueError):
    """The given node set does not split into equal-length chains."""


class TuCapError(ValueError):
    """A TU check was attempted beyond its configured size cap."""


# --- forest representation ---------------------------------------------------


@dataclass(frozen=True)
class ForestRep:
    """Rooted forest whose ancestor pairs are exactly the edges of a TP graph.

    Root-leaf paths are identified by their unique leaf node.
    """

    parent: tuple[int | None, ...]
    children: tuple[tuple[int, ...], ...]
    roots: tuple[int, ...]

    @staticmethod
    def from_parents(parents: Sequence[int | None]) -> "ForestRep":
        n = len(parents)
        children: list[list[int]] = [[] for _ in range(n)]
        roots = []
        for v, p in enumerate(parents):
            if p is None:
                roots.append(v)
            else:
                if not 0 <= p < n:
                    raise ValueError(f"parent {p} of node {v} out of range")
                children[p].append(v)
        rep = ForestRep(
            tuple(parents),
            tuple(tuple(sorted(c)) for c in children),
            tuple(sorted(roots)),
        )
        seen: set[int] = set()
        for r in rep.roots:
            stack = [r]
            while stack:
                v = stack.pop()
                if v in seen:
                    raise ValueError("parent structure contains a cycle")
                seen.add(v)
                stack.extend(rep.children[v])
        if len(seen) != n:
            raise ValueError("parent structure contains a cycle")
        return rep

    @property
    def n(self) -> int:
        return len(self.parent)

    def out_degree(self, v: int) -> int:
        return len(self.children[v])

    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if not self.children[v])

    def ancestors(self, v: int) -> list[int]:
        out = []
        p = self.parent[v]
        while p is not None:
            out.append(p)
            p = self.parent[p]
        return out

    def is_ancestor(self, u: int, v: int) -> bool:
        """True iff u is a strict ancestor of v."""
        p = self.parent[v]
        while p is not None:
            if p == u:
                return True
            p = self.parent[p]
        return False

    def comparable(self, u: int, v: int) -> bool:
        return u == v or self.is_ancestor(u, v) or self.is_ancestor(v, u)

    def subtree_nodes(self, v: int) -> tuple[int, ...]:
        out = []
        stack = [v]
        while stack:
            w = stack.pop()
            out.append(w)
            stack.extend(self.children[w])
        return tuple(sorted(out))

    def subtree_leaves(self, v: int) -> tuple[int, ...]:
        """The paths through v, identified by their leaves."""
        return tuple(w for w in self.subtree_nodes(v) if not self.children[w])

    def root_leaf_paths(self) -> list[tuple[int, ...]]:
        """All root-leaf paths, ordered by leaf node."""
        paths = []
        for leaf in self.leaves():
            path = [leaf] + self.ancestors(leaf)
            paths.append(tuple(reversed(path)))
        return sorted(paths, key=lambda p: p[-1])


def _try_peel(g: Graph) -> list[int | None] | None:
    """Universal-vertex peeling; None when some component has no universal vertex."""
    parent: list[int | None] = [None] * g.n
    neighbor_sets = [set(g.adjacency[v]) for v in range(g.n)]

    def components(nodes: set[int]) -> list[set[int]]:
        comps = []
        remaining = set(nodes)
        while remaining:
            start = min(remaining)
            comp = {start}
            frontier = [start]
            while frontier:
                v = frontier.pop()
                for u in neighbor_sets[v] & remaining:
                    if u not in comp:
                        comp.add(u)
                        frontier.append(u)
            remaining -= comp
            comps.append(comp)
        return comps

    stack: list[tuple[set[int], int | None]] = [
        (comp, None) for comp in components(set(range(g.n)))
    ]
    while stack:
        comp, par = stack.pop()
        universal = [v for v in sorted(comp) if len(neighbor_sets[v] & comp) == len(comp) - 1]
        if not universal:
            return None
        u = universal[0]
        parent[u] = par
        rest = comp - {u}
        for sub in components(rest):
            stack.append((sub, u))
    return parent


def is_trivially_perfect(g: Graph) -> bool:
    return _try_peel(g) is not None


def forest_representation(g: Graph) -> ForestRep:
    parents = _try_peel(g)
    if parents is None:
        raise NotTriviallyPerfectError(
            "graph has a connected induced subgraph without a universal vertex"
        )
    return ForestRep.from_parents(parents)


def chain_decomposition(f: ForestRep, nodes: Iterable[int]) -> list[tuple[int, ...]]:
    """Partition `nodes` into maximal chains: directed paths whose non-terminal
    nodes have out-degree 1 in the full forest.  For a node orbit of a TP
    graph's symmetry group all chains have equal length; unequal lengths are
    reported as an inconsistency."""
    node_set = set(nodes)
    for v in node_set:
        if not 0 <= v < f.n:
            raise ValueError(f"node {v} out of range")
    chains = []
    for v in sorted(node_set):
        p = f.parent[v]
        if p is not None and p in node_set and f.out_degree(p) == 1:
            continue  # continuation of the chain starting above
        chain = [v]
        cur = v
        while f.out_degree(cur) == 1 and f.children[cur][0] in node_set:
            cur = f.children[cur][0]
            chain.append(cur)
        chains.append(tuple(chain))
    lengths = {len(c) for c in chains}
    if len(lengths) > 1:
        raise ChainDecompositionError(
            f"node set {sorted(node_set)} decomposes into chains of unequal "
            f"lengths {sorted(lengths)}; not a symmetry orbit of this graph"
        )
    return chains


# --- auxiliary graph (chain contraction) -------------------------------------


@dataclass(frozen=True)
class AuxiliaryGraph:
    """Chain-contracted graph with the induced plain-cut table.

    labels[i] is the original node whose label the contracted node i carries;
    node_class maps every original node to its contracted node.
    """

    graph: Graph
    table: SstTable
    labels: tuple[int, ...]
    node_class: dict[int, int]


def auxiliary_graph(g: Graph, t: SstTable) -> AuxiliaryGraph:
    """Contract every chain of every recorded orbit into a single node.

    A chain containing a leader is labeled by the lowest-indexed leader in it,
    other chains by their smallest node; within a chain the clique-matrix
    columns coincide, so contraction preserves the TU verdict of the extended
    matrix (with deletion applied on the original side).
    """
    f = forest_representation(g)
    uf = list(range(g.n))

    def find(v: int) -> int:
        while uf[v] != v:
            uf[v] = uf[uf[v]]
            v = uf[v]
        return v

    for r in t.rounds:
        for chain in chain_decomposition(f, r.orbit.members):
            for v in chain[1:]:
                uf[find(v)] = find(chain[0])

    classes: dict[int, list[int]] = {}
    for v in range(g.n):
        classes.setdefault(find(v), []).append(v)
    leaders = set(t.leaders)
    label_of_class = {}
    for root, members in classes.items():
        in_class = [v for v in members if v in leaders]
        label_of_class[root] = min(in_class) if in_class else min(members)
    ordered = sorted(classes, key=lambda root: label_of_class[root])
    new_index = {root: i for i, root in enumerate(ordered)}
    labels = tuple(label_of_class[root] for root in ordered)
    node_class = {v: new_index[find(v)] for v in range(g.n)}

    edges = {
        (node_class[u], node_class[v])
        for u, v in g.edges
        if node_class[u] != node_class[v]
    }
    weights = [g.weights[label] for label in labels]
    aux = Graph.from_edges(len(ordered), edges, weights)

    rounds = []
    seen_pairs = set()
    for r in t.rounds:
        lead = node_class[r.leader]
        followers = []
        for v in r.followers:
            fc = node_class[v]
            if fc != lead and (lead, fc) not in seen_pairs:
                seen_pairs.add((lead, fc))
                followers.append(fc)
        if followers:
            members = tuple(sorted([lead] + followers))
            rounds.append(SstRound(lead, Orbit(lead, members), tuple(sorted(followers)), ()))
    return AuxiliaryGraph(aux, SstTable(aux.n, tuple(rounds)), labels, node_class)


# --- extended clique matrices -------------------------------------------------


@dataclass(frozen=True)
class ExtendedMatrix:
    """{0,+-1} matrix of clique rows and cut / ordering-inequality rows.

    Row tags are ("clique", nodes) or ("cut", leader, followers) with original
    node ids; col tags are the original node ids of the surviving columns.
    """

    entries: tuple[tuple[int, ...], ...]
    row_tags: tuple[tuple, ...]
    col_tags: tuple[int, ...]

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.col_tags)

    @staticmethod
    def from_rows(rows, row_tags=None, col_tags=None) -> "ExtendedMatrix":
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        ncols = len(entries[0]) if entries else 0
        if any(len(row) != ncols for row in entries):
            raise ValueError("ragged matrix")
        if row_tags is None:
            row_tags = tuple(("row", i) for i in range(len(entries)))
        if col_tags is None:
            col_tags = tuple(range(ncols))
        return ExtendedMatrix(entries, tuple(row_tags), tuple(col_tags))


def normalize_cuts(cuts: Iterable) -> list[tuple[int, tuple[int, ...]]]:
    """Accept plain pairs, SstCliqueCut, or (leader, follower-iterable) rows."""
    out = []
    for cut in cuts:
        if isinstance(cut, SstCliqueCut):
            out.append((cut.leader, tuple(cut.clique)))
        else:
            leader, rest = cut
            if isinstance(rest, int):
                out.append((int(leader), (rest,)))
            else:
                out.append((int(leader), tuple(int(v) for v in rest)))
    return out


def extended_clique_matrix(
    g: Graph, cuts: Iterable, apply_deletion: bool = False, cap: int = 200
) -> ExtendedMatrix:
    """Clique rows of g plus one row per cut (-1 at the leader, +1 at the
    followers).  With apply_deletion, columns of nodes removed by the deletion
    operation are dropped, as are rows that become all-zero."""
    norm = normalize_cuts(cuts)
    removed: set[int] = set()
    if apply_deletion:
        pairs = expand_to_pairs(
            [SstCliqueCut(leader, followers) for leader, followers in norm]
        )
        removed = set(deletion_operation(g, pairs).removed_nodes)
    cols = tuple(v for v in range(g.n) if v not in removed)
    col_pos = {v: i for i, v in enumerate(cols)}

    entries = []
    row_tags = []
    for clique in maximal_cliques(g, cap):
        row = [0] * len(cols)
        for v in clique:
            if v in col_pos:
                row[col_pos[v]] = 1
        if any(row):
            entries.append(tuple(row))
            row_tags.append(("clique", tuple(clique)))
    for leader, followers in norm:
        row = [0] * len(cols)
        if leader in col_pos:
            row[col_pos[leader]] = -1
        for v in followers:
            if v in col_pos:
                row[col_pos[v]] = 1
        if any(row):
            entries.append(tuple(row))
            row_tags.append(("cut", leader, tuple(followers)))
    return ExtendedMatrix(tuple(entries), tuple(row_tags), cols)


def matrix_to_text(m: ExtendedMatrix) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in m.entries) + "\n"


def matrix_from_text(text: str) -> ExtendedMatrix:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if line:
            rows.append([int(tok) for tok in line.split()])
    return ExtendedMatrix.from_rows(rows)


def matrix_to_dict(m: ExtendedMatrix) -> dict:
    tags = []
    for tag in m.row_tags:
        if tag[0] == "clique":
            tags.append({"kind": "clique", "nodes": [v + 1 for v in tag[1]]})
        elif tag[0] == "cut":
            tags.append(
                {
                    "kind": "cut",
                    "leader": tag[1] + 1,
                    "followers": [v + 1 for v in tag[2]],
                }
            )
        else:
            tags.append({"kind": str(tag[0]), "index": tag[1]})
    return {
        "entries": [list(row) for row in m.entries],
        "row_tags": tags,
        "col_tags": [v + 1 for v in m.col_tags],
    }


# --- total unimodularity ------------------------------------------------------


@dataclass(frozen=True)
class DeterminantWitness:
    """A square submatrix (original row/col indices) with |det| >= 2."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    determinant: int


@dataclass(frozen=True)
class EquicoloringWitness:
    """A row subset (original indices) admitting no equitable +-1 signing."""

    rows: tuple[int, ...]


def _entry_violation(entries):
    for i, row in enumerate(entries):
        for j, x in enumerate(row):
            if x not in (-1, 0, 1):
                return DeterminantWitness((i,), (j,), int(x))
    return None


def _reduce_core(entries):
    """Strip rows/cols that cannot participate in a minimal violation:
    all-zero and duplicate rows/cols, and rows/cols with a single nonzero.
    Sound for both checkers; returns (core, row indices, col indices)."""
    rows = [list(r) for r in entries]
    row_idx = list(range(len(rows)))
    col_idx = list(range(len(rows[0]) if rows else 0))
    changed = True
    while changed:
        changed = False
        keep, seen = [], set()
        for i, row in enumerate(rows):
            key = tuple(row)
            nonzeros = sum(1 for x in row if x)
            if nonzeros <= 1 or key in seen:
                changed = True
                continue
            seen.add(key)
            keep.append(i)
        rows = [rows[i] for i in keep]
        row_idx = [row_idx[i] for i in keep]
        if not rows:
            col_idx = []
            break
        ncols = len(col_idx)
        keep_c, seen_c = [], set()
        for j in range(ncols):
            col = tuple(row[j] for row in rows)
            nonzeros = sum(1 for x in col if x)
            if nonzeros <= 1 or col in seen_c:
                changed = True
                continue
            seen_c.add(col)
            keep_c.append(j)
        if len(keep_c) != ncols:
            rows = [[row[j] for j in keep_c] for row in rows]
        col_idx = [col_idx[j] for j in keep_c]
    return [tuple(r) for r in rows], row_idx, col_idx


def _bareiss_det(matrix) -> int:
    """Exact integer determinant by fraction-free elimination."""
    a = [list(map(int, row)) for row in matrix]
    k = len(a)
    sign = 1
    prev = 1
    for i in range(k):
        pivot_row = next((r for r in range(i, k) if a[r][i] != 0), None)
        if pivot_row is None:
            return 0
        if pivot_row != i:
            a[i], a[pivot_row] = a[pivot_row], a[i]
            sign = -sign
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[k - 1][k - 1]


def _batch_bareiss(batch: np.ndarray) -> np.ndarray:
    """Exact determinants of a (B, k, k) int64 batch, k <= 15 (no overflow:
    intermediate products stay below the squared Hadamard bound)."""
    a = batch.astype(np.int64, copy=True)
    b, k, _ = a.shape
    sign = np.ones(b, dtype=np.int64)
    alive = np.ones(b, dtype=bool)
    prev = np.ones(b, dtype=np.int64)
    arange = np.arange(b)
    for i in range(k):
        col = a[:, i:, i]
        nz = col != 0
        has = nz.any(axis=1)
        alive &= has
        pivrow = i + np.argmax(nz, axis=1)
        pivrow[~alive] = i
        swap = pivrow != i
        if swap.any():
            tmp = a[arange, pivrow].copy()
            a[arange, pivrow] = a[arange, i]
            a[arange, i] = tmp
            sign[swap] = -sign[swap]
        piv = np.where(alive, a[:, i, i], 1)
        if i < k - 1:
            block = a[:, i + 1 :, i + 1 :]
            outer = a[:, i + 1 :, i : i + 1] * a[:, i : i + 1, i + 1 :]
            a[:, i + 1 :, i + 1 :] = (block * piv[:, None, None] - outer) // prev[
                :, None, None
            ]
        prev = piv
    dets = sign * a[:, k - 1, k - 1]
    dets[~alive] = 0
    return dets


def is_tu_determinant(
    m: ExtendedMatrix, cap: int = 16
) -> tuple[bool, DeterminantWitness | None]:
    """Exhaustive check that every square submatrix has determinant in
    {0, +-1}, in exact integer arithmetic.

    The matrix is first shrunk to its irreducible core (which preserves the
    verdict and contains a minimal violation whenever one exists); the cap
    applies to min(rows, cols) of that core.  On failure the witness names a
    smallest violating submatrix in original indices.
    """
    bad = _entry_violation(m.entries)
    if bad is not None:
        return False, bad
    core, row_idx, col_idx = _reduce_core(m.entries)
    r, c = len(core), len(col_idx)
    if min(r, c) > cap:
        raise TuCapError(
            f"reduced matrix is {r}x{c}, beyond the determinant cap {cap}; "
            "use is_tu_ghouila_houri or raise the cap"
        )
    if r == 0 or c == 0:
        return True, None
    for k in range(2, min(r, c) + 1):
        col_combos = np.array(list(itertools.combinations(range(c), k)))
        for row_subset in itertools.combinations(range(r), k):
            sub = np.array([core[i] for i in row_subset], dtype=np.int64)
            if k <= 15:
                batch = sub.T[col_combos].transpose(0, 2, 1)
                dets = _batch_bareiss(batch)
                flagged = np.nonzero(np.abs(dets) > 1)[0]
                if flagged.size:
                    first = int(flagged[0])
                    cols = tuple(col_idx[j] for j in col_combos[first])
                    rows = tuple(row_idx[i] for i in row_subset)
                    return False, DeterminantWitness(rows, cols, int(dets[first]))
            else:
                for combo in itertools.combinations(range(c), k):
                    det = _bareiss_det([[core[i][j] for j in combo] for i in row_subset])
                    if abs(det) > 1:
                        cols = tuple(col_idx[j] for j in combo)
                        rows = tuple(row_idx[i] for i in row_subset)
                        return False, DeterminantWitness(rows, cols, det)
    return True, None


def _signable(rows: list[tuple[int, ...]]) -> bool:
    """Does a +-1 signing of the rows keep every column sum within {0,+-1}?"""
    ncols = len(rows[0])
    active = [c for c in range(ncols) if any(row[c] for row in rows)]
    k = len(rows)
    remaining = [[0] * len(active) for _ in range(k + 1)]
    for i in range(k - 1, -1, -1):
        for jc, c in enumerate(active):
            remaining[i][jc] = remaining[i + 1][jc] + (1 if rows[i][c] else 0)
    sums = [0] * len(active)

    def assign(i: int) -> bool:
        if i == k:
            return True
        for sigma in (1, -1) if i else (1,):  # global negation symmetry
            ok = True
            for jc, c in enumerate(active):
                sums[jc] += sigma * rows[i][c]
                if abs(sums[jc]) > 1 + remaining[i + 1][jc]:
                    ok = False
            if ok and assign(i + 1):
                return True
            for jc, c in enumerate(active):
                sums[jc] -= sigma * rows[i][c]
        return False

    return assign(0)


def is_tu_ghouila_houri(
    m: ExtendedMatrix, cap: int = 24
) -> tuple[bool, EquicoloringWitness | None]:
    """Check that every row subset admits an equitable +-1 signing with all
    column sums in {0, +-1}; equivalent to total unimodularity.

    Reduction and cap semantics mirror is_tu_determinant; the cap applies to
    the reduced row count.  On failure the witness is the first (smallest,
    then lexicographic) unbalanceable row subset, in original row indices.
    """
    bad = _entry_violation(m.entries)
    if bad is not None:
        return False, EquicoloringWitness(bad.rows)
    core, row_idx, _ = _reduce_core(m.entries)
    r = len(core)
    if r > cap:
        raise TuCapError(
            f"reduced matrix has {r} rows, beyond the equicoloring cap {cap}"
        )
    for size in range(2, r + 1):
        for subset in itertools.combinations(range(r), size):
            if not _signable([core[i] for i in subset]):
                return False, EquicoloringWitness(tuple(row_idx[i] for i in subset))
    return True, None


# --- equicolorings of root-leaf paths ----------------------------------------


@dataclass(frozen=True)
class Equicoloring:
    """A +-1 signing of a path set P (paths named by leaves): P = plus|minus.

    deltas[v] = |plus through v| - |minus through v|; an equicoloring keeps
    every delta in {0, +-1}.
    """

    plus: frozenset[int]
    minus: frozenset[int]
    deltas: tuple[int, ...]

    def sign(self, leaf: int) -> int:
        if leaf in self.plus:
            return 1
        if leaf in self.minus:
            return -1
        raise KeyError(f"path {leaf} is not colored")


def make_equicoloring(f: ForestRep, signs: dict[int, int]) -> Equicoloring:
    plus = frozenset(leaf for leaf, s in signs.items() if s > 0)
    minus = frozenset(leaf for leaf, s in signs.items() if s < 0)
    deltas = []
    for v in range(f.n):
        through = set(f.subtree_leaves(v))
        deltas.append(len(plus & through) - len(minus & through))
    return Equicoloring(plus, minus, tuple(deltas))


class _Tree:
    """Mutable rooted tree over the forest nodes, supporting virtual nodes
    (negative ids) for the super-root and for grouped component roots."""

    def __init__(self, f: ForestRep):
        self.parent: dict[int, int | None] = {}
        self.children: dict[int, list[int]] = {}
        for v in range(f.n):
            self.parent[v] = f.parent[v]
            self.children[v] = list(f.children[v])
        if len(f.roots) == 1:
            self.root = f.roots[0]
        else:
            self.root = -1
            self.parent[self.root] = None
            self.children[self.root] = list(f.roots)
            for r in f.roots:
                self.parent[r] = self.root
        self._next_virtual = -2

    def insert_virtual(self, parent: int, group: list[int]) -> int:
        virt = self._next_virtual
        self._next_virtual -= 1
        self.parent[virt] = parent
        self.children[virt] = list(group)
        self.children[parent] = [
            c for c in self.children[parent] if c not in set(group)
        ] + [virt]
        for c in group:
            self.parent[c] = virt
        return virt

    def subtree_nodes(self, v: int) -> list[int]:
        out = []
        stack = [v]
        while stack:
            w = stack.pop()
            out.append(w)
            stack.extend(self.children[w])
        return out

    def dfs_leaves(self, v: int) -> list[int]:
        out = []
        stack = [v]
        while stack:
            w = stack.pop()
            kids = self.children[w]
            if kids:
                stack.extend(reversed(kids))
            else:
                out.append(w)
        return out


def _alternating(leaves_in_order: list[int], start: int = -1) -> dict[int, int]:
    """Alternating signs along contiguous subtree blocks keep every delta in
    {0, +-1}."""
    signs = {}
    s = start
    for leaf in leaves_in_order:
        signs[leaf] = s
        s = -s
    return signs


def _lemma6_rec(tree: _Tree, root: int, pset: frozenset[int], sset: frozenset[int]):
    """Returns (signs, d, s): an equicoloring of pset in the subtree at root
    with d = delta(root), s = sum of deltas over sset, satisfying
    s = -1 if d = -1 and s in {0, 1} if d in {0, 1}."""
    if not pset:
        return {}, 0, 0
    ordered = [leaf for leaf in tree.dfs_leaves(root) if leaf in pset]
    if root in sset:
        # path-disjointness forces sset == {root}; any equicoloring works
        signs = _alternating(ordered)
        d = -(len(ordered) % 2)
        return signs, d, d
    if not tree.children[root]:
        signs = _alternating(ordered)
        return signs, -(len(ordered) % 2), 0

    pool_full = []   # |d| = 1 and s = d: orientable between (1,1) and (-1,-1)
    pool_d = []      # |d| = 1, s = 0
    pool_s = []      # d = 0, |s| = 1
    merged: dict[int, int] = {}
    for child in tree.children[root]:
        child_leaves = frozenset(tree.dfs_leaves(child))
        p_c = pset & child_leaves
        if not p_c:
            continue
        s_c = sset & frozenset(tree.subtree_nodes(child))
        signs, d, s = _lemma6_rec(tree, child, p_c, s_c)
        if d == 0 and s == 0:
            merged.update(signs)
        elif abs(d) == 1 and s == d:
            pool_full.append((signs, d))
        elif abs(d) == 1 and s == 0:
            pool_d.append((signs, d))
        elif d == 0 and abs(s) == 1:
            pool_s.append((signs, s))
        else:
            raise AssertionError(f"impossible subtree relation (d={d}, s={s})")

    def put(signs, flip):
        if flip:
            merged.update({leaf: -v for leaf, v in signs.items()})
        else:
            merged.update(signs)

    # orient the (d, s) = +-(1, 1) components to ceil/floor halves
    na = len(pool_full)
    for i, (signs, d) in enumerate(pool_full):
        want = 1 if i < (na + 1) // 2 else -1
        put(signs, d != want)
    delta_total = na % 2
    s_total = na % 2
    # d-only components: alternate so the running d-sum stays in {0, 1}
    for signs, d in pool_d:
        want = 1 if delta_total == 0 else -1
        put(signs, d != want)
        delta_total += want
    # s-only components: alternate so the running s-sum stays in {0, 1}
    for signs, s in pool_s:
        want = 1 if s_total == 0 else -1
        put(signs, s != want)
        s_total += want
    return merged, delta_total, s_total


def _check_path_disjoint(f: ForestRep, nodes: Iterable[int]) -> None:
    nodes = sorted(set(nodes))
    for i, u in enumerate(nodes):
        for v in nodes[i + 1 :]:
            if f.comparable(u, v):
                raise ValueError(
                    f"nodes {u} and {v} share a root-leaf path; the set is "
                    "not path-disjoint"
                )


def equicolor_tree_paths(
    f: ForestRep, paths: Iterable[int], node_set: Iterable[int]
) -> Equicoloring:
    """Constructive equicoloring of `paths` (leaf ids) on a single tree with
    the sum of deltas over the path-disjoint set `node_set` equal to -1 when
    delta(root) = -1 and in {0, 1} otherwise."""
    if len(f.roots) != 1:
        raise ValueError("expected a forest consisting of a single tree")
    sset = frozenset(node_set)
    if not sset:
        raise ValueError("node set must be non-empty")
    _check_path_disjoint(f, sset)
    leaves = set(f.leaves())
    pset = frozenset(paths)
    if not pset <= leaves:
        raise ValueError("paths must be identified by leaf nodes")
    for v in sset:
        if not pset & set(f.subtree_leaves(v)):
            raise ValueError(f"node {v} lies on no path of the given set")
    tree = _Tree(f)
    signs, _, _ = _lemma6_rec(tree, tree.root, pset, sset)
    return make_equicoloring(f, signs)


# --- recursion property and simultaneous equicolorings ------------------------


def _avoiding_components(tree: _Tree, d: int, excluded: set[int]):
    """Child subtrees of d containing no excluded node, as (child, nodes)."""
    comps = []
    for child in tree.children[d]:
        nodes = set(tree.subtree_nodes(child))
        if not (nodes & excluded):
            comps.append((child, nodes))
    return comps


def _candidate_d_nodes(tree: _Tree, n: int) -> list[int]:
    candidates = [v for v in range(n) if tree.children.get(v)]
    if tree.root < 0:
        candidates.append(tree.root)
    return candidates


def check_recursion_property(f: ForestRep, sets: Sequence[Iterable[int]]) -> bool:
    """Pairwise disjointness plus, for each set after the first, a node d whose
    child subtrees avoiding all earlier sets contain it entirely.

    Each individual set must be path-disjoint (a precondition, not part of
    the verdict).  On a multi-tree forest the implicit super-root is allowed
    as d, mirroring the universal-node extension used for disconnected graphs.
    """
    families = [frozenset(s) for s in sets]
    if any(not s for s in families):
        raise ValueError("sets must be non-empty")
    for s in families:
        _check_path_disjoint(f, s)
    for a, b in itertools.combinations(families, 2):
        if a & b:
            return False
    tree = _Tree(f)
    candidates = _candidate_d_nodes(tree, f.n)
    for i in range(1, len(families)):
        excluded = set().union(*families[:i])
        target = families[i]
        if not any(
            target
            <= set().union(*(nodes for _, nodes in _avoiding_components(tree, d, excluded)))
            for d in candidates
            if _avoiding_components(tree, d, excluded)
        ):
            return False
    return True


def check_laminar_recursion_property(
    f: ForestRep, family: Sequence[Iterable[int]]
) -> tuple[bool, dict[int, int]]:
    """For a laminar family (in leader order): each set needs a node outside
    all its proper subsets, and the inclusionwise maximal sets need the
    recursion property.  Returns the verdict and the chosen u_S witnesses."""
    sets = [frozenset(s) for s in family]
    if any(not s for s in sets):
        raise ValueError("sets must be non-empty")
    for a, b in itertools.combinations(sets, 2):
        if a & b and not (a <= b or b <= a):
            return False, {}
    witnesses: dict[int, int] = {}
    for i, s in enumerate(sets):
        inner = set().union(*(t for t in sets if t < s)) if any(t < s for t in sets) else set()
        free = sorted(s - inner)
        if not free:
            return False, {}
        witnesses[i] = free[0]
    maximal = [s for s in sets if not any(s < t for t in sets)]
    seen = set()
    unique_maximal = []
    for s in maximal:
        if s not in seen:
            seen.add(s)
            unique_maximal.append(s)
    if not check_recursion_property(f, unique_maximal):
        return False, {}
    return True, witnesses


def equicolor_recursive(
    f: ForestRep, sets: Sequence[Iterable[int]], paths: Iterable[int]
) -> Equicoloring:
    """Simultaneous equicoloring: sum of deltas over every set stays in
    {0, +-1}, built by recoloring the subtree hosting each set in turn."""
    families = [frozenset(s) for s in sets]
    if not families:
        raise ValueError("need at least one set")
    if not check_recursion_property(f, families):
        raise ValueError("the sets violate the recursion property")
    pset = frozenset(paths)
    leaves = set(f.leaves())
    if not pset <= leaves:
        raise ValueError("paths must be identified by leaf nodes")
    for s in families:
        for v in s:
            if not pset & set(f.subtree_leaves(v)):
                raise ValueError(f"node {v} lies on no path of the given set")
    tree = _Tree(f)
    candidates = _candidate_d_nodes(tree, f.n)

    def paths_through(v: int) -> frozenset[int]:
        return pset & frozenset(tree.dfs_leaves(v))

    def build(m: int) -> dict[int, int]:
        if m == 0:
            return _alternating([l for l in tree.dfs_leaves(tree.root) if l in pset])
        if m == 1:
            signs, _, _ = _lemma6_rec(tree, tree.root, pset, families[0])
            return signs
        target = families[m - 1]
        excluded = set().union(*families[: m - 1])
        region_root = None
        for d in candidates:
            comps = _avoiding_components(tree, d, excluded)
            union = set().union(*(nodes for _, nodes in comps)) if comps else set()
            if target <= union:
                chosen = [child for child, nodes in comps if nodes & target]
                region_root = (
                    chosen[0]
                    if len(chosen) == 1
                    else tree.insert_virtual(d, chosen)
                )
                break
        if region_root is None:
            raise AssertionError("recursion property vanished during construction")
        signs = build(m - 1)
        region_paths = paths_through(region_root)
        old_delta = sum(signs[l] for l in region_paths)
        sub_signs, d_sub, _ = _lemma6_rec(tree, region_root, region_paths, target)
        if abs(d_sub) != abs(old_delta):
            raise AssertionError("parity mismatch while splicing a recoloring")
        if d_sub != old_delta:
            sub_signs = {leaf: -v for leaf, v in sub_signs.items()}
        signs.update(sub_signs)
        return signs

    return make_equicoloring(f, build(len(families)))
