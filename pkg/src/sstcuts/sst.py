"""Schreier-Sims tables and the symmetry-handling cuts they induce.

A table is built by repeatedly selecting a leader, recording its orbit under
the current group, and replacing the group by the stabilizer of the leader.
Each leader/follower pair (l, f) encodes the cut x_f <= x_l; a clique C of
followers strengthens a round to -x_l + sum_{f in C} x_f <= 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Iterable, Sequence

from .graph import Graph, greedy_clique_cover
from .perm import (
    GeneratorSet,
    Orbit,
    all_orbits,
    apply_to_vector,
    orbit,
    orbit_transversal,
    pointwise_stabilizer,
)

ORBIT_RULES = ("min", "max", "first")


@dataclass(frozen=True)
class SstRound:
    """One leader with its orbit; `stabilized` lists the points that were
    pointwise-stabilized in the group under which the orbit was computed."""

    leader: int
    orbit: Orbit
    followers: tuple[int, ...]
    stabilized: tuple[int, ...]


@dataclass(frozen=True)
class SstTable:
    n: int
    rounds: tuple[SstRound, ...]

    @property
    def leaders(self) -> tuple[int, ...]:
        return tuple(r.leader for r in self.rounds)

    @property
    def cuts(self) -> tuple[tuple[int, int], ...]:
        """All leader/follower pairs in table order."""
        return tuple(
            (r.leader, f) for r in self.rounds for f in r.followers
        )

    def orbit_of(self, leader: int) -> Orbit:
        for r in self.rounds:
            if r.leader == leader:
                return r.orbit
        raise KeyError(f"no round with leader {leader}")


@dataclass(frozen=True)
class SstCliqueCut:
    """The inequality -x_leader + sum over the follower clique <= 0."""

    leader: int
    clique: tuple[int, ...]


def _choose_orbit(orbits: list[Orbit], rule: str) -> Orbit:
    if rule == "min":
        return min(orbits, key=lambda o: (len(o), o.members[0]))
    if rule == "max":
        return min(orbits, key=lambda o: (-len(o), o.members[0]))
    if rule == "first":
        return min(orbits, key=lambda o: o.members[0])
    raise ValueError(f"unknown orbit rule {rule!r}; expected one of {ORBIT_RULES}")


def build_sst_table(
    g: GeneratorSet, orbit_rule: str = "min", max_rounds: int = 50
) -> SstTable:
    """Plain table: pick an orbit by size rule (ties by smallest contained
    index), lead with its smallest index, stabilize, repeat.

    A trivial input group yields an empty table.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be at least 1")
    group = g
    stabilized: list[int] = []
    rounds: list[SstRound] = []
    while len(rounds) < max_rounds:
        nontrivial = [o for o in all_orbits(group) if len(o) >= 2]
        if not nontrivial:
            break
        chosen = _choose_orbit(nontrivial, orbit_rule)
        leader = chosen.members[0]
        followers = tuple(v for v in chosen.members if v != leader)
        rounds.append(
            SstRound(leader, Orbit(leader, chosen.members), followers, tuple(stabilized))
        )
        stabilized.append(leader)
        group = pointwise_stabilizer(group, {leader})
    return SstTable(g.n, tuple(rounds))


def _maximal_orbit_union_excluding(
    recorded: Sequence[Orbit], point: int | None
) -> tuple[int, ...]:
    """Union of inclusionwise maximal recorded orbits that do not contain `point`."""
    sets = [set(o.members) for o in recorded]
    union: set[int] = set()
    for i, s in enumerate(sets):
        if point is not None and point in s:
            continue
        if any(i != j and s < other for j, other in enumerate(sets)):
            continue
        union |= s
    return tuple(sorted(union))


def build_stringent_sst_table(
    g: GeneratorSet,
    orbit_rule: str = "min",
    max_rounds: int = 50,
    preferred_leaders: Sequence[int] | None = None,
) -> SstTable:
    """Stringent table: each orbit is computed under the stabilizer of all
    previous leaders intersected with the pointwise stabilizer of every
    maximal earlier orbit not containing the new leader.

    Leaders follow depth-first order: after a leader is selected, subsequent
    leaders are drawn from its orbit until it is exhausted; fresh leaders are
    then chosen by the orbit size rule.  `preferred_leaders` overrides leader
    selection while entries remain (testing hook; the definitional
    stabilization still applies, so the result passes is_stringent).
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be at least 1")
    group = g  # stabilizer of all leaders selected so far
    leaders: list[int] = []
    recorded: list[Orbit] = []
    rounds: list[SstRound] = []
    pending: list[list[int]] = []  # depth-first stack of orbit members
    preferred = list(preferred_leaders) if preferred_leaders else []

    def select_leader() -> int | None:
        if preferred:
            return preferred.pop(0)
        while pending:
            if pending[-1]:
                return pending[-1].pop(0)
            pending.pop()
        # fresh leader: every maximal recorded orbit avoids it, so all fresh
        # candidates see the same stabilized group
        union = _maximal_orbit_union_excluding(recorded, None)
        fresh_group = pointwise_stabilizer(group, union)
        nontrivial = [o for o in all_orbits(fresh_group) if len(o) >= 2]
        if not nontrivial:
            return None
        return _choose_orbit(nontrivial, orbit_rule).members[0]

    while len(rounds) < max_rounds:
        leader = select_leader()
        if leader is None:
            break
        if leader in leaders:
            continue
        extra = _maximal_orbit_union_excluding(recorded, leader)
        stab_set = tuple(sorted(set(leaders) | set(extra)))
        local_group = pointwise_stabilizer(group, extra)
        o = orbit(local_group, leader)
        if len(o) >= 2:
            followers = tuple(v for v in o.members if v != leader)
            rounds.append(SstRound(leader, o, followers, stab_set))
            recorded.append(o)
            pending.append([v for v in o.members if v != leader])
        leaders.append(leader)
        group = pointwise_stabilizer(group, {leader})
    return SstTable(g.n, tuple(rounds))


def is_stringent(t: SstTable, g: GeneratorSet) -> bool:
    """Recompute every orbit under the stringency group and compare."""
    if t.n != g.n:
        raise ValueError(f"table on {t.n} points does not match group on {g.n}")
    prior_leaders: list[int] = []
    prior_orbits: list[Orbit] = []
    for r in t.rounds:
        extra = _maximal_orbit_union_excluding(prior_orbits, r.leader)
        group = pointwise_stabilizer(g, set(prior_leaders) | set(extra))
        if orbit(group, r.leader).members != r.orbit.members:
            return False
        prior_leaders.append(r.leader)
        prior_orbits.append(r.orbit)
    return True


def sst_clique_cuts(t: SstTable, graph: Graph) -> list[SstCliqueCut]:
    """Partition each round's followers into a greedy clique cover; one cut
    per cover clique.  Singleton cliques reproduce the plain cuts."""
    if t.n != graph.n:
        raise ValueError("table and graph disagree on the node count")
    cuts = []
    for r in t.rounds:
        for clique in greedy_clique_cover(graph, r.followers):
            cuts.append(SstCliqueCut(r.leader, clique))
    return cuts


Cut = tuple[int, int] | SstCliqueCut


def satisfies_cuts(x: Sequence, cuts: Iterable[Cut]) -> bool:
    """True iff x satisfies every cut: x_f <= x_l for pairs, sum over the
    clique <= x_l for clique cuts."""
    for cut in cuts:
        if isinstance(cut, SstCliqueCut):
            if sum(x[f] for f in cut.clique) > x[cut.leader]:
                return False
        else:
            leader, follower = cut
            if x[follower] > x[leader]:
                return False
    return True


def repair_solution(x: Sequence[int], g: GeneratorSet, t: SstTable) -> tuple[int, ...]:
    """Map x to a group-equivalent 0/1 vector satisfying the table's cuts.

    Round by round: take the argmax of x over the round's orbit (ties to the
    smallest index) and apply a group element of the round's stabilizer that
    moves it onto the leader.
    """
    if t.n != g.n:
        raise ValueError(f"table on {t.n} points does not match group on {g.n}")
    if len(x) != g.n:
        raise ValueError(f"vector length {len(x)} != point count {g.n}")
    if any(v not in (0, 1) for v in x):
        raise ValueError("repair_solution expects a 0/1 vector")
    current = tuple(x)
    for r in t.rounds:
        best = max(r.orbit.members, key=lambda i: (current[i], -i))
        if best == r.leader:
            continue
        group = pointwise_stabilizer(g, r.stabilized)
        transversal = orbit_transversal(group, r.leader)
        if set(transversal) != set(r.orbit.members):
            raise ValueError(
                "table orbit does not match its recorded stabilizer group"
            )
        gamma = transversal[best].inverse()
        current = apply_to_vector(gamma, current)
    return current


# --- JSON-facing serialization (1-based points) -----------------------------


def table_to_dict(t: SstTable, clique_cuts: Iterable[SstCliqueCut] | None = None) -> dict:
    by_leader: dict[int, list[list[int]]] = {}
    if clique_cuts is not None:
        for cut in clique_cuts:
            by_leader.setdefault(cut.leader, []).append([f + 1 for f in cut.clique])
    data = {"n": t.n, "rounds": []}
    for r in t.rounds:
        entry = {
            "leader": r.leader + 1,
            "orbit": [v + 1 for v in r.orbit.members],
            "followers": [v + 1 for v in r.followers],
            "stabilized": [v + 1 for v in r.stabilized],
        }
        if clique_cuts is not None:
            entry["clique_cuts"] = by_leader.get(r.leader, [])
        data["rounds"].append(entry)
    return data


def table_from_dict(data: dict) -> SstTable:
    rounds = []
    for entry in data["rounds"]:
        members = tuple(sorted(v - 1 for v in entry["orbit"]))
        leader = entry["leader"] - 1
        rounds.append(
            SstRound(
                leader,
                Orbit(leader, members),
                tuple(v - 1 for v in entry["followers"]),
                tuple(v - 1 for v in entry["stabilized"]),
            )
        )
    return SstTable(data["n"], tuple(rounds))
