"""Permutations on n points, finitely generated groups, orbits and stabilizers.

Points are 0-based everywhere in this package; the 1-based convention of the
cycle-notation text format and of DIMACS files is translated at I/O boundaries
only.  All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from collections import deque
from collections.abc import Iterable, Sequence


class GroupTooLargeError(ValueError):
    """Raised when explicit element enumeration would exceed its cap."""


@dataclass(frozen=True)
class Permutation:
    """A bijection on {0, ..., n-1}, stored as the image tuple.

    images[i] is the image of point i.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(n)):
            raise ValueError(f"not a permutation of 0..{n - 1}: {self.images}")

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(n)))

    @staticmethod
    def from_cycles(n: int, cycles: Iterable[Iterable[int]]) -> "Permutation":
        """Build a permutation on n points from disjoint 0-based cycles."""
        images = list(range(n))
        seen = set()
        for cycle in cycles:
            cycle = list(cycle)
            for point in cycle:
                if not 0 <= point < n:
                    raise ValueError(f"point {point} out of range for n={n}")
                if point in seen:
                    raise ValueError(f"cycles are not disjoint at point {point}")
                seen.add(point)
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                images[a] = b
        return Permutation(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition acting left-to-right on points: (p*q)(i) = p(q(i))."""
        if self.n != other.n:
            raise ValueError("cannot compose permutations on different point counts")
        return Permutation(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles (length >= 2), each starting at its smallest point."""
        seen = set()
        out = []
        for i in range(self.n):
            if i in seen or self.images[i] == i:
                continue
            cycle = [i]
            j = self.images[i]
            while j != i:
                seen.add(j)
                cycle.append(j)
                j = self.images[j]
            out.append(tuple(cycle))
        return out

    def __str__(self) -> str:
        return format_permutation(self)


@dataclass(frozen=True)
class GeneratorSet:
    """A permutation group on n points given by a list of generators.

    The empty generator list denotes the trivial group.
    """

    n: int
    generators: tuple[Permutation, ...]

    def __post_init__(self):
        for g in self.generators:
            if g.n != self.n:
                raise ValueError(f"generator on {g.n} points in a group on {self.n}")

    @staticmethod
    def trivial(n: int) -> "GeneratorSet":
        return GeneratorSet(n, ())

    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self.generators)

    def nontrivial_generators(self) -> tuple[Permutation, ...]:
        return tuple(g for g in self.generators if not g.is_identity())


@dataclass(frozen=True)
class Orbit:
    """The orbit of a representative point under a group."""

    representative: int
    members: tuple[int, ...]

    def __post_init__(self):
        if self.representative not in self.members:
            raise ValueError("representative must belong to the orbit")
        if list(self.members) != sorted(set(self.members)):
            raise ValueError("orbit members must be sorted and unique")

    def __contains__(self, point: int) -> bool:
        return point in self.members

    def __len__(self) -> int:
        return len(self.members)


def apply_to_vector(p: Permutation, x: Sequence) -> tuple:
    """Permute coordinates of x: position p(i) of the result holds x[i].

    Equivalently, result[i] = x[p^{-1}(i)].
    """
    if len(x) != p.n:
        raise ValueError(f"vector length {len(x)} != point count {p.n}")
    out = [None] * p.n
    for i, xi in enumerate(x):
        out[p.images[i]] = xi
    return tuple(out)


def orbit(g: GeneratorSet, point: int) -> Orbit:
    """Breadth-first closure of {point} under all generators."""
    if not 0 <= point < g.n:
        raise ValueError(f"point {point} out of range for n={g.n}")
    members, _ = _orbit_transversal(g.generators, point)
    return Orbit(point, tuple(sorted(members)))


def orbit_transversal(g: GeneratorSet, point: int) -> dict[int, Permutation]:
    """Map each orbit member q to a group element taking `point` to q."""
    if not 0 <= point < g.n:
        raise ValueError(f"point {point} out of range for n={g.n}")
    _, transversal = _orbit_transversal(g.generators, point, with_transversal=True, n=g.n)
    return transversal


def _orbit_transversal(generators, point, with_transversal=False, n=None):
    members = {point}
    transversal = {}
    if with_transversal:
        transversal[point] = Permutation.identity(n)
    queue = deque([point])
    while queue:
        p = queue.popleft()
        for gen in generators:
            q = gen.images[p]
            if q not in members:
                members.add(q)
                if with_transversal:
                    transversal[q] = gen * transversal[p]
                queue.append(q)
    return members, transversal


def all_orbits(g: GeneratorSet) -> list[Orbit]:
    """Orbits of all points, ordered by smallest member; they partition 0..n-1."""
    seen = set()
    out = []
    for point in range(g.n):
        if point in seen:
            continue
        o = orbit(g, point)
        seen.update(o.members)
        out.append(o)
    return out


def pointwise_stabilizer(g: GeneratorSet, fixed: Iterable[int]) -> GeneratorSet:
    """Generators of the subgroup fixing every point of `fixed`.

    Uses the orbit/transversal construction with Schreier generators, one fixed
    point at a time; only duplicate generators are pruned, which is fine at the
    scale this package targets but would blow up for large degrees.
    """
    fixed = sorted(set(fixed))
    for point in fixed:
        if not 0 <= point < g.n:
            raise ValueError(f"point {point} out of range for n={g.n}")
    gens = list(g.nontrivial_generators())
    for point in fixed:
        if not gens:
            break
        _, transversal = _orbit_transversal(gens, point, with_transversal=True, n=g.n)
        new_gens = []
        seen = set()
        for p in sorted(transversal):
            u_p = transversal[p]
            for s in gens:
                rep = transversal[s.images[p]]
                schreier = rep.inverse() * s * u_p
                if schreier.is_identity() or schreier.images in seen:
                    continue
                seen.add(schreier.images)
                new_gens.append(schreier)
        gens = new_gens
    return GeneratorSet(g.n, tuple(gens))


def enumerate_elements(g: GeneratorSet, cap: int = 5040) -> list[Permutation]:
    """All group elements, in lexicographic order of their image tuples.

    Raises GroupTooLargeError as soon as the closure exceeds `cap`; the result
    is never truncated.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    identity = Permutation.identity(g.n)
    elements = {identity.images: identity}
    queue = deque([identity])
    gens = g.nontrivial_generators()
    while queue:
        p = queue.popleft()
        for gen in gens:
            q = gen * p
            if q.images not in elements:
                if len(elements) >= cap:
                    raise GroupTooLargeError(
                        f"group has more than {cap} elements; raise the cap to enumerate"
                    )
                elements[q.images] = q
                queue.append(q)
    return [elements[key] for key in sorted(elements)]


def group_order(g: GeneratorSet, cap: int = 5040) -> int:
    return len(enumerate_elements(g, cap))


# --- cycle-notation text format (1-based) ---------------------------------
#
# One permutation per line, e.g. "(1,2,3)(5,6)"; fixed points are omitted and
# "()" denotes the identity.

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def format_permutation(p: Permutation) -> str:
    cycles = p.cycles()
    if not cycles:
        return "()"
    return "".join("(" + ",".join(str(i + 1) for i in cycle) + ")" for cycle in cycles)


def parse_permutation(text: str, n: int) -> Permutation:
    """Parse 1-based disjoint cycle notation such as "(1,2,3)(5,6)"."""
    stripped = text.strip()
    if not stripped:
        raise ValueError("empty permutation string")
    consumed = _CYCLE_RE.sub("", stripped).strip()
    if consumed:
        raise ValueError(f"could not parse permutation {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(stripped):
        body = body.strip()
        if not body:
            continue
        try:
            points = [int(tok) for tok in body.split(",")]
        except ValueError as exc:
            raise ValueError(f"could not parse cycle ({body})") from exc
        for point in points:
            if not 1 <= point <= n:
                raise ValueError(f"point {point} out of range 1..{n}")
        cycles.append([point - 1 for point in points])
    return Permutation.from_cycles(n, cycles)


def format_generators(g: GeneratorSet) -> str:
    """One permutation per line; trivial groups give an empty string."""
    return "\n".join(format_permutation(p) for p in g.generators) + (
        "\n" if g.generators else ""
    )


def parse_generators(text: str, n: int) -> GeneratorSet:
    """Parse a generator file (one cycle-notation permutation per line)."""
    gens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            gens.append(parse_permutation(line, n))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    return GeneratorSet(n, tuple(gens))
