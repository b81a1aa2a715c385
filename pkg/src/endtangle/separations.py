"""
Finite-order separations of an infinite graph, stored intensionally.

A separation is kept as its separator plus the representatives of the finite
components of G - separator that lie on the A side, and a flag saying on which
side the component containing the end lies. Finite components of G - X never
reach deeper than X itself, so this representation does not depend on the
window it was computed in.
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, Optional, Sequence, Tuple

from endtangle.errors import HorizonTooSmall, InvalidParam, NotAnOrientation, WindowTooSmall
from endtangle.graphs import GraphFamily, Vertex, finite_components, truncate

logger = logging.getLogger(__name__)


class Side(str, Enum):
    A = "A"
    B = "B"
    SEPARATOR = "AB"

    @property
    def in_a(self) -> bool:
        return self is not Side.B

    @property
    def in_b(self) -> bool:
        return self is not Side.A


@dataclass(frozen=True)
class OrientedSeparation:
    """
    An oriented separation (A, B) of finite order.

    Equality compares separator, A-side components and end side only, which
    matches equality of the (infinite) side sets.
    """

    separator: FrozenSet[Vertex]
    a_side: FrozenSet[Vertex]
    end_side: Side
    window: int = field(compare=False)
    family: GraphFamily = field(compare=False, repr=False)
    components: Tuple[FrozenSet[Vertex], ...] = field(compare=False, repr=False)

    @cached_property
    def _component_of(self) -> Dict[Vertex, Vertex]:
        index = {}
        for comp in self.components:
            rep = min(comp, key=self.family.order_key)
            for v in comp:
                index[v] = rep
        return index

    @property
    def order(self) -> int:
        return len(self.separator)

    @property
    def in_tau(self) -> bool:
        """True iff the separation points towards the designated end."""
        return self.end_side is Side.B

    def side_of(self, v: Vertex) -> Side:
        if v in self.separator:
            return Side.SEPARATOR
        rep = self._component_of.get(v)
        if rep is None:
            return self.end_side
        return Side.A if rep in self.a_side else Side.B

    def contains_a(self, v: Vertex) -> bool:
        return self.side_of(v).in_a

    def contains_b(self, v: Vertex) -> bool:
        return self.side_of(v).in_b

    def flip(self) -> "OrientedSeparation":
        """(A, B) -> (B, A)."""
        reps = frozenset(self._component_of.values())
        end = Side.A if self.end_side is Side.B else Side.B
        return OrientedSeparation(self.separator, reps - self.a_side, end, self.window,
                                  self.family, self.components)

    def render(self) -> str:
        """Canonical text: sorted separator and sorted A-side representatives."""
        g = self.family
        sep = ",".join(g.label(v) for v in g.sort(self.separator))
        reps = ",".join(g.label(v) for v in g.sort(self.a_side))
        return f"sep=[{sep}] A=[{reps}] end={self.end_side.value}"

    def to_dict(self) -> dict:
        g = self.family
        return {
            "separator": [g.label(v) for v in g.sort(self.separator)],
            "a_components": [g.label(v) for v in g.sort(self.a_side)],
            "end_side": self.end_side.value,
            "window": self.window,
        }

    def sort_key(self) -> tuple:
        g = self.family
        return (self.order, [g.order_key(v) for v in g.sort(self.separator)],
                [g.order_key(v) for v in g.sort(self.a_side)], self.end_side.value)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class RestrictionOnZ:
    Z: FrozenSet[Vertex]
    a_part: FrozenSet[Vertex]
    b_part: FrozenSet[Vertex]


@dataclass(frozen=True)
class TripleWitness:
    """A ray edge lying in B \\ A of three separations at once."""

    edge: Tuple[Vertex, Vertex]
    index: int
    proof: Tuple[Tuple[Side, Side], ...]


# --- Shared enumeration helpers (also used by the finite oracle) ---

def separator_candidates(vertices: Sequence[Vertex], k: int) -> Iterator[Tuple[Vertex, ...]]:
    """All vertex subsets of size < k, smallest first."""
    for size in range(min(k, len(vertices) + 1)):
        yield from itertools.combinations(vertices, size)


def count_separator_candidates(n: int, k: int) -> int:
    from math import comb
    return sum(comb(n, size) for size in range(min(k, n + 1)))


def side_assignments(components: Sequence[FrozenSet]) -> Iterator[Tuple[FrozenSet, ...]]:
    """Every choice of the components placed on the A side, A-empty first."""
    for choice in itertools.product((False, True), repeat=len(components)):
        yield tuple(c for c, on_a in zip(components, choice) if on_a)


@dataclass(frozen=True)
class VoteCount:
    a_only: int
    separator: int
    b_only: int

    @property
    def a_total(self) -> int:
        return self.a_only + self.separator

    @property
    def b_total(self) -> int:
        return self.b_only + self.separator

    @property
    def b_majority(self) -> bool:
        return self.a_total < self.b_total


def majority_counts(side_of: Callable[[Vertex], Side], X: Iterable[Vertex]) -> VoteCount:
    """Split X into its A-only, separator and B-only parts."""
    a = s = b = 0
    for x in X:
        side = side_of(x)
        if side is Side.A:
            a += 1
        elif side is Side.B:
            b += 1
        else:
            s += 1
    return VoteCount(a, s, b)


# --- Operations ---

def _separation(g: GraphFamily, separator: FrozenSet[Vertex], comps, a_comps,
                end_side: Side, L: int) -> OrientedSeparation:
    a_reps = frozenset(min(c, key=g.order_key) for c in a_comps)
    return OrientedSeparation(separator, a_reps, end_side, L, g, tuple(comps))


def orient_toward_end(g: GraphFamily, separator: Iterable[Vertex], a_side: Iterable[Vertex] = (),
                      L: Optional[int] = None, margin: int = 0,
                      max_vertices: Optional[int] = None) -> OrientedSeparation:
    """
    Build the separation with `separator` whose end component lies in B \\ A.

    `a_side` names finite components to put on A, by any of their vertices;
    all other finite components go to B. The default window is
    max-level(separator) + margin + 1.

    Raises:
        HorizonTooSmall: If L <= max-level(separator) + margin.
    """
    sep = frozenset(separator)
    top = g.max_level(sep)
    if L is None:
        L = top + margin + 1
    if L <= top + margin:
        raise HorizonTooSmall(f"Window L={L} must exceed separator level {top} plus margin {margin}")

    comps = finite_components(truncate(g, L, max_vertices), sep)
    wanted = set(a_side)
    stray = wanted & sep
    if stray:
        raise InvalidParam(f"A-side vertices {sorted(stray)} lie in the separator")
    a_comps = [c for c in comps if wanted & c]
    placed = set().union(*a_comps) if a_comps else set()
    missing = wanted - placed
    if missing:
        raise InvalidParam(f"{sorted(missing)} are not in a finite component of G - separator")
    return _separation(g, sep, comps, a_comps, Side.B, L)


def restrict(s: OrientedSeparation, Z: Iterable[Vertex]) -> RestrictionOnZ:
    """
    The trace (A ∩ Z, B ∩ Z) of s on a finite vertex set Z.

    Raises:
        WindowTooSmall: If some z lies beyond the window s was built in.
    """
    Z = frozenset(Z)
    g = s.family
    for z in Z:
        if g.level(z) > s.window:
            raise WindowTooSmall(f"{g.label(z)} lies beyond window {s.window}")
    a_part = frozenset(z for z in Z if s.contains_a(z))
    b_part = frozenset(z for z in Z if s.contains_b(z))
    return RestrictionOnZ(Z, a_part, b_part)


def agree_on(s1: OrientedSeparation, s2: OrientedSeparation, Z: Iterable[Vertex]) -> bool:
    """True iff s2 lies in the basic open set O(restrict(s1, Z))."""
    Z = frozenset(Z)
    return restrict(s1, Z) == restrict(s2, Z)


def corner(s1: OrientedSeparation, s2: OrientedSeparation,
           max_vertices: Optional[int] = None) -> OrientedSeparation:
    """
    The corner separation (A ∪ C, B ∩ D) of s1 = (A, B) and s2 = (C, D).

    Its separator lies inside sep(s1) ∪ sep(s2); the finite components are
    recomputed for the new separator at the larger of the two windows.
    """
    g = s1.family
    L = max(s1.window, s2.window)
    candidates = s1.separator | s2.separator
    sep = frozenset(
        v for v in candidates
        if (s1.contains_a(v) or s2.contains_a(v)) and s1.contains_b(v) and s2.contains_b(v)
    )
    comps = finite_components(truncate(g, L, max_vertices), sep)
    a_comps = []
    for comp in comps:
        rep = min(comp, key=g.order_key)
        if s1.contains_a(rep) or s2.contains_a(rep):
            a_comps.append(comp)
    end = Side.A if Side.A in (s1.end_side, s2.end_side) else Side.B
    result = _separation(g, sep, comps, a_comps, end, L)
    logger.debug("corner of %s and %s is %s", s1, s2, result)
    return result


def tangle_triple_witness(g: GraphFamily, s1: OrientedSeparation, s2: OrientedSeparation,
                          s3: OrientedSeparation) -> TripleWitness:
    """
    Certify that the small sides of three end-oriented separations miss an edge.

    Returns the first canonical-ray edge deeper than all three separators;
    both endpoints lie in B \\ A of every separation.
    """
    seps = (s1, s2, s3)
    for s in seps:
        if not s.in_tau:
            raise NotAnOrientation(f"{s} does not point towards the end")
    top = max(g.max_level(s.separator) for s in seps)
    i = 0
    while g.level(g.canonical_ray(i)) <= top:
        i += 1
    u, w = g.canonical_ray(i), g.canonical_ray(i + 1)
    proof = tuple((s.side_of(u), s.side_of(w)) for s in seps)
    if any(side is not Side.B for pair in proof for side in pair):
        raise NotAnOrientation(f"ray edge {g.label(u)}{g.label(w)} is not on every B side")
    return TripleWitness((u, w), i, proof)
