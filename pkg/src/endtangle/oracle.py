"""
Brute-force laboratory on small finite graphs.

The oracle runs the same enumeration, component and vote code as the
infinite-graph analyses, instantiated on a finite graph with an empty
frontier, and compares it against exhaustive searches.
"""

import itertools
import logging
import random
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from endtangle.errors import CapExceeded, InvalidParam, InvariantViolation, NotAnOrientation
from endtangle.flow import CutResult, vertex_cut
from endtangle.graphs import finite_components
from endtangle.separations import (
    Side,
    VoteCount,
    majority_counts,
    separator_candidates,
    side_assignments,
)

logger = logging.getLogger(__name__)

SEPARATION_CAP = 10
CUT_CAP = 14


class FiniteGraph:
    """A simple undirected graph on vertices 0 .. n-1."""

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]] = ()):
        if n < 0:
            raise InvalidParam(f"vertex count must be >= 0, got {n}")
        self.n = n
        adj: Dict[int, set] = {v: set() for v in range(n)}
        for u, w in edges:
            if u == w:
                raise InvalidParam(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= w < n):
                raise InvalidParam(f"edge ({u}, {w}) leaves the vertex range 0..{n - 1}")
            adj[u].add(w)
            adj[w].add(u)
        self.adjacency: Dict[int, Tuple[int, ...]] = {v: tuple(sorted(ws)) for v, ws in adj.items()}
        self.vertices: Tuple[int, ...] = tuple(range(n))
        self.frontier: FrozenSet[int] = frozenset()

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "FiniteGraph":
        mapping = {v: i for i, v in enumerate(sorted(graph.nodes))}
        return cls(len(mapping), [(mapping[u], mapping[w]) for u, w in graph.edges if u != w])

    @classmethod
    def random(cls, n: int, p: float, seed: int) -> "FiniteGraph":
        return cls.from_networkx(nx.gnp_random_graph(n, p, seed=seed))

    @property
    def edges(self) -> List[Tuple[int, int]]:
        return [(u, w) for u in self.vertices for w in self.adjacency[u] if u < w]

    def __repr__(self) -> str:
        return f"FiniteGraph(n={self.n}, m={len(self.edges)})"


@dataclass(frozen=True)
class FiniteSeparation:
    a: FrozenSet[int]
    b: FrozenSet[int]

    @property
    def separator(self) -> FrozenSet[int]:
        return self.a & self.b

    @property
    def order(self) -> int:
        return len(self.separator)

    def side_of(self, v: int) -> Side:
        if v in self.a and v in self.b:
            return Side.SEPARATOR
        return Side.A if v in self.a else Side.B

    def flip(self) -> "FiniteSeparation":
        return FiniteSeparation(self.b, self.a)

    def __repr__(self) -> str:
        return f"({sorted(self.a)}, {sorted(self.b)})"


def _separator_separations(g: FiniteGraph, k: int) -> List[FiniteSeparation]:
    found = []
    everything = frozenset(g.vertices)
    for sep in separator_candidates(g.vertices, k):
        sep = frozenset(sep)
        comps = finite_components(g, sep)
        for a_comps in side_assignments(comps):
            a = sep.union(*a_comps)
            b = everything - (a - sep)
            found.append(FiniteSeparation(a, b))
    return found


def direct_separations(g: FiniteGraph, k: int) -> List[FiniteSeparation]:
    """Every (A, B) by trying all 3^n placements of the vertices."""
    found = []
    for placement in itertools.product((Side.A, Side.SEPARATOR, Side.B), repeat=g.n):
        a = frozenset(v for v, s in zip(g.vertices, placement) if s is not Side.B)
        b = frozenset(v for v, s in zip(g.vertices, placement) if s is not Side.A)
        if len(a & b) >= k:
            continue
        if any(placement[u] is Side.A and placement[w] is Side.B or
               placement[u] is Side.B and placement[w] is Side.A for u, w in g.edges):
            continue
        found.append(FiniteSeparation(a, b))
    return found


def all_separations(g: FiniteGraph, k: int, cap: int = SEPARATION_CAP,
                    cross_check: bool = True) -> List[FiniteSeparation]:
    """
    All oriented separations of order < k, from separator subsets and side
    assignments of the components.

    Raises:
        CapExceeded: If g has more than `cap` vertices.
        InvariantViolation: If the cross-check against direct enumeration fails.
    """
    if g.n > cap:
        raise CapExceeded(f"all_separations is capped at {cap} vertices, got {g.n}")
    found = _separator_separations(g, k)
    if cross_check:
        direct = direct_separations(g, k)
        if sorted(map(repr, found)) != sorted(map(repr, direct)):
            raise InvariantViolation(f"separator enumeration disagrees with direct enumeration on {g!r}")
    return found


@dataclass(frozen=True)
class BruteCut:
    value: Union[int, float]
    cut_vertices: FrozenSet[int]


def _connected(g: FiniteGraph, X: Iterable[int], t: int, removed: FrozenSet[int]) -> bool:
    start = [x for x in X if x not in removed]
    if t in removed:
        return False
    seen = set(start)
    stack = list(start)
    while stack:
        u = stack.pop()
        if u == t:
            return True
        for w in g.adjacency[u]:
            if w not in seen and w not in removed:
                seen.add(w)
                stack.append(w)
    return False


def brute_min_vertex_cut(g: FiniteGraph, X: Iterable[int], t: int, forbidden: Iterable[int] = (),
                         cap: int = CUT_CAP) -> BruteCut:
    """
    Smallest vertex set avoiding `forbidden` whose removal disconnects X from t.

    Raises:
        CapExceeded: If g has more than `cap` vertices.
    """
    if g.n > cap:
        raise CapExceeded(f"brute_min_vertex_cut is capped at {cap} vertices, got {g.n}")
    X = frozenset(X)
    forbidden = frozenset(forbidden)
    candidates = [v for v in g.vertices if v not in forbidden]
    for size in range(len(candidates) + 1):
        for cut in itertools.combinations(candidates, size):
            if not _connected(g, X, t, frozenset(cut)):
                return BruteCut(size, frozenset(cut))
    return BruteCut(float("inf"), frozenset())


def flow_min_vertex_cut(g: FiniteGraph, X: Iterable[int], t: int, forbidden: Iterable[int] = ()) -> CutResult:
    """The flow engine's answer to the brute_min_vertex_cut question."""
    return vertex_cut(g.adjacency, sorted(set(X)), [t], uncuttable=forbidden, order=g.vertices)


@dataclass(frozen=True)
class AxiomCheck:
    ok: bool
    violating_triple: Optional[Tuple[FiniteSeparation, FiniteSeparation, FiniteSeparation]] = None


def _covers(g: FiniteGraph, triple: Sequence[FiniteSeparation]) -> bool:
    if frozenset().union(*(s.a for s in triple)) != frozenset(g.vertices):
        return False
    return all(any(u in s.a and w in s.a for s in triple) for u, w in g.edges)


def check_tangle_axioms(g: FiniteGraph, orientation: Iterable[FiniteSeparation],
                        k: Optional[int] = None) -> AxiomCheck:
    """
    Look for three small sides (with repetition) whose induced subgraphs
    cover every vertex and every edge of g.

    The orientation must pick exactly one side of every separation of order
    < k; k defaults to one more than the largest order chosen.

    Raises:
        NotAnOrientation: If some separation appears in both orientations or in neither.
    """
    chosen = sorted(set(orientation), key=repr)
    members = set(chosen)
    for s in chosen:
        if s.a != s.b and s.flip() in members:
            raise NotAnOrientation(f"{s} and its inverse are both oriented")
    if k is None:
        k = max((s.order for s in chosen), default=0) + 1
    for s in all_separations(g, k):
        if s not in members and s.flip() not in members:
            raise NotAnOrientation(f"{s} is not oriented")
    for triple in itertools.combinations_with_replacement(chosen, 3):
        if _covers(g, triple):
            return AxiomCheck(False, triple)
    return AxiomCheck(True)


def vote_counts(s: FiniteSeparation, X: Iterable[int]) -> VoteCount:
    """Majority counts through the shared vote code."""
    return majority_counts(s.side_of, X)


@dataclass(frozen=True)
class SelftestSummary:
    seed: int
    graphs: int
    flow_agree: int
    flow_disagree: int
    enumeration_agree: int
    enumeration_disagree: int
    votes_agree: int
    votes_disagree: int
    triangle_count: int

    @property
    def ok(self) -> bool:
        return not (self.flow_disagree or self.enumeration_disagree or self.votes_disagree) \
            and self.triangle_count == 8


def selftest(seed: int = 0, n_graphs: int = 200, n_max: int = SEPARATION_CAP, k_max: int = 4,
             p: float = 0.35) -> SelftestSummary:
    """Compare flow against brute force and separator enumeration against direct enumeration."""
    rng = random.Random(seed)
    flow_ok = flow_bad = enum_ok = enum_bad = vote_ok = vote_bad = 0
    for i in range(n_graphs):
        n = rng.randint(2, n_max)
        g = FiniteGraph.random(n, p, seed=rng.randrange(2**31))
        X = rng.sample(range(n), rng.randint(1, max(1, n // 3)))
        t = rng.choice([v for v in range(n) if v not in X] or [X[0]])
        forbidden = set(X) | {t} if rng.random() < 0.5 else {t}

        brute = brute_min_vertex_cut(g, X, t, forbidden)
        flow = flow_min_vertex_cut(g, X, t, forbidden)
        if brute.value == flow.value:
            flow_ok += 1
        else:
            flow_bad += 1
            logger.warning("graph %d: flow %s, brute force %s", i, flow.value, brute.value)

        k = rng.randint(1, k_max)
        seps = _separator_separations(g, k)
        if sorted(map(repr, seps)) == sorted(map(repr, direct_separations(g, k))):
            enum_ok += 1
        else:
            enum_bad += 1
            logger.warning("graph %d: separator enumeration differs at k=%d", i, k)

        for s in seps:
            votes = vote_counts(s, X)
            expected = VoteCount(len(set(X) & (s.a - s.b)), len(set(X) & s.separator), len(set(X) & (s.b - s.a)))
            if votes == expected:
                vote_ok += 1
            else:
                vote_bad += 1

    triangle = FiniteGraph(3, [(0, 1), (1, 2), (0, 2)])
    summary = SelftestSummary(seed, n_graphs, flow_ok, flow_bad, enum_ok, enum_bad, vote_ok, vote_bad,
                              len(all_separations(triangle, 2)))
    logger.info("oracle self-test: %d graphs, ok=%s", n_graphs, summary.ok)
    return summary
