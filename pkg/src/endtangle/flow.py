"""
Unit-capacity vertex cuts and the separator scans built on them.

Vertex capacities are modelled by node splitting: every vertex v becomes
(v, IN) -> (v, OUT) with capacity 1, or with no capacity (infinite) when v may
not be cut. Max-flow is networkx's Edmonds-Karp; the cut read back from the
residual network is the one closest to the sources.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from endtangle.errors import (
    CountTooLarge,
    DominatedEnd,
    EmptySource,
    HorizonTooSmall,
    InvalidParam,
    InvariantViolation,
)
from endtangle.graphs import GraphFamily, Truncation, Vertex, truncate

logger = logging.getLogger(__name__)

IN, OUT = 0, 1
SOURCE = "source"
SINK = "sink"

Path = Tuple[Vertex, ...]


@dataclass(frozen=True)
class CutResult:
    """A minimum vertex cut with the matching disjoint path system."""

    value: Union[int, float]
    cut_vertices: FrozenSet[Hashable]
    path_system: Tuple[Path, ...]

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.value)


UNBOUNDED = CutResult(math.inf, frozenset(), ())


def _uncuttable_path(adjacency, sources, sinks, uncuttable) -> bool:
    """True if some source reaches some sink through uncuttable vertices only."""
    start = [s for s in sources if s in uncuttable]
    seen = set(start)
    queue = deque(start)
    while queue:
        u = queue.popleft()
        if u in sinks:
            return True
        for w in adjacency[u]:
            if w in uncuttable and w not in seen:
                seen.add(w)
                queue.append(w)
    return False


def _decompose(flow: Dict, value: int) -> List[Path]:
    """Split an integral flow into source-sink paths of original vertices."""
    paths = []
    for _ in range(value):
        node, walk = SOURCE, [SOURCE]
        while node != SINK:
            nxt = next(w for w, f in flow[node].items() if f > 0)
            flow[node][nxt] -= 1
            if nxt in walk:
                # Drop the circulation we just walked around.
                walk = walk[:walk.index(nxt)]
            walk.append(nxt)
            node = nxt
        vertices = []
        for n in walk[1:-1]:
            if not vertices or vertices[-1] != n[0]:
                vertices.append(n[0])
        paths.append(tuple(vertices))
    return paths


def vertex_cut(adjacency: Mapping[Hashable, Iterable[Hashable]], sources: Iterable[Hashable],
               sinks: Iterable[Hashable], uncuttable: Iterable[Hashable] = (),
               order: Optional[Sequence[Hashable]] = None) -> CutResult:
    """
    Minimum set of cuttable vertices meeting every source-sink path.

    Every vertex of `adjacency` has capacity 1 unless listed in `uncuttable`.
    Returns the UNBOUNDED sentinel when a source reaches a sink through
    uncuttable vertices only. `order` fixes the insertion order of the
    network, and with it the augmenting paths Edmonds-Karp picks.
    """
    sources = [s for s in dict.fromkeys(sources)]
    sinks = frozenset(sinks)
    blocked = frozenset(uncuttable)
    if not sources or not sinks:
        return CutResult(0, frozenset(), ())
    if _uncuttable_path(adjacency, sources, sinks, blocked):
        logger.debug("unbounded cut: a source reaches a sink through uncuttable vertices")
        return UNBOUNDED

    nodes = list(order) if order is not None else list(adjacency)
    net = nx.DiGraph()
    for v in nodes:
        if v in blocked:
            net.add_edge((v, IN), (v, OUT))
        else:
            net.add_edge((v, IN), (v, OUT), capacity=1)
    for u in nodes:
        for w in adjacency[u]:
            net.add_edge((u, OUT), (w, IN))
    for s in sources:
        net.add_edge(SOURCE, (s, IN))
    for t in nodes:
        if t in sinks:
            net.add_edge((t, OUT), SINK)

    residual = edmonds_karp(net, SOURCE, SINK)
    value = int(residual.graph["flow_value"])

    reachable = {SOURCE}
    queue = deque([SOURCE])
    while queue:
        u = queue.popleft()
        for w, attr in residual[u].items():
            if w not in reachable and attr["flow"] < attr["capacity"]:
                reachable.add(w)
                queue.append(w)
    cut = frozenset(v for v in nodes if (v, IN) in reachable and (v, OUT) not in reachable)

    flow = {u: {w: attr["flow"] for w, attr in residual[u].items() if attr["flow"] > 0 and net.has_edge(u, w)}
            for u in residual}
    paths = _decompose(flow, value)

    if not (len(paths) == value == len(cut)):
        raise InvariantViolation(f"flow {value} with {len(paths)} paths but a cut of {len(cut)}")
    return CutResult(value, cut, tuple(paths))


def min_cut_to_terminal(t: Truncation, X: Iterable[Vertex], forbidden_sources: Iterable[Vertex] = (),
                        uncuttable: Iterable[Vertex] = ()) -> CutResult:
    """
    Maximum number of disjoint X -> terminal paths in a truncation, with a dual cut.

    Sources are cuttable unless listed in `forbidden_sources`; `uncuttable`
    protects further vertices.

    Raises:
        EmptySource: If X is empty.
    """
    X = [x for x in dict.fromkeys(X)]
    if not X:
        raise EmptySource("min_cut_to_terminal needs at least one source vertex")
    outside = [x for x in X if x not in t]
    if outside:
        raise InvalidParam(f"{len(outside)} source vertices are not in the truncation at L={t.L}")
    blocked = frozenset(forbidden_sources) | frozenset(uncuttable)
    return vertex_cut(t.adjacency, t.family.sort(X), t.frontier, blocked, order=t.vertices)


@dataclass(frozen=True)
class SeparatorScan:
    """Result of scanning c_L = min cut of X at growing windows L."""

    value: Union[int, float]
    separator: FrozenSet[Vertex]
    stabilized: bool
    certified: bool
    window: int
    series: Tuple[Union[int, float], ...]
    path_system: Tuple[Path, ...] = field(default=(), repr=False)


def _is_stable(series: Sequence, patience: int) -> bool:
    return len(series) >= patience and len(set(series[-patience:])) == 1


def min_end_separator(g: GraphFamily, X: Iterable[Vertex], L_max: int, patience: int,
                      forbid_sources: bool = False, removed: Iterable[Vertex] = (),
                      margin: int = 2, max_vertices: Optional[int] = None) -> SeparatorScan:
    """
    Smallest vertex set separating X from the end, by growing truncations.

    c_L is non-increasing in L and every cut found is a genuine X-end
    separator. The scan stops once the value held for `patience` windows and
    the last cut lies below L - margin.

    Raises:
        HorizonTooSmall: If L_max <= max-level(X) + patience.
        InvariantViolation: If c_L ever increases.
    """
    X = frozenset(X)
    removed = frozenset(removed)
    if not X:
        raise EmptySource("min_end_separator needs at least one source vertex")
    top = g.max_level(X)
    if L_max <= top + patience:
        raise HorizonTooSmall(f"L_max={L_max} must exceed max-level(X)={top} plus patience {patience}")

    series: List[Union[int, float]] = []
    result = None
    certified = False
    L = top
    for L in range(top + 1, L_max + 1):
        t = truncate(g, L, max_vertices, removed)
        result = min_cut_to_terminal(t, X, forbidden_sources=X if forbid_sources else ())
        if series and result.value > series[-1]:
            raise InvariantViolation(f"c_L rose from {series[-1]} to {result.value} at L={L}")
        series.append(result.value)
        certified = not result.unbounded and g.max_level(result.cut_vertices) < L - margin
        logger.debug("c_%d = %s (certified=%s)", L, result.value, certified)
        if certified and _is_stable(series, patience):
            break

    return SeparatorScan(
        value=result.value,
        separator=result.cut_vertices,
        stabilized=_is_stable(series, patience),
        certified=certified,
        window=L,
        series=tuple(series),
        path_system=result.path_system,
    )


@dataclass(frozen=True)
class SeparatorSequence:
    """Pairwise consecutive-disjoint separators T_0, T_1, ... of X from the end."""

    sets: Tuple[FrozenSet[Vertex], ...]
    levels: Tuple[int, ...]
    # links[n] are |T_{n+1}| paths from T_n to T_{n+1}, disjoint outside T_n.
    links: Tuple[Tuple[Path, ...], ...]

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(s) for s in self.sets)


def separator_sequence(g: GraphFamily, X: Iterable[Vertex], steps: int, L: int,
                       patience: int = 3, removed: Iterable[Vertex] = (),
                       max_vertices: Optional[int] = None) -> SeparatorSequence:
    """
    T_0 is a minimum X-end separator; T_n is a minimum separator of T_{n-1}
    from the end that avoids T_{n-1}.

    Raises:
        DominatedEnd: If some T_{n-1} vertex below L cannot be cut off.
        HorizonTooSmall: If the layers run into the window edge.
    """
    removed = frozenset(removed)
    first = min_end_separator(g, X, L, patience, removed=removed, margin=0, max_vertices=max_vertices)
    if math.isinf(first.value):
        raise DominatedEnd("X cannot be separated from the end")
    sets = [first.separator]
    links = []
    t = truncate(g, L, max_vertices, removed)
    for n in range(1, steps + 1):
        prev = sets[-1]
        if not prev:
            raise InvalidParam("X is already cut off from the end by the empty set")
        result = min_cut_to_terminal(t, prev, forbidden_sources=prev)
        if result.unbounded:
            deep = [v for v in prev if v in t.frontier and g.level(v) >= L]
            if deep:
                raise HorizonTooSmall(f"T_{n - 1} reaches the window edge L={L}; raise the window")
            raise DominatedEnd(f"T_{n - 1} contains a vertex that cannot be separated from the end")
        if len(result.cut_vertices) < len(prev):
            raise InvariantViolation(f"|T_{n}| = {len(result.cut_vertices)} < |T_{n - 1}| = {len(prev)}")
        step_links = []
        for path in result.path_system:
            stop = next(i for i, v in enumerate(path) if v in result.cut_vertices)
            step_links.append(path[:stop + 1])
        sets.append(result.cut_vertices)
        links.append(tuple(step_links))
        logger.debug("T_%d has %d vertices up to level %d", n, len(result.cut_vertices),
                     g.max_level(result.cut_vertices))
    levels = tuple(g.max_level(s) for s in sets)
    return SeparatorSequence(tuple(sets), levels, tuple(links))


class Ray:
    """A finite prefix plus the family's infinite continuation beyond level L."""

    def __init__(self, family: GraphFamily, prefix: Sequence[Vertex], L: int):
        self.family = family
        self.prefix = tuple(prefix)
        self.L = L

    @property
    def start(self) -> Vertex:
        return self.prefix[0]

    def __iter__(self) -> Iterator[Vertex]:
        yield from self.prefix
        tail = self.family.tail(self.prefix[-1], self.L)
        if tail is not None:
            yield from tail

    def upto(self, level: int) -> Tuple[Vertex, ...]:
        """Vertices of the ray in order, until the first one deeper than `level`."""
        found = []
        for v in self:
            if self.family.level(v) > level and len(found) >= len(self.prefix):
                break
            found.append(v)
        return tuple(found)

    def __repr__(self) -> str:
        return f"Ray({self.family.label(self.start)} ... {self.family.label(self.prefix[-1])} ->)"


def disjoint_rays(g: GraphFamily, X: Iterable[Vertex], count: int, L: int,
                  removed: Iterable[Vertex] = (), max_vertices: Optional[int] = None) -> List[Ray]:
    """
    `count` disjoint rays starting at distinct vertices of X.

    Prefixes come from a flow to the frontier of Truncation(L); each is
    continued by the family's tail rule from its frontier vertex.

    Raises:
        CountTooLarge: If fewer than `count` disjoint paths exist.
    """
    X = frozenset(X)
    t = truncate(g, L, max_vertices, removed)
    ends = [v for v in t.vertices if v in t.frontier and g.tail(v, L) is not None]
    result = vertex_cut(t.adjacency, g.sort(X), ends, order=t.vertices)
    if result.value < count:
        raise CountTooLarge(f"asked for {count} disjoint rays from X, only {result.value} exist at L={L}")

    rays = []
    for path in result.path_system:
        last_start = max(i for i, v in enumerate(path) if v in X)
        rays.append(Ray(g, path[last_start:], L))
    rays.sort(key=lambda r: g.order_key(r.start))
    return rays[:count]
