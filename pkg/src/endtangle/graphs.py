"""
Lazily generated one-ended infinite graphs.

A GraphFamily exposes an infinite graph through oracles: the level of a
vertex, the vertices of one level, a neighbour stream, and a fixed witness ray
of the designated end. Truncation(L) is the finite subgraph of all vertices of
level <= L plus a virtual terminal standing for everything deeper.

Every family here satisfies the escape property: for finite X and a vertex u
deeper than every vertex of X, the component of u in G - X contains a tail of
the canonical ray. The finite-window algorithms in this package are exact only
because of it.
"""

import itertools
import logging
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from types import MappingProxyType
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Tuple

from endtangle.errors import HorizonTooSmall, InvalidParam, ResourceBudgetExceeded, UnknownFamily

logger = logging.getLogger(__name__)

Vertex = Tuple[Any, ...]

INFINITE = "infinite"


class GraphFamily(ABC):
    """
    A finitely described infinite graph with one designated end.

    Subclasses define the adjacency rule. Instances are immutable once built
    and safe to share between workers.
    """

    name: str = ""
    # Width certificate: upper bound on the number of disjoint rays of
    # G minus its dominating vertices, when the family has one.
    degree_bound: Optional[int] = None
    # True when the family offers an infinite stream of structurally
    # equivalent vertices (every vertex looks like every other).
    homogeneous: bool = False
    # Keys accepted by make_family, with their defaults (None = required).
    param_defaults: Dict[str, Optional[int]] = {}

    def __init__(self, params: Mapping[str, int]):
        self.params: Dict[str, int] = dict(params)
        # Test-only ground truth; algorithms never read this.
        self.annotations: Dict[str, Any] = {}

    @abstractmethod
    def level(self, v: Vertex) -> int:
        """Non-negative level of v."""

    @abstractmethod
    def level_vertices(self, level: int) -> List[Vertex]:
        """All vertices of one level (finitely many)."""

    @abstractmethod
    def neighbors(self, v: Vertex) -> Iterator[Vertex]:
        """Stream of neighbours; infinite for vertices of infinite degree."""

    @abstractmethod
    def neighbors_upto(self, v: Vertex, L: int) -> List[Vertex]:
        """Neighbours of v of level <= L."""

    @abstractmethod
    def has_neighbor_beyond(self, v: Vertex, L: int) -> bool:
        """True if v has a neighbour of level > L."""

    @abstractmethod
    def canonical_ray(self, i: int) -> Vertex:
        """The i-th vertex of the witness ray of the designated end."""

    @abstractmethod
    def tail(self, v: Vertex, L: int) -> Optional[Iterator[Vertex]]:
        """
        Explicit infinite continuation of a frontier vertex v of Truncation(L).

        Yields vertices of level > L only, the first one adjacent to v. Tails
        of distinct frontier vertices are pairwise disjoint. None when v has no
        continuation avoiding the other tails (apex vertices).
        """

    @abstractmethod
    def label(self, v: Vertex) -> str:
        """Human readable vertex name used in reports."""

    def locally_finite_beyond(self, level: int) -> bool:
        """True if every vertex of level > `level` has finite degree."""
        return True

    def vertices_upto(self, L: int) -> List[Vertex]:
        return [v for lvl in range(L + 1) for v in self.level_vertices(lvl)]

    def count_upto(self, L: int) -> int:
        return sum(len(self.level_vertices(lvl)) for lvl in range(L + 1))

    def order_key(self, v: Vertex) -> Tuple[int, Vertex]:
        return (self.level(v), v)

    def sort(self, vertices: Iterable[Vertex]) -> List[Vertex]:
        return sorted(vertices, key=self.order_key)

    def max_level(self, vertices: Iterable[Vertex]) -> int:
        """Deepest level in a vertex set, -1 for the empty set."""
        return max((self.level(v) for v in vertices), default=-1)

    def spec_text(self) -> str:
        lines = [f"family={self.name}"]
        lines += [f"param.{k}={v}" for k, v in sorted(self.params.items())]
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.name}({args})"


class RayFamily(GraphFamily):
    """A single ray v_0 v_1 v_2 ..."""

    name = "ray"
    degree_bound = 1

    def __init__(self, params):
        super().__init__(params)
        self.annotations = {"degree": 1, "domination": 0}

    def level(self, v):
        return v[1]

    def level_vertices(self, level):
        return [("v", level)]

    def neighbors(self, v):
        i = v[1]
        if i > 0:
            yield ("v", i - 1)
        yield ("v", i + 1)

    def neighbors_upto(self, v, L):
        return [u for u in self.neighbors(v) if u[1] <= L]

    def has_neighbor_beyond(self, v, L):
        return v[1] + 1 > L

    def canonical_ray(self, i):
        return ("v", i)

    def tail(self, v, L):
        return (("v", i) for i in itertools.count(v[1] + 1))

    def label(self, v):
        return f"v_{v[1]}"


class LadderFamily(GraphFamily):
    """m rows (r, 0) (r, 1) ... joined by rungs (r, c) - (r + 1, c)."""

    name = "ladder"
    param_defaults = {"m": None}

    def __init__(self, params):
        super().__init__(params)
        self.m = self.params["m"]
        self.degree_bound = self.m
        self.annotations = {"degree": self.m, "domination": 0}

    def level(self, v):
        return v[1]

    def level_vertices(self, level):
        return [(r, level) for r in range(self.m)]

    def neighbors(self, v):
        r, c = v
        if c > 0:
            yield (r, c - 1)
        if r > 0:
            yield (r - 1, c)
        if r + 1 < self.m:
            yield (r + 1, c)
        yield (r, c + 1)

    def neighbors_upto(self, v, L):
        return [u for u in self.neighbors(v) if u[1] <= L]

    def has_neighbor_beyond(self, v, L):
        return v[1] + 1 > L

    def canonical_ray(self, i):
        return (0, i)

    def tail(self, v, L):
        r = v[0]
        return ((r, c) for c in itertools.count(L + 1))

    def label(self, v):
        return f"({v[0]},{v[1]})"


class GridFamily(GraphFamily):
    """
    The quarter grid on N x N, levelled by max-coordinate shells.

    Shells are finite and the outside of every square is connected, so the
    escape property holds.
    """

    name = "grid"

    def __init__(self, params):
        super().__init__(params)
        self.annotations = {"degree": INFINITE, "domination": 0}

    def level(self, v):
        return max(v)

    def level_vertices(self, level):
        top = [(x, level) for x in range(level + 1)]
        side = [(level, y) for y in range(level)]
        return sorted(top + side)

    def neighbors(self, v):
        x, y = v
        if x > 0:
            yield (x - 1, y)
        if y > 0:
            yield (x, y - 1)
        yield (x, y + 1)
        yield (x + 1, y)

    def neighbors_upto(self, v, L):
        return [u for u in self.neighbors(v) if max(u) <= L]

    def has_neighbor_beyond(self, v, L):
        return max(v) + 1 > L

    def canonical_ray(self, i):
        return (i, 0)

    def tail(self, v, L):
        x, y = v
        if y == L:
            return ((x, t) for t in itertools.count(L + 1))
        if x == L:
            return ((t, y) for t in itertools.count(L + 1))
        raise InvalidParam(f"{v} is not on the frontier of level {L}")

    def label(self, v):
        return f"({v[0]},{v[1]})"


class CliqueRayFamily(GraphFamily):
    """
    A ray whose n-th vertex is blown up into K^n.

    Block n (level n - 1) holds (n, 0) ... (n, n - 1); every vertex of a block
    is adjacent to all vertices of the same and of the neighbouring blocks.
    """

    name = "clique_ray"

    def __init__(self, params):
        super().__init__(params)
        self.annotations = {"degree": INFINITE, "domination": 0}

    def level(self, v):
        return v[0] - 1

    def level_vertices(self, level):
        n = level + 1
        return [(n, p) for p in range(n)]

    def _blocks(self, n: int) -> List[int]:
        return [b for b in (n - 1, n, n + 1) if b >= 1]

    def neighbors(self, v):
        for b in self._blocks(v[0]):
            for p in range(b):
                if (b, p) != v:
                    yield (b, p)

    def neighbors_upto(self, v, L):
        return [u for u in self.neighbors(v) if u[0] - 1 <= L]

    def has_neighbor_beyond(self, v, L):
        return v[0] > L

    def canonical_ray(self, i):
        return (i + 1, 0)

    def tail(self, v, L):
        p = v[1]
        return ((n, p) for n in itertools.count(L + 2))

    def label(self, v):
        return f"({v[0]},{v[1]})"


class DominatedRayFamily(GraphFamily):
    """A ray r_0 r_1 ... plus m apexes a_j, each adjacent to every r_i."""

    name = "dominated_ray"
    degree_bound = 1
    param_defaults = {"m": None}

    def __init__(self, params):
        super().__init__(params)
        self.m = self.params["m"]
        self.annotations = {"degree": 1, "domination": self.m}

    def level(self, v):
        return 0 if v[0] == "a" else v[1]

    def level_vertices(self, level):
        apexes = [("a", j) for j in range(self.m)] if level == 0 else []
        return apexes + [("r", level)]

    def neighbors(self, v):
        if v[0] == "a":
            return (("r", i) for i in itertools.count())
        return iter(self._ray_neighbors(v[1]))

    def _ray_neighbors(self, i: int) -> List[Vertex]:
        found = [("a", j) for j in range(self.m)]
        if i > 0:
            found.append(("r", i - 1))
        found.append(("r", i + 1))
        return found

    def neighbors_upto(self, v, L):
        if v[0] == "a":
            return [("r", i) for i in range(L + 1)]
        return [u for u in self._ray_neighbors(v[1]) if self.level(u) <= L]

    def has_neighbor_beyond(self, v, L):
        return v[0] == "a" or v[1] + 1 > L

    def canonical_ray(self, i):
        return ("r", i)

    def tail(self, v, L):
        if v[0] == "a":
            return None
        return (("r", i) for i in itertools.count(L + 1))

    def label(self, v):
        return f"{v[0]}_{v[1]}"


class CompleteFamily(GraphFamily):
    """K_aleph0 on k_0 k_1 ..., with w vertices per level."""

    name = "complete"
    homogeneous = True
    param_defaults = {"w": 2}

    def __init__(self, params):
        super().__init__(params)
        self.w = self.params["w"]
        self.annotations = {"degree": INFINITE, "domination": INFINITE}

    def level(self, v):
        return v[1] // self.w

    def level_vertices(self, level):
        return [("k", i) for i in range(level * self.w, (level + 1) * self.w)]

    def neighbors(self, v):
        return (("k", i) for i in itertools.count() if i != v[1])

    def neighbors_upto(self, v, L):
        return [("k", i) for i in range((L + 1) * self.w) if i != v[1]]

    def has_neighbor_beyond(self, v, L):
        return True

    def canonical_ray(self, i):
        return ("k", i)

    def tail(self, v, L):
        # Residue classes modulo the truncation size keep tails disjoint.
        size = (L + 1) * self.w
        return (("k", size + v[1] + t * size) for t in itertools.count())

    def locally_finite_beyond(self, level):
        return False

    def label(self, v):
        return f"k_{v[1]}"


FAMILIES = {
    cls.name: cls
    for cls in (RayFamily, LadderFamily, GridFamily, CliqueRayFamily, DominatedRayFamily, CompleteFamily)
}


def make_family(name: str, params: Optional[Mapping[str, int]] = None) -> GraphFamily:
    """
    Build a family from the catalogue.

    Raises:
        UnknownFamily: If the name is not in the catalogue.
        InvalidParam: If a parameter is unknown, missing or below 1.
    """
    cls = FAMILIES.get(name)
    if cls is None:
        raise UnknownFamily(f"Unknown family '{name}'. Known: {', '.join(sorted(FAMILIES))}")

    given = dict(params or {})
    unknown = set(given) - set(cls.param_defaults)
    if unknown:
        raise InvalidParam(f"Family '{name}' takes no parameter(s) {', '.join(sorted(unknown))}")

    resolved = {}
    for key, default in cls.param_defaults.items():
        value = given.get(key, default)
        if value is None:
            raise InvalidParam(f"Family '{name}' requires param.{key}")
        if not isinstance(value, int) or isinstance(value, bool):
            raise InvalidParam(f"param.{key} must be an integer, got {value!r}")
        if value < 1:
            raise InvalidParam(f"param.{key} must be >= 1, got {value}")
        resolved[key] = value
    return cls(resolved)


def parse_family_spec(text: str) -> GraphFamily:
    """
    Parse the family spec text format:

        family=<name>
        param.<key>=<int>

    Blank lines and lines starting with '#' are ignored.
    """
    name = None
    params: Dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InvalidParam(f"line {lineno}: expected key=value, got {line!r}")
        key, value = key.strip(), value.strip()
        if key == "family":
            name = value
        elif key.startswith("param."):
            try:
                params[key[len("param."):]] = int(value)
            except ValueError:
                raise InvalidParam(f"line {lineno}: {key} must be an integer, got {value!r}")
        else:
            raise InvalidParam(f"line {lineno}: unknown key {key!r}")
    if name is None:
        raise InvalidParam("family spec has no 'family=' line")
    return make_family(name, params)


# --- Truncations ---

@dataclass(frozen=True)
class Truncation:
    """All vertices of level <= L, their induced edges, and the frontier."""

    family: GraphFamily
    L: int
    vertices: Tuple[Vertex, ...]
    adjacency: Mapping[Vertex, Tuple[Vertex, ...]] = field(repr=False)
    frontier: FrozenSet[Vertex]
    removed: FrozenSet[Vertex] = frozenset()

    @property
    def edges(self) -> List[Tuple[Vertex, Vertex]]:
        key = self.family.order_key
        return [(u, v) for u in self.vertices for v in self.adjacency[u] if key(u) < key(v)]

    def __contains__(self, v) -> bool:
        return v in self.adjacency

    def __len__(self) -> int:
        return len(self.vertices)


@lru_cache(maxsize=256)
def _build_truncation(g: GraphFamily, L: int, removed: FrozenSet[Vertex]) -> Truncation:
    vertices = tuple(v for v in g.vertices_upto(L) if v not in removed)
    adjacency = {
        v: tuple(u for u in g.sort(g.neighbors_upto(v, L)) if u not in removed)
        for v in vertices
    }
    frontier = frozenset(v for v in vertices if g.has_neighbor_beyond(v, L))
    logger.debug("truncated %r at L=%d: %d vertices, %d on the frontier", g, L, len(vertices), len(frontier))
    return Truncation(g, L, vertices, MappingProxyType(adjacency), frontier, removed)


def truncate(g: GraphFamily, L: int, max_vertices: Optional[int] = None,
             removed: Iterable[Vertex] = ()) -> Truncation:
    """
    Build Truncation(L) of g, optionally of g minus the vertices in `removed`.

    Raises:
        ResourceBudgetExceeded: If more than max_vertices vertices would be expanded.
    """
    if L < 0:
        raise HorizonTooSmall(f"Truncation level must be >= 0, got {L}")
    if max_vertices is not None:
        count = g.count_upto(L)
        if count > max_vertices:
            raise ResourceBudgetExceeded(
                f"Truncation of {g!r} at L={L} has {count} vertices, budget is {max_vertices}"
            )
    return _build_truncation(g, L, frozenset(removed))


def ball(g: GraphFamily, d: int, removed: Iterable[Vertex] = ()) -> List[Vertex]:
    """Vertices of level <= d, minus `removed`."""
    skip = set(removed)
    return [v for v in g.vertices_upto(d) if v not in skip]


class ComponentLabel(str, Enum):
    CONTAINS_END = "contains-end"
    FINITE = "finite"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class Component:
    rep: Vertex
    vertices: FrozenSet[Vertex]
    label: ComponentLabel


def _end_part(t: Truncation, blocked: FrozenSet[Vertex]) -> set:
    """Vertices reachable from the terminal in t - blocked."""
    seen = {v for v in t.frontier if v not in blocked}
    queue = deque(v for v in t.vertices if v in seen)
    while queue:
        u = queue.popleft()
        for w in t.adjacency[u]:
            if w not in seen and w not in blocked:
                seen.add(w)
                queue.append(w)
    return seen


def finite_components(t: Truncation, X: Iterable[Vertex]) -> Tuple[FrozenSet[Vertex], ...]:
    """
    The components of t - X that avoid the terminal, ordered by first vertex.

    These are exactly the finite components of G - X whenever
    t.L > max-level(X). Any object with `vertices`, `adjacency` and `frontier`
    works here; a finite graph is passed with an empty frontier.
    """
    blocked = frozenset(X)
    seen = _end_part(t, blocked)
    found = []
    for v in t.vertices:
        if v in seen or v in blocked:
            continue
        comp = {v}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for w in t.adjacency[u]:
                if w not in comp and w not in blocked:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        found.append(frozenset(comp))
    return tuple(found)


def components_without(g: GraphFamily, X: Iterable[Vertex], L: int,
                       truncation: Optional[Truncation] = None) -> List[Component]:
    """
    Partition Truncation(L) - X into labelled components.

    The virtual terminal joins every frontier-touching component into the one
    component containing the end. A component that never reaches the terminal
    is a finite component of G - X.

    Raises:
        HorizonTooSmall: If L <= max-level(X).
    """
    blocked = frozenset(X)
    top = g.max_level(blocked)
    if L <= top:
        raise HorizonTooSmall(f"Window L={L} must exceed the separator level {top}")
    t = truncation if truncation is not None else truncate(g, L)

    end_part = _end_part(t, blocked)
    result = []
    if end_part:
        deep = any(g.level(v) > top for v in end_part)
        label = ComponentLabel.CONTAINS_END if deep else ComponentLabel.UNDETERMINED
        result.append(Component(g.sort(end_part)[0], frozenset(end_part), label))
    for comp in finite_components(t, blocked):
        result.append(Component(g.sort(comp)[0], comp, ComponentLabel.FINITE))
    return result


def reaches_frontier(t: Truncation, X: Iterable[Vertex], u: Vertex) -> bool:
    """True if u's component in t - X touches the frontier (escape sampling)."""
    blocked = frozenset(X)
    if u in blocked:
        return False
    return u in _end_part(t, blocked)
