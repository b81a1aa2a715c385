"""
Relative and absolute deciders for the end tangle restricted to order < k.

A relative decider is a finite vertex set X such that every separation (A, B)
of order < k pointing to the end has |A ∩ X| < |B ∩ X|. find_relative_decider
builds one of size exactly k from dominating vertices, disjoint rays and
linking paths between them; verify_decider checks the majority property over
every end separation with a separator inside a window.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from endtangle.config import Budgets
from endtangle.errors import (
    BudgetExceeded,
    Inconclusive,
    InsufficientCohesion,
    InvalidParam,
    InvariantViolation,
    HorizonTooSmall,
)
from endtangle.flow import Path, Ray, disjoint_rays, vertex_cut
from endtangle.graphs import GraphFamily, Vertex, ball, finite_components, truncate
from endtangle.invariants import CohesionReport, Kind, Verdict, cohesion, dominates
from endtangle.separations import (
    OrientedSeparation,
    Side,
    VoteCount,
    count_separator_candidates,
    majority_counts,
    separator_candidates,
    side_assignments,
    _separation,
)

logger = logging.getLogger(__name__)

# Extra levels tried when linking paths do not fit the first window.
LINK_RETRIES = 3
LINK_STEP = 4


@dataclass(frozen=True)
class LinkingPath:
    ends: Tuple[int, int]
    vertices: Path


@dataclass(frozen=True)
class DeciderCertificate:
    k: int
    X: Tuple[Vertex, ...]
    D: Tuple[Vertex, ...]
    rays: Tuple[Ray, ...] = field(repr=False)
    # Ray prefixes starting at their X vertex, up to the window.
    tails: Tuple[Path, ...]
    linking_paths: Tuple[LinkingPath, ...]
    window: int

    def to_dict(self, g: GraphFamily) -> dict:
        lab = g.label
        return {
            "k": self.k,
            "X": [lab(v) for v in self.X],
            "D": [lab(v) for v in self.D],
            "rays": [[lab(v) for v in r.upto(self.window)] for r in self.rays],
            "tails": [[lab(v) for v in t] for t in self.tails],
            "linking_paths": [[lab(v) for v in p.vertices] for p in self.linking_paths],
            "window": self.window,
        }


def _gather_dominating(g: GraphFamily, report: CohesionReport, want: int, budgets: Budgets) -> List[Vertex]:
    """Dominating witnesses, extended level by level for infinitely dominated ends."""
    found = list(report.domination.witnesses)
    level = budgets.search_level
    while len(found) < want and report.domination.kind is Kind.INFINITE:
        level += 1
        for v in g.level_vertices(level):
            if dominates(g, v, budgets.window + level, budgets.threshold).verdict is Verdict.TRUE:
                found.append(v)
    return found[:want]


def _link(t_adj, sources: Sequence[Vertex], targets: FrozenSet[Vertex], free) -> Optional[Path]:
    """Shortest path from a source to a target whose inner vertices satisfy `free`."""
    parent: Dict[Vertex, Optional[Vertex]] = {s: None for s in sources}
    queue = deque(sources)
    while queue:
        u = queue.popleft()
        for w in t_adj[u]:
            if w in targets:
                path = [w, u]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return tuple(reversed(path))
            if w not in parent and free(w):
                parent[w] = u
                queue.append(w)
    return None


def _build_links(g: GraphFamily, D: Sequence[Vertex], rays: Sequence[Ray], W: int,
                 max_vertices: Optional[int]) -> Optional[List[LinkingPath]]:
    t = truncate(g, W, max_vertices)
    lines = [r.upto(W) for r in rays]
    elements: List[Tuple[Vertex, ...]] = [(d,) for d in D] + lines
    on_ray: Dict[Vertex, int] = {v: i for i, line in enumerate(lines) for v in line}
    D_set = frozenset(D)
    used: Set[Vertex] = set()
    links = []

    for i, j in itertools.combinations(range(len(elements)), 2):
        sources = [v for v in elements[i] if v in D_set or v not in used]
        targets = frozenset(v for v in elements[j] if v in D_set or v not in used)
        path = None
        # First avoid every ray; then allow crossing other rays' initial segments.
        for crossing in (False, True):
            def free(w, crossing=crossing):
                if w in D_set or w in used:
                    return False
                r = on_ray.get(w)
                if r is None:
                    return True
                return crossing and r + len(D) not in (i, j)
            path = _link(t.adjacency, sources, targets, free)
            if path is not None:
                break
        if path is None:
            return None
        used.update(v for v in path if v not in D_set)
        links.append(LinkingPath((i, j), path))
    return links


def find_relative_decider(g: GraphFamily, k: int, budgets: Budgets,
                          report: Optional[CohesionReport] = None) -> DeciderCertificate:
    """
    Build a relative decider of size exactly k.

    D holds min(dom, k) dominating vertices; k - |D| disjoint rays of G - D
    follow. Every pair of these objects is joined by a linking path, and X is
    D plus one vertex per ray, taken beyond all linking paths.

    Raises:
        InsufficientCohesion: If deg + dom < k is certified.
        Inconclusive: If the cohesion bounds do not settle deg + dom >= k.
    """
    b = budgets
    report = report or cohesion(g, b)
    decision = report.decides(k)
    if decision is False:
        raise InsufficientCohesion(f"deg + dom < {k} for {g!r} ({report.label}); no decider of size {k} exists")
    if decision is None:
        raise Inconclusive(f"cohesion {report.label} does not settle deg + dom >= {k}")

    D = _gather_dominating(g, report, k, b)
    need = k - len(D)
    rays: List[Ray] = []
    if need > 0:
        series = report.degree.series if report.degree is not None else ()
        d = next((i for i, s in enumerate(series) if s >= need), None)
        if d is None:
            raise Inconclusive(f"no ball up to level {b.d_max} sends {need} disjoint rays to the end")
        X0 = ball(g, d, removed=D)
        rays = disjoint_rays(g, X0, need, b.window, removed=D, max_vertices=b.budget)

    W = b.window
    links = None
    for _ in range(LINK_RETRIES + 1):
        links = _build_links(g, D, rays, W, b.budget)
        if links is not None:
            break
        W += LINK_STEP
    if links is None:
        raise BudgetExceeded(f"linking paths for k={k} do not fit in window {W}")

    top = max((g.level(v) for p in links for v in p.vertices), default=-1)
    used = {v for p in links for v in p.vertices}
    tails = []
    for r in rays:
        line = r.upto(max(W, top + 1))
        last = max((n for n, v in enumerate(line) if v in used), default=-1)
        begin = next(n for n, v in enumerate(r) if n > last and g.level(v) > top)
        tails.append(_tail_from(r, begin, max(W, top + 1)))
    X = tuple(g.sort(list(D) + [t[0] for t in tails]))

    cert = DeciderCertificate(k, X, tuple(D), tuple(rays), tuple(tails), tuple(links), W)
    check_certificate(g, cert)
    logger.info("decider of size %d for %r: %s", k, g, ", ".join(g.label(v) for v in X))
    return cert


def _tail_from(r: Ray, begin: int, W: int) -> Path:
    """Ray vertices from position `begin` up to level W (at least one vertex)."""
    found = []
    for n, v in enumerate(r):
        if n < begin:
            continue
        if found and r.family.level(v) > W:
            break
        found.append(v)
    return tuple(found)


def check_certificate(g: GraphFamily, cert: DeciderCertificate):
    """
    Raises:
        InvariantViolation: If a structural property of the certificate fails.
    """
    if len(cert.X) != cert.k or len(set(cert.X)) != cert.k:
        raise InvariantViolation(f"decider has {len(set(cert.X))} vertices, expected {cert.k}")
    D = frozenset(cert.D)
    ray_vertices = [set(r.upto(cert.window)) for r in cert.rays]
    for i, a in enumerate(ray_vertices):
        if a & D:
            raise InvariantViolation("a dominating vertex lies on a ray")
        for other in ray_vertices[i + 1:]:
            if a & other:
                raise InvariantViolation("rays are not disjoint")
    X = frozenset(cert.X)
    tail_vertices = set().union(*map(set, cert.tails)) if cert.tails else set()
    seen: Set[Vertex] = set()
    for link in cert.linking_paths:
        inner = set(link.vertices[1:-1])
        if inner & (X | tail_vertices | D):
            raise InvariantViolation(f"linking path {link.ends} meets X or a ray tail inside")
        own = set(link.vertices) - D
        if own & seen:
            raise InvariantViolation(f"linking path {link.ends} meets an earlier path")
        seen |= own


# --- Enumeration and verification ---

def _window_vertices(g: GraphFamily, inner_level: int) -> List[Vertex]:
    return g.vertices_upto(inner_level)


def iter_end_separations(g: GraphFamily, k: int, inner_level: int, L: int,
                         max_vertices: Optional[int] = None) -> Iterator[OrientedSeparation]:
    """End-oriented separations of order < k with separator in levels <= inner_level."""
    if L <= inner_level:
        raise HorizonTooSmall(f"Window L={L} must exceed inner level {inner_level}")
    t = truncate(g, L, max_vertices)
    for sep in separator_candidates(_window_vertices(g, inner_level), k):
        sep = frozenset(sep)
        comps = finite_components(t, sep)
        for a_comps in side_assignments(comps):
            yield _separation(g, sep, comps, a_comps, Side.B, L)


def enumerate_end_separations(g: GraphFamily, k: int, inner_level: int, L: int,
                              cap: int = 200_000, margin: int = 0,
                              max_vertices: Optional[int] = None) -> List[OrientedSeparation]:
    """
    All separations of order < k pointing to the end, separator inside the window.

    Raises:
        HorizonTooSmall: If L < inner_level + margin.
        BudgetExceeded: If more than `cap` separations exist.
    """
    if L < inner_level + margin:
        raise HorizonTooSmall(f"Window L={L} must be at least inner level {inner_level} plus margin {margin}")
    found = []
    for s in iter_end_separations(g, k, inner_level, L, max_vertices):
        found.append(s)
        if len(found) > cap:
            raise BudgetExceeded(f"more than {cap} end separations of order < {k} up to level {inner_level}")
    logger.debug("enumerated %d end separations of order < %d", len(found), k)
    return found


@dataclass(frozen=True)
class Violation:
    separation: OrientedSeparation
    votes: VoteCount


@dataclass(frozen=True)
class DeciderVerification:
    ok: bool
    method: str
    checked: int
    violations: Tuple[Violation, ...]


def _sorted(violations: Iterable[Violation]) -> Tuple[Violation, ...]:
    unique = {v.separation: v for v in violations}
    return tuple(sorted(unique.values(), key=lambda v: v.separation.sort_key()))


def _verify_exhaustive(g, X, k, inner_level, L, cap, max_vertices) -> DeciderVerification:
    violations = []
    checked = 0
    for s in iter_end_separations(g, k, inner_level, L, max_vertices):
        checked += 1
        if checked > cap:
            raise BudgetExceeded(f"more than {cap} separations to check")
        votes = majority_counts(s.side_of, X)
        if not votes.b_majority:
            violations.append(Violation(s, votes))
    return DeciderVerification(not violations, "exhaustive", checked, _sorted(violations))


def _verify_flow(g, X, k, inner_level, L, max_vertices) -> DeciderVerification:
    """
    For each split of X into (X_A, X_S, X_B) with |X_A| >= |X_B|, look for a
    set S' of window vertices with |X_S| + |S'| < k separating X_A from X_B
    and from the end in G - X_S.
    """
    window = frozenset(_window_vertices(g, inner_level))
    violations = []
    checked = 0
    for labels in itertools.product("ASB", repeat=len(X)):
        part = {c: [x for x, l in zip(X, labels) if l == c] for c in "ASB"}
        xa, xs, xb = part["A"], part["S"], part["B"]
        if len(xa) < len(xb) or len(xs) >= k or not set(xs) <= window:
            continue
        checked += 1
        budget_left = k - len(xs)
        t = truncate(g, L, max_vertices, removed=xs)
        if xa:
            protected = (set(t.vertices) - window) | set(xa) | set(xb)
            cut = vertex_cut(t.adjacency, g.sort(xa), set(t.frontier) | set(xb), protected, order=t.vertices)
            if cut.unbounded or cut.value >= budget_left:
                continue
            extra = cut.cut_vertices
        else:
            extra = frozenset()
        sep = frozenset(xs) | extra
        full = truncate(g, L, max_vertices)
        comps = finite_components(full, sep)
        a_comps = [c for c in comps if c & set(xa)]
        s = _separation(g, sep, comps, a_comps, Side.B, L)
        votes = majority_counts(s.side_of, X)
        if not votes.b_majority:
            violations.append(Violation(s, votes))
    return DeciderVerification(not violations, "flow", checked, _sorted(violations))


def verify_decider(g: GraphFamily, X: Iterable[Vertex], k: int, inner_level: int, L: int,
                   method: str = "auto", cap: int = 200_000,
                   max_vertices: Optional[int] = None) -> DeciderVerification:
    """
    Check |A ∩ X| < |B ∩ X| for every end separation of order < k whose
    separator lies in levels <= inner_level. X itself may lie deeper.

    method is "exhaustive", "flow" or "auto" (exhaustive when the candidate
    count fits `cap`, flow otherwise).
    """
    X = tuple(g.sort(set(X)))
    if L <= max(inner_level, g.max_level(X)):
        raise HorizonTooSmall(f"Window L={L} must exceed inner level {inner_level} and the decider")
    if method == "auto":
        n = len(_window_vertices(g, inner_level))
        if count_separator_candidates(n, k) <= cap:
            try:
                return _verify_exhaustive(g, X, k, inner_level, L, cap, max_vertices)
            except BudgetExceeded:
                logger.info("exhaustive check over cap, switching to flow verification")
        return _verify_flow(g, X, k, inner_level, L, max_vertices)
    if method == "exhaustive":
        return _verify_exhaustive(g, X, k, inner_level, L, cap, max_vertices)
    if method == "flow":
        return _verify_flow(g, X, k, inner_level, L, max_vertices)
    raise InvalidParam(f"unknown verification method {method!r}")


def verify_absolute(g: GraphFamily, X: Iterable[Vertex], k: int, inner_level: int, L: int,
                    cap: int = 200_000, max_vertices: Optional[int] = None) -> DeciderVerification:
    """Check X ⊆ B for every enumerated end separation of order < k."""
    X = tuple(g.sort(set(X)))
    violations = []
    checked = 0
    for s in iter_end_separations(g, k, inner_level, L, max_vertices):
        checked += 1
        if checked > cap:
            raise BudgetExceeded(f"more than {cap} separations to check")
        votes = majority_counts(s.side_of, X)
        if votes.a_only:
            violations.append(Violation(s, votes))
    return DeciderVerification(not violations, "absolute", checked, _sorted(violations))


# --- Absolute deciders ---

@dataclass(frozen=True)
class EqualityAudit:
    """Checks (A, B) in tau  <=>  K_w ⊆ B over enumerated separations."""

    order: int
    checked: int
    members_ok: int
    non_members_ok: int
    failures: Tuple[OrientedSeparation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class AbsoluteWindow:
    vertices: Tuple[Vertex, ...]
    undecided: Tuple[Vertex, ...]
    infinite: bool
    audit: Optional[EqualityAudit] = None


def absolute_decider_window(g: GraphFamily, inner_level: int, budgets: Budgets,
                            audit_order: int = 5) -> AbsoluteWindow:
    """
    K_w: the dominating vertices of level <= inner_level.

    When domination is infinite, also audits that an enumerated separation of
    order < audit_order points to the end iff K_w lies in its B side.
    """
    b = budgets
    K, undecided = [], []
    for v in g.vertices_upto(inner_level):
        verdict = dominates(g, v, b.window, b.threshold, max_vertices=b.budget).verdict
        if verdict is Verdict.TRUE:
            K.append(v)
        elif verdict is Verdict.INCONCLUSIVE:
            undecided.append(v)
    infinite = g.homogeneous and len(K) >= b.threshold

    audit = None
    if infinite:
        checked = members = non_members = 0
        failures = []
        L = inner_level + b.margin
        for s in iter_end_separations(g, audit_order, inner_level, L, b.budget):
            for side in (s, s.flip()):
                checked += 1
                k_in_b = all(side.contains_b(v) for v in K)
                if side.in_tau == k_in_b:
                    if side.in_tau:
                        members += 1
                    else:
                        non_members += 1
                else:
                    failures.append(side)
        audit = EqualityAudit(audit_order, checked, members, non_members, tuple(failures))
    return AbsoluteWindow(tuple(K), tuple(undecided), infinite, audit)


def is_inseparable(g: GraphFamily, S: Iterable[Vertex], k: int, L: int,
                   max_vertices: Optional[int] = None) -> bool:
    """
    True if no two vertices of S are separated by fewer than k vertices of
    the window. The part of G beyond L is one uncuttable hub.
    """
    S = g.sort(set(S))
    t = truncate(g, L, max_vertices)
    hub = ("hub",)
    adjacency = {v: list(t.adjacency[v]) + ([hub] if v in t.frontier else []) for v in t.vertices}
    adjacency[hub] = [v for v in t.vertices if v in t.frontier]
    order = list(t.vertices) + [hub]
    for u, w in itertools.combinations(S, 2):
        if w in t.adjacency[u]:
            continue
        cut = vertex_cut(adjacency, [u], [w], uncuttable={u, w, hub}, order=order)
        if not cut.unbounded and cut.value < k:
            return False
    return True


def inseparable_decider(g: GraphFamily, k: int, budgets: Budgets) -> Tuple[Vertex, ...]:
    """
    k vertices no two of which are separated by fewer than k vertices.

    Infinitely dominated ends use k vertices of K_w; otherwise the first level
    holding k pairwise adjacent vertices.

    Raises:
        Inconclusive: If no such set shows up up to the search level.
    """
    b = budgets
    window = absolute_decider_window(g, b.search_level, b) if g.homogeneous else None
    if window is not None and window.infinite and len(window.vertices) >= k:
        return tuple(window.vertices[:k])
    for level in range(b.search_level + 1):
        candidates = g.level_vertices(level)
        if len(candidates) < k:
            continue
        chosen = candidates[:k]
        t = truncate(g, level + 1, b.budget)
        if all(w in t.adjacency[u] for u, w in itertools.combinations(chosen, 2)):
            return tuple(chosen)
    raise Inconclusive(f"no (<{k})-inseparable set found up to level {b.search_level}")
