"""
Degree, domination and cohesion of the designated end.

Infinite values are only semi-decidable, so every estimate carries a kind:
exact, lower_bound, or infinite. The cohesion category follows from the two
estimates:

    dom infinite                 -> Infinite
    deg infinite, dom finite     -> Unbounded
    both finite                  -> Bounded(deg + dom + 1)
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from endtangle.config import Budgets
from endtangle.errors import InvariantViolation
from endtangle.flow import min_cut_to_terminal, min_end_separator
from endtangle.graphs import GraphFamily, Vertex, ball, truncate

logger = logging.getLogger(__name__)


class Kind(str, Enum):
    EXACT = "exact"
    LOWER_BOUND = "lower_bound"
    INFINITE = "infinite"


class Verdict(str, Enum):
    TRUE = "true"
    FALSE = "false"
    INCONCLUSIVE = "inconclusive"


class Category(str, Enum):
    BOUNDED = "Bounded"
    UNBOUNDED = "Unbounded"
    INFINITE = "Infinite"


@dataclass(frozen=True)
class DominationVerdict:
    vertex: Vertex
    verdict: Verdict
    # "frontier-at-every-L", "flow-above-threshold", "separator" or "none"
    certificate: str
    separator: FrozenSet[Vertex] = frozenset()
    window: int = 0
    series: Tuple[int, ...] = ()


def dominates(g: GraphFamily, v: Vertex, L_max: int, threshold: int, margin: int = 0,
              max_vertices: Optional[int] = None) -> DominationVerdict:
    """
    Decide whether v sends infinitely many disjoint paths to the end.

    A false verdict carries a finite separator S, not containing v, that cuts
    v off from the end in G.
    """
    start = g.level(v) + 1
    levels = range(start, max(L_max, start) + 1)
    if all(g.has_neighbor_beyond(v, L) for L in levels):
        return DominationVerdict(v, Verdict.TRUE, "frontier-at-every-L", window=levels[-1])

    series = []
    for L in levels:
        if g.has_neighbor_beyond(v, L):
            continue
        t = truncate(g, L, max_vertices)
        cut = min_cut_to_terminal(t, [v], forbidden_sources=[v])
        series.append(cut.value)
        if g.max_level(cut.cut_vertices) < L - margin:
            logger.debug("%s does not dominate: %d-separator at L=%d", g.label(v), cut.value, L)
            return DominationVerdict(v, Verdict.FALSE, "separator", cut.cut_vertices, L, tuple(series))

    if len(series) >= 2 and series[-2] > threshold and series[-1] > series[-2]:
        return DominationVerdict(v, Verdict.TRUE, "flow-above-threshold", window=levels[-1],
                                 series=tuple(series))
    return DominationVerdict(v, Verdict.INCONCLUSIVE, "none", window=levels[-1], series=tuple(series))


@dataclass(frozen=True)
class DominationCount:
    kind: Kind
    value: int
    witnesses: Tuple[Vertex, ...]
    verdicts: Tuple[DominationVerdict, ...] = field(repr=False, default=())


def domination_count(g: GraphFamily, search_level: int, L_max: int, threshold: int,
                     margin: int = 0, max_vertices: Optional[int] = None) -> DominationCount:
    """Count dominating vertices among those of level <= search_level."""
    verdicts = [dominates(g, v, L_max, threshold, margin, max_vertices)
                for v in g.vertices_upto(search_level)]
    witnesses = tuple(d.vertex for d in verdicts if d.verdict is Verdict.TRUE)
    all_refuted = all(d.verdict is not Verdict.INCONCLUSIVE for d in verdicts)

    if len(witnesses) >= threshold and g.homogeneous:
        kind = Kind.INFINITE
    elif all_refuted and g.locally_finite_beyond(search_level):
        kind = Kind.EXACT
    else:
        kind = Kind.LOWER_BOUND
    logger.info("domination of %r: %s %d", g, kind.value, len(witnesses))
    return DominationCount(kind, len(witnesses), witnesses, tuple(verdicts))


@dataclass(frozen=True)
class DegreeEstimate:
    kind: Kind
    value: int
    series: Tuple[int, ...]
    # The ball level whose separator scan produced each series entry is its index.
    separators: Tuple[FrozenSet[Vertex], ...] = field(repr=False, default=())


def degree_estimate(g: GraphFamily, d_max: int, L_max: int, patience: int,
                    dominating: Iterable[Vertex] = (), divergence_bound: int = 6,
                    margin: int = 2, max_vertices: Optional[int] = None) -> DegreeEstimate:
    """
    Estimate deg of the end in G - D from s_d = min separator of ball(d).

    Raises:
        InvariantViolation: If s_d ever decreases.
    """
    D = frozenset(dominating)
    series: List[int] = []
    separators = []
    for d in range(d_max + 1):
        X = ball(g, d, removed=D)
        if not X:
            series.append(0)
            separators.append(frozenset())
            continue
        scan = min_end_separator(g, X, L_max, patience, removed=D, margin=margin, max_vertices=max_vertices)
        if series and scan.value < series[-1]:
            raise InvariantViolation(f"s_d fell from {series[-1]} to {scan.value} at d={d}")
        series.append(int(scan.value))
        separators.append(scan.separator)
        logger.debug("s_%d = %d", d, scan.value)

    last = series[-1]
    tail = series[-(patience + 1):]
    rising = len(tail) == patience + 1 and all(a < b for a, b in zip(tail, tail[1:]))
    stable = len(series) >= patience and len(set(series[-patience:])) == 1

    if last > divergence_bound and rising:
        kind = Kind.INFINITE
    elif stable and g.degree_bound is not None and last == g.degree_bound:
        kind = Kind.EXACT
    else:
        kind = Kind.LOWER_BOUND
    logger.info("degree of %r: %s %d", g, kind.value, last)
    return DegreeEstimate(kind, last, tuple(series), tuple(separators))


@dataclass(frozen=True)
class CohesionReport:
    degree: Optional[DegreeEstimate]
    domination: DominationCount
    category: Category
    # k for Bounded(k), or the lower bound when not conclusive.
    value: Optional[int]
    conclusive: bool

    @property
    def label(self) -> str:
        if self.category is Category.BOUNDED:
            text = f"Bounded({self.value})"
        else:
            text = self.category.value
        return text if self.conclusive else f"at least {text}"

    @property
    def lower_bound(self) -> int:
        """Certified lower bound on deg + dom."""
        deg = self.degree.value if self.degree is not None else 0
        return deg + self.domination.value

    def decides(self, k: int) -> Optional[bool]:
        """
        True if deg + dom >= k, False if deg + dom < k, None if undecided.
        """
        if self.conclusive:
            if self.category is not Category.BOUNDED:
                return True
            return k <= self.value - 1
        if self.lower_bound >= k:
            return True
        return None


def cohesion(g: GraphFamily, budgets: Budgets) -> CohesionReport:
    """Compose domination and degree into a cohesion category."""
    b = budgets
    dom = domination_count(g, b.search_level, b.window, b.threshold, max_vertices=b.budget)
    if dom.kind is Kind.INFINITE:
        return CohesionReport(None, dom, Category.INFINITE, None, True)

    deg = degree_estimate(g, b.d_max, b.window, b.patience, dominating=dom.witnesses,
                          divergence_bound=b.divergence_bound, margin=b.margin, max_vertices=b.budget)
    if dom.kind is Kind.EXACT and deg.kind is Kind.EXACT:
        report = CohesionReport(deg, dom, Category.BOUNDED, deg.value + dom.value + 1, True)
    elif dom.kind is Kind.EXACT and deg.kind is Kind.INFINITE:
        report = CohesionReport(deg, dom, Category.UNBOUNDED, None, True)
    elif deg.kind is Kind.INFINITE:
        report = CohesionReport(deg, dom, Category.UNBOUNDED, None, False)
    else:
        report = CohesionReport(deg, dom, Category.BOUNDED, deg.value + dom.value + 1, False)
    logger.info("cohesion of %r: %s", g, report.label)
    return report


def evidence(report: CohesionReport, g: GraphFamily) -> Dict[str, object]:
    """Serialisable certificates behind a cohesion report."""
    refuted = {
        g.label(d.vertex): [g.label(u) for u in g.sort(d.separator)]
        for d in report.domination.verdicts if d.verdict is Verdict.FALSE
    }
    found = {
        g.label(d.vertex): d.certificate
        for d in report.domination.verdicts if d.verdict is Verdict.TRUE
    }
    result: Dict[str, object] = {"dominating": found, "separated": refuted}
    if report.degree is not None:
        result["degree_separators"] = [
            [g.label(u) for u in g.sort(s)] for s in report.degree.separators
        ]
    return result
