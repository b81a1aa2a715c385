"""
Closedness of the end tangle restricted to separations of order < k.

It is closed exactly when deg + dom >= k. A closed restriction is witnessed
by a relative decider of size k. Otherwise it is witnessed by the limit
point (V, D), D being the dominating vertices: on every finite Z it agrees
with some separation of order < k that points to the end.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Iterable, List, Optional, Tuple

from endtangle.config import Budgets
from endtangle.deciders import DeciderCertificate, DeciderVerification, find_relative_decider, verify_decider
from endtangle.errors import CohesionTooHigh, Inconclusive, InvariantViolation
from endtangle.flow import min_end_separator
from endtangle.graphs import GraphFamily, Vertex, ball, finite_components, truncate
from endtangle.invariants import Category, CohesionReport, Verdict, cohesion, dominates
from endtangle.separations import (
    OrientedSeparation,
    RestrictionOnZ,
    Side,
    _separation,
    corner,
    orient_toward_end,
    restrict,
)

logger = logging.getLogger(__name__)


class Route(str, Enum):
    PARAMETER = "parameter"
    DECIDER = "decider"
    LIMIT_POINT = "limit-point"


@dataclass(frozen=True)
class LimitPointSample:
    Z: FrozenSet[Vertex]
    agreeing: OrientedSeparation
    agrees: bool


@dataclass(frozen=True)
class LimitPointEvidence:
    D: Tuple[Vertex, ...]
    target: OrientedSeparation
    samples: Tuple[LimitPointSample, ...]

    @property
    def valid(self) -> bool:
        return all(s.agrees for s in self.samples)


@dataclass(frozen=True)
class ClosureVerdict:
    k: int
    closed: bool
    # Outcome of the deg + dom >= k test alone.
    parameter_closed: bool
    route: Route
    decider: Optional[DeciderCertificate] = field(default=None, repr=False)
    verification: Optional[DeciderVerification] = field(default=None, repr=False)
    limit_point: Optional[LimitPointEvidence] = field(default=None, repr=False)

    @property
    def constructive_closed(self) -> bool:
        """What the witness alone shows: a verified decider, or no valid evidence."""
        if self.decider is not None:
            return self.verification is None or self.verification.ok
        return not (self.limit_point is not None and self.limit_point.valid)


def _dominating(report: CohesionReport) -> Tuple[Vertex, ...]:
    if report.category is Category.INFINITE:
        raise CohesionTooHigh("the end is infinitely dominated")
    return tuple(report.domination.witnesses)


def limit_point_witness(g: GraphFamily, k: int, Z: Iterable[Vertex], budgets: Budgets,
                        report: Optional[CohesionReport] = None) -> OrientedSeparation:
    """
    A separation of order < k pointing to the end with Z ⊆ A and B ∩ Z = D ∩ Z.

    T separates Z \\ D from the end in G - D and may not contain Z vertices;
    the separator is T ∪ D and every finite component goes to A.

    Raises:
        CohesionTooHigh: If deg + dom >= k.
        Inconclusive: If the cohesion bounds do not settle deg + dom < k.
    """
    b = budgets
    report = report or cohesion(g, b)
    decision = report.decides(k)
    if decision is True:
        raise CohesionTooHigh(f"deg + dom >= {k} for {g!r}; no limit point of shape (V, D) exists")
    if decision is None:
        raise Inconclusive(f"cohesion {report.label} does not settle deg + dom < {k}")

    D = frozenset(_dominating(report))
    Z = frozenset(Z)
    rest = Z - D
    T: FrozenSet[Vertex] = frozenset()
    if rest:
        top = g.max_level(rest)
        scan = min_end_separator(g, rest, max(b.window, top + b.patience + 1), b.patience,
                                 forbid_sources=True, removed=D, margin=b.margin, max_vertices=b.budget)
        if scan.value == float("inf"):
            raise InvariantViolation(f"{sorted(map(g.label, rest))} cannot be cut off from the end in G - D")
        T = scan.separator

    separator = T | D
    L = max(b.window, g.max_level(separator | Z) + b.margin + 1)
    comps = finite_components(truncate(g, L, b.budget), separator)
    s = _separation(g, separator, comps, comps, Side.B, L)
    if s.order >= k:
        raise InvariantViolation(f"limit-point separation has order {s.order} >= {k}")
    logger.debug("limit point sample on %d vertices: %s", len(Z), s)
    return s


def closure_check(g: GraphFamily, k: int, budgets: Budgets, report: Optional[CohesionReport] = None,
                  verify: bool = True) -> ClosureVerdict:
    """
    Decide whether the tangle restricted to order < k is closed, with a witness.

    Raises:
        Inconclusive: If the cohesion bounds are not decisive at this budget.
    """
    b = budgets
    report = report or cohesion(g, b)
    decision = report.decides(k)
    if decision is None:
        raise Inconclusive(f"cohesion {report.label} does not decide closedness at k={k}")

    if decision:
        cert = find_relative_decider(g, k, b, report)
        verification = None
        if verify:
            L = max(b.inner_level, g.max_level(cert.X)) + b.margin
            verification = verify_decider(g, cert.X, k, b.inner_level, L,
                                          cap=b.enumeration_cap, max_vertices=b.budget)
            if not verification.ok:
                logger.warning("decider for k=%d failed verification with %d violations",
                               k, len(verification.violations))
        return ClosureVerdict(k, True, True, Route.DECIDER, decider=cert, verification=verification)

    D = _dominating(report)
    samples = []
    for level in range(1, b.z_samples + 1):
        Z = frozenset(ball(g, level))
        s = limit_point_witness(g, k, Z, b, report)
        expected = RestrictionOnZ(Z, Z, Z & frozenset(D))
        samples.append(LimitPointSample(Z, s, restrict(s, Z) == expected and s.in_tau and s.order < k))
    target = limit_point_target(g, D, b)
    evidence = LimitPointEvidence(D, target, tuple(samples))
    if not evidence.valid:
        logger.warning("limit-point evidence for k=%d has failing samples", k)
    return ClosureVerdict(k, False, False, Route.LIMIT_POINT, limit_point=evidence)


def limit_point_target(g: GraphFamily, D: Iterable[Vertex], budgets: Budgets) -> OrientedSeparation:
    """The separation shape (V, D): separator D with the end on the A side."""
    D = frozenset(D)
    L = max(budgets.window, g.max_level(D) + 1)
    comps = finite_components(truncate(g, L, budgets.budget), D)
    return _separation(g, D, comps, comps, Side.A, L)


def block_limit_point(g: GraphFamily, Z: Iterable[Vertex], budgets: Budgets,
                      report: Optional[CohesionReport] = None) -> OrientedSeparation:
    """
    A member of the whole end tangle that agrees with (V, K) on Z.

    K is the finite set of dominating vertices. Each z outside K is cut off
    from the end by a separation pointing to the end; each z in K is put in a
    separator of its own. The corner of all of them is returned.

    Raises:
        CohesionTooHigh: If the end is infinitely dominated.
        Inconclusive: If some vertex of Z is neither shown to dominate nor cut off.
    """
    b = budgets
    report = report or cohesion(g, b)
    K = frozenset(_dominating(report))
    Z = frozenset(Z)
    L = max(b.window, g.max_level(Z) + b.margin + 1)

    parts: List[OrientedSeparation] = [orient_toward_end(g, (), L=L, max_vertices=b.budget)]
    for z in g.sort(Z):
        if z in K:
            parts.append(orient_toward_end(g, [z], L=L, max_vertices=b.budget))
            continue
        verdict = dominates(g, z, L, b.threshold, max_vertices=b.budget)
        if verdict.verdict is Verdict.TRUE:
            parts.append(orient_toward_end(g, [z], L=L, max_vertices=b.budget))
        elif verdict.verdict is Verdict.FALSE:
            sep = verdict.separator
            window = max(L, g.max_level(sep) + 1)
            comps = finite_components(truncate(g, window, b.budget), sep)
            parts.append(_separation(g, sep, comps, comps, Side.B, window))
        else:
            raise Inconclusive(f"cannot tell whether {g.label(z)} dominates the end")

    result = parts[0]
    for s in parts[1:]:
        result = corner(result, s, b.budget)
    return result
