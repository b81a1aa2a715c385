"""
JSON report schema for endtangle.

Every command emits an AnalysisReport. Field order is fixed by the models and
all vertex lists are sorted, so two runs with the same flags give identical
JSON apart from the timing block.
"""

import math
import time
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List, Optional, Union

from pydantic import BaseModel, Field

from endtangle.closure import ClosureVerdict
from endtangle.config import Budgets
from endtangle.deciders import DeciderVerification
from endtangle.graphs import GraphFamily
from endtangle.invariants import CohesionReport, evidence
from endtangle.oracle import SelftestSummary
from endtangle.separations import OrientedSeparation

SCHEMA_VERSION = "1.0"

Value = Union[int, str, None]


def _value(v) -> Value:
    if v is None:
        return None
    if isinstance(v, float) and math.isinf(v):
        return "infinite"
    return int(v)


class FamilyInfo(BaseModel):
    name: str
    params: Dict[str, int] = Field(default_factory=dict)


class EstimateModel(BaseModel):
    kind: str
    value: Value
    witnesses: List[str] = Field(default_factory=list)
    series: List[Value] = Field(default_factory=list)


class CohesionModel(BaseModel):
    category: str
    label: str
    conclusive: bool
    value: Optional[int] = None
    degree: Optional[EstimateModel] = None
    domination: EstimateModel
    evidence: Dict[str, Any] = Field(default_factory=dict)


class SeparationModel(BaseModel):
    separator: List[str]
    a_components: List[str]
    end_side: str
    window: int
    order: int


class DeciderModel(BaseModel):
    k: int
    X: List[str]
    D: List[str]
    rays: List[List[str]]
    tails: List[List[str]]
    linking_paths: List[List[str]]
    window: int


class VerificationModel(BaseModel):
    ok: bool
    method: str
    checked: int
    violations: List[SeparationModel] = Field(default_factory=list)


class SampleModel(BaseModel):
    Z: List[str]
    agreeing: SeparationModel
    agrees: bool


class LimitPointModel(BaseModel):
    D: List[str]
    target: SeparationModel
    samples: List[SampleModel]
    valid: bool


class ClosureModel(BaseModel):
    k: int
    closed: bool
    parameter_closed: bool
    constructive_closed: bool
    route: str
    decider: Optional[DeciderModel] = None
    verification: Optional[VerificationModel] = None
    limit_point: Optional[LimitPointModel] = None


class SelftestModel(BaseModel):
    seed: int
    graphs: int
    flow_agree: int
    flow_disagree: int
    enumeration_agree: int
    enumeration_disagree: int
    votes_agree: int
    votes_disagree: int
    triangle_count: int
    ok: bool


class AnalysisReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    command: str
    family: Optional[FamilyInfo] = None
    budgets: Dict[str, int] = Field(default_factory=dict)
    cohesion: Optional[CohesionModel] = None
    per_k: List[ClosureModel] = Field(default_factory=list)
    limit_point: Optional[SampleModel] = None
    oracle_selftest: Optional[SelftestModel] = None
    timing: Dict[str, float] = Field(default_factory=dict)


# --- Builders ---

def family_info(g: GraphFamily) -> FamilyInfo:
    return FamilyInfo(name=g.name, params=dict(sorted(g.params.items())))


def budgets_info(budgets: Budgets) -> Dict[str, int]:
    return budgets.model_dump()


def separation_model(s: OrientedSeparation) -> SeparationModel:
    d = s.to_dict()
    return SeparationModel(order=s.order, **d)


def cohesion_model(report: CohesionReport, g: GraphFamily) -> CohesionModel:
    dom = report.domination
    degree = None
    if report.degree is not None:
        degree = EstimateModel(kind=report.degree.kind.value, value=report.degree.value,
                               series=[_value(v) for v in report.degree.series])
    return CohesionModel(
        category=report.category.value,
        label=report.label,
        conclusive=report.conclusive,
        value=report.value,
        degree=degree,
        domination=EstimateModel(kind=dom.kind.value, value=dom.value,
                                 witnesses=[g.label(v) for v in g.sort(dom.witnesses)]),
        evidence=evidence(report, g),
    )


def verification_model(v: DeciderVerification) -> VerificationModel:
    return VerificationModel(ok=v.ok, method=v.method, checked=v.checked,
                             violations=[separation_model(x.separation) for x in v.violations])


def _labels(g: GraphFamily, vertices) -> List[str]:
    return [g.label(v) for v in g.sort(vertices)]


def closure_model(verdict: ClosureVerdict, g: GraphFamily) -> ClosureModel:
    decider = None
    if verdict.decider is not None:
        decider = DeciderModel(**verdict.decider.to_dict(g))
    verification = verification_model(verdict.verification) if verdict.verification is not None else None
    limit_point = None
    if verdict.limit_point is not None:
        ev = verdict.limit_point
        limit_point = LimitPointModel(
            D=_labels(g, ev.D),
            target=separation_model(ev.target),
            samples=[SampleModel(Z=_labels(g, s.Z), agreeing=separation_model(s.agreeing), agrees=s.agrees)
                     for s in ev.samples],
            valid=ev.valid,
        )
    return ClosureModel(
        k=verdict.k,
        closed=verdict.closed,
        parameter_closed=verdict.parameter_closed,
        constructive_closed=verdict.constructive_closed,
        route=verdict.route.value,
        decider=decider,
        verification=verification,
        limit_point=limit_point,
    )


def selftest_model(summary: SelftestSummary) -> SelftestModel:
    return SelftestModel(
        seed=summary.seed,
        graphs=summary.graphs,
        flow_agree=summary.flow_agree,
        flow_disagree=summary.flow_disagree,
        enumeration_agree=summary.enumeration_agree,
        enumeration_disagree=summary.enumeration_disagree,
        votes_agree=summary.votes_agree,
        votes_disagree=summary.votes_disagree,
        triangle_count=summary.triangle_count,
        ok=summary.ok,
    )


def to_json(report: AnalysisReport, include_timing: bool = True) -> str:
    exclude = None if include_timing else {"timing"}
    return report.model_dump_json(indent=2, exclude=exclude)


class StageTimer:
    """Collects wall-clock durations per analysis stage."""

    def __init__(self):
        self.stages: Dict[str, float] = {}

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.stages[name] = round(self.stages.get(name, 0.0) + time.perf_counter() - start, 6)
