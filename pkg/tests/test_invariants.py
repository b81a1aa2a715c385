import pytest

from endtangle.config import Budgets
from endtangle.graphs import make_family
from endtangle.invariants import (
    Category,
    CohesionReport,
    DegreeEstimate,
    DominationCount,
    Kind,
    Verdict,
    cohesion,
    degree_estimate,
    dominates,
    domination_count,
    evidence,
)


def test_ray_vertex_does_not_dominate():
    d = dominates(make_family("ray"), ("v", 0), 20, 8)
    assert d.verdict is Verdict.FALSE
    assert d.certificate == "separator"
    assert d.separator == {("v", 1)}


def test_apex_dominates():
    g = make_family("dominated_ray", {"m": 1})
    d = dominates(g, ("a", 0), 20, 8)
    assert d.verdict is Verdict.TRUE
    assert d.certificate == "frontier-at-every-L"

    d = dominates(g, ("r", 3), 20, 8)
    assert d.verdict is Verdict.FALSE
    assert ("a", 0) in d.separator


def test_domination_count_exact():
    g = make_family("dominated_ray", {"m": 2})
    dom = domination_count(g, 6, 20, 8)
    assert dom.kind is Kind.EXACT
    assert dom.value == 2
    assert dom.witnesses == (("a", 0), ("a", 1))
    assert len(dom.verdicts) == 9


def test_domination_count_infinite():
    dom = domination_count(make_family("complete"), 6, 20, 8)
    assert dom.kind is Kind.INFINITE
    assert dom.value == 14


def test_degree_estimate_ladder():
    g = make_family("ladder", {"m": 3})
    deg = degree_estimate(g, 4, 20, 3)
    assert deg.kind is Kind.EXACT
    assert deg.value == 3
    assert deg.series == (3, 3, 3, 3, 3)


def test_degree_estimate_dominated_ray():
    g = make_family("dominated_ray", {"m": 2})
    deg = degree_estimate(g, 4, 20, 3, dominating=[("a", 0), ("a", 1)])
    assert deg.kind is Kind.EXACT
    assert deg.value == 1


def test_degree_estimate_too_small_to_decide():
    # A clique ray still looks finite after two balls
    deg = degree_estimate(make_family("clique_ray"), 2, 20, 3)
    assert deg.kind is Kind.LOWER_BOUND
    assert deg.series == (1, 2, 3)


def test_cohesion_ray(budgets):
    report = cohesion(make_family("ray"), budgets)
    assert report.category is Category.BOUNDED
    assert report.value == 2
    assert report.conclusive
    assert report.label == "Bounded(2)"
    assert report.decides(1) is True
    assert report.decides(2) is False


@pytest.mark.parametrize("m", [1, 2, 3])
def test_cohesion_dominated_ray(m, budgets):
    report = cohesion(make_family("dominated_ray", {"m": m}), budgets)
    assert report.label == f"Bounded({m + 2})"
    assert report.domination.kind is Kind.EXACT
    assert report.degree.kind is Kind.EXACT and report.degree.value == 1
    assert report.decides(m + 1) is True
    assert report.decides(m + 2) is False


def test_cohesion_ladder(budgets):
    report = cohesion(make_family("ladder", {"m": 2}), budgets)
    assert report.label == "Bounded(3)"


def test_cohesion_complete(budgets):
    report = cohesion(make_family("complete"), budgets)
    assert report.category is Category.INFINITE
    assert report.degree is None
    assert report.label == "Infinite"
    assert report.decides(50) is True


@pytest.mark.slow
def test_cohesion_grid(budgets):
    report = cohesion(make_family("grid"), budgets)
    assert report.category is Category.UNBOUNDED
    assert report.conclusive
    assert report.domination.kind is Kind.EXACT and report.domination.value == 0
    assert report.degree.kind is Kind.INFINITE
    assert report.degree.series == tuple(2 * d + 1 for d in range(budgets.d_max + 1))


@pytest.mark.slow
def test_cohesion_clique_ray(budgets):
    report = cohesion(make_family("clique_ray"), budgets)
    assert report.label == "Unbounded"
    assert report.degree.series == tuple(d + 1 for d in range(budgets.d_max + 1))


def test_inconclusive_report_bounds():
    dom = DominationCount(Kind.LOWER_BOUND, 1, (("a", 0),))
    deg = DegreeEstimate(Kind.LOWER_BOUND, 1, (1,))
    report = CohesionReport(deg, dom, Category.BOUNDED, 3, False)
    assert report.label == "at least Bounded(3)"
    assert report.lower_bound == 2
    assert report.decides(2) is True
    assert report.decides(3) is None


def test_evidence(budgets):
    g = make_family("ray")
    ev = evidence(cohesion(g, budgets), g)
    assert ev["dominating"] == {}
    assert ev["separated"]["v_0"] == ["v_1"]
    assert ev["degree_separators"][0] == ["v_0"]


def test_budgets_are_respected():
    small = Budgets(window=8, search_level=2, d_max=2)
    report = cohesion(make_family("ray"), small)
    assert len(report.domination.verdicts) == 3
    assert len(report.degree.series) == 3
