import pytest

from endtangle.closure import (
    Route,
    block_limit_point,
    closure_check,
    limit_point_target,
    limit_point_witness,
)
from endtangle.errors import CohesionTooHigh
from endtangle.graphs import ball, make_family
from endtangle.invariants import cohesion
from endtangle.separations import RestrictionOnZ, Side, restrict


def v(i):
    return ("v", i)


@pytest.fixture
def ray():
    return make_family("ray")


def test_ray_closed_at_one(ray, budgets):
    verdict = closure_check(ray, 1, budgets)
    assert verdict.closed and verdict.parameter_closed
    assert verdict.route is Route.DECIDER
    assert verdict.decider.X == (v(0),)
    assert verdict.verification.ok
    assert verdict.constructive_closed


def test_ray_not_closed_at_two(ray, budgets):
    verdict = closure_check(ray, 2, budgets)
    assert not verdict.closed
    assert verdict.route is Route.LIMIT_POINT
    evidence = verdict.limit_point
    assert evidence.D == ()
    assert len(evidence.samples) == budgets.z_samples
    assert evidence.valid
    assert not verdict.constructive_closed
    assert evidence.target.separator == frozenset()
    assert not evidence.target.in_tau


def test_closure_without_verification(ray, budgets):
    verdict = closure_check(ray, 1, budgets, verify=False)
    assert verdict.verification is None
    assert verdict.constructive_closed


def test_limit_point_witness_ray(ray, budgets):
    Z = {v(0), v(1), v(2)}
    s = limit_point_witness(ray, 2, Z, budgets)
    assert s.separator == {v(3)}
    assert s.in_tau
    assert restrict(s, Z) == RestrictionOnZ(frozenset(Z), frozenset(Z), frozenset())

    assert limit_point_witness(ray, 2, {v(0)}, budgets).separator == {v(1)}


def test_limit_point_witness_dominated_ray(budgets):
    g = make_family("dominated_ray", {"m": 1})
    Z = {("r", 0), ("r", 1)}
    s = limit_point_witness(g, 3, Z, budgets)
    assert s.separator == {("a", 0), ("r", 2)}
    assert s.side_of(("r", 0)) is Side.A


def test_limit_point_witness_needs_low_cohesion(ray, budgets):
    with pytest.raises(CohesionTooHigh):
        limit_point_witness(ray, 1, {v(0)}, budgets)


def test_limit_point_samples_agree_with_target(budgets):
    g = make_family("dominated_ray", {"m": 2})
    report = cohesion(g, budgets)
    target = limit_point_target(g, report.domination.witnesses, budgets)
    assert target.end_side is Side.A
    for level in range(1, 4):
        Z = frozenset(ball(g, level))
        s = limit_point_witness(g, 5, Z, budgets, report)
        assert s.in_tau and s.order < 5
        assert restrict(s, Z).b_part == Z & target.separator


@pytest.mark.parametrize("m", [1, 2])
def test_dominated_ray_boundary(m, budgets):
    g = make_family("dominated_ray", {"m": m})
    report = cohesion(g, budgets)
    closed = closure_check(g, m + 1, budgets, report)
    assert closed.closed and closed.verification.ok
    assert len(closed.decider.D) == m
    open_ = closure_check(g, m + 2, budgets, report)
    assert not open_.closed and open_.limit_point.valid


def test_block_limit_point(ray, budgets):
    s = block_limit_point(ray, {v(0), v(1)}, budgets)
    assert s.separator == {v(2)}
    assert s.a_side == {v(0)}
    assert s.in_tau


def test_block_limit_point_dominated(budgets):
    g = make_family("dominated_ray", {"m": 1})
    Z = {("a", 0), ("r", 0), ("r", 1)}
    s = block_limit_point(g, Z, budgets)
    assert s.in_tau
    assert s.side_of(("a", 0)) is Side.SEPARATOR
    assert s.side_of(("r", 0)) is Side.A


def test_block_limit_point_infinite(budgets):
    with pytest.raises(CohesionTooHigh):
        block_limit_point(make_family("complete"), {("k", 0)}, budgets)


def test_closure_monotone_in_k(ray, budgets):
    report = cohesion(ray, budgets)
    closed = [closure_check(ray, k, budgets, report, verify=False).closed for k in range(1, 5)]
    assert closed == [True, False, False, False]
