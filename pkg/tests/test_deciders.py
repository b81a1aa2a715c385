import itertools

import pytest

from endtangle.config import Budgets
from endtangle.deciders import (
    DeciderCertificate,
    absolute_decider_window,
    check_certificate,
    enumerate_end_separations,
    find_relative_decider,
    inseparable_decider,
    is_inseparable,
    iter_end_separations,
    verify_absolute,
    verify_decider,
)
from endtangle.errors import BudgetExceeded, HorizonTooSmall, InsufficientCohesion, InvalidParam, InvariantViolation
from endtangle.flow import vertex_cut
from endtangle.graphs import make_family, truncate
from endtangle.separations import majority_counts


def v(i):
    return ("v", i)


def test_enumerate_ray():
    g = make_family("ray")
    found = enumerate_end_separations(g, 2, 2, 8)
    assert len(found) == 6
    assert all(s.in_tau and s.order < 2 for s in found)

    (only,) = enumerate_end_separations(g, 1, 3, 8)
    assert only.separator == frozenset()
    assert only.a_side == frozenset()


def test_enumerate_limits():
    g = make_family("ray")
    with pytest.raises(BudgetExceeded):
        enumerate_end_separations(g, 2, 2, 8, cap=3)
    with pytest.raises(HorizonTooSmall):
        list(iter_end_separations(g, 2, 4, 4))


def test_ray_decider(budgets):
    g = make_family("ray")
    cert = find_relative_decider(g, 1, budgets)
    assert cert.X == (v(0),)
    assert cert.D == ()
    assert cert.linking_paths == ()
    assert cert.to_dict(g)["X"] == ["v_0"]

    with pytest.raises(InsufficientCohesion):
        find_relative_decider(g, 2, budgets)


def test_ladder_decider(budgets):
    g = make_family("ladder", {"m": 2})
    cert = find_relative_decider(g, 2, budgets)
    assert cert.X == ((0, 1), (1, 1))
    assert len(cert.linking_paths) == 1
    assert verify_decider(g, cert.X, 2, 4, 7).ok


def test_dominated_ray_decider(budgets):
    g = make_family("dominated_ray", {"m": 1})
    cert = find_relative_decider(g, 2, budgets)
    assert cert.X == (("a", 0), ("r", 1))
    assert cert.D == (("a", 0),)
    assert verify_decider(g, cert.X, 2, 5, 8).ok


def test_complete_decider(budgets):
    g = make_family("complete")
    cert = find_relative_decider(g, 3, budgets)
    assert cert.D == (("k", 0), ("k", 1), ("k", 2))
    assert cert.X == cert.D
    assert cert.rays == ()


def test_check_certificate_rejects_duplicates():
    cert = DeciderCertificate(2, (v(0), v(0)), (), (), (), (), 10)
    with pytest.raises(InvariantViolation):
        check_certificate(make_family("ray"), cert)


def test_verify_decider_ray():
    g = make_family("ray")
    assert verify_decider(g, [v(0)], 1, 3, 8).ok

    result = verify_decider(g, [v(0)], 2, 3, 8)
    assert not result.ok
    rendered = {x.separation.render() for x in result.violations}
    assert "sep=[v_0] A=[] end=B" in rendered
    assert "sep=[v_1] A=[v_0] end=B" in rendered
    keys = [x.separation.sort_key() for x in result.violations]
    assert keys == sorted(keys)


def test_verify_decider_flow_method():
    g = make_family("ray")
    good = verify_decider(g, [v(0)], 1, 3, 8, method="flow")
    assert good.ok and good.method == "flow"
    bad = verify_decider(g, [v(0)], 2, 3, 8, method="flow")
    assert not bad.ok

    with pytest.raises(InvalidParam):
        verify_decider(g, [v(0)], 1, 3, 8, method="guess")
    with pytest.raises(HorizonTooSmall):
        verify_decider(g, [v(0)], 1, 3, 3)


def test_verify_decider_deep_vertices():
    # Vertices deeper than every separator always vote for the end side
    g = make_family("ray")
    assert verify_decider(g, [v(9)], 1, 3, 10).ok


def test_absolute_window_dominated_ray():
    g = make_family("dominated_ray", {"m": 2})
    w = absolute_decider_window(g, 5, Budgets())
    assert w.vertices == (("a", 0), ("a", 1))
    assert not w.infinite
    assert w.audit is None


def test_absolute_window_ray():
    w = absolute_decider_window(make_family("ray"), 4, Budgets())
    assert w.vertices == ()
    assert w.undecided == ()


@pytest.mark.slow
def test_absolute_window_complete():
    w = absolute_decider_window(make_family("complete"), 5, Budgets())
    assert len(w.vertices) == 12
    assert w.infinite
    assert w.audit.ok
    assert w.audit.checked == 2 * 794


def test_is_inseparable():
    g = make_family("clique_ray")
    block = g.level_vertices(2)
    assert is_inseparable(g, block, 3, 6)
    assert not is_inseparable(g, [(1, 0), (3, 0)], 3, 6)
    assert is_inseparable(g, [(1, 0), (3, 0)], 2, 6)


def test_inseparable_decider_clique_ray(budgets):
    g = make_family("clique_ray")
    X = inseparable_decider(g, 3, budgets)
    assert X == ((3, 0), (3, 1), (3, 2))
    assert verify_absolute(g, X, 3, 4, 7).ok
    assert verify_decider(g, X, 3, 4, 7).ok


def test_inseparable_decider_complete(budgets):
    X = inseparable_decider(make_family("complete"), 4, budgets)
    assert X == (("k", 0), ("k", 1), ("k", 2), ("k", 3))


def test_verify_absolute_fails_off_block():
    g = make_family("ray")
    result = verify_absolute(g, [v(0)], 2, 3, 8)
    assert not result.ok
    assert result.method == "absolute"


def _split_pairs(X):
    """Every (A, B) of disjoint non-empty subsets of X."""
    for sides in itertools.product((0, 1, 2), repeat=len(X)):
        A = [x for x, s in zip(X, sides) if s == 1]
        B = [x for x, s in zip(X, sides) if s == 2]
        if A and B:
            yield A, B


def _paths_between_parts(g, cert, A, B):
    blocked = {v for tail in cert.tails for v in tail} | set(cert.X)
    blocked -= set(A) | set(B)
    t = truncate(g, cert.window)
    keep = [v for v in t.vertices if v not in blocked]
    adjacency = {v: [w for w in t.adjacency[v] if w not in blocked] for v in keep}
    return vertex_cut(adjacency, A, B, order=keep)


LINKED_DECIDERS = [
    ("ladder", {"m": 3}, 3),
    ("dominated_ray", {"m": 2}, 3),
    pytest.param("grid", {}, 4, marks=pytest.mark.slow),
]


@pytest.mark.parametrize("name,params,k", LINKED_DECIDERS)
def test_decider_parts_are_linked(name, params, k, budgets):
    g = make_family(name, params)
    cert = find_relative_decider(g, k, budgets)
    assert len(cert.X) == k
    for A, B in _split_pairs(cert.X):
        cut = _paths_between_parts(g, cert, A, B)
        assert cut.value == min(len(A), len(B)), (A, B)


@pytest.mark.parametrize("name,params,k", LINKED_DECIDERS[:2])
def test_decider_outvotes_every_small_side(name, params, k, budgets):
    g = make_family(name, params)
    cert = find_relative_decider(g, k, budgets)
    inner = 4
    L = max(inner, g.max_level(cert.X)) + 2
    for s in enumerate_end_separations(g, k, inner, L):
        votes = majority_counts(s.side_of, cert.X)
        assert votes.a_only + votes.separator + votes.b_only == k
        assert votes.a_only < votes.b_only, s.render()
