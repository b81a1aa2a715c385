import itertools

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from endtangle.errors import HorizonTooSmall, InvalidParam, ResourceBudgetExceeded, UnknownFamily
from endtangle.graphs import (
    FAMILIES,
    ComponentLabel,
    ball,
    components_without,
    finite_components,
    make_family,
    parse_family_spec,
    reaches_frontier,
    truncate,
)

PROPERTY_SETTINGS = settings(
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)


def v(i):
    return ("v", i)


def test_make_family_catalogue():
    assert set(FAMILIES) == {"ray", "ladder", "grid", "clique_ray", "dominated_ray", "complete"}
    assert repr(make_family("ladder", {"m": 3})) == "ladder(m=3)"
    assert make_family("complete").params == {"w": 2}


def test_make_family_errors():
    with pytest.raises(UnknownFamily):
        make_family("torus")
    with pytest.raises(InvalidParam):
        make_family("ladder")
    with pytest.raises(InvalidParam):
        make_family("ladder", {"m": 0})
    with pytest.raises(InvalidParam):
        make_family("ray", {"m": 2})
    with pytest.raises(InvalidParam):
        make_family("dominated_ray", {"m": True})


def test_parse_family_spec():
    g = parse_family_spec("# a ladder\nfamily=ladder\n\nparam.m=3\n")
    assert g.name == "ladder"
    assert g.params == {"m": 3}

    again = parse_family_spec(g.spec_text())
    assert again.name == g.name and again.params == g.params


@pytest.mark.parametrize("text", [
    "param.m=3\n",
    "family=ladder\nparam.m=three\n",
    "family=ladder\nm=3\n",
    "family ladder\n",
])
def test_parse_family_spec_errors(text):
    with pytest.raises(InvalidParam):
        parse_family_spec(text)


def test_labels():
    assert make_family("ray").label(v(3)) == "v_3"
    assert make_family("grid").label((1, 2)) == "(1,2)"
    g = make_family("dominated_ray", {"m": 1})
    assert g.label(("r", 4)) == "r_4"
    assert g.label(("a", 0)) == "a_0"
    assert make_family("complete").label(("k", 5)) == "k_5"


def test_truncate_ray():
    t = truncate(make_family("ray"), 5)
    assert len(t) == 6
    assert t.frontier == {v(5)}
    assert v(5) in t and v(6) not in t
    assert t.adjacency[v(5)] == (v(4),)


def test_truncate_dominated_ray():
    g = make_family("dominated_ray", {"m": 2})
    t = truncate(g, 4)
    assert t.frontier == {("r", 4), ("a", 0), ("a", 1)}
    assert g.neighbors_upto(("a", 0), 3) == [("r", i) for i in range(4)]
    assert g.tail(("a", 0), 4) is None


def test_truncate_grid():
    t = truncate(make_family("grid"), 2)
    assert len(t) == 9
    assert t.frontier == {(0, 2), (1, 2), (2, 2), (2, 0), (2, 1)}
    assert len(t.edges) == 12


def test_truncate_limits():
    g = make_family("grid")
    with pytest.raises(ResourceBudgetExceeded):
        truncate(g, 10, max_vertices=50)
    with pytest.raises(HorizonTooSmall):
        truncate(g, -1)


def test_truncate_removed():
    g = make_family("dominated_ray", {"m": 2})
    t = truncate(g, 3, removed=[("a", 0), ("a", 1)])
    assert t.frontier == {("r", 3)}
    assert ("a", 0) not in t


def test_ball():
    g = make_family("ray")
    assert ball(g, 2) == [v(0), v(1), v(2)]
    assert ball(g, 2, removed=[v(1)]) == [v(0), v(2)]


def test_grid_tails_are_disjoint():
    g = make_family("grid")
    t = truncate(g, 3)
    prefixes = [tuple(itertools.islice(g.tail(u, 3), 6)) for u in g.sort(t.frontier)]
    for p in prefixes:
        assert all(g.level(x) > 3 for x in p)
    flat = [x for p in prefixes for x in p]
    assert len(flat) == len(set(flat))
    assert next(g.tail((1, 3), 3)) == (1, 4)
    assert next(g.tail((3, 0), 3)) == (4, 0)


def test_complete_tails_are_disjoint():
    g = make_family("complete")
    t = truncate(g, 1)
    assert len(t) == 4
    prefixes = [tuple(itertools.islice(g.tail(u, 1), 5)) for u in g.sort(t.frontier)]
    assert prefixes[0][:2] == (("k", 4), ("k", 8))
    flat = [x for p in prefixes for x in p]
    assert len(flat) == len(set(flat))


def test_finite_components_ray():
    t = truncate(make_family("ray"), 5)
    assert finite_components(t, [v(2)]) == (frozenset({v(0), v(1)}),)
    assert finite_components(t, []) == ()


def test_components_without():
    g = make_family("ray")
    comps = components_without(g, [v(2)], 5)
    assert [(c.rep, c.label) for c in comps] == [
        (v(3), ComponentLabel.CONTAINS_END),
        (v(0), ComponentLabel.FINITE),
    ]
    with pytest.raises(HorizonTooSmall):
        components_without(g, [v(2)], 2)


def test_components_without_dominated():
    g = make_family("dominated_ray", {"m": 1})
    comps = components_without(g, [("a", 0), ("r", 2)], 5)
    finite = [c for c in comps if c.label is ComponentLabel.FINITE]
    assert [c.vertices for c in finite] == [frozenset({("r", 0), ("r", 1)})]


def test_reaches_frontier():
    t = truncate(make_family("ray"), 5)
    assert not reaches_frontier(t, [v(2)], v(0))
    assert reaches_frontier(t, [v(2)], v(4))
    assert not reaches_frontier(t, [v(2)], v(2))


FIXTURES = [
    make_family("ray"),
    make_family("ladder", {"m": 2}),
    make_family("grid"),
    make_family("clique_ray"),
    make_family("dominated_ray", {"m": 1}),
]


@st.composite
def _separator_and_windows(draw):
    g = draw(st.sampled_from(FIXTURES))
    X = draw(st.sets(st.sampled_from(ball(g, 3)), max_size=4))
    base = max(g.max_level(X), 0) + 1
    L1 = draw(st.integers(min_value=base, max_value=base + 3))
    L2 = L1 + draw(st.integers(min_value=1, max_value=4))
    return g, X, L1, L2


@PROPERTY_SETTINGS
@given(_separator_and_windows())
def test_finite_components_do_not_depend_on_window(case):
    g, X, L1, L2 = case
    first = finite_components(truncate(g, L1), X)
    second = finite_components(truncate(g, L2), X)
    assert first == second
    top = g.max_level(X)
    assert all(g.level(u) <= top for comp in first for u in comp)


ALL_FAMILIES = FIXTURES + [make_family("complete")]


@st.composite
def _deep_vertex_outside(draw):
    g = draw(st.sampled_from(ALL_FAMILIES))
    X = draw(st.sets(st.sampled_from(ball(g, 6)), max_size=4))
    top = g.max_level(X)
    u = draw(st.sampled_from(g.level_vertices(top + 1 + draw(st.integers(0, 3)))))
    return g, X, u


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(_deep_vertex_outside())
def test_deep_vertices_escape_to_the_end(case):
    g, X, u = case
    top = max(g.max_level(X), 0)
    for L in range(max(top + 1, g.level(u)), top + 7):
        assert reaches_frontier(truncate(g, L), X, u)


@PROPERTY_SETTINGS
@given(st.sampled_from(ALL_FAMILIES), st.integers(min_value=0, max_value=2000))
def test_canonical_ray_is_a_ray(g, i):
    here, nxt = g.canonical_ray(i), g.canonical_ray(i + 1)
    assert here != nxt
    assert nxt in g.neighbors_upto(here, g.level(nxt))
    assert g.level(g.canonical_ray(i + 10 * g.count_upto(0))) > g.level(here)


@PROPERTY_SETTINGS
@given(_separator_and_windows())
def test_components_without_is_stable(case):
    g, X, L1, L2 = case
    first = components_without(g, X, L1)
    second = components_without(g, X, L2)

    def finite(comps):
        return {c.vertices for c in comps if c.label is ComponentLabel.FINITE}

    assert finite(first) == finite(second)
    end_first = [c for c in first if c.label is ComponentLabel.CONTAINS_END]
    end_second = [c for c in second if c.label is ComponentLabel.CONTAINS_END]
    assert len(end_second) == 1
    if end_first:
        (a,), (b,) = end_first, end_second
        assert a.rep == b.rep
        assert a.vertices <= b.vertices
