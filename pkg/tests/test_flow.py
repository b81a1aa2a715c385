import math

import pytest

from endtangle.errors import CountTooLarge, EmptySource, HorizonTooSmall, InvalidParam
from endtangle.flow import (
    UNBOUNDED,
    Ray,
    disjoint_rays,
    min_cut_to_terminal,
    min_end_separator,
    separator_sequence,
    vertex_cut,
)
from endtangle.graphs import ball, make_family, truncate

PATH = {"a": ["b"], "b": ["a", "c"], "c": ["b"]}
DIAMOND = {"a": ["b", "c"], "b": ["a", "d"], "c": ["a", "d"], "d": ["b", "c"]}


def test_vertex_cut_nearest_source():
    cut = vertex_cut(PATH, ["a"], ["c"])
    assert cut.value == 1
    assert cut.cut_vertices == {"a"}
    assert cut.path_system == (("a", "b", "c"),)


def test_vertex_cut_uncuttable_ends():
    cut = vertex_cut(PATH, ["a"], ["c"], uncuttable={"a", "c"})
    assert cut.value == 1
    assert cut.cut_vertices == {"b"}


def test_vertex_cut_two_paths():
    cut = vertex_cut(DIAMOND, ["a"], ["d"], uncuttable={"a", "d"})
    assert cut.value == 2
    assert cut.cut_vertices == {"b", "c"}
    assert sorted(cut.path_system) == [("a", "b", "d"), ("a", "c", "d")]


def test_vertex_cut_unbounded():
    adj = {"a": ["d"], "d": ["a"]}
    cut = vertex_cut(adj, ["a"], ["d"], uncuttable={"a", "d"})
    assert cut is UNBOUNDED
    assert cut.unbounded
    assert math.isinf(cut.value)


def test_vertex_cut_empty_sources():
    assert vertex_cut(PATH, [], ["c"]).value == 0


def test_min_cut_to_terminal_grid():
    g = make_family("grid")
    t = truncate(g, 6)
    cut = min_cut_to_terminal(t, ball(g, 1))
    assert cut.value == 3
    assert cut.cut_vertices == {(0, 1), (1, 1), (1, 0)}
    assert len(cut.path_system) == 3


def test_min_cut_to_terminal_errors():
    g = make_family("ray")
    t = truncate(g, 4)
    with pytest.raises(EmptySource):
        min_cut_to_terminal(t, [])
    with pytest.raises(InvalidParam):
        min_cut_to_terminal(t, [("v", 9)])


def test_min_end_separator_dominated_ray():
    g = make_family("dominated_ray", {"m": 2})
    cuttable = min_end_separator(g, [("r", 0)], 12, 3)
    assert cuttable.value == 1
    assert cuttable.separator == {("r", 0)}

    scan = min_end_separator(g, [("r", 0)], 12, 3, forbid_sources=True)
    assert scan.value == 3
    assert scan.separator == {("a", 0), ("a", 1), ("r", 1)}
    assert scan.stabilized and scan.certified
    assert set(scan.series) == {3}


def test_min_end_separator_series_never_rises():
    g = make_family("grid")
    scan = min_end_separator(g, ball(g, 2), 12, 3)
    assert scan.value == 5
    assert list(scan.series) == sorted(scan.series, reverse=True)
    assert scan.certified


def test_min_end_separator_horizon():
    with pytest.raises(HorizonTooSmall):
        min_end_separator(make_family("ray"), [("v", 5)], 7, 3)


def test_separator_sequence_grid():
    g = make_family("grid")
    seq = separator_sequence(g, [(0, 0)], 2, 10)
    assert seq.sizes == (1, 2, 3)
    assert seq.sets[1] == {(0, 1), (1, 0)}
    assert [len(step) for step in seq.links] == [2, 3]
    for step, (prev, nxt) in zip(seq.links, zip(seq.sets, seq.sets[1:])):
        for path in step:
            assert path[0] in prev and path[-1] in nxt


def test_disjoint_rays_ladder():
    g = make_family("ladder", {"m": 3})
    rays = disjoint_rays(g, ball(g, 0), 3, 8)
    assert [r.start for r in rays] == [(0, 0), (1, 0), (2, 0)]
    lines = [set(r.upto(12)) for r in rays]
    assert all(len(line) == 13 for line in lines)
    assert not (lines[0] & lines[1] or lines[0] & lines[2] or lines[1] & lines[2])


def test_disjoint_rays_too_many():
    with pytest.raises(CountTooLarge):
        disjoint_rays(make_family("ray"), [("v", 0)], 2, 6)


def test_disjoint_rays_end_on_ray_vertices():
    g = make_family("dominated_ray", {"m": 1})
    (r,) = disjoint_rays(g, [("r", 0)], 1, 6)
    line = r.upto(8)
    assert r.start == ("r", 0)
    assert line[-1] == ("r", 8)
    assert len(line) == len(set(line))

    (r,) = disjoint_rays(g, [("r", 0)], 1, 6, removed=[("a", 0)])
    assert r.upto(8) == tuple(("r", i) for i in range(9))


def test_ray_iteration():
    g = make_family("ray")
    r = Ray(g, [("v", 2), ("v", 3)], 3)
    assert r.start == ("v", 2)
    assert r.upto(5) == (("v", 2), ("v", 3), ("v", 4), ("v", 5))
