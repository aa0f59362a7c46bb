from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubebound import GeodesicPath, NotGeodesic, ball, builtin, distance, interval, median, normal_form, project
from cubebound.catalog import NAMES
from cubebound.cayley import ball_words
from cubebound.group import reduce_word

import oracles


def el(graph, text):
    return normal_form(graph, text)


def test_ball_examples(hexagon, ck):
    e = hexagon.identity()
    assert len(ball(hexagon, e, 1)) == 7
    assert len(ball(ck, ck.identity(), 1)) == 9
    assert len(ball(hexagon, e, 3)) == 121


@pytest.mark.parametrize("name", NAMES)
def test_sphere_sizes_match_oracle(name):
    g = builtin(name)
    mine = Counter(len(w) for w in ball_words(g, 4))
    theirs = Counter(d for d, _ in oracles.ElementOracle(g).ball(4).values())
    assert mine == theirs


def test_ball_centered_elsewhere(hexagon):
    c = el(hexagon, "h1 h3")
    b = ball(hexagon, c, 2)
    assert b.elements[0] == c
    assert all(distance(c, x) <= 2 for x in b.elements)
    assert len(set(b.elements)) == len(ball(hexagon, hexagon.identity(), 2))
    assert el(hexagon, "h1") in b


def test_distance_examples(hexagon, ck):
    e = hexagon.identity()
    assert distance(e, el(hexagon, "h1 h2")) == 2
    assert distance(el(hexagon, "h1"), el(hexagon, "h2")) == 2
    assert distance(ck.identity(), el(ck, "a b a b")) == 4
    assert oracles.distance(ck, (), ck.parse_word("a b a b")) == 4


def test_interval_examples(hexagon, ck):
    e = hexagon.identity()
    got = {str(x) for x in interval(e, el(hexagon, "h1 h2"))}
    assert got == {"ε", "h1", "h2", "h1 h2"}
    got = {str(x) for x in interval(e, el(hexagon, "h1 h3"))}
    assert got == {"ε", "h1", "h1 h3"}
    assert len(interval(ck.identity(), el(ck, "a b"))) == 4


def test_geodesic_path_rejects_backtracking(hexagon):
    with pytest.raises(NotGeodesic):
        GeodesicPath(hexagon.identity(), hexagon.parse_word("h1 h2 h1"))


def test_project_examples(hexagon, k33):
    path = GeodesicPath(hexagon.identity(), hexagon.parse_word("h1 h3"))
    assert project(path, el(hexagon, "h1")) == {el(hexagon, "h1")}
    assert project(path, el(hexagon, "h2")) == {hexagon.identity()}
    diag = k33.parse_word("x1 y1 x2 y2") * 2
    path = GeodesicPath(k33.identity(), diag)
    x = el(k33, "x1 y1 x2 y2 x3 y3")
    words = [diag[:i] for i in range(len(diag) + 1)]
    idx, d = oracles.projection(k33, words, x.nf)
    assert (idx, d) == ([4], 2)
    assert project(path, x) == {path.vertex(i) for i in idx}


@settings(max_examples=100, deadline=None)
@given(data=st.data(), name=st.sampled_from(NAMES))
def test_distance_matches_oracle(data, name):
    g = builtin(name)
    u = data.draw(st.lists(st.sampled_from(g.codes), max_size=8))
    v = data.draw(st.lists(st.sampled_from(g.codes), max_size=8))
    x, y = normal_form(g, u), normal_form(g, v)
    assert distance(x, y) == oracles.distance(g, u, v)
    assert distance(x, y) == distance(y, x)


@settings(max_examples=60, deadline=None)
@given(data=st.data(), name=st.sampled_from(["hexagon", "k33", "croke-kleiner"]))
def test_interval_matches_oracle(data, name):
    g = builtin(name)
    u = data.draw(st.lists(st.sampled_from(g.codes), max_size=5))
    v = data.draw(st.lists(st.sampled_from(g.codes), max_size=5))
    x, y = normal_form(g, u), normal_form(g, v)
    mine = {z.nf for z in interval(x, y)}
    o = oracles.ElementOracle(g)
    theirs = {o.key(w) for w in oracles.interval(g, x.nf, y.nf)}
    assert {o.key(w) for w in mine} == theirs
    assert len(mine) == len(theirs)


@settings(max_examples=60, deadline=None)
@given(data=st.data(), name=st.sampled_from(["hexagon", "croke-kleiner", "gamma1"]))
def test_median_lies_in_all_three_intervals(data, name):
    g = builtin(name)
    pts = [normal_form(g, data.draw(st.lists(st.sampled_from(g.codes), max_size=5))) for _ in range(3)]
    m = median(*pts)
    for a, b in ((0, 1), (1, 2), (0, 2)):
        assert distance(pts[a], m) + distance(m, pts[b]) == distance(pts[a], pts[b])
    assert median(pts[1], pts[2], pts[0]) == m


def test_ball_words_are_normal_forms(any_builtin):
    for w in ball_words(any_builtin, 3):
        assert reduce_word(any_builtin, w) == w
