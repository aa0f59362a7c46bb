"""Built-in presentation graphs.

The hexagon is labelled the same way as the hexagon inside ``gamma1`` and
``gamma2``: the cycle runs 1-2-3-6-5-4-1, so ``link(h1) = {h2, h4}``.

``gamma1`` and ``gamma2`` adjacency was transcribed from the figure of the
four defining graphs (hexagon, K_{3,3}, and the two amalgams):

* gamma1: hexagon c1-c2-c3-c6-c5-c4-c1 glued to K_{3,3} with parts
  {c4, c6, d2} and {c5, d1, d3} along the path c4-c5-c6.
* gamma2: hexagon a1-a2-a3-a6-a5-a4-a1, a second hexagon a4-a5-a6-b3-b2-b1-a4,
  and K_{3,3} with parts {b1, b3, b5} and {b2, b4, b6}.
"""
from functools import lru_cache

from .group import parse_presentation


def _cycle(names):
    return [(names[i], names[(i + 1) % len(names)]) for i in range(len(names))]


def _ggp(gens, order, edges):
    lines = [f"gen {g} {order}" for g in gens]
    seen = set()
    for a, b in edges:
        key = frozenset((a, b))
        if key not in seen:
            seen.add(key)
            lines.append(f"rel {a} {b}")
    return "\n".join(lines) + "\n"


def _bipartite(left, right):
    return [(a, b) for a in left for b in right]


SOURCES = {
    "hexagon": _ggp(
        [f"h{i}" for i in range(1, 7)], 2, _cycle(["h1", "h2", "h3", "h6", "h5", "h4"])
    ),
    "k33": _ggp(
        ["x1", "x2", "x3", "y1", "y2", "y3"], 2, _bipartite(["x1", "x2", "x3"], ["y1", "y2", "y3"])
    ),
    "gamma1": _ggp(
        ["c1", "c2", "c3", "c4", "c5", "c6", "d1", "d2", "d3"],
        2,
        _cycle(["c1", "c2", "c3", "c6", "c5", "c4"]) + _bipartite(["c4", "c6", "d2"], ["c5", "d1", "d3"]),
    ),
    "gamma2": _ggp(
        [f"a{i}" for i in range(1, 7)] + [f"b{i}" for i in range(1, 7)],
        2,
        _cycle(["a1", "a2", "a3", "a6", "a5", "a4"])
        + _cycle(["a4", "a5", "a6", "b3", "b2", "b1"])
        + _bipartite(["b1", "b3", "b5"], ["b2", "b4", "b6"]),
    ),
    "croke-kleiner": _ggp(["a", "b", "c", "d"], "inf", [("a", "b"), ("b", "c"), ("c", "d")]),
    "tree3": _ggp(["t1", "t2", "t3"], 2, []),
}

NAMES = tuple(SOURCES)


@lru_cache(maxsize=None)
def builtin(name):
    try:
        text = SOURCES[name]
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; choose from {', '.join(NAMES)}") from None
    return parse_presentation(text)
