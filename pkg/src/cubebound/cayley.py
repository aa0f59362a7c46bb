"""Finite exploration of the Cayley graph in the edge-path metric.

The Cayley graph (involution edges collapsed) is the 1-skeleton of the
Davis/Salvetti cube complex, which is a median graph.  Distances are word
lengths of normal forms; intervals are sets of trace prefixes.
"""
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .errors import NotGeodesic, ResourceLimit
from .group import GroupElement, _same_graph, append_letter, dependent, inverse_word, reduce_word

DEFAULT_CAP = 5_000_000


@dataclass(frozen=True)
class GeodesicPath:
    """A geodesic edge path starting at ``base`` and reading ``word``."""

    base: GroupElement
    word: tuple

    def __post_init__(self):
        graph = self.base.graph
        word = graph.check_word(self.word)
        if len(reduce_word(graph, word)) != len(word):
            raise NotGeodesic(graph.format_word(word))
        object.__setattr__(self, "word", word)

    @property
    def graph(self):
        return self.base.graph

    def __len__(self):
        return len(self.word)

    @cached_property
    def vertex_words(self):
        """Normal forms of the path vertices ``base, base*l1, base*l1*l2, ...``."""
        graph = self.graph
        out = [self.base.nf]
        for c in self.word:
            out.append(append_letter(graph, out[-1], c))
        return tuple(out)

    @property
    def vertices(self):
        return [GroupElement(self.graph, nf) for nf in self.vertex_words]

    def vertex(self, i):
        return GroupElement(self.graph, self.vertex_words[i])


@dataclass(frozen=True)
class Ball:
    center: GroupElement
    radius: int
    elements: tuple

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return distance(self.center, g) <= self.radius


@lru_cache(maxsize=32)
def ball_words(graph, radius, cap=DEFAULT_CAP):
    """Normal forms of length <= radius, by length then lexicographically."""
    layers = [((),)]
    total = 1
    for r in range(1, radius + 1):
        nxt = set()
        for u in layers[-1]:
            for c in graph.codes:
                v = append_letter(graph, u, c)
                if len(v) == r:
                    nxt.add(v)
        total += len(nxt)
        if total > cap:
            raise ResourceLimit(f"ball of radius {radius} exceeds {cap} elements")
        layers.append(tuple(sorted(nxt)))
    return tuple(w for layer in layers for w in layer)


def ball(graph, center, radius, cap=DEFAULT_CAP):
    """All elements within ``radius`` of ``center`` in BFS order.

    Ties inside a sphere are broken by ShortLex order of the offset
    ``center^-1 * g``.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    offsets = ball_words(graph, radius, cap)
    elems = []
    for u in offsets:
        nf = center.nf
        for c in u:
            nf = append_letter(graph, nf, c)
        elems.append(GroupElement(graph, nf))
    return Ball(center, radius, tuple(elems))


def relative(graph, g_nf, h_nf):
    """Normal form of ``g^-1 h`` for normal-form tuples."""
    out = inverse_word(graph, g_nf)
    for c in h_nf:
        out = append_letter(graph, out, c)
    return out


def dist_nf(graph, g_nf, h_nf):
    return len(relative(graph, g_nf, h_nf))


def distance(g, h):
    _same_graph(g, h)
    return dist_nf(g.graph, g.nf, h.nf)


def _minimal_positions(graph, word):
    """Indices of letters that can be moved to the front of ``word``."""
    out = []
    blocked = []
    for i, c in enumerate(word):
        if not any(dependent(graph, d, c) for d in blocked):
            out.append(i)
        blocked.append(c)
    return out


def trace_prefixes(graph, word, cap=DEFAULT_CAP):
    """Every normal-form prefix ``u`` of the geodesic ``word`` (``|u| + |u^-1 w| = |w|``)."""
    start = ((), tuple(word))
    seen = {()}
    frontier = [start]
    while frontier:
        nxt = []
        for u, rest in frontier:
            for i in _minimal_positions(graph, rest):
                v = append_letter(graph, u, rest[i])
                if v not in seen:
                    seen.add(v)
                    if len(seen) > cap:
                        raise ResourceLimit(f"interval exceeds {cap} elements")
                    nxt.append((v, rest[:i] + rest[i + 1:]))
        frontier = nxt
    return seen


def interval(g, h, cap=DEFAULT_CAP):
    """The median-graph interval ``{z : d(g,z) + d(z,h) = d(g,h)}``."""
    _same_graph(g, h)
    graph = g.graph
    w = relative(graph, g.nf, h.nf)
    out = set()
    for u in trace_prefixes(graph, w, cap):
        nf = g.nf
        for c in u:
            nf = append_letter(graph, nf, c)
        out.add(GroupElement(graph, nf))
    return out


def common_prefix(graph, u, v):
    """Greatest common trace prefix of two geodesic words (their meet)."""
    u, v = list(u), list(v)
    out = ()
    progress = True
    while progress:
        progress = False
        mu = {u[i]: i for i in reversed(_minimal_positions(graph, u))}
        for j in _minimal_positions(graph, v):
            c = v[j]
            if c in mu:
                del u[mu[c]]
                del v[j]
                out = append_letter(graph, out, c)
                progress = True
                break
    return out


def median(x, y, z):
    """Median of three vertices of the (median) Cayley graph."""
    _same_graph(x, y)
    _same_graph(x, z)
    graph = x.graph
    m = common_prefix(graph, relative(graph, x.nf, y.nf), relative(graph, x.nf, z.nf))
    nf = x.nf
    for c in m:
        nf = append_letter(graph, nf, c)
    return GroupElement(graph, nf)


def gate_distance(graph, p_nf, x_nf, y_nf):
    """Distance from ``p`` to the interval ``I(x, y)``, via the median of (p, x, y)."""
    return (dist_nf(graph, p_nf, x_nf) + dist_nf(graph, p_nf, y_nf) - dist_nf(graph, x_nf, y_nf)) // 2


def project_indices(path, x_nf):
    """Indices of path vertices nearest to ``x`` and the nearest distance."""
    graph = path.graph
    dists = [dist_nf(graph, x_nf, v) for v in path.vertex_words]
    best = min(dists)
    return [i for i, d in enumerate(dists) if d == best], best


def project(path, x):
    """Nearest path vertices to ``x`` (all ties)."""
    _same_graph(path.base, x)
    idx, _ = project_indices(path, x.nf)
    return frozenset(path.vertex(i) for i in idx)
