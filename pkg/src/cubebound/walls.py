"""Hyperplanes (walls) of the Davis/Salvetti complex.

A wall is named algebraically by its type (the generator labelling its dual
edges) and a canonical coset key.  For a dual edge at ``tail`` labelled by
generator ``v`` with link ``L``, the dual edges of the wall are exactly the
``v``-edges leaving the coset ``tail<L>``; the key is the minimal-length
representative of that coset (for an involution, of whichever of the two
cosets on either side is ShortLex-smaller).
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from .cayley import DEFAULT_CAP, relative
from .errors import GraphMismatch, InvalidLetter, NotGeodesic, PreconditionError, ResourceLimit
from .group import GroupElement, _same_graph, append_letter, dependence_comparable, dependent, reduce_word


def _strip_right(graph, word, mask):
    """Remove right divisors with generators in ``mask`` until none remain."""
    word = list(word)
    while True:
        best = None
        tail_gens = 0
        for i in range(len(word) - 1, -1, -1):
            g = word[i] >> 1
            if mask >> g & 1 and not tail_gens & _dep_mask(graph, g):
                if best is None or word[i] > word[best]:
                    best = i
            tail_gens |= 1 << g
        if best is None:
            return tuple(word)
        del word[best]


def _strip_left(graph, word, mask):
    word = list(word)
    changed = False
    while True:
        head_gens = 0
        hit = None
        for i, c in enumerate(word):
            g = c >> 1
            if mask >> g & 1 and not head_gens & _dep_mask(graph, g):
                hit = i
                break
            head_gens |= 1 << g
        if hit is None:
            return word, changed
        del word[hit]
        changed = True


def _dep_mask(graph, g):
    """Bitmask of generators dependent on ``g`` (itself and non-neighbours)."""
    return ~graph.link_masks[g]


def coset_key(graph, word, mask):
    """Minimal-length representative of ``word * <mask>`` (normal form)."""
    return _strip_right(graph, word, mask)


def _shortlex(w):
    return (len(w), w)


@dataclass(frozen=True)
class Wall:
    """A hyperplane named by ``(type, key)``; ``source`` records one dual edge."""

    graph: object = field(repr=False)
    type: int
    key: tuple
    source: tuple = field(default=None, compare=False)

    def __hash__(self):
        return hash((self.type, self.key))

    @property
    def link_mask(self):
        return self.graph.link_masks[self.type]

    def carrier_cosets(self):
        """Keys of the two cosets of ``<link>`` on either side of the wall."""
        cached = self.__dict__.get("_cosets")
        if cached is None:
            cached = (self.key, append_letter(self.graph, self.key, 2 * self.type))
            object.__setattr__(self, "_cosets", cached)
        return cached

    def dual_edge(self):
        """Endpoints ``(p, q)`` of the source dual edge as normal forms."""
        tail, code = self.source
        return tail, append_letter(self.graph, tail, code)

    def translate(self, g_nf):
        """The wall ``g * self``."""
        tail, code = self.source
        nf = g_nf
        for c in tail:
            nf = append_letter(self.graph, nf, c)
        return wall_of_edge(self.graph, nf, code)

    def to_json(self):
        return {"type": self.graph.names[self.type], "key": self.graph.format_word(self.key)}

    def __str__(self):
        return f"{self.graph.names[self.type]}@{self.graph.format_word(self.key) or 'ε'}"


def wall_of_edge(graph, tail, code):
    """The wall dual to the edge from ``tail`` labelled by letter ``code``."""
    if isinstance(tail, GroupElement):
        if tail.graph is not graph and tail.graph != graph:
            raise GraphMismatch("tail belongs to a different graph")
        tail = tail.nf
    if not (0 <= code < len(graph.inverse_code)) or graph.inverse_code[code] < 0:
        raise InvalidLetter(f"invalid letter code {code!r}")
    v = code >> 1
    mask = graph.link_masks[v]
    if graph.orders[v] == 2:
        k1 = coset_key(graph, tail, mask)
        k2 = coset_key(graph, append_letter(graph, tail, code), mask)
        key = min(k1, k2, key=_shortlex)
    else:
        positive_tail = append_letter(graph, tail, code) if code & 1 else tail
        key = coset_key(graph, positive_tail, mask)
    return Wall(graph, v, key, (tuple(tail), code))


def walls_of_path(path):
    """One wall per edge of a geodesic path, in order; all pairwise distinct."""
    graph = path.graph
    tails = path.vertex_words
    return [wall_of_edge(graph, tails[i], c) for i, c in enumerate(path.word)]


def product_membership(graph, w, A, B):
    """Decide ``w in <A><B>`` for generator sets (or bitmasks) ``A``, ``B``."""
    if isinstance(w, GroupElement):
        w = w.nf
    a = A if isinstance(A, int) else graph.mask(A)
    b = B if isinstance(B, int) else graph.mask(B)
    word = list(w)
    changed = True
    while changed and word:
        word, changed_left = _strip_left(graph, word, a)
        stripped = _strip_right(graph, word, b)
        changed = changed_left or len(stripped) != len(word)
        word = list(stripped)
    return not word


def crosses_carrier(w1, w2):
    """Algorithm A: commuting distinct types and intersecting carriers."""
    graph = w1.graph
    if w1.type == w2.type or not graph.commute(w1.type, w2.type):
        return False
    m1, m2 = w1.link_mask, w2.link_mask
    for c1 in w1.carrier_cosets():
        for c2 in w2.carrier_cosets():
            if product_membership(graph, relative(graph, c1, c2), m1, m2):
                return True
    return False


def crosses_heap(w1, w2):
    """Algorithm B: locate both walls on one geodesic and compare in its heap."""
    graph = w1.graph
    if w1 == w2:
        return False
    if w1.source is None or w2.source is None:
        raise PreconditionError("heap crossing test needs walls with source edges")
    p1, q1 = w1.dual_edge()
    p2, q2 = w2.dual_edge()
    x = p1 if len(relative(graph, p1, p2)) > len(relative(graph, q1, p2)) else q1
    y = p2 if len(relative(graph, p2, x)) > len(relative(graph, q2, x)) else q2
    w = relative(graph, x, y)
    positions = {}
    nf = x
    for i, c in enumerate(w, start=1):
        wall = wall_of_edge(graph, nf, c)
        if wall == w1 or wall == w2:
            positions[wall == w1] = i
        nf = append_letter(graph, nf, c)
    i, j = sorted(positions.values())
    return not dependence_comparable(graph, w, i, j)


def crosses(w1, w2, check=False):
    """Whether two walls intersect.  With ``check`` both algorithms must agree."""
    if w1.graph is not w2.graph and w1.graph != w2.graph:
        raise GraphMismatch("walls belong to different graphs")
    a = crosses_carrier(w1, w2)
    if check:
        b = crosses_heap(w1, w2)
        if a != b:
            raise AssertionError(f"crossing algorithms disagree on {w1}, {w2}: {a} vs {b}")
    return a


def separates(wall, x, y):
    """Whether ``wall`` separates vertices ``x`` and ``y``."""
    _same_graph(x, y)
    graph = x.graph
    nf = x.nf
    for c in relative(graph, x.nf, y.nf):
        if wall_of_edge(graph, nf, c) == wall:
            return True
        nf = append_letter(graph, nf, c)
    return False


class Relation(str, Enum):
    EQUAL = "EQUAL"
    CROSSING = "CROSSING"
    DISJOINT = "DISJOINT"


@dataclass(frozen=True)
class SeparationVerdict:
    relation: Relation
    crossing_both_count: int
    search_radius: int
    certified_over_k: int = None
    witnesses: tuple = ()
    exhaustive: bool = True

    def k_separated(self, k):
        """``count <= k`` within the search radius (never certified beyond it)."""
        return self.relation is Relation.DISJOINT and self.crossing_both_count <= k

    def to_json(self):
        return {
            "relation": self.relation.value,
            "crossing_both_count": self.crossing_both_count,
            "search_radius": self.search_radius,
            "certified_over_k": self.certified_over_k,
            "exhaustive": self.exhaustive,
            "witnesses": [w.to_json() for w in self.witnesses],
        }


@lru_cache(maxsize=64)
def _sphere(graph, r):
    """Normal forms of length exactly ``r``, sorted."""
    if r == 0:
        return ((),)
    out = set()
    for u in _sphere(graph, r - 1):
        for c in graph.codes:
            v = append_letter(graph, u, c)
            if len(v) == r:
                out.add(v)
    return tuple(sorted(out))


@lru_cache(maxsize=64)
def _wall_layer(graph, r):
    """Walls whose first dual edge (in BFS order) reaches the sphere of radius ``r``."""
    # the Cayley graph is bipartite by length, so every edge joins spheres r-1 and r
    seen = set()
    for q in range(1, r):
        seen.update(_wall_layer(graph, q))
    out = {}
    for u in _sphere(graph, r - 1):
        for c in graph.codes:
            v = append_letter(graph, u, c)
            if len(v) != r:
                continue
            wall = wall_of_edge(graph, u, c)
            if wall not in seen and wall not in out:
                out[wall] = wall
    return tuple(out)


def iter_walls_in_ball(graph, radius, cap=DEFAULT_CAP):
    """Lazily yield the walls of :func:`walls_in_ball`, one BFS layer at a time."""
    total = 1
    for r in range(1, radius + 1):
        total += len(_sphere(graph, r))
        if total > cap:
            raise ResourceLimit(f"ball of radius {radius} exceeds {cap} elements")
        yield from _wall_layer(graph, r)


def walls_in_ball(graph, radius, cap=DEFAULT_CAP):
    """Distinct walls dual to edges with both endpoints in ``ball(e, radius)``.

    Ordered by first appearance in BFS order.  Each entry is a :class:`Wall`.
    """
    return tuple(iter_walls_in_ball(graph, radius, cap))


def _center(graph, w1, w2):
    """Midpoint of a shortest geodesic joining the two source dual edges."""
    best = None
    for u in w1.dual_edge():
        for v in w2.dual_edge():
            rel = relative(graph, u, v)
            if best is None or len(rel) < len(best[1]):
                best = (u, rel)
    u, rel = best
    nf = u
    for c in rel[: len(rel) // 2]:
        nf = append_letter(graph, nf, c)
    return nf


def separation(w1, w2, radius, threshold=None, stop_above=None):
    """Classify a wall pair and count walls crossing both near their connection.

    The count covers walls dual to an edge inside the ball of ``radius``
    around the midpoint of a shortest geodesic between the source dual edges.
    With ``stop_above`` the enumeration stops once the count exceeds it and
    the verdict is marked non-exhaustive (the count is then a lower bound).
    """
    if w1.graph is not w2.graph and w1.graph != w2.graph:
        raise GraphMismatch("walls belong to different graphs")
    if radius < 1:
        raise ValueError("radius must be >= 1")
    if w1 == w2:
        return SeparationVerdict(Relation.EQUAL, 0, radius)
    if crosses(w1, w2):
        return SeparationVerdict(Relation.CROSSING, 0, radius)
    graph = w1.graph
    center = _center(graph, w1, w2)
    inv_center = reduce_word(graph, [graph.inverse_code[c] for c in reversed(center)])
    count, found, exhaustive = _count_crossing_both(
        graph, w1.translate(inv_center), w2.translate(inv_center), radius, stop_above
    )
    witnesses = tuple(sorted((w.translate(center) for w in found), key=lambda w: (w.type, _shortlex(w.key))))
    certified = threshold if threshold is not None and count > threshold else None
    return SeparationVerdict(Relation.DISJOINT, count, radius, certified, witnesses, exhaustive)


class _CrossingProbe:
    """Fast repeated crossing tests of many walls against one fixed wall."""

    def __init__(self, wall):
        graph = wall.graph
        self.graph = graph
        self.type = wall.type
        self.mask = wall.link_mask
        inv = graph.inverse_code
        self.inv_cosets = [reduce_word(graph, [inv[c] for c in reversed(k)]) for k in wall.carrier_cosets()]

    def crosses(self, wall):
        graph = self.graph
        if wall.type == self.type or not graph.commute(wall.type, self.type):
            return False
        allowed = self.mask | wall.link_mask
        for start in self.inv_cosets:
            for coset in wall.carrier_cosets():
                g = start
                for c in coset:
                    g = append_letter(graph, g, c)
                if any(not allowed >> (c >> 1) & 1 for c in g):
                    continue
                # g = fixed_coset^-1 * wall_coset lies in <fixed link><wall link>
                if product_membership(graph, g, self.mask, wall.link_mask):
                    return True
        return False


def _count_crossing_both(graph, w1, w2, radius, stop_above):
    common = w1.link_mask & w2.link_mask
    probe1, probe2 = _CrossingProbe(w1), _CrossingProbe(w2)
    found = []
    for wall in iter_walls_in_ball(graph, radius):
        if not common >> wall.type & 1:
            continue
        if probe1.crosses(wall) and probe2.crosses(wall):
            found.append(wall)
            if stop_above is not None and len(found) > stop_above:
                return len(found), found, False
    return len(found), found, True


@lru_cache(maxsize=65536)
def _pair_verdict(graph, tail1, code1, tail2, code2, radius, stop_above):
    w1 = wall_of_edge(graph, tail1, code1)
    w2 = wall_of_edge(graph, tail2, code2)
    return separation(w1, w2, radius, stop_above=stop_above)


def separation_cached(w1, w2, radius, stop_above=None):
    """:func:`separation` memoized up to translation of the pair.

    The verdict is equivariant: translating both source edges by ``g``
    translates the enumeration centre and witnesses by ``g`` and keeps the
    count.  The cache is keyed on the pair moved so ``w1``'s source tail is
    the identity; witnesses are returned in that normalized frame.
    """
    graph = w1.graph
    t1, c1 = w1.source
    t2, c2 = w2.source
    return _pair_verdict(graph, (), c1, relative(graph, t1, t2), c2, radius, stop_above)


def check_geodesic(graph, word):
    if len(reduce_word(graph, word)) != len(word):
        raise NotGeodesic(graph.format_word(word))


__all__ = [
    "Relation",
    "SeparationVerdict",
    "Wall",
    "crosses",
    "crosses_carrier",
    "crosses_heap",
    "dependent",
    "product_membership",
    "separates",
    "separation",
    "separation_cached",
    "wall_of_edge",
    "iter_walls_in_ball",
    "walls_in_ball",
    "walls_of_path",
]
