"""Presentation graphs and exact word arithmetic for graph products of cyclic groups.

Every generator has order 2 or infinite order; two generators commute exactly
when they span an edge of the presentation graph.  Words are tuples of integer
letter codes: generator ``g`` contributes code ``2*g`` (exponent +1) and, for
infinite-order generators only, ``2*g + 1`` (exponent -1).  Sorting codes
numerically gives the ShortLex letter order (declaration index, then + before -).

Group elements are stored as their ShortLex-least geodesic word.  Two reduced
words represent the same element iff they differ by commuting adjacent
independent letters, so the canonical word is the lexicographic normal form
of a trace and can be maintained one letter at a time (see :func:`append_letter`).
"""
import re
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import GraphMismatch, IndexOutOfRange, InvalidLetter, NotGeodesic, ParseError

INF = 0
_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_IDENTITY_TOKENS = ("1", "ε")


class Letter(NamedTuple):
    gen: int
    sign: int


@dataclass(frozen=True)
class PresentationGraph:
    names: tuple
    orders: tuple
    edges: frozenset
    link_masks: tuple = field(init=False, repr=False, compare=False)
    index: dict = field(init=False, repr=False, compare=False)
    codes: tuple = field(init=False, repr=False, compare=False)
    inverse_code: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        for name in self.names:
            if not _NAME_RE.match(name):
                raise ValueError(f"bad generator name {name!r}")
        if len(self.orders) != len(self.names) or any(o not in (2, INF) for o in self.orders):
            raise ValueError("orders must be 2 or INF, one per generator")
        n = len(self.names)
        masks = [0] * n
        for e in self.edges:
            i, j = e
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"bad edge {e}")
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        codes = []
        inverse = [0] * (2 * n)
        for g, order in enumerate(self.orders):
            codes.append(2 * g)
            if order == 2:
                inverse[2 * g] = 2 * g
                inverse[2 * g + 1] = -1
            else:
                codes.append(2 * g + 1)
                inverse[2 * g] = 2 * g + 1
                inverse[2 * g + 1] = 2 * g
        set_ = object.__setattr__
        set_(self, "link_masks", tuple(masks))
        set_(self, "index", {name: i for i, name in enumerate(self.names)})
        set_(self, "codes", tuple(codes))
        set_(self, "inverse_code", tuple(inverse))

    @classmethod
    def build(cls, generators, edges):
        """Build from ``[(name, order), ...]`` and ``[(name, name), ...]``."""
        names = tuple(name for name, _ in generators)
        orders = tuple(order for _, order in generators)
        index = {name: i for i, name in enumerate(names)}
        pairs = frozenset(tuple(sorted((index[a], index[b]))) for a, b in edges)
        return cls(names, orders, pairs)

    @property
    def rank(self):
        return len(self.names)

    @property
    def valence(self):
        """Number of letters at a vertex of the Cayley graph."""
        return len(self.codes)

    def commute(self, g, h):
        return g != h and bool(self.link_masks[g] >> h & 1)

    def link(self, g):
        return frozenset(h for h in range(self.rank) if self.link_masks[g] >> h & 1)

    def mask(self, gens):
        m = 0
        for g in gens:
            m |= 1 << (self.index[g] if isinstance(g, str) else g)
        return m

    def is_involution(self, g):
        return self.orders[g] == 2

    # -- letters and words ---------------------------------------------------

    def letter(self, gen, sign=1):
        g = self.index[gen] if isinstance(gen, str) else gen
        if not 0 <= g < self.rank:
            raise InvalidLetter(f"unknown generator {gen!r}")
        if sign not in (1, -1):
            raise InvalidLetter(f"bad sign {sign}")
        if sign == -1 and self.orders[g] == 2:
            raise InvalidLetter(f"negative exponent on involution {self.names[g]}")
        return 2 * g + (sign == -1)

    def decode(self, code):
        return Letter(code >> 1, -1 if code & 1 else 1)

    def check_word(self, word):
        valid = self.inverse_code
        for c in word:
            if not (isinstance(c, int) and 0 <= c < len(valid) and valid[c] >= 0):
                raise InvalidLetter(f"invalid letter code {c!r}")
        return tuple(word)

    def parse_word(self, text):
        text = text.strip()
        if text in _IDENTITY_TOKENS or not text:
            return ()
        word = []
        for tok in text.split():
            name, sep, exp = tok.partition("^")
            if name not in self.index:
                raise InvalidLetter(f"unknown generator {name!r}")
            if sep and exp not in ("-1", "1"):
                raise InvalidLetter(f"unsupported exponent in {tok!r}")
            word.append(self.letter(name, -1 if exp == "-1" else 1))
        return tuple(word)

    def format_word(self, word):
        return " ".join(self.names[c >> 1] + ("^-1" if c & 1 else "") for c in word)

    def element(self, word):
        """Normalize ``word`` (text or tuple of codes) into a :class:`GroupElement`."""
        if isinstance(word, str):
            word = self.parse_word(word)
        return normal_form(self, word)

    def identity(self):
        return GroupElement(self, ())

    def to_ggp(self):
        lines = [f"gen {n} {'2' if o == 2 else 'inf'}" for n, o in zip(self.names, self.orders)]
        lines += [f"rel {self.names[i]} {self.names[j]}" for i, j in sorted(self.edges)]
        return "\n".join(lines) + "\n"


def parse_presentation(text):
    """Parse the line-based ``.ggp`` presentation format.

    ``gen <name> <2|inf>`` declares a generator, ``rel <a> <b>`` makes two
    declared generators commute; ``#`` starts a comment.
    """
    generators = []
    seen = {}
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "gen":
            if len(parts) != 3:
                raise ParseError(lineno, "expected 'gen <name> <2|inf>'")
            name, order = parts[1], parts[2].lower()
            if not _NAME_RE.match(name):
                raise ParseError(lineno, f"invalid generator name {name!r}")
            if name in seen:
                raise ParseError(lineno, f"duplicate generator {name!r}")
            if order not in ("2", "inf"):
                raise ParseError(lineno, f"order must be 2 or inf, got {parts[2]!r}")
            seen[name] = len(generators)
            generators.append((name, 2 if order == "2" else INF))
        elif parts[0] == "rel":
            if len(parts) != 3:
                raise ParseError(lineno, "expected 'rel <name> <name>'")
            a, b = parts[1], parts[2]
            for name in (a, b):
                if name not in seen:
                    raise ParseError(lineno, f"unknown generator {name!r}")
            if a == b:
                raise ParseError(lineno, f"self-loop on {a!r}")
            edges.add(tuple(sorted((seen[a], seen[b]))))
        else:
            raise ParseError(lineno, f"unknown directive {parts[0]!r}")
    return PresentationGraph(
        tuple(n for n, _ in generators), tuple(o for _, o in generators), frozenset(edges)
    )


# -- normal forms -------------------------------------------------------------


def append_letter(graph, word, c):
    """Return the normal form of ``word * c`` for a normal-form tuple ``word``.

    The new letter either cancels against the last same-generator letter it
    can commute back to, or is inserted at the leftmost position of its
    reachable suffix where it beats the letter it displaces.
    """
    g = c >> 1
    link = graph.link_masks[g]
    q = len(word) - 1
    while q >= 0:
        h = word[q] >> 1
        if h == g or not link >> h & 1:
            break
        q -= 1
    if q >= 0 and word[q] == graph.inverse_code[c]:
        return word[:q] + word[q + 1:]
    p = q + 1
    n = len(word)
    while p < n and word[p] < c:
        p += 1
    return word[:p] + (c,) + word[p:]


def reduce_word(graph, word):
    """Normal form of an arbitrary (validated) word as a tuple of codes."""
    out = ()
    for c in word:
        out = append_letter(graph, out, c)
    return out


def inverse_word(graph, word):
    inv = graph.inverse_code
    return reduce_word(graph, [inv[c] for c in reversed(word)])


def lexmin_greedy(graph, word):
    """Lexicographic normal form of a reduced word by greedy extraction.

    Kept separate from :func:`append_letter` so the two can check each other.
    """
    rest = list(word)
    out = []
    while rest:
        blocked = 0
        best = None
        for i, c in enumerate(rest):
            g = c >> 1
            if not blocked >> g & 1 and (best is None or c < rest[best]):
                best = i
            blocked |= ~graph.link_masks[g] | (1 << g)
        out.append(rest.pop(best))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A group element stored as its ShortLex-least geodesic word ``nf``."""

    graph: PresentationGraph
    nf: tuple

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.nf == other.nf and (self.graph is other.graph or self.graph == other.graph)

    def __hash__(self):
        return hash(self.nf)

    def __len__(self):
        return len(self.nf)

    def __mul__(self, other):
        return multiply(self, other)

    def __str__(self):
        return self.graph.format_word(self.nf) or "ε"

    def __repr__(self):
        return f"GroupElement({str(self)!r})"

    def inverse(self):
        return inverse(self)

    def append(self, code):
        return GroupElement(self.graph, append_letter(self.graph, self.nf, code))

    def shortlex_key(self):
        return (len(self.nf), self.nf)


def normal_form(graph, word):
    """Return the group element represented by ``word`` (text or letter codes)."""
    if isinstance(word, str):
        word = graph.parse_word(word)
    return GroupElement(graph, reduce_word(graph, graph.check_word(word)))


def _same_graph(g, h):
    if not (g.graph is h.graph or g.graph == h.graph):
        raise GraphMismatch("elements belong to different presentation graphs")


def multiply(g, h):
    _same_graph(g, h)
    nf = g.nf
    for c in h.nf:
        nf = append_letter(g.graph, nf, c)
    return GroupElement(g.graph, nf)


def inverse(g):
    return GroupElement(g.graph, inverse_word(g.graph, g.nf))


def is_geodesic(graph, word):
    if isinstance(word, str):
        word = graph.parse_word(word)
    word = graph.check_word(word)
    return len(reduce_word(graph, word)) == len(word)


def dependent(graph, c, d):
    """Whether letters ``c`` and ``d`` are dependent (same generator or non-commuting)."""
    g, h = c >> 1, d >> 1
    return g == h or not graph.link_masks[g] >> h & 1


def dependence_comparable(graph, word, i, j):
    """Whether positions ``i < j`` (1-based) of a geodesic word are ordered in its heap."""
    if isinstance(word, str):
        word = graph.parse_word(word)
    word = graph.check_word(word)
    if not 1 <= i < j <= len(word):
        raise IndexOutOfRange(f"need 1 <= i < j <= {len(word)}, got ({i}, {j})")
    if len(reduce_word(graph, word)) != len(word):
        raise NotGeodesic(graph.format_word(word))
    reach = {i - 1}
    for p in range(i, j):
        if any(dependent(graph, word[q], word[p]) for q in reach):
            reach.add(p)
    return j - 1 in reach
