"""Reference implementations the tests compare the package against.

Nothing here uses the package's normal forms, wall keys or projections.  The
only input taken from a presentation graph is raw data: generator orders and
the commuting pairs.  Letters use the same integer codes (``2g`` for ``g``,
``2g + 1`` for ``g^-1``) so words can be passed back and forth.

* :class:`ElementOracle` identifies group elements through a faithful integer
  action (the dual Tits representation of a right-angled Coxeter group; Artin
  groups are first embedded into one).
* :func:`free_reduce` decides the word problem by cancelling pairs of letters
  that can be commuted next to each other.
* :class:`SquareComplex` builds the explicit Cayley graph of a ball, glues dual
  edges across squares and reads off walls and crossings.
"""
from collections import deque
from itertools import product


def _commute(graph, g, h):
    return g != h and tuple(sorted((g, h))) in graph.edges


def _inv(graph, c):
    return c if graph.orders[c >> 1] == 2 else c ^ 1


# -- word problem by cancellation --------------------------------------------------


def free_reduce(graph, word):
    """Cancel letter pairs ``c ... c^-1`` whose in-between letters all commute with ``c``.

    A word in a graph product of cyclic groups is trivial iff this empties it,
    and a word with no such pair is geodesic.
    """
    w = list(word)
    changed = True
    while changed:
        changed = False
        for i in range(len(w)):
            g = w[i] >> 1
            for j in range(i + 1, len(w)):
                h = w[j] >> 1
                if h == g:
                    if w[j] == _inv(graph, w[i]):
                        del w[j]
                        del w[i]
                        changed = True
                    break
                if not _commute(graph, g, h):
                    break
            if changed:
                break
    return tuple(w)


def inverse(graph, word):
    return tuple(_inv(graph, c) for c in reversed(word))


def distance(graph, u, v):
    return len(free_reduce(graph, inverse(graph, u) + tuple(v)))


def all_letters(graph):
    out = []
    for g, order in enumerate(graph.orders):
        out.append(2 * g)
        if order != 2:
            out.append(2 * g + 1)
    return out


def all_words(graph, n):
    letters = all_letters(graph)
    for k in range(n + 1):
        yield from product(letters, repeat=k)


# -- faithful integer action ---------------------------------------------------------


class ElementOracle:
    """Hashable keys for group elements, ``key(w * c)`` computed from ``key(w)``.

    A right-angled Coxeter group acts on the dual of its Tits representation by
    ``f_j <- f_j - 2 B_ij f_i`` with ``B_ii = 1``, ``B_ij = 0`` for commuting
    and ``-1`` for non-commuting generators.  The orbit map of the all-ones
    vector is injective, so ``key(w) = w^-1 . (1, ..., 1)`` identifies ``w``.

    A right-angled Artin group embeds in the Coxeter group on vertex pairs
    ``(v, 0), (v, 1)``: level 0 is complete, level 1 copies the graph, and
    ``(v, 0) ~ (w, 1)`` iff ``v != w``; ``v`` maps to ``(v, 0)(v, 1)``.
    """

    def __init__(self, graph):
        self.graph = graph
        n = graph.rank
        if all(o == 2 for o in graph.orders):
            size = n
            adj = lambda i, j: _commute(graph, i, j)  # noqa: E731
            self.images = {2 * g: (g,) for g in range(n)}
        elif all(o != 2 for o in graph.orders):
            size = 2 * n

            def adj(i, j):
                (v, a), (w, b) = divmod(i, 2), divmod(j, 2)
                if v == w:
                    return False
                if a == b == 0:
                    return True
                if a == b == 1:
                    return _commute(graph, v, w)
                return True

            self.images = {}
            for g in range(n):
                self.images[2 * g] = (2 * g, 2 * g + 1)
                self.images[2 * g + 1] = (2 * g + 1, 2 * g)
        else:
            raise NotImplementedError("mixed orders")
        self.size = size
        self.coupling = [
            [1 if i == j else (0 if adj(i, j) else -1) for j in range(size)] for i in range(size)
        ]
        self.identity = (1,) * size

    def reflect(self, f, i):
        fi = f[i]
        row = self.coupling[i]
        return tuple(fj - 2 * row[j] * fi for j, fj in enumerate(f))

    def step(self, key, c):
        for i in self.images[c]:
            key = self.reflect(key, i)
        return key

    def key(self, word):
        k = self.identity
        for c in word:
            k = self.step(k, c)
        return k

    def ball(self, radius):
        """BFS over keys: ``{key: (distance, word)}`` for the ball about the identity."""
        letters = all_letters(self.graph)
        seen = {self.identity: (0, ())}
        frontier = [self.identity]
        for d in range(1, radius + 1):
            nxt = []
            for k in frontier:
                w = seen[k][1]
                for c in letters:
                    k2 = self.step(k, c)
                    if k2 not in seen:
                        seen[k2] = (d, w + (c,))
                        nxt.append(k2)
            frontier = nxt
        return seen


# -- heaps by brute-force shuffling -----------------------------------------------------


def shuffles(graph, word):
    """All orderings (as index permutations) reachable by swapping adjacent commuting letters."""
    start = tuple(range(len(word)))
    seen = {start}
    queue = deque([start])
    while queue:
        perm = queue.popleft()
        for p in range(len(perm) - 1):
            a, b = word[perm[p]] >> 1, word[perm[p + 1]] >> 1
            if _commute(graph, a, b):
                q = perm[:p] + (perm[p + 1], perm[p]) + perm[p + 2:]
                if q not in seen:
                    seen.add(q)
                    queue.append(q)
    return seen


def comparable(graph, word, i, j):
    """1-based positions ``i < j`` keep their order in every shuffle."""
    return all(p.index(i - 1) < p.index(j - 1) for p in shuffles(graph, word))


def geodesic_words(graph, word):
    """Every geodesic spelling of a reduced word."""
    return {tuple(word[k] for k in p) for p in shuffles(graph, word)}


# -- subgroup products by enumeration -------------------------------------------------------


def subgroup_words(graph, gens, radius):
    letters = [c for c in all_letters(graph) if c >> 1 in gens]
    out = {()}
    frontier = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for c in letters:
                v = free_reduce(graph, w + (c,))
                if len(v) > len(w) and v not in out:
                    out.add(v)
                    nxt.append(v)
        frontier = nxt
    return out


def in_product(graph, word, A, B, radius=None):
    """Whether ``word`` equals ``a b`` with ``a`` in <A> and ``b`` in <B>, searched up to ``radius``."""
    radius = len(word) + 2 if radius is None else radius
    oracle = ElementOracle(graph)
    target = oracle.key(word)
    bs = subgroup_words(graph, B, radius)
    return any(oracle.key(a + b) == target for a in subgroup_words(graph, A, radius) for b in bs)


# -- walls from squares ----------------------------------------------------------------------


class SquareComplex:
    """Explicit Cayley graph of a ball with dual edges glued across squares.

    Edge classes are walls restricted to the ball; two walls cross when some
    square of the ball carries a dual edge of each.
    """

    def __init__(self, graph, radius):
        self.graph = graph
        self.oracle = ElementOracle(graph)
        self.radius = radius
        self.ball = self.oracle.ball(radius)
        self.parent = {}
        self.square_pairs = set()
        letters = all_letters(graph)
        pairs = [(c, d) for c in letters for d in letters if _commute(graph, c >> 1, d >> 1)]
        step = self.oracle.step
        ball = self.ball
        for x in ball:
            for c in letters:
                y = step(x, c)
                if y in ball:
                    self._find(self._edge(x, y))
            for c, d in pairs:
                xc, xd = step(x, c), step(x, d)
                xcd = step(xc, d)
                if xc in ball and xd in ball and xcd in ball:
                    self._union(self._edge(x, xc), self._edge(xd, xcd))
                    self._union(self._edge(x, xd), self._edge(xc, xcd))
        for x in ball:
            for c, d in pairs:
                xc, xd = step(x, c), step(x, d)
                if xc in ball and xd in ball and step(xc, d) in ball:
                    a, b = self._find(self._edge(x, xc)), self._find(self._edge(x, xd))
                    self.square_pairs.add((a, b))
                    self.square_pairs.add((b, a))

    @staticmethod
    def _edge(x, y):
        return (x, y) if x < y else (y, x)

    def _find(self, e):
        parent = self.parent
        parent.setdefault(e, e)
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    def _union(self, a, b):
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def wall(self, tail, c):
        """Class of the edge from ``tail`` along letter ``c``."""
        x = self.oracle.key(tail)
        return self._find(self._edge(x, self.oracle.step(x, c)))

    def walls_of_word(self, word):
        return [self.wall(word[:i], word[i]) for i in range(len(word))]

    def crosses(self, w1, w2):
        return (w1, w2) in self.square_pairs


# -- contraction and slimness by exhaustion ------------------------------------------------------


def neighbourhood(graph, path_words, radius):
    """Reduced words of all vertices within ``radius`` of the path, one per element."""
    oracle = ElementOracle(graph)
    offsets = [w for _, w in oracle.ball(radius).values()]
    out = {}
    for p in path_words:
        for u in offsets:
            v = free_reduce(graph, tuple(p) + u)
            out.setdefault(oracle.key(v), v)
    return list(out.values())


def projection(graph, path_words, x):
    d = [distance(graph, x, p) for p in path_words]
    best = min(d)
    return [i for i, v in enumerate(d) if v == best], best


def max_projection_diameter(graph, path_words, rho, extra=2):
    """Largest projection span over every ball ``B(c, rho)`` with ``rho < d(c, path) <= rho + extra``."""
    oracle = ElementOracle(graph)
    offsets = [w for _, w in oracle.ball(rho).values()]
    best = 0
    for c in neighbourhood(graph, path_words, rho + extra):
        if projection(graph, path_words, c)[1] <= rho:
            continue
        lo, hi = len(path_words), 0
        for u in offsets:
            idx, _ = projection(graph, path_words, free_reduce(graph, c + u))
            lo, hi = min(lo, idx[0]), max(hi, idx[-1])
        best = max(best, hi - lo)
    return best


def interval(graph, x, y):
    """Vertices on geodesics from ``x`` to ``y`` as reduced words."""
    rel = free_reduce(graph, inverse(graph, x) + tuple(y))
    oracle = ElementOracle(graph)
    out = {}
    for w in geodesic_words(graph, rel):
        for k in range(len(w) + 1):
            v = free_reduce(graph, tuple(x) + w[:k])
            out.setdefault(oracle.key(v), v)
    return list(out.values())


def set_distance(graph, p, points):
    return min(distance(graph, p, q) for q in points)


def slimness_terms(graph, path_words, x):
    """``(term_i, term_ii)`` for apex ``x`` computed from explicit intervals."""
    n = len(path_words)
    proj, _ = projection(graph, path_words, x)
    ivals = [interval(graph, x, y) for y in path_words]
    term_i = max(min(set_distance(graph, path_words[p], ivals[y]) for p in proj) for y in range(n))
    term_ii = 0
    for y in range(n):
        for z in range(y + 1, n):
            both = ivals[y] + ivals[z]
            for w in range(y + 1, z):
                term_ii = max(term_ii, set_distance(graph, path_words[w], both))
    return term_i, term_ii


# -- detours around balls ----------------------------------------------------------------------


def detour_length(graph, period, r, t, slack):
    """Shortest path from ray(t - r) to ray(t + r) inside the shell ``r <= d(ray(t), .) <= r + slack``.

    ``period`` is repeated from the identity.  Returns None when no path exists.
    """
    o = ElementOracle(graph)
    letters = all_letters(graph)
    w = (tuple(period) * (t + r))[: t + r]
    centre, src, dst = o.key(w[:t]), o.key(w[: t - r]), o.key(w[: t + r])
    depth = {centre: 0}
    frontier = [centre]
    for d in range(1, r + slack + 1):
        nxt = []
        for k in frontier:
            for c in letters:
                k2 = o.step(k, c)
                if k2 not in depth:
                    depth[k2] = d
                    nxt.append(k2)
        frontier = nxt
    seen = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == dst:
            return seen[u]
        for c in letters:
            v = o.step(u, c)
            if depth.get(v, -1) >= r and v not in seen:
                seen[v] = seen[u] + 1
                queue.append(v)
    return None
