"""Eventually periodic geodesic rays, the contracting-ray detector and estimators.

The detector looks for a chain of walls crossed by the ray, consecutive ones
k-separated and at most ``r - 1`` edges apart.  Gaps are edge-index
differences, which equal d(1) distances between crossing points on a geodesic.
"""
import random
from dataclasses import dataclass, field

from .cayley import GeodesicPath, ball_words, dist_nf, gate_distance, project_indices
from .errors import HorizonExceeded, HorizonTooSmall, InvalidLetter, NotGeodesic, RaysIndistinguishable
from .group import append_letter, reduce_word
from .walls import Relation, coset_key, separation_cached, walls_of_path


def _as_word(graph, w):
    if isinstance(w, str):
        return graph.parse_word(w)
    return graph.check_word(w)


@dataclass(frozen=True)
class RaySpec:
    """The ray ``prefix * period * period * ...`` from the identity, unrolled to ``horizon`` letters."""

    graph: object = field(repr=False)
    prefix: tuple
    period: tuple
    horizon: int

    def __post_init__(self):
        graph = self.graph
        object.__setattr__(self, "prefix", _as_word(graph, self.prefix))
        object.__setattr__(self, "period", _as_word(graph, self.period))
        if not self.period:
            raise ValueError("period must be nonempty")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        word = self.unroll(self.horizon)
        if len(reduce_word(graph, word)) != len(word):
            raise NotGeodesic(f"ray is not geodesic within {self.horizon} letters")

    @classmethod
    def parse(cls, graph, prefix, period, horizon):
        return cls(graph, graph.parse_word(prefix), graph.parse_word(period), horizon)

    def unroll(self, n):
        """The first ``n`` letters of the ray."""
        out = list(self.prefix[:n])
        while len(out) < n:
            out.extend(self.period)
        return tuple(out[:n])

    @property
    def word(self):
        return self.unroll(self.horizon)

    def path(self, n=None):
        n = self.horizon if n is None else n
        if n > self.horizon:
            raise HorizonExceeded(f"{n} letters requested, ray validated to {self.horizon}")
        return GeodesicPath(self.graph.identity(), self.unroll(n))

    def label(self):
        g = self.graph
        pre = g.format_word(self.prefix)
        return (f"{pre} | " if pre else "") + f"({g.format_word(self.period)})^inf"

    def to_json(self):
        g = self.graph
        return {"prefix": g.format_word(self.prefix), "period": g.format_word(self.period), "horizon": self.horizon}


def random_ray(graph, rng, horizon, period_len=(2, 6), prefix_len=(0, 3), letters=None, tries=1000):
    """A random ray whose unrolling is geodesic to ``horizon``.

    ``letters`` restricts the alphabet (letter codes).  Raises ValueError if no
    geodesic ray is found in ``tries`` attempts.
    """
    codes = sorted(graph.codes if letters is None else letters)
    for _ in range(tries):
        period = tuple(rng.choice(codes) for _ in range(rng.randint(*period_len)))
        prefix = tuple(rng.choice(codes) for _ in range(rng.randint(*prefix_len)))
        try:
            return RaySpec(graph, prefix, period, horizon)
        except NotGeodesic:
            continue
    raise ValueError("no geodesic ray found")


# -- detector ------------------------------------------------------------------


@dataclass(frozen=True)
class DetectorParams:
    k: int
    r: int
    radius: int
    horizon: int = None

    def __post_init__(self):
        if self.r < 1 or self.radius < 1 or self.k < 0:
            raise ValueError("need k >= 0, r >= 1, radius >= 1")


@dataclass(frozen=True)
class ContractionWitness:
    indices: tuple
    pair_verdicts: tuple
    max_gap: int

    def to_json(self):
        return {
            "indices": list(self.indices),
            "max_gap": self.max_gap,
            "pair_verdicts": [v.to_json() for v in self.pair_verdicts],
        }


@dataclass(frozen=True)
class Detection:
    """Outcome of :func:`detect_contracting`.

    ``accepted`` with a ``witness`` chain, or rejected with an obstruction
    ``window`` (1-based inclusive positions).  Acceptance rests on
    k-separation counted within the search radius, so it is radius-limited;
    rejection only uses certified refutations (crossings or counts above k).
    """

    accepted: bool
    params: DetectorParams
    horizon: int
    witness: ContractionWitness = None
    window: tuple = None
    reached: int = 0
    radius_limited: bool = True

    @property
    def verdict(self):
        return "ACCEPT" if self.accepted else "REJECT"

    @property
    def window_width(self):
        return 0 if self.window is None else self.window[1] - self.window[0] + 1

    def to_json(self):
        out = {
            "verdict": self.verdict,
            "k": self.params.k,
            "r": self.params.r,
            "radius": self.params.radius,
            "horizon": self.horizon,
            "radius_limited": self.radius_limited,
        }
        if self.accepted:
            out["witness"] = self.witness.to_json()
        else:
            out["window"] = list(self.window)
            out["window_width"] = self.window_width
            out["reached"] = self.reached
        return out


class _PairOracle:
    def __init__(self, walls, params):
        self.walls = walls
        self.params = params
        self.memo = {}

    def verdict(self, i, j):
        key = (i, j)
        if key not in self.memo:
            p = self.params
            self.memo[key] = separation_cached(self.walls[i - 1], self.walls[j - 1], p.radius, stop_above=p.k)
        return self.memo[key]

    def ok(self, i, j):
        v = self.verdict(i, j)
        return v.relation is Relation.DISJOINT and v.crossing_both_count <= self.params.k


def detect_contracting(ray, params):
    """Search for a chain of k-separated walls with gaps < r along the ray.

    Positions are 1-based edge indices.  A chain must start within the first
    ``r`` positions and end within ``r`` of the horizon.
    """
    horizon = params.horizon or ray.horizon
    if horizon > ray.horizon:
        raise HorizonExceeded(f"horizon {horizon} beyond validated {ray.horizon}")
    r = params.r
    if horizon < 2 * r:
        raise HorizonTooSmall(f"horizon {horizon} < 2r = {2 * r}")
    walls = walls_of_path(ray.path(horizon))
    oracle = _PairOracle(walls, params)
    end = horizon - r + 1

    # depth-first over positions, furthest step first, memoizing dead ends
    dead = set()
    furthest = 0

    def chain_from(i):
        nonlocal furthest
        stack = [(i, iter(range(min(i + r - 1, horizon), i, -1)))]
        path = [i]
        furthest = max(furthest, i)
        if i >= end:
            return path
        while stack:
            pos, it = stack[-1]
            nxt = None
            for j in it:
                if j not in dead and oracle.ok(pos, j):
                    nxt = j
                    break
            if nxt is None:
                dead.add(pos)
                stack.pop()
                path.pop()
                continue
            path.append(nxt)
            furthest = max(furthest, nxt)
            if nxt >= end:
                return path
            stack.append((nxt, iter(range(min(nxt + r - 1, horizon), nxt, -1))))
        return None

    for start in range(1, r + 1):
        if start in dead:
            continue
        chain = chain_from(start)
        if chain:
            # keep extending past the end zone while possible
            while chain[-1] < horizon:
                last = chain[-1]
                nxt = next((j for j in range(min(last + r - 1, horizon), last, -1) if oracle.ok(last, j)), None)
                if nxt is None:
                    break
                chain.append(nxt)
            verdicts = tuple(oracle.verdict(a, b) for a, b in zip(chain, chain[1:]))
            gaps = [b - a for a, b in zip(chain, chain[1:])]
            witness = ContractionWitness(tuple(chain), verdicts, max(gaps, default=0))
            return Detection(True, params, horizon, witness=witness, reached=chain[-1])
    window = _obstruction_window(oracle, horizon, r, furthest)
    return Detection(False, params, horizon, window=window, reached=furthest, radius_limited=False)


def _obstruction_window(oracle, horizon, r, furthest):
    """Leftmost maximal window of width >= r containing no k-separated pair with gap < r."""
    first_end = [horizon + 1] * (horizon + 2)
    # first_end[u] = smallest j of an ok pair (i, j) with i >= u
    for i in range(horizon, 0, -1):
        best = first_end[i + 1]
        for j in range(i + 1, min(i + r - 1, horizon) + 1):
            if j < best and oracle.ok(i, j):
                best = j
                break
        first_end[i] = best
    for u in range(1, horizon + 1):
        v = first_end[u] - 1
        if v - u + 1 >= r:
            return (u, v)
    u = max(furthest, 1)
    return (u, min(u + r - 1, horizon))


def obstruction_windows(ray, params):
    """Maximal windows (width >= 2) containing no k-separated pair with gap < r.

    Evaluates every pair with gap < r, so it is costlier than
    :func:`detect_contracting`; windows are 1-based inclusive and may overlap.
    """
    horizon = params.horizon or ray.horizon
    if horizon > ray.horizon:
        raise HorizonExceeded(f"horizon {horizon} beyond validated {ray.horizon}")
    r = params.r
    oracle = _PairOracle(walls_of_path(ray.path(horizon)), params)
    ends = [horizon + 1] * (horizon + 2)
    for i in range(horizon, 0, -1):
        best = ends[i + 1]
        for j in range(i + 1, min(i + r - 1, horizon, best - 1) + 1):
            if oracle.ok(i, j):
                best = j
                break
        ends[i] = best
    out = []
    for u in range(1, horizon + 1):
        v = ends[u] - 1
        if (u == 1 or ends[u - 1] - 1 < v) and v > u:
            out.append((u, v))
    return out


def widest_obstruction(ray, params):
    """Width of the widest window from :func:`obstruction_windows`."""
    return max((v - u + 1 for u, v in obstruction_windows(ray, params)), default=0)


def revalidate(ray, detection):
    """Re-run every pair of an Accept witness; True when the witness still holds."""
    if not detection.accepted:
        return False
    p = detection.params
    w = detection.witness
    walls = walls_of_path(ray.path(detection.horizon))
    idx = w.indices
    if idx[0] > p.r or idx[-1] < detection.horizon - p.r + 1:
        return False
    for (a, b), old in zip(zip(idx, idx[1:]), w.pair_verdicts):
        if not 0 < b - a < p.r:
            return False
        v = separation_cached(walls[a - 1], walls[b - 1], p.radius, stop_above=p.k)
        if v.relation is not Relation.DISJOINT or v.crossing_both_count > p.k or v != old:
            return False
    return True


# -- contraction and slimness ---------------------------------------------------


def _offset(graph, base, word):
    nf = base
    for c in word:
        nf = append_letter(graph, nf, c)
    return nf


def _path_distance(path, x_nf):
    return min(dist_nf(path.graph, x_nf, v) for v in path.vertex_words)


def _random_geodesic(graph, rng, length):
    """A uniformly random reduced extension, letter by letter."""
    nf = ()
    while len(nf) < length:
        c = rng.choice(graph.codes)
        v = append_letter(graph, nf, c)
        if len(v) > len(nf):
            nf = v
    return nf


@dataclass(frozen=True)
class ContractionEstimate:
    D_hat: int
    samples: tuple

    def to_json(self):
        return {"D_hat": self.D_hat, "samples": [list(s) for s in self.samples]}


def projection_diameter(path, center_nf, rho):
    """Index span of the union of projections of ``ball(center, rho)`` onto ``path``."""
    graph = path.graph
    lo, hi = len(path), 0
    for u in ball_words(graph, rho):
        idx, _ = project_indices(path, _offset(graph, center_nf, u))
        lo = min(lo, idx[0])
        hi = max(hi, idx[-1])
    return hi - lo


def estimate_contraction(path, ball_radii, sample_budget=20, seed=0, extra=2):
    """Largest projection diameter of sampled balls disjoint from ``path``.

    Centres sit at distance ``rho + 1 .. rho + extra`` from the path, reached by
    random geodesic offsets from random path vertices.
    """
    radii = sorted(set(ball_radii))
    if len(path) < 2 * max(radii, default=0):
        raise ValueError("path length must be >= 2 * max radius")
    graph = path.graph
    rng = random.Random(seed)
    samples = []
    for rho in radii:
        if rho == 0:
            continue
        got = 0
        attempts = 0
        while got < sample_budget and attempts < 50 * sample_budget:
            attempts += 1
            base = path.vertex_words[rng.randrange(len(path) + 1)]
            center = _offset(graph, base, _random_geodesic(graph, rng, rho + rng.randint(1, extra)))
            if _path_distance(path, center) <= rho:
                continue
            got += 1
            samples.append((graph.format_word(center), rho, projection_diameter(path, center, rho)))
    D_hat = max((s[2] for s in samples), default=0)
    return ContractionEstimate(D_hat, tuple(samples))


@dataclass(frozen=True)
class SlimnessEstimate:
    delta_i: int
    delta_ii: int
    samples: tuple

    def to_json(self):
        return {"delta_i": self.delta_i, "delta_ii": self.delta_ii, "samples": [list(s) for s in self.samples]}


def slimness_terms(path, x_nf):
    """Worst thin-triangle terms for one apex ``x`` against every vertex pair of ``path``.

    Returns ``(term_i, term_ii)``.  ``term_i`` is the max over path vertices
    ``y`` of the distance from the nearest-point projection of ``x`` to
    ``I(x, y)``; ``term_ii`` is the max over ``y < z`` on the path and ``w``
    between them of ``d(w, I(x, y) u I(x, z))``.
    """
    graph = path.graph
    verts = path.vertex_words
    n = len(verts)
    proj, _ = project_indices(path, x_nf)
    dx = [dist_nf(graph, x_nf, v) for v in verts]
    term_i = 0
    for y in range(n):
        # d(p, I(x, y)) for path vertices p, y: (d(p,x) + d(p,y) - d(x,y)) / 2
        best = min((dx[p] + abs(p - y) - dx[y]) // 2 for p in proj)
        term_i = max(term_i, best)
    term_ii = 0
    for y in range(n):
        for z in range(y + 1, n):
            for w in range(y + 1, z):
                gy = (dx[w] + (w - y) - dx[y]) // 2
                gz = (dx[w] + (z - w) - dx[z]) // 2
                term_ii = max(term_ii, min(gy, gz))
    return term_i, term_ii


def estimate_slimness(path, sample_budget=40, seed=0, sample_radius=5):
    """Sampled thin-triangle constants with apexes within ``sample_radius`` of the path."""
    graph = path.graph
    rng = random.Random(seed)
    samples = []
    for _ in range(sample_budget):
        base = path.vertex_words[rng.randrange(len(path) + 1)]
        x = _offset(graph, base, _random_geodesic(graph, rng, rng.randint(0, sample_radius)))
        ti, tii = slimness_terms(path, x)
        samples.append((graph.format_word(x), ti, tii))
    return SlimnessEstimate(
        max((s[1] for s in samples), default=0), max((s[2] for s in samples), default=0), tuple(samples)
    )


def bounded_projection_check(alpha, beta, horizon=None):
    """Max displacement of projections of ``beta(t)`` onto ``alpha`` from the basepoint projection."""
    horizon = horizon or min(alpha.horizon, beta.horizon)
    if horizon > alpha.horizon or horizon > beta.horizon:
        raise HorizonExceeded(f"horizon {horizon} beyond a validated ray")
    if alpha.unroll(horizon) == beta.unroll(horizon):
        raise RaysIndistinguishable(f"rays agree on the first {horizon} letters")
    path = alpha.path(horizon)
    base_idx, _ = project_indices(path, ())
    lo = min(base_idx)
    out = 0
    for v in beta.path(horizon).vertex_words:
        idx, _ = project_indices(path, v)
        out = max(out, max(abs(i - lo) for i in idx))
    return out


# -- Croke-Kleiner blocks and Bass-Serre itineraries -----------------------------


@dataclass(frozen=True)
class Block:
    name: str
    word: tuple


CROKE_KLEINER_BLOCKS = (("B1", ("a", "b", "c")), ("B2", ("b", "c", "d")))


def _factor(graph, word, parts):
    """Greedy left-to-right factorization into maximal blocks.

    A letter lying in exactly one part forces that part; shared letters join
    the current block, or the first forced block when none is open yet.
    """
    masks = [(name, graph.mask(gens)) for name, gens in parts]
    blocks = []
    pending = []
    for c in word:
        owners = [name for name, m in masks if m >> (c >> 1) & 1]
        if not owners:
            raise InvalidLetter(f"letter {graph.format_word((c,))} lies in no block")
        if len(owners) == 1:
            if blocks and blocks[-1][0] == owners[0]:
                blocks[-1][1].append(c)
            else:
                blocks.append((owners[0], pending + [c]))
            pending = []
        elif blocks:
            blocks[-1][1].append(c)
        else:
            pending.append(c)
    if pending:
        blocks.append((masks[0][0], pending))
    return [Block(name, tuple(w)) for name, w in blocks]


def block_decomposition(graph, word, blocks=CROKE_KLEINER_BLOCKS):
    """Split a word into alternating ``B1 = <a,b,c>`` and ``B2 = <b,c,d>`` blocks."""
    return _factor(graph, _as_word(graph, word), blocks)


def block_time(blocks):
    """Longest block length."""
    return max((len(b.word) for b in blocks), default=0)


GAMMA1_AMALGAM = (("c1", "c2", "c3"), ("c4", "c5", "c6"), ("d1", "d2", "d3"))


@dataclass(frozen=True)
class Itinerary:
    """Vertices ``(label, coset key)`` of the Bass-Serre tree path, labels GAMMA/OMEGA."""

    graph: object = field(repr=False, compare=False)
    vertices: tuple

    def __len__(self):
        return len(self.vertices)

    def is_prefix_of(self, other):
        return self.vertices == other.vertices[: len(self.vertices)]

    def labels(self):
        return [v[0] for v in self.vertices]

    def to_json(self):
        return [{"label": lab, "key": self.graph.format_word(key)} for lab, key in self.vertices]

    def __str__(self):
        return " -> ".join(f"{lab}[{self.graph.format_word(key) or 'ε'}]" for lab, key in self.vertices)


def itinerary(graph, word, amalgam=GAMMA1_AMALGAM):
    """Path in the Bass-Serre tree of ``W_Gamma *_C W_Omega`` traced by ``word``.

    ``amalgam`` is ``(Gamma-only, shared C, Omega-only)`` generator names.
    """
    only_g, shared, only_o = amalgam
    word = _as_word(graph, word)
    gamma = tuple(only_g) + tuple(shared)
    omega = tuple(shared) + tuple(only_o)
    masks = {"GAMMA": graph.mask(gamma), "OMEGA": graph.mask(omega)}
    blocks = _factor(graph, word, (("GAMMA", gamma), ("OMEGA", omega)))
    vertices = [("GAMMA", ())]
    prefix = ()
    for b in blocks:
        if b.name != vertices[-1][0]:
            vertices.append((b.name, coset_key(graph, prefix, masks[b.name])))
        prefix = _offset(graph, prefix, b.word)
    return Itinerary(graph, tuple(vertices))


__all__ = [
    "Block",
    "ContractionEstimate",
    "ContractionWitness",
    "Detection",
    "DetectorParams",
    "Itinerary",
    "RaySpec",
    "SlimnessEstimate",
    "block_decomposition",
    "block_time",
    "bounded_projection_check",
    "detect_contracting",
    "estimate_contraction",
    "estimate_slimness",
    "itinerary",
    "obstruction_windows",
    "projection_diameter",
    "random_ray",
    "revalidate",
    "slimness_terms",
    "widest_obstruction",
]
