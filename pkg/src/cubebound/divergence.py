"""Lower divergence of periodic rays by shortest paths around punctured balls.

``ldiv(r)`` is the minimum over sampled centres ``t`` of the length of the
shortest path from ``ray(t - r)`` to ``ray(t + r)`` that stays outside the open
ball of radius ``r`` about ``ray(t)``.  The search runs in the shell
``r <= d(ray(t), .) <= R_max``; with no path there the value is INFINITE.
"""
import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from statistics import linear_regression

from .cayley import dist_nf
from .errors import HorizonExceeded, ResourceLimit
from .group import append_letter, reduce_word

INFINITE = math.inf
DEFAULT_SLACK = 2
DEFAULT_NODE_CAP = 2_000_000
LINEAR_THRESHOLD = 1.2


class Growth(str, Enum):
    NO_DETOUR = "NO_DETOUR"
    LINEAR = "LINEAR"
    SUPERLINEAR = "SUPERLINEAR"


def _window(ray, r, t):
    if not t > r >= 1:
        raise ValueError(f"need t > r >= 1, got r={r}, t={t}")
    if t + r > ray.horizon:
        raise HorizonExceeded(f"t + r = {t + r} exceeds horizon {ray.horizon}")
    return ray.unroll(t + r)[t - r:]


@lru_cache(maxsize=4096)
def _punctured_search(graph, window, r, r_max, cap, codes=None):
    """Shortest path across the shell, in coordinates centred at ``ray(t)``.

    ``window`` is the 2r letters of the ray around the centre.  Returns
    ``(length, vertices)`` with vertices as normal forms relative to the
    centre, or ``(INFINITE, ())``.
    """
    inv = graph.inverse_code
    source = reduce_word(graph, [inv[c] for c in reversed(window[:r])])
    target = reduce_word(graph, window[r:])
    parent = {source: None}
    queue = deque([source])
    codes = graph.codes if codes is None else codes
    while queue:
        u = queue.popleft()
        if u == target:
            path = []
            while u is not None:
                path.append(u)
                u = parent[u]
            path.reverse()
            return len(path) - 1, tuple(path)
        for c in codes:
            v = append_letter(graph, u, c)
            if r <= len(v) <= r_max and v not in parent:
                parent[v] = u
                queue.append(v)
        if len(parent) > cap:
            raise ResourceLimit(f"punctured search at r={r} exceeds {cap} vertices")
    return INFINITE, ()


def ldiv_upper_bound(ray, r, t, letters=None, slack=DEFAULT_SLACK, R_max=None, cap=DEFAULT_NODE_CAP):
    """``(length, witness)`` of a shortest detour using only ``letters``.

    Paths in a sub-Cayley graph are paths in the full one, so the length
    bounds the exact detour length from above.  ``letters`` defaults to the
    letters occurring in the ray (and their inverses).
    """
    graph = ray.graph
    if letters is None:
        inv = graph.inverse_code
        used = set(ray.prefix) | set(ray.period)
        letters = used | {inv[c] for c in used}
    window = _window(ray, r, t)
    codes = tuple(sorted(letters))
    length, rel = _punctured_search(graph, window, r, _r_max(r, slack, R_max), cap, codes)
    return length, _absolute(graph, ray.path(t).vertex_words[t], rel)


def _absolute(graph, center, rel):
    out = []
    for u in rel:
        nf = center
        for c in u:
            nf = append_letter(graph, nf, c)
        out.append(nf)
    return tuple(out)


def _r_max(r, slack, R_max):
    return R_max if R_max is not None else r + slack


def ldiv_search(ray, r, t, slack=DEFAULT_SLACK, R_max=None, cap=DEFAULT_NODE_CAP):
    """``(length, witness)`` for one centre; the witness lists absolute vertices."""
    graph = ray.graph
    window = _window(ray, r, t)
    length, rel = _punctured_search(graph, window, r, _r_max(r, slack, R_max), cap)
    return length, _absolute(graph, ray.path(t).vertex_words[t], rel)


def ldiv_at(ray, r, t, slack=DEFAULT_SLACK, R_max=None, cap=DEFAULT_NODE_CAP):
    """Length of the shortest detour around ``B(ray(t), r)``, or INFINITE."""
    return ldiv_search(ray, r, t, slack, R_max, cap)[0]


def check_witness(ray, r, t, length, witness):
    """Whether ``witness`` is a path of ``length`` edges from ray(t-r) to ray(t+r) avoiding the open ball."""
    graph = ray.graph
    verts = ray.path(t + r).vertex_words
    if length is INFINITE:
        return not witness
    if len(witness) != length + 1 or witness[0] != verts[t - r] or witness[-1] != verts[t + r]:
        return False
    if any(dist_nf(graph, verts[t], v) < r for v in witness):
        return False
    return all(dist_nf(graph, a, b) == 1 for a, b in zip(witness, witness[1:]))


def default_t_samples(ray, r):
    """One full period of centres plus the prefix offsets, clipped to the horizon."""
    last = r + len(ray.prefix) + len(ray.period)
    return [t for t in range(r + 1, last + 1) if t + r <= ray.horizon]


@dataclass(frozen=True)
class DivergenceProfile:
    r_values: tuple
    ldiv_values: tuple
    t_min: tuple
    slope: float
    classification: Growth
    witnesses: tuple
    R_max: tuple
    exact: bool = True

    def to_json(self):
        return {
            "r_values": list(self.r_values),
            "ldiv_values": ["INFINITE" if v is INFINITE else v for v in self.ldiv_values],
            "t_min": list(self.t_min),
            "R_max": list(self.R_max),
            "slope": None if self.slope is None else round(self.slope, 6),
            "classification": self.classification.value,
            "exact": self.exact,
        }

    def csv_rows(self, ray_id):
        """Rows ``ray_id, r, t_min, ldiv, infinite_flag, witness_length``."""
        rows = []
        for r, v, t, w in zip(self.r_values, self.ldiv_values, self.t_min, self.witnesses):
            inf = v is INFINITE
            rows.append((ray_id, r, t, "" if inf else v, int(inf), "" if inf else len(w) - 1))
        return rows


def fit_slope(r_values, ldiv_values):
    """Least-squares slope of log(ldiv) against log(r) over finite positive entries."""
    pts = [(math.log(r), math.log(v)) for r, v in zip(r_values, ldiv_values) if v is not INFINITE and v > 0]
    if len(pts) < 2:
        return None
    xs, ys = zip(*pts)
    return linear_regression(xs, ys).slope


def classify(ldiv_values, slope, threshold=LINEAR_THRESHOLD):
    if any(v is INFINITE for v in ldiv_values):
        return Growth.NO_DETOUR
    if slope is not None and slope >= threshold:
        return Growth.SUPERLINEAR
    return Growth.LINEAR


def divergence_profile(ray, r_range, t_samples=None, slack=DEFAULT_SLACK, R_max=None,
                       threshold=LINEAR_THRESHOLD, cap=DEFAULT_NODE_CAP, letters=None):
    """Sampled lower divergence over ``r_range`` with a log-log growth fit.

    ``t_samples`` maps r to centres (or is one list for all r); by default one
    period plus prefix offsets.  With ``letters`` ("ray" for the ray's own
    letters) the searches are restricted to those letters and every value is
    an upper bound rather than exact.
    """
    r_values = tuple(sorted(set(r_range)))
    if r_values and 2 * r_values[-1] >= ray.horizon:
        raise HorizonExceeded(f"r up to {r_values[-1]} needs horizon > {2 * r_values[-1]}")
    values, tmins, wits, rmax = [], [], [], []
    for r in r_values:
        if t_samples is None:
            ts = default_t_samples(ray, r)
        elif callable(t_samples):
            ts = t_samples(r)
        else:
            ts = [t for t in t_samples if t > r and t + r <= ray.horizon]
        best = (INFINITE, None, ())
        for t in ts:
            if letters is None:
                length, wit = ldiv_search(ray, r, t, slack, R_max, cap)
            else:
                length, wit = ldiv_upper_bound(ray, r, t, None if letters == "ray" else letters, slack, R_max, cap)
            if best[1] is None or length < best[0]:
                best = (length, t, wit)
        values.append(best[0])
        tmins.append(best[1])
        wits.append(best[2])
        rmax.append(_r_max(r, slack, R_max))
    slope = fit_slope(r_values, values)
    return DivergenceProfile(r_values, tuple(values), tuple(tmins), slope, classify(values, slope, threshold),
                             tuple(wits), tuple(rmax), letters is None)


@dataclass(frozen=True)
class QuadraticReport:
    """Per-r comparison rows ``(r, ldiv, bound, passed)``.

    With exact values both outcomes are certified; with upper-bound values
    (``exact`` false) only failures are.
    """

    rows: tuple
    pass_fraction: float
    exact: bool = True

    def to_json(self):
        return {
            "pass_fraction": self.pass_fraction,
            "exact": self.exact,
            "rows": [
                {"r": r, "ldiv": "INFINITE" if v is INFINITE else v, "bound": round(b, 6), "pass": p}
                for r, v, b, p in self.rows
            ],
        }


def quadratic_bound(r, D_hat):
    return r * r / (2 * D_hat) - D_hat


def quadratic_bound_check(ray, D_hat, r_range, profile=None, slack_factor=2, **search):
    """Compare ``ldiv(r)`` with ``r^2 / (2 D) - D`` allowing a factor ``slack_factor``.

    A row passes when ``slack_factor * ldiv(r) >= bound``.  ``profile`` reuses
    previously computed values; otherwise one is computed with ``search`` options.
    """
    if D_hat < 1:
        raise ValueError("D_hat must be >= 1")
    if profile is None:
        profile = divergence_profile(ray, r_range, **search)
    values = dict(zip(profile.r_values, profile.ldiv_values))
    rows = []
    for r in sorted(set(r_range)):
        v = values[r]
        b = quadratic_bound(r, D_hat)
        rows.append((r, v, b, b <= 0 or slack_factor * v >= b))
    frac = sum(row[3] for row in rows) / len(rows) if rows else 1.0
    return QuadraticReport(tuple(rows), frac, profile.exact)


__all__ = [
    "INFINITE",
    "DivergenceProfile",
    "Growth",
    "QuadraticReport",
    "check_witness",
    "classify",
    "default_t_samples",
    "divergence_profile",
    "fit_slope",
    "ldiv_at",
    "ldiv_search",
    "ldiv_upper_bound",
    "quadratic_bound",
    "quadratic_bound_check",
]
