"""Pinned experiment suites producing ``results.csv`` and ``summary.json``.

Every CSV row is one metric of one computation described by ``kind``,
``subject`` and ``params``; :func:`evaluate` recomputes it from those three
fields alone, which is what the spot-check harness relies on.
"""
import csv
import io
import json
import random

from . import __version__
from .catalog import builtin
from .cayley import GeodesicPath
from .divergence import INFINITE, divergence_profile, quadratic_bound_check
from .group import append_letter, reduce_word
from .rays import (
    DetectorParams,
    RaySpec,
    block_decomposition,
    block_time,
    bounded_projection_check,
    detect_contracting,
    estimate_contraction,
    estimate_slimness,
    itinerary,
    random_ray,
    widest_obstruction,
)
from .walls import separation, walls_of_path

COLUMNS = ("claim_id", "kind", "subject", "params", "metric", "value")
SUITES = ("hexagon", "k33", "croke-kleiner", "gamma1-vs-gamma2")


def format_params(params):
    return ";".join(f"{k}={params[k]}" for k in sorted(params))


def parse_params(text):
    out = {}
    for item in text.split(";"):
        if item:
            k, _, v = item.partition("=")
            out[k] = v
    return out


def _int(p, key, default=None):
    return int(p[key]) if key in p else default


def _ray(graph, subject, horizon):
    prefix, _, period = subject.partition("|")
    return RaySpec.parse(graph, prefix, period, horizon)


def _rrange(text):
    lo, _, hi = text.partition("-")
    return range(int(lo), int(hi) + 1)


def _fmt(v):
    if v is INFINITE:
        return "INFINITE"
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def evaluate(kind, subject, params):
    """Recompute the metrics of one row group; returns ``{metric: string value}``."""
    p = parse_params(params)
    graph = builtin(p["graph"])
    if kind == "detect":
        ray = _ray(graph, subject, _int(p, "horizon"))
        d = detect_contracting(ray, DetectorParams(_int(p, "k"), _int(p, "r"), _int(p, "radius")))
        out = {"verdict": d.verdict}
        if d.accepted:
            out["chain_length"] = len(d.witness.indices)
            out["max_gap"] = d.witness.max_gap
        else:
            out["window_width"] = d.window_width
        return {k: _fmt(v) for k, v in out.items()}
    if kind == "obstruction":
        ray = _ray(graph, subject, _int(p, "horizon"))
        w = widest_obstruction(ray, DetectorParams(_int(p, "k"), _int(p, "r"), _int(p, "radius")))
        return {"widest_window": _fmt(w)}
    if kind == "separation":
        word, i, j = subject.split("|")
        walls = walls_of_path(GeodesicPath(graph.identity(), graph.parse_word(word)))
        v = separation(walls[int(i) - 1], walls[int(j) - 1], _int(p, "radius"))
        return {"relation": v.relation.value, "count": _fmt(v.crossing_both_count)}
    if kind == "profile":
        ray = _ray(graph, subject, _int(p, "horizon"))
        letters = "ray" if p.get("restrict") == "ray" else None
        prof = divergence_profile(ray, _rrange(p["r"]), slack=_int(p, "slack"), letters=letters)
        out = {f"ldiv_r{r}": _fmt(v) for r, v in zip(prof.r_values, prof.ldiv_values)}
        out["slope"] = _fmt(prof.slope) if prof.slope is not None else "NA"
        out["classification"] = prof.classification.value
        return out
    if kind == "quadratic":
        ray = _ray(graph, subject, _int(p, "horizon"))
        letters = "ray" if p.get("restrict") == "ray" else None
        rr = _rrange(p["r"])
        prof = divergence_profile(ray, rr, slack=_int(p, "slack"), letters=letters)
        rep = quadratic_bound_check(ray, _int(p, "D"), rr, profile=prof)
        return {"pass_fraction": _fmt(rep.pass_fraction)}
    if kind == "contraction":
        ray = _ray(graph, subject, _int(p, "horizon"))
        est = estimate_contraction(ray.path(), [_int(p, "rho")], _int(p, "budget"), _int(p, "seed"))
        return {"D_hat": _fmt(est.D_hat)}
    if kind == "slimness":
        ray = _ray(graph, subject, _int(p, "horizon"))
        est = estimate_slimness(ray.path(), _int(p, "budget"), _int(p, "seed"), _int(p, "sample_radius"))
        return {"delta_i": _fmt(est.delta_i), "delta_ii": _fmt(est.delta_ii)}
    if kind == "projection":
        a, _, b = subject.partition("||")
        h = _int(p, "horizon")
        return {"displacement": _fmt(bounded_projection_check(_ray(graph, a, h), _ray(graph, b, h), h))}
    if kind == "blocks":
        return {"block_time": _fmt(block_time(block_decomposition(graph, subject)))}
    if kind == "itinerary":
        it = itinerary(graph, subject)
        labels = it.labels()
        alternates = all(x != y for x, y in zip(labels, labels[1:]))
        return {"length": _fmt(len(it)), "alternates": str(alternates)}
    raise ValueError(f"unknown row kind {kind!r}")


class _Collector:
    def __init__(self):
        self.rows = []

    def add(self, claim, kind, subject, params):
        params = format_params(params)
        metrics = evaluate(kind, subject, params)
        for metric in sorted(metrics):
            self.rows.append((claim, kind, subject, params, metric, metrics[metric]))
        return metrics


def _ray_subject(ray):
    g = ray.graph
    return f"{g.format_word(ray.prefix)}|{g.format_word(ray.period)}"


def _sample_rays(graph, seed, n, horizon, letters=None, salt=0):
    rng = random.Random(seed * 1000 + salt)
    seen = []
    while len(seen) < n:
        ray = random_ray(graph, rng, horizon, letters=letters)
        if _ray_subject(ray) not in seen:
            seen.append(_ray_subject(ray))
    return seen


def _random_word(graph, rng, n):
    """Random normal form of length ``n`` grown one letter at a time."""
    word = ()
    while len(word) < n:
        nxt = append_letter(graph, word, rng.choice(graph.codes))
        if len(nxt) > len(word):
            word = nxt
    return word


def _claim(cid, description, anchor, ok, data_ref=None):
    return {
        "id": cid,
        "description": description,
        "paper_anchor": anchor,
        "status": "PASS" if ok else "FAIL",
        "data_ref": data_ref or f"results.csv#claim_id={cid}",
    }


def _values(rows, cid, metric):
    return [r[5] for r in rows if r[0] == cid and r[4] == metric]


# -- suites ---------------------------------------------------------------------


def suite_hexagon(seed):
    col = _Collector()
    g = "hexagon"
    graph = builtin(g)
    for subj in _sample_rays(graph, seed, 6, 40):
        col.add("HEX-1", "detect", subj, {"graph": g, "k": 1, "r": 6, "radius": 6, "horizon": 40})
    rng = random.Random(seed)
    pairs = 0
    while pairs < 12:
        word = _random_word(graph, rng, rng.randint(2, 10))
        i, j = sorted(rng.sample(range(1, len(word) + 1), 2))
        subject = f"{graph.format_word(word)}|{i}|{j}"
        if evaluate("separation", subject, format_params({"graph": g, "radius": 6}))["relation"] != "DISJOINT":
            continue
        col.add("HEX-2", "separation", subject, {"graph": g, "radius": 6})
        pairs += 1
    base = "|h1 h3"
    col.add("HEX-3", "profile", base, {"graph": g, "horizon": 30, "r": "2-6", "slack": 1})
    col.add("HEX-4", "contraction", base, {"graph": g, "horizon": 12, "rho": 3, "budget": 10, "seed": seed})
    col.add("HEX-4", "slimness", base, {"graph": g, "horizon": 12, "budget": 10, "seed": seed, "sample_radius": 4})
    d_hat = int(_values(col.rows, "HEX-4", "D_hat")[0])
    col.add("HEX-5", "quadratic", base, {"graph": g, "horizon": 30, "r": "2-6", "slack": 1, "D": max(d_hat, 1)})
    rows = col.rows
    di = int(_values(rows, "HEX-4", "delta_i")[0])
    dii = int(_values(rows, "HEX-4", "delta_ii")[0])
    claims = [
        _claim("HEX-1", "sampled periodic rays accepted at k=1, r=6 (radius 6)",
               "every hyperplane pair in the hexagon group is 0- or 1-separated",
               set(_values(rows, "HEX-1", "verdict")) == {"ACCEPT"}),
        _claim("HEX-2", "random disjoint wall pairs have at most one wall crossing both (radius 6)",
               "every hyperplane pair in the hexagon group is 0- or 1-separated",
               all(int(v) <= 1 for v in _values(rows, "HEX-2", "count"))),
        _claim("HEX-3", "lower divergence of (h1 h3)^inf is superlinear over r=2..6",
               "contracting rays have at least quadratic lower divergence",
               _values(rows, "HEX-3", "classification") == ["SUPERLINEAR"]),
        _claim("HEX-4", "contraction estimate bounded by six times slimness plus slack",
               "contraction constant controlled by the thin triangle constant",
               d_hat <= 6 * di + 2 and di <= 3 * dii + 2 and dii <= di + 2),
        _claim("HEX-5", "quadratic lower-divergence bound holds with slack factor 2",
               "contracting implies lower divergence at least r^2/2D - D",
               float(_values(rows, "HEX-5", "pass_fraction")[0]) >= 0.9),
    ]
    return rows, claims


def suite_k33(seed):
    col = _Collector()
    g = "k33"
    graph = builtin(g)
    for subj in _sample_rays(graph, seed, 6, 40):
        col.add("K33-1", "detect", subj, {"graph": g, "k": 8, "r": 6, "radius": 8, "horizon": 40})
    diag = "|x1 y1 x2 y2"
    col.add("K33-2", "profile", diag, {"graph": g, "horizon": 24, "r": "2-8", "slack": 1})
    for rho in (1, 2, 3):
        col.add("K33-3", "contraction", diag, {"graph": g, "horizon": 24, "rho": rho, "budget": 8, "seed": seed})
    col.add("K33-4", "quadratic", diag, {"graph": g, "horizon": 130, "r": "50-60", "slack": 1, "D": 3,
                                           "restrict": "ray"})
    rows = col.rows
    dh = [int(v) for v in _values(rows, "K33-3", "D_hat")]
    claims = [
        _claim("K33-1", "sampled periodic rays rejected for k=8 (radius 8)",
               "the group is a direct product of two infinite groups, so no ray is contracting",
               set(_values(rows, "K33-1", "verdict")) == {"REJECT"}),
        _claim("K33-2", "diagonal ray has linear lower divergence over r=2..8",
               "a direct product has no contracting geodesics",
               _values(rows, "K33-2", "classification")[0] in ("LINEAR", "NO_DETOUR")),
        _claim("K33-3", "projection diameter of disjoint balls grows with the ball radius",
               "a direct product has no contracting geodesics",
               dh == sorted(dh) and dh[-1] > dh[0]),
        _claim("K33-4", "quadratic bound with D=3 fails at large r (certified by explicit detours)",
               "a direct product has no contracting geodesics",
               float(_values(rows, "K33-4", "pass_fraction")[0]) < 1),
    ]
    return rows, claims


CK_BOUNDED_PERIODS = ("a d", "a b d c", "a b c d", "a b^-1 d c", "b a c d", "a c d b", "a b b d", "a b d c c")


def suite_croke_kleiner(seed):
    col = _Collector()
    g = "croke-kleiner"
    col.add("CK-1", "detect", "|a d", {"graph": g, "k": 0, "r": 2, "radius": 6, "horizon": 40})
    col.add("CK-2", "detect", "|b", {"graph": g, "k": 8, "r": 6, "radius": 8, "horizon": 40})
    for period in CK_BOUNDED_PERIODS:
        col.add("CK-3", "blocks", " ".join([period] * 4), {"graph": g})
        col.add("CK-3", "detect", f"|{period}", {"graph": g, "k": 0, "r": 4, "radius": 4, "horizon": 40})
    rng = random.Random(seed)
    graph = builtin(g)
    b1 = [graph.letter(x, s) for x in "abc" for s in (1, -1)]
    for L in (8, 10, 12):
        word = list(graph.parse_word("d a"))
        while len(word) < L + 1:
            c = rng.choice(b1)
            if len(reduce_word(graph, word + [c])) == len(word) + 1:
                word.append(c)
        prefix = graph.format_word(word)
        col.add("CK-4", "blocks", prefix + " d", {"graph": g})
        col.add("CK-4", "detect", f"{prefix}|d a", {"graph": g, "k": 0, "r": 4, "radius": 4, "horizon": 40})
    col.add("CK-5", "projection", "|a d|||b", {"graph": g, "horizon": 30})
    rows = col.rows
    ck3_blocks = [int(v) for v in _values(rows, "CK-3", "block_time")]
    ck4 = [r for r in rows if r[0] == "CK-4"]
    ck4_ok = True
    dets = {r[2]: {} for r in ck4 if r[1] == "detect"}
    for r in ck4:
        if r[1] == "detect":
            dets[r[2]][r[4]] = r[5]
    blocks = {r[2]: int(r[5]) for r in ck4 if r[4] == "block_time"}
    for subj, m in dets.items():
        prefix = subj.split("|")[0]
        L = blocks[prefix + " d"]
        ck4_ok &= m.get("verdict") == "REJECT" and int(m.get("window_width", 0)) >= L - 2
    claims = [
        _claim("CK-1", "(a d)^inf accepted at k=0, r=2",
               "no generator commutes with both a and d, so their hyperplanes are strongly separated",
               _values(rows, "CK-1", "verdict") == ["ACCEPT"]),
        _claim("CK-2", "b^inf rejected at k=8 (radius 8)",
               "a ray staying in one block lies in a product region",
               _values(rows, "CK-2", "verdict") == ["REJECT"]),
        _claim("CK-3", "periodic rays with block time at most 3 accepted at k=0, r=4",
               "a ray is contracting when it spends bounded time in each block",
               max(ck3_blocks) <= 3 and set(_values(rows, "CK-3", "verdict")) == {"ACCEPT"}),
        _claim("CK-4", "a block of length L gives an obstruction window of width at least L-2",
               "long stays in one block destroy contraction", ck4_ok),
        _claim("CK-5", "projection of b^inf onto (a d)^inf stays bounded",
               "a contracting ray sees every other ray through a bounded projection",
               int(_values(rows, "CK-5", "displacement")[0]) <= 2),
    ]
    return rows, claims


GAMMA1_BLOCKS = (4, 6, 8, 10)


def _gamma1_block_subject(L):
    return "c1 c3 " + " ".join(["c4", "c6"] * (L // 2)) + "|c1 c3"


def suite_gamma1_vs_gamma2(seed):
    col = _Collector()
    g2 = builtin("gamma2")
    acodes = [g2.letter(f"a{i}") for i in range(1, 7)]
    for subj in _sample_rays(g2, seed, 8, 40, letters=acodes):
        col.add("G-1", "detect", subj, {"graph": "gamma2", "k": 1, "r": 6, "radius": 4, "horizon": 40})
    for L in GAMMA1_BLOCKS:
        col.add("G-2", "obstruction", _gamma1_block_subject(L),
                {"graph": "gamma1", "k": 1, "r": 4, "radius": 4, "horizon": 40})
    g1 = builtin("gamma1")
    rng = random.Random(seed)
    for _ in range(8):
        word = _random_word(g1, rng, rng.randint(4, 12))
        col.add("G-3", "itinerary", g1.format_word(word), {"graph": "gamma1"})
    rows = col.rows
    widths = [int(v) for v in _values(rows, "G-2", "widest_window")]
    g1_ok = set(_values(rows, "G-1", "verdict")) == {"ACCEPT"}
    g2_ok = all(a < b for a, b in zip(widths, widths[1:]))
    claims = [
        _claim("G-1", "sampled a-hexagon rays in gamma2 accepted at uniform k=1, r=6 (radius 4)",
               "hyperplanes of the hexagon subgroup stay at most 1-separated in the larger group", g1_ok),
        _claim("G-2", "gamma1 rays with C-blocks of length 4,6,8,10 show strictly growing obstruction width",
               "long excursions into the shared subgroup break uniform separation in gamma1", g2_ok),
        _claim("G-3", "itineraries of sampled gamma1 words alternate between the two vertex types",
               "geodesics trace a path in the Bass-Serre tree of the amalgam",
               set(_values(rows, "G-3", "alternates")) == {"True"}),
        _claim("G-4", "qualitative contrast: uniform acceptance in gamma2 versus growing obstructions in gamma1",
               "the two groups have different contracting boundaries", g1_ok and g2_ok),
    ]
    return rows, claims


_RUNNERS = {
    "hexagon": suite_hexagon,
    "k33": suite_k33,
    "croke-kleiner": suite_croke_kleiner,
    "gamma1-vs-gamma2": suite_gamma1_vs_gamma2,
}


def run_suite(name, seed=0):
    """Return ``(csv_text, summary_dict)`` for one suite."""
    try:
        runner = _RUNNERS[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    rows, claims = runner(seed)
    rows = sorted(rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    writer.writerows(rows)
    summary = {"suite": name, "version": __version__, "seed": seed, "claims": claims}
    return buf.getvalue(), summary


def summary_text(summary):
    return json.dumps(summary, indent=2, sort_keys=False) + "\n"


def write_suite(name, out_dir, seed=0):
    """Run a suite and write ``results.csv`` and ``summary.json`` into ``out_dir``."""
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    text, summary = run_suite(name, seed)
    (out / "results.csv").write_text(text, encoding="utf-8")
    (out / "summary.json").write_text(summary_text(summary), encoding="utf-8")
    return summary


def read_rows(text):
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != COLUMNS:
        raise ValueError("unexpected CSV header")
    return [tuple(r) for r in reader]


def spot_check(text, fraction=0.05, seed=0):
    """Re-evaluate a seeded sample of CSV rows; returns the list of mismatching rows."""
    rows = read_rows(text)
    rng = random.Random(seed)
    n = max(1, round(fraction * len(rows)))
    bad = []
    for row in rng.sample(rows, min(n, len(rows))):
        _, kind, subject, params, metric, value = row
        if evaluate(kind, subject, params).get(metric) != value:
            bad.append(row)
    return bad
