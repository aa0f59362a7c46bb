"""Command-line interface: ``cubebound <subcommand> [options]``.

Exit codes: 0 success, 1 usage, 2 parse error, 3 precondition violation,
4 resource limit.
"""
import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .catalog import NAMES, builtin
from .cayley import GeodesicPath, distance
from .divergence import INFINITE, divergence_profile, ldiv_search, ldiv_upper_bound
from .errors import InvalidLetter, ParseError, PreconditionError, ResourceLimit
from .group import parse_presentation
from .rays import (
    GAMMA1_AMALGAM,
    DetectorParams,
    RaySpec,
    detect_contracting,
    estimate_contraction,
    estimate_slimness,
    itinerary,
)
from .suites import SUITES, summary_text, write_suite
from .walls import separation, walls_of_path

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_PRECONDITION, EXIT_RESOURCE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load_graph(args, default=None):
    if args.graph_file:
        try:
            text = Path(args.graph_file).read_text(encoding="utf-8")
        except OSError as e:
            raise UsageError(f"cannot read {args.graph_file}: {e}") from None
        return parse_presentation(text)
    name = args.builtin or default
    if name is None:
        raise UsageError("a graph is required: --builtin NAME or -g FILE")
    return builtin(name)


def _ray(args, graph):
    if args.period is None:
        raise UsageError("--period is required")
    return RaySpec.parse(graph, args.prefix or "", args.period, args.horizon)


def _path(args, graph):
    if getattr(args, "word", None):
        return GeodesicPath(graph.identity(), graph.parse_word(args.word))
    ray = _ray(args, graph)
    return ray.path()


class _Output:
    def __init__(self, args, name):
        self.args = args
        self.name = name

    def emit(self, text, payload):
        args = self.args
        body = json.dumps(payload, indent=2) + "\n" if args.json else text + "\n"
        sys.stdout.write(body)
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{self.name}.{'json' if args.json else 'txt'}").write_text(body, encoding="utf-8")


# -- subcommands ------------------------------------------------------------------


def cmd_nf(args):
    graph = _load_graph(args)
    g = graph.element(args.word)
    _Output(args, "nf").emit(str(g), {"word": args.word, "nf": graph.format_word(g.nf), "length": len(g)})


def cmd_dist(args):
    graph = _load_graph(args)
    a, b = graph.element(args.source), graph.element(args.target)
    d = distance(a, b)
    _Output(args, "dist").emit(str(d), {"from": str(a), "to": str(b), "distance": d})


def cmd_walls(args):
    graph = _load_graph(args)
    path = GeodesicPath(graph.identity(), graph.parse_word(args.word))
    walls = walls_of_path(path)
    lines = [f"{i}\t{w}" for i, w in enumerate(walls, start=1)]
    _Output(args, "walls").emit("\n".join(lines), {"walls": [w.to_json() for w in walls]})


def cmd_sep(args):
    graph = _load_graph(args)
    path = GeodesicPath(graph.identity(), graph.parse_word(args.word))
    walls = walls_of_path(path)
    i = args.i or 1
    j = args.j or len(walls)
    if not 1 <= i <= len(walls) or not 1 <= j <= len(walls):
        raise UsageError(f"wall positions must lie in 1..{len(walls)}")
    v = separation(walls[i - 1], walls[j - 1], args.radius, threshold=args.threshold)
    text = f"{v.relation.value}"
    if v.relation.value == "DISJOINT":
        text += f" count={v.crossing_both_count} radius={v.search_radius}"
        text += "".join(f"\n  {w}" for w in v.witnesses)
    payload = {"walls": [walls[i - 1].to_json(), walls[j - 1].to_json()], **v.to_json()}
    _Output(args, "sep").emit(text, payload)


def cmd_detect(args):
    graph = _load_graph(args)
    ray = _ray(args, graph)
    d = detect_contracting(ray, DetectorParams(args.k, args.r, args.radius))
    if d.accepted:
        text = f"ACCEPT chain={' '.join(map(str, d.witness.indices))} max_gap={d.witness.max_gap} (radius-limited)"
    else:
        u, v = d.window
        text = f"REJECT window=[{u},{v}] width={d.window_width} reached={d.reached}"
    _Output(args, "detect").emit(text, {"ray": ray.to_json(), **d.to_json()})


def cmd_ldiv(args):
    graph = _load_graph(args)
    ray = _ray(args, graph)
    if args.t is not None:
        if args.r is None:
            raise UsageError("--t needs --r")
        search = ldiv_upper_bound if args.restrict_ray else ldiv_search
        kw = {"slack": args.slack}
        length, wit = search(ray, args.r, args.t, **kw)
        value = "INFINITE" if length is INFINITE else length
        _Output(args, "ldiv").emit(str(value), {"r": args.r, "t": args.t, "ldiv": value, "exact": not args.restrict_ray})
        return
    if args.r is not None:
        rr = [args.r]
    elif args.r_range:
        lo, _, hi = args.r_range.partition("-")
        rr = range(int(lo), int(hi or lo) + 1)
    else:
        raise UsageError("give --r or --r-range")
    prof = divergence_profile(ray, rr, slack=args.slack, letters="ray" if args.restrict_ray else None)
    lines = [f"r={r} ldiv={'INFINITE' if v is INFINITE else v} t={t}"
             for r, v, t in zip(prof.r_values, prof.ldiv_values, prof.t_min)]
    lines.append(f"slope={'NA' if prof.slope is None else f'{prof.slope:.4f}'} {prof.classification.value}")
    _Output(args, "ldiv").emit("\n".join(lines), {"ray": ray.to_json(), **prof.to_json()})
    if args.out:
        with open(Path(args.out) / "ldiv.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("ray_id", "r", "t_min", "ldiv", "infinite_flag", "witness_length"))
            w.writerows(prof.csv_rows(ray.label()))


def cmd_slim(args):
    graph = _load_graph(args)
    est = estimate_slimness(_path(args, graph), args.budget, args.seed, args.sample_radius)
    _Output(args, "slim").emit(f"delta_i={est.delta_i} delta_ii={est.delta_ii}", est.to_json())


def cmd_contract(args):
    graph = _load_graph(args)
    radii = [int(x) for x in args.radii.split(",")]
    est = estimate_contraction(_path(args, graph), radii, args.budget, args.seed)
    _Output(args, "contract").emit(f"D_hat={est.D_hat}", est.to_json())


def cmd_itinerary(args):
    graph = _load_graph(args, default="gamma1")
    amalgam = GAMMA1_AMALGAM
    if args.amalgam:
        parts = args.amalgam.split("/")
        if len(parts) != 3:
            raise UsageError("--amalgam expects GAMMA_ONLY/SHARED/OMEGA_ONLY comma lists")
        amalgam = tuple(tuple(x for x in p.split(",") if x) for p in parts)
    it = itinerary(graph, args.word, amalgam)
    _Output(args, "itinerary").emit(str(it), {"word": args.word, "vertices": it.to_json(), "length": len(it)})


def cmd_suite(args):
    out = args.out or f"suite-{args.name}"
    summary = write_suite(args.name, out, args.seed)
    if args.json:
        sys.stdout.write(summary_text(summary))
    else:
        for c in summary["claims"]:
            sys.stdout.write(f"{c['status']}  {c['id']}  {c['description']}\n")
        sys.stdout.write(f"wrote {Path(out) / 'results.csv'} and {Path(out) / 'summary.json'}\n")


# -- parser -------------------------------------------------------------------------


def build_parser():
    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--builtin", choices=NAMES, help="built-in presentation graph")
    src.add_argument("-g", dest="graph_file", metavar="FILE", help=".ggp presentation file")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", metavar="DIR", help="also write outputs into DIR")
    common.add_argument("--seed", type=int, default=0)

    ray = _Parser(add_help=False)
    ray.add_argument("--prefix", default="")
    ray.add_argument("--period")
    ray.add_argument("--horizon", type=int, default=40)

    parser = _Parser(prog="cubebound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cubebound {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("nf", parents=[common], help="normal form of a word")
    p.add_argument("-w", "--word", required=True)
    p.set_defaults(func=cmd_nf)

    p = sub.add_parser("dist", parents=[common], help="distance between two elements")
    p.add_argument("--from", dest="source", default="")
    p.add_argument("--to", dest="target", required=True)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("walls", parents=[common], help="walls crossed by a geodesic word")
    p.add_argument("-w", "--word", required=True)
    p.set_defaults(func=cmd_walls)

    p = sub.add_parser("sep", parents=[common], help="separation of two walls of a geodesic word")
    p.add_argument("-w", "--word", required=True)
    p.add_argument("-i", type=int, help="first wall position (default 1)")
    p.add_argument("-j", type=int, help="second wall position (default last)")
    p.add_argument("--radius", type=int, default=6)
    p.add_argument("--threshold", type=int)
    p.set_defaults(func=cmd_sep)

    p = sub.add_parser("detect", parents=[common, ray], help="contracting-ray detector")
    p.add_argument("-k", type=int, default=1)
    p.add_argument("-r", type=int, default=6)
    p.add_argument("--radius", type=int, default=6)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("ldiv", parents=[common, ray], help="lower divergence")
    p.add_argument("--r", type=int)
    p.add_argument("--r-range", metavar="LO-HI")
    p.add_argument("--t", type=int)
    p.add_argument("--slack", type=int, default=1, help="search shell is r..r+slack")
    p.add_argument("--restrict-ray", action="store_true", help="search only the ray's letters (upper bounds)")
    p.set_defaults(func=cmd_ldiv)

    p = sub.add_parser("slim", parents=[common, ray], help="thin-triangle estimates")
    p.add_argument("-w", "--word", help="geodesic word instead of a ray")
    p.add_argument("--budget", type=int, default=40)
    p.add_argument("--sample-radius", type=int, default=5)
    p.set_defaults(func=cmd_slim)

    p = sub.add_parser("contract", parents=[common, ray], help="contraction estimate")
    p.add_argument("-w", "--word", help="geodesic word instead of a ray")
    p.add_argument("--radii", default="1,2,3")
    p.add_argument("--budget", type=int, default=20)
    p.set_defaults(func=cmd_contract)

    p = sub.add_parser("itinerary", parents=[common], help="Bass-Serre itinerary (default graph gamma1)")
    p.add_argument("-w", "--word", required=True)
    p.add_argument("--amalgam", help="GAMMA_ONLY/SHARED/OMEGA_ONLY, e.g. c1,c2,c3/c4,c5,c6/d1,d2,d3")
    p.set_defaults(func=cmd_itinerary)

    p = sub.add_parser("suite", parents=[common], help="run an experiment suite")
    p.add_argument("name", choices=SUITES)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, InvalidLetter) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceLimit as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (PreconditionError, ValueError) as e:
        print(f"precondition violated: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except KeyError as e:
        print(e.args[0] if e.args else e, file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
