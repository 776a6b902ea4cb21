"""Command-line interface, point-set generation, and SVG rendering.

Subcommands:

    gen      emit a point set (random, circle, or one of the adversarial
             lower-bound instances) as JSON
    build    construct a spanner over a point-set file
    analyze  measure the exact spanning ratio of a graph file
    verify   measure and compare against the bound registered for the kind
    route    run one of the routing engines between two vertices
    render   draw a point set or graph as a deterministic SVG

Exit codes: 0 on success, 1 when a checked bound fails, 2 on usage errors or
rejected input.
"""

from __future__ import annotations

import argparse
import bisect
import json
import math
import os
import random
import sys

from . import analysis, build, kernels, routing
from .build import SpannerGraph, graph_from_json, graph_to_json
from .errors import DegenerateInput, InvalidParameter, SpannerKitError
from .geometry import PointSet, general_position_report, points_from_json, points_to_json

SEED_ENV = "SPANNER_KIT_SEED"

GEN_KINDS = (
    "random",
    "circle",
    "theta5_lb",
    "routing_lb_positive",
    "routing_lb_negative_a",
    "routing_lb_negative_b",
)

BUILD_GRAPHS = ("yao", "theta", "half_theta6", "g12", "g9", "rotated_union", "mst")

ROUTE_ALGOS = ("stateless", "stateful", "g12", "g9")


def gen_random(n: int, seed: int, k: int = 6, retries: int = 100) -> PointSet:
    """n points uniform in the unit square, resampled into general position.

    Each point gets up to `retries` fresh draws to clear the degeneracy checks
    against the points already placed (at a tolerance well above the one the
    final report uses); the finished set must still produce an empty
    general-position report or the input is rejected.
    """
    if n < 1:
        raise InvalidParameter(f"need at least 1 point, got {n}")
    rng = random.Random(seed)
    bad_dirs = _avoided_directions(k)
    placed: list[tuple[float, float]] = []
    # Sorted distances seen from each placed point, for fast equidistance tests.
    dist_lists: list[list[float]] = []
    for _ in range(n):
        for _attempt in range(retries):
            cand = (rng.random(), rng.random())
            dists = _clears_degeneracies(placed, dist_lists, cand, bad_dirs)
            if dists is not None:
                for lst, d in zip(dist_lists, dists):
                    bisect.insort(lst, d)
                dist_lists.append(sorted(dists))
                placed.append(cand)
                break
        else:
            raise DegenerateInput(
                f"could not place point {len(placed)} in general position "
                f"after {retries} attempts"
            )
    ps = PointSet.from_pairs(placed)
    findings = general_position_report(ps, k)
    if findings:
        raise DegenerateInput(f"generated set is degenerate: {findings[0]}")
    return ps


def _avoided_directions(k: int) -> list[float]:
    theta = 2.0 * math.pi / k
    bad = set()
    for i in range(k):
        az = (i * theta + theta / 2.0) % math.pi
        bad.add(az)
        bad.add((az + math.pi / 2.0) % math.pi)
    return sorted(bad)


def _clears_degeneracies(placed, dist_lists, cand, bad_dirs, eps: float = 1e-7):
    """Distances from cand to each placed point, or None if cand is degenerate."""
    cx, cy = cand
    dists = []
    for i, (px, py) in enumerate(placed):
        dx = cx - px
        dy = cy - py
        d = math.hypot(dx, dy)
        if d <= eps:
            return None
        az = kernels.azimuth(dx, dy) % math.pi
        for b in bad_dirs:
            diff = abs(az - b)
            if min(diff, math.pi - diff) <= eps:
                return None
        # Would cand tie an existing distance from this apex?
        lst = dist_lists[i]
        at = bisect.bisect_left(lst, d)
        tol = eps * max(1.0, d)
        if at < len(lst) and lst[at] - d <= tol:
            return None
        if at > 0 and d - lst[at - 1] <= tol:
            return None
        dists.append(d)
    ordered = sorted(dists)
    for d1, d2 in zip(ordered, ordered[1:]):
        if d2 - d1 <= eps * max(1.0, d1):
            return None
    return dists


def render_svg(obj, overlay=None) -> str:
    """Deterministic SVG for a point set or graph, world y pointing up.

    With a RoutingTrace overlay (graphs only) the walked path is highlighted
    and the queried pair's canonical triangle is outlined.
    """
    if isinstance(obj, SpannerGraph):
        pts = sorted(obj.points, key=lambda p: p.id)
        edges = obj.edge_list()
        coord = {p.id: (p.x, p.y) for p in pts}
    elif isinstance(obj, PointSet):
        if overlay is not None:
            raise InvalidParameter("route overlays need the graph, not just points")
        pts = sorted(obj, key=lambda p: p.id)
        edges = []
        coord = {p.id: (p.x, p.y) for p in pts}
    else:
        raise InvalidParameter("render expects a PointSet or SpannerGraph")
    if not pts:
        raise InvalidParameter("nothing to render")

    tri = None
    if overlay is not None:
        if overlay.source not in coord or overlay.target not in coord:
            raise InvalidParameter("overlay endpoints are not vertices of the graph")
        tri = _pair_triangle(obj, coord[overlay.source], coord[overlay.target])

    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    if tri is not None:
        xs = xs + [c[0] for c in tri.polygon()]
        ys = ys + [c[1] for c in tri.polygon()]
    minx, maxx = min(xs), max(xs)
    miny, maxy = min(ys), max(ys)
    span = max(maxx - minx, maxy - miny)
    if span <= 0.0:
        span = 1.0
    size = 640.0
    margin = 40.0
    s = (size - 2.0 * margin) / span

    def fmt(v: float) -> str:
        return "%.9g" % (v + 0.0)

    # World -> screen: x' = s*x + e, y' = -s*y + f (y up).
    e = margin - s * minx
    f = size - margin + s * miny
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{fmt(size)}" '
        f'height="{fmt(size)}" viewBox="0 0 {fmt(size)} {fmt(size)}">',
        f'<g transform="matrix({fmt(s)} 0 0 {fmt(-s)} {fmt(e)} {fmt(f)})" '
        f'stroke="#444" stroke-width="{fmt(1.5 / s)}" fill="#c22">',
    ]
    for u, v in edges:
        ux, uy = coord[u]
        vx, vy = coord[v]
        out.append(
            f'<line x1="{fmt(ux)}" y1="{fmt(uy)}" x2="{fmt(vx)}" y2="{fmt(vy)}"/>'
        )
    if tri is not None:
        corners = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in tri.polygon())
        out.append(
            f'<polygon points="{corners}" fill="none" stroke="#2a7" '
            f'stroke-width="{fmt(1.0 / s)}" stroke-dasharray="{fmt(6.0 / s)}"/>'
        )
        walk = overlay.path()
        for u, v in zip(walk, walk[1:]):
            ux, uy = coord[u]
            vx, vy = coord[v]
            out.append(
                f'<line class="route" x1="{fmt(ux)}" y1="{fmt(uy)}" '
                f'x2="{fmt(vx)}" y2="{fmt(vy)}" stroke="#06c" '
                f'stroke-width="{fmt(3.0 / s)}"/>'
            )
    r = fmt(3.0 / s)
    for p in pts:
        out.append(f'<circle cx="{fmt(p.x)}" cy="{fmt(p.y)}" r="{r}" stroke="none"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _pair_triangle(g: SpannerGraph, su, tu):
    """Canonical triangle of a queried pair.

    For 6-cone kinds this is the pair's unique triangle (apex at whichever
    endpoint sees the other in a positive cone); otherwise it is taken from
    the source's side.
    """
    from .geometry import ConeSystem, canonical_triangle

    k = g.k if g.kind in ("yao", "theta") else 6
    cs = ConeSystem(k)
    if k == 6 and cs.cone_of(su, tu) % 2 != 0:
        return canonical_triangle(cs, tu, su)
    return canonical_triangle(cs, su, tu)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spannerkit", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a point set")
    p.add_argument("--kind", choices=GEN_KINDS, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--nudge", type=float, default=1e-4)
    p.add_argument("--out")

    p = sub.add_parser("build", help="build a spanner over a point-set file")
    p.add_argument("--graph", choices=BUILD_GRAPHS, required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--k", type=int, help="cone count (copies m for rotated_union)")
    p.add_argument("--out")

    p = sub.add_parser("analyze", help="measure the exact spanning ratio")
    p.add_argument("--graph", required=True)
    p.add_argument("--per-pair", action="store_true",
                   help="include every pair; with an --out ending in .csv the "
                        "table goes there as CSV and the summary to stdout")
    p.add_argument("--check", action="store_true",
                   help="also compare against the kind's bound; exit 1 on failure")
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--out")

    p = sub.add_parser("verify", help="compare the spanning ratio against the bound")
    p.add_argument("--graph", required=True,
                   help="graph JSON file, or a kind name to verify over fresh "
                        "random trials (--n/--trials/--seed)")
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--k", type=int, help="cone count (copies m for rotated_union)")
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--out")

    p = sub.add_parser("route", help="run a routing engine between two vertices")
    p.add_argument("--graph", required=True)
    p.add_argument("--algo", choices=ROUTE_ALGOS, required=True)
    p.add_argument("--from", dest="src", type=int, required=True)
    p.add_argument("--to", dest="dst", type=int, required=True)
    p.add_argument("--trace", action="store_true", help="emit every step, not just totals")
    p.add_argument("--check", action="store_true", help="exit 1 when the travel bound fails")
    p.add_argument("--svg", help="also draw the walked path over the graph to this file")
    p.add_argument("--out")

    p = sub.add_parser("render", help="draw a point set or graph as SVG")
    p.add_argument("--points")
    p.add_argument("--graph")
    p.add_argument("--out")

    return parser


def _emit(doc: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(doc)
    else:
        sys.stdout.write(doc)


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidParameter(f"cannot read {path}: {exc}") from exc


def _resolve_seed(seed: int | None, what: str) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        raise InvalidParameter(f"{what} requires --seed or ${SEED_ENV}")
    try:
        return int(env)
    except ValueError as exc:
        raise InvalidParameter(f"${SEED_ENV} is not an integer: {env!r}") from exc


def _cmd_gen(args) -> int:
    if args.kind == "random":
        if args.n is None:
            raise InvalidParameter("gen --kind random requires --n")
        ps = gen_random(args.n, _resolve_seed(args.seed, "gen --kind random"))
    elif args.kind == "circle":
        if args.n is None:
            raise InvalidParameter("gen --kind circle requires --n")
        ps = analysis.gen_circle(args.n, args.radius)
    elif args.kind == "theta5_lb":
        ps = analysis.gen_theta5_lower_bound(args.nudge)
    else:
        variant = args.kind.removeprefix("routing_lb_")
        ps = analysis.gen_routing_lb(variant, args.alpha, args.nudge)
    _emit(points_to_json(ps), args.out)
    return 0


def _build_kind(kind: str, ps: PointSet, k: int | None) -> SpannerGraph:
    if kind == "yao" or kind == "theta":
        if k is None:
            raise InvalidParameter(f"build --graph {kind} requires --k")
        return build.build_yao(ps, k) if kind == "yao" else build.build_theta(ps, k)
    if kind == "half_theta6":
        return build.build_half_theta6(ps)
    if kind == "g12":
        return build.build_g12(build.build_half_theta6(ps))
    if kind == "g9":
        return build.build_g9(build.build_half_theta6(ps))
    if kind == "rotated_union":
        return build.build_rotated_union(ps, k if k is not None else 1)
    return build.build_mst(ps)


def _cmd_build(args) -> int:
    ps = points_from_json(_read(args.points))
    g = _build_kind(args.graph, ps, args.k)
    _emit(graph_to_json(g), args.out)
    return 0


def _cmd_analyze(args) -> int:
    g = graph_from_json(_read(args.graph))
    if args.check:
        report = analysis.verify_bound(g, tolerance=args.tolerance)
        if args.per_pair:
            report.per_pair = analysis.spanning_ratio(g, per_pair=True).per_pair
    else:
        report = analysis.spanning_ratio(g, per_pair=args.per_pair)
    if args.per_pair and args.out and args.out.endswith(".csv"):
        rows = ["u,v,euclidean,graph_distance,ratio"]
        for rec in report.per_pair:
            rows.append(
                f'{rec["u"]},{rec["v"]},{rec["euclidean"]!r},'
                f'{rec["graph_distance"]!r},{rec["ratio"]!r}'
            )
        _emit("\n".join(rows) + "\n", args.out)
        report.per_pair = None
        _emit(report.to_json(), None)
    else:
        _emit(report.to_json(), args.out)
    if args.check and not report.passed:
        return 1
    return 0


def _cmd_verify(args) -> int:
    if args.graph in BUILD_GRAPHS:
        if args.n is None or args.trials is None:
            raise InvalidParameter(
                "verify over random trials requires --n and --trials"
            )
        seed = _resolve_seed(args.seed, "verify over random trials")
        gen_k = args.k if args.graph in ("yao", "theta") else 6
        worst = None
        passed = True
        for t in range(args.trials):
            ps = gen_random(args.n, seed + t, k=gen_k)
            g = _build_kind(args.graph, ps, args.k)
            rep = analysis.verify_bound(g, tolerance=args.tolerance)
            passed = passed and rep.passed
            if worst is None or rep.max_ratio > worst.max_ratio:
                worst = rep
        doc = {
            "kind": args.graph,
            "n": args.n,
            "trials": args.trials,
            "seed": seed,
            "bound": worst.bound,
            "bound_name": worst.bound_name,
            "worst_ratio": worst.max_ratio,
            "pass": passed,
        }
        _emit(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n", args.out)
        return 0 if passed else 1
    g = graph_from_json(_read(args.graph))
    report = analysis.verify_bound(g, tolerance=args.tolerance)
    _emit(report.to_json(), args.out)
    return 0 if report.passed else 1


def _cmd_route(args) -> int:
    g = graph_from_json(_read(args.graph))
    engine = {
        "stateless": routing.route_stateless,
        "stateful": routing.route_stateful,
        "g12": routing.route_g12,
        "g9": routing.route_g9,
    }[args.algo]
    trace = engine(g, args.src, args.dst)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(render_svg(g, overlay=trace))
    if args.trace:
        doc = trace.to_json()
    else:
        doc = json.dumps(
            {
                "algorithm": trace.algorithm,
                "source": trace.source,
                "target": trace.target,
                "steps": len(trace.steps),
                "total": trace.total_path_length,
                "exploration": trace.exploration_travel,
                "bound": trace.bound,
                "pass": trace.passed,
            },
            sort_keys=True,
            separators=(",", ":"),
        ) + "\n"
    _emit(doc, args.out)
    if args.check and not trace.passed:
        return 1
    return 0


def _cmd_render(args) -> int:
    if (args.points is None) == (args.graph is None):
        raise InvalidParameter("render needs exactly one of --points or --graph")
    if args.points is not None:
        obj = points_from_json(_read(args.points))
    else:
        obj = graph_from_json(_read(args.graph))
    _emit(render_svg(obj), args.out)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "gen": _cmd_gen,
        "build": _cmd_build,
        "analyze": _cmd_analyze,
        "verify": _cmd_verify,
        "route": _cmd_route,
        "render": _cmd_render,
    }
    try:
        return handlers[args.command](args)
    except SpannerKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
