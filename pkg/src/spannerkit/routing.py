"""Local routing engines for the half-theta-6 graph and its bounded-degree subgraphs.

Four engines share one geometric vocabulary.  When the destination t lies in
an even (positive) cone of the current vertex s, the walker follows the unique
positive-cone edge.  When t lies in an odd (negative) cone j, decisions are
phrased in terms of the canonical triangle with apex t that contains s and the
three regions it induces around s:

    X0  = cone j of s intersected with the triangle (vertices "behind" t),
    X1  = cone (j+1) mod 6 of s intersected with the triangle,
    X2  = cone (j-1) mod 6 of s intersected with the triangle.

Corner ``a`` of the triangle falls on the X1 side, corner ``b`` on the X2
side.  The stateless and stateful engines see the whole graph; the g12 and g9
engines run on the degree-bounded subgraphs and must reconstruct the same
decisions with local information only, paying extra travel that the trace
records separately from productive progress.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from . import kernels
from .build import SpannerGraph
from .errors import AlreadyArrived, InternalInvariantViolation, InvalidParameter
from .geometry import ConeSystem, canonical_triangle

_CS6 = ConeSystem(6)
_SQ3 = math.sqrt(3.0)

# Multiplier applied to the per-pair base bound for each engine.
ROUTING_FACTORS = {
    "stateless": 1.0,
    "stateful": 1.0,
    "g12": 19.0,
    "g9": 3.0,
}

_PAY_EPS = 1e-9


@dataclass(frozen=True)
class PotentialValue:
    """Potential of a routing state: the case label it was computed under and the value."""

    case: str
    value: float


@dataclass(frozen=True)
class RoutingStep:
    source: int
    target: int
    case: str
    phi_before: float
    phi_after: float
    length: float
    exploration: float = 0.0


@dataclass
class RoutingTrace:
    """Record of one routing run.

    ``total_path_length`` sums productive steps (travel that ends at a new
    simulated position); ``exploration_travel`` sums out-and-back excursions
    that returned to their starting vertex.  ``bound`` already includes any
    one-time probe slack granted during the run.
    """

    algorithm: str
    source: int
    target: int
    steps: list[RoutingStep] = field(default_factory=list)
    total_path_length: float = 0.0
    exploration_travel: float = 0.0
    bound: float = 0.0
    probe_slack: float = 0.0
    passed: bool = False

    def path(self) -> list[int]:
        out = [self.source]
        for s in self.steps:
            out.append(s.target)
        return out

    def to_json(self) -> str:
        doc = {
            "algorithm": self.algorithm,
            "source": self.source,
            "target": self.target,
            "steps": [
                {
                    "from": s.source,
                    "to": s.target,
                    "case": s.case,
                    "phi_before": s.phi_before,
                    "phi_after": s.phi_after,
                    "len": s.length,
                    "exploration": s.exploration,
                }
                for s in self.steps
            ],
            "total": self.total_path_length,
            "exploration": self.exploration_travel,
            "bound": self.bound,
            "probe_slack": self.probe_slack,
            "pass": self.passed,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RoutingTrace":
        obj = json.loads(text)
        try:
            steps = [
                RoutingStep(
                    int(s["from"]),
                    int(s["to"]),
                    str(s["case"]),
                    float(s["phi_before"]),
                    float(s["phi_after"]),
                    float(s["len"]),
                    float(s["exploration"]),
                )
                for s in obj["steps"]
            ]
            return cls(
                algorithm=str(obj["algorithm"]),
                source=int(obj["source"]),
                target=int(obj["target"]),
                steps=steps,
                total_path_length=float(obj["total"]),
                exploration_travel=float(obj["exploration"]),
                bound=float(obj["bound"]),
                probe_slack=float(obj.get("probe_slack", 0.0)),
                passed=bool(obj["pass"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameter(f"malformed trace JSON: {exc}") from exc


def trace_from_json(text: str) -> RoutingTrace:
    return RoutingTrace.from_json(text)


class _Ctx:
    """Per-graph routing tables: azimuth-sorted adjacency, positive-cone edges, negative fans."""

    def __init__(self, g: SpannerGraph):
        self.g = g
        self.pts = {p.id: (p.x, p.y) for p in g.points}
        self.n = len(g.points)
        self.adj: dict[int, list[tuple[float, int, float, int]]] = {}
        self.pos_edge: dict[tuple[int, int], tuple[int, float]] = {}
        self.neg: dict[tuple[int, int], list[tuple[float, int]]] = {}
        for p in g.points:
            lst = []
            for q in g.neighbors(p.id):
                qx, qy = self.pts[q]
                dx = qx - p.x
                dy = qy - p.y
                az = kernels.azimuth(dx, dy)
                c = kernels.cone_index(dx, dy, 6)
                ln = math.hypot(dx, dy)
                lst.append((az, q, ln, c))
                if c % 2 == 0:
                    if (p.id, c) in self.pos_edge:
                        raise InternalInvariantViolation(
                            f"vertex {p.id} has two edges in positive cone {c}"
                        )
                    self.pos_edge[(p.id, c)] = (q, ln)
                else:
                    self.neg.setdefault((p.id, c), []).append((az, q))
            lst.sort()
            self.adj[p.id] = lst
        for fan in self.neg.values():
            fan.sort()

    def dist(self, u: int, v: int) -> float:
        ux, uy = self.pts[u]
        vx, vy = self.pts[v]
        return math.hypot(vx - ux, vy - uy)


def _ctx(g: SpannerGraph) -> _Ctx:
    ctx = getattr(g, "_routing_ctx", None)
    if ctx is None:
        ctx = _Ctx(g)
        g._routing_ctx = ctx
    return ctx


def _d(p: tuple[float, float], q: tuple[float, float]) -> float:
    return math.hypot(q[0] - p[0], q[1] - p[1])


class _NegFrame:
    """Geometry of one negative-case decision: s sees t in odd cone j."""

    def __init__(self, ctx: _Ctx, s: int, t: int, j: int):
        self.s = s
        self.t = t
        self.j = j
        self.s_xy = ctx.pts[s]
        self.t_xy = ctx.pts[t]
        self.tri = canonical_triangle(_CS6, self.t_xy, self.s_xy)
        self.a = self.tri.corner_a
        self.b = self.tri.corner_b
        self.dist_sa = _d(self.s_xy, self.a)
        self.dist_sb = _d(self.s_xy, self.b)
        self.cone_x1 = (j + 1) % 6
        self.cone_x2 = (j - 1) % 6

    def contains(self, xy: tuple[float, float]) -> bool:
        return self.tri.contains(xy)

    def sliver(self, xy: tuple[float, float]) -> str:
        """Which escape sliver a cone-j point outside the triangle fell into.

        "S1" lies beyond the line t-a (high-azimuth side, adjacent to X1),
        "S2" beyond t-b (low-azimuth side, adjacent to X2).
        """
        beyond_a = _beyond(self.t_xy, self.a, self.b, xy)
        beyond_b = _beyond(self.t_xy, self.b, self.a, xy)
        if beyond_a and beyond_b:
            raise InternalInvariantViolation("point behind the triangle apex")
        if beyond_a:
            return "S1"
        if beyond_b:
            return "S2"
        raise InternalInvariantViolation("point is neither inside nor in a sliver")


def _beyond(apex, corner, interior_ref, p) -> bool:
    """True when p is strictly on the far side of line apex-corner from interior_ref."""
    ex = corner[0] - apex[0]
    ey = corner[1] - apex[1]
    cp = ex * (p[1] - apex[1]) - ey * (p[0] - apex[0])
    cr = ex * (interior_ref[1] - apex[1]) - ey * (interior_ref[0] - apex[0])
    return cp * cr < 0.0


def _check_graph(g: SpannerGraph, kinds: tuple[str, ...], source: int, target: int) -> _Ctx:
    if g.kind not in kinds:
        raise InvalidParameter(
            f"routing needs a graph of kind {kinds}, got {g.kind!r}"
        )
    ctx = _ctx(g)
    if source not in ctx.pts or target not in ctx.pts:
        raise InvalidParameter("source or target id not in the graph")
    if source == target:
        raise AlreadyArrived(f"source equals target ({source})")
    return ctx


def base_bound(ctx_or_graph, source: int, target: int) -> tuple[float, bool]:
    """Per-pair routing budget before any engine multiplier.

    Returns (value, started_negative).  Positive start pays
    (sqrt(3) cos(alpha) + sin(alpha)) * |st| with alpha measured from s toward t;
    negative start pays (5/sqrt(3) cos(alpha) - sin(alpha)) * |st| with alpha
    measured from t toward s.
    """
    if isinstance(ctx_or_graph, SpannerGraph):
        ctx = _ctx(ctx_or_graph)
    else:
        ctx = ctx_or_graph
    s_xy = ctx.pts[source]
    t_xy = ctx.pts[target]
    dx = t_xy[0] - s_xy[0]
    dy = t_xy[1] - s_xy[1]
    dist = math.hypot(dx, dy)
    j = kernels.cone_index(dx, dy, 6)
    if j % 2 == 0:
        bis = j * _CS6.theta
        alpha = _wrap_abs(kernels.azimuth(dx, dy) - bis)
        return (_SQ3 * math.cos(alpha) + math.sin(alpha)) * dist, False
    jt = (j + 3) % 6
    bis = jt * _CS6.theta
    alpha = _wrap_abs(kernels.azimuth(-dx, -dy) - bis)
    return (5.0 / _SQ3 * math.cos(alpha) - math.sin(alpha)) * dist, True


def _wrap_abs(a: float) -> float:
    while a > math.pi:
        a -= 2.0 * math.pi
    while a < -math.pi:
        a += 2.0 * math.pi
    return abs(a)


# ---------------------------------------------------------------------------
# Full-graph decision logic (stateless and stateful engines).
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Decision:
    case: str
    nxt: int
    preferred: str | None
    phi: float


def _region_edge(ctx: _Ctx, frame: _NegFrame, cone: int):
    """Positive-cone edge of s into `cone` if its endpoint lies in the triangle."""
    e = ctx.pos_edge.get((frame.s, cone))
    if e is None:
        return None
    if not frame.contains(ctx.pts[e[0]]):
        return None
    return e


def _x0_members(ctx: _Ctx, frame: _NegFrame) -> tuple[list[tuple[float, int]], list[tuple[float, int]]]:
    fan = ctx.neg.get((frame.s, frame.j), [])
    inside = [(az, y) for az, y in fan if frame.contains(ctx.pts[y])]
    return fan, inside


def _fan_closest_of(ctx: _Ctx, frame: _NegFrame, fan: list[tuple[float, int]]) -> int:
    best = None
    sx, sy = frame.s_xy
    bis = frame.j * _CS6.theta
    sb = math.sin(bis)
    cb = math.cos(bis)
    for _, y in fan:
        yx, yy = ctx.pts[y]
        dx = yx - sx
        dy = yy - sy
        key = (dx * sb + dy * cb, dx * dx + dy * dy, y)
        if best is None or key < best[0]:
            best = (key, y)
    if best is None:
        raise InternalInvariantViolation("closest requested on an empty fan")
    return best[1]


def _walk_fan_to_region(ctx: _Ctx, frame: _NegFrame, fan, inside, start: int) -> int:
    """First X0 member met when walking the fan from `start` toward the region."""
    in_set = {y for _, y in inside}
    if start in in_set:
        return start
    side = frame.sliver(ctx.pts[start])
    order = [y for _, y in fan]
    idx = order.index(start)
    step = 1 if side == "S2" else -1
    i = idx + step
    while 0 <= i < len(order):
        if order[i] in in_set:
            return order[i]
        i += step
    raise InternalInvariantViolation("fan walk ran past the region without entering it")


def _initial_preferred(ctx: _Ctx, s: int, v: int, t: int) -> str | None:
    """Side memorised after a positive step s->v when t is negative from v.

    The retained side is the one whose corner of the new triangle (apex t,
    containing v) lies inside the step triangle (apex s, containing v).
    """
    jv = kernels.cone_index(
        ctx.pts[t][0] - ctx.pts[v][0], ctx.pts[t][1] - ctx.pts[v][1], 6
    )
    if jv % 2 == 0:
        return None
    tri_new = canonical_triangle(_CS6, ctx.pts[t], ctx.pts[v])
    tri_step = canonical_triangle(_CS6, ctx.pts[s], ctx.pts[v])
    a_in = tri_step.contains(tri_new.corner_a)
    b_in = tri_step.contains(tri_new.corner_b)
    if a_in and not b_in:
        return "X1"
    if b_in and not a_in:
        return "X2"
    if _region_in_tri(ctx, v, t, jv, "X1", tri_new, tri_step):
        return "X1"
    if _region_in_tri(ctx, v, t, jv, "X2", tri_new, tri_step):
        return "X2"
    raise InternalInvariantViolation("no side region is contained in the step triangle")


def _region_in_tri(ctx, v, t, jv, which, tri_new, tri_step) -> bool:
    cone = (jv + 1) % 6 if which == "X1" else (jv - 1) % 6
    poly = _clip_wedge(tri_new.polygon(), ctx.pts[v], cone)
    if not poly:
        return True
    return all(tri_step.contains(p) for p in poly)


def _clip_wedge(poly, apex, cone):
    """Clip a polygon to the cone wedge (half-open, but treated closed here)."""
    theta = _CS6.theta
    lo = cone * theta - theta / 2.0
    hi = cone * theta + theta / 2.0

    def clip(points, f):
        out = []
        m = len(points)
        for i in range(m):
            p = points[i]
            q = points[(i + 1) % m]
            fp = f(p)
            fq = f(q)
            if fp >= 0.0:
                out.append(p)
            if (fp > 0.0 > fq) or (fp < 0.0 < fq):
                u = fp / (fp - fq)
                out.append((p[0] + u * (q[0] - p[0]), p[1] + u * (q[1] - p[1])))
        return out

    dlo = (math.sin(lo), math.cos(lo))
    dhi = (math.sin(hi), math.cos(hi))
    poly = clip(poly, lambda p: -(dlo[0] * (p[1] - apex[1]) - dlo[1] * (p[0] - apex[0])))
    poly = clip(poly, lambda p: dhi[0] * (p[1] - apex[1]) - dhi[1] * (p[0] - apex[0]))
    return poly


def _phi_positive(ctx: _Ctx, s: int, t: int, j: int) -> float:
    tri = canonical_triangle(_CS6, ctx.pts[s], ctx.pts[t])
    da = _d(tri.corner_a, ctx.pts[t])
    db = _d(ctx.pts[t], tri.corner_b)
    return tri.size + max(da, db)


def _decide_full(ctx: _Ctx, s: int, t: int, stateful: bool, preferred: str | None) -> _Decision:
    sx, sy = ctx.pts[s]
    tx, ty = ctx.pts[t]
    j = kernels.cone_index(tx - sx, ty - sy, 6)
    if j % 2 == 0:
        e = ctx.pos_edge.get((s, j))
        if e is None:
            raise InternalInvariantViolation(
                f"no positive-cone edge at {s} toward cone {j} containing the target"
            )
        v = e[0]
        tri = canonical_triangle(_CS6, ctx.pts[s], ctx.pts[t])
        if not tri.contains(ctx.pts[v]):
            raise InternalInvariantViolation("positive-cone edge leaves the target triangle")
        new_pref = preferred
        if stateful and v != t:
            new_pref = _initial_preferred(ctx, s, v, t)
        return _Decision("A", v, new_pref, _phi_positive(ctx, s, t, j))

    frame = _NegFrame(ctx, s, t, j)
    fan, inside = _x0_members(ctx, frame)
    e1 = _region_edge(ctx, frame, frame.cone_x1)
    e2 = _region_edge(ctx, frame, frame.cone_x2)
    lsize = frame.tri.size
    dab = _d(frame.a, frame.b)

    if not stateful:
        if e1 is None and e2 is None:
            if not inside:
                raise InternalInvariantViolation("all three regions empty before arrival")
            pick = inside[-1][1] if frame.dist_sa >= frame.dist_sb else inside[0][1]
            return _Decision("B", pick, None, lsize + min(frame.dist_sa, frame.dist_sb))
        if e1 is not None and e2 is not None:
            phi = lsize + dab + min(frame.dist_sa, frame.dist_sb)
            if inside:
                return _Decision("D", inside[0][1], None, phi)
            if frame.dist_sa < frame.dist_sb:
                return _Decision("D", e1[0], None, phi)
            return _Decision("D", e2[0], None, phi)
        # exactly one side region is occupied
        if e1 is not None:
            x_corner = frame.a
            pick = inside[0][1] if inside else e1[0]
        else:
            x_corner = frame.b
            pick = inside[-1][1] if inside else e2[0]
        return _Decision("C", pick, None, lsize + _d(frame.s_xy, x_corner))

    # stateful engine
    if preferred is None:
        phi = lsize + dab + min(frame.dist_sa, frame.dist_sb)
        if inside:
            pick = _walk_fan_to_region(ctx, frame, fan, inside, _fan_closest_of(ctx, frame, fan))
            return _Decision("B", pick, None, phi)
        smaller, larger = ("X1", "X2") if frame.dist_sa < frame.dist_sb else ("X2", "X1")
        e_small = e1 if smaller == "X1" else e2
        if e_small is not None:
            return _Decision("B", e_small[0], None, phi)
        e_large = e1 if larger == "X1" else e2
        if e_large is None:
            raise InternalInvariantViolation("both side regions empty with no members behind the target")
        return _Decision("B", e_large[0], smaller, phi)

    x_corner = frame.b if preferred == "X1" else frame.a
    phi = lsize + _d(frame.s_xy, x_corner)
    if inside:
        pick = inside[-1][1] if preferred == "X1" else inside[0][1]
        return _Decision("C", pick, preferred, phi)
    e_np = e2 if preferred == "X1" else e1
    if e_np is None:
        raise InternalInvariantViolation("non-preferred region empty in the memorising case")
    return _Decision("C", e_np[0], preferred, phi)


def classify_case(g: SpannerGraph, s: int, t: int) -> dict:
    """Describe the stateless decision at s toward t without moving."""
    ctx = _check_graph(g, ("half_theta6",), s, t)
    sx, sy = ctx.pts[s]
    tx, ty = ctx.pts[t]
    j = kernels.cone_index(tx - sx, ty - sy, 6)
    if j % 2 == 0:
        return {"case": "A", "cone": j, "positive": True}
    frame = _NegFrame(ctx, s, t, j)
    _, inside = _x0_members(ctx, frame)
    e1 = _region_edge(ctx, frame, frame.cone_x1)
    e2 = _region_edge(ctx, frame, frame.cone_x2)
    if e1 is None and e2 is None:
        case = "B"
    elif e1 is not None and e2 is not None:
        case = "D"
    else:
        case = "C"
    return {
        "case": case,
        "cone": j,
        "positive": False,
        "x0_nonempty": bool(inside),
        "x1_nonempty": e1 is not None,
        "x2_nonempty": e2 is not None,
    }


def potential(
    g: SpannerGraph,
    s: int,
    t: int,
    *,
    algorithm: str = "stateless",
    preferred: str | None = None,
) -> PotentialValue:
    """Potential of the current routing state; drops to zero exactly at arrival."""
    if algorithm not in ("stateless", "stateful"):
        raise InvalidParameter(f"unknown algorithm {algorithm!r}")
    if g.kind != "half_theta6":
        raise InvalidParameter("potential is defined on the half-theta-6 graph")
    ctx = _ctx(g)
    if s not in ctx.pts or t not in ctx.pts:
        raise InvalidParameter("source or target id not in the graph")
    if s == t:
        return PotentialValue("arrived", 0.0)
    d = _decide_full(ctx, s, t, algorithm == "stateful", preferred)
    return PotentialValue(d.case, d.phi)


def _route_full(g: SpannerGraph, source: int, target: int, stateful: bool) -> RoutingTrace:
    ctx = _check_graph(g, ("half_theta6",), source, target)
    name = "stateful" if stateful else "stateless"
    base, _ = base_bound(ctx, source, target)
    trace = RoutingTrace(algorithm=name, source=source, target=target,
                         bound=ROUTING_FACTORS[name] * base)
    visited = {source}
    s = source
    t = target
    dec = _decide_full(ctx, s, t, stateful, None)
    guard = 0
    while True:
        guard += 1
        if guard > ctx.n:
            raise InternalInvariantViolation("routing exceeded the vertex-count step budget")
        nxt = dec.nxt
        step_len = ctx.dist(s, nxt)
        if nxt == t:
            phi_after = 0.0
        else:
            if nxt in visited:
                raise InternalInvariantViolation(f"routing revisited vertex {nxt}")
            nd = _decide_full(ctx, nxt, t, stateful, dec.preferred)
            phi_after = nd.phi
        trace.steps.append(RoutingStep(s, nxt, dec.case, dec.phi, phi_after, step_len))
        trace.total_path_length += step_len
        if nxt == t:
            break
        visited.add(nxt)
        s = nxt
        dec = nd
    trace.passed = trace.total_path_length <= trace.bound + _PAY_EPS
    return trace


def route_stateless(g: SpannerGraph, source: int, target: int) -> RoutingTrace:
    """Memoryless routing on the half-theta-6 graph."""
    return _route_full(g, source, target, stateful=False)


def route_stateful(g: SpannerGraph, source: int, target: int) -> RoutingTrace:
    """Routing on the half-theta-6 graph carrying one remembered side."""
    return _route_full(g, source, target, stateful=True)


# ---------------------------------------------------------------------------
# Local engines on the bounded-degree subgraphs.
# ---------------------------------------------------------------------------


class _Arrived(Exception):
    """Internal signal: a traversal walked onto the destination.

    ``travelled`` is the productive leg that ended on the target;
    ``exploration`` is round-trip travel already burned beforehand.
    """

    def __init__(self, travelled: float, exploration: float = 0.0):
        self.travelled = travelled
        self.exploration = exploration


def _flank(ctx: _Ctx, u: int, cone: int, side: str):
    """Edge of u angularly closest to `cone` on the given side, excluding cone members."""
    theta = _CS6.theta
    lo = cone * theta - theta / 2.0
    hi = cone * theta + theta / 2.0
    best = None
    for az, q, ln, c in ctx.adj[u]:
        if c == cone:
            continue
        if side == "cw":
            gap = (az - hi) % (2.0 * math.pi)
        else:
            gap = (lo - az) % (2.0 * math.pi)
        if best is None or gap < best[0]:
            best = (gap, q, ln)
    if best is None:
        return None
    return best[1], best[2]


def _walk_side(ctx: _Ctx, start: int, cone: int, side: str, budget: float, target: int):
    """Walk flank edges on one side of `cone` until an edge into the cone appears.

    Returns (walked, hit, exhausted): `hit` is (x, v, |xv|) when vertex x with
    a cone edge to v was reached, else None; `exhausted` means the walk ran
    out of flank edges (or looped) before spending the budget.
    """
    cur = start
    walked = 0.0
    seen = {start}
    while True:
        fl = _flank(ctx, cur, cone, side)
        if fl is None:
            return walked, None, True
        nbr, ln = fl
        if walked + ln > budget * (1.0 + 1e-12):
            return walked, None, False
        cur = nbr
        walked += ln
        if cur == target:
            raise _Arrived(walked)
        if cur in seen:
            return walked, None, True
        seen.add(cur)
        e = ctx.pos_edge.get((cur, cone))
        # A cone edge pointing back at the search origin cannot witness
        # progress (the origin is never its own cone target or a region
        # member), so walk past it instead of stopping.
        if e is not None and e[0] != start:
            return walked, (cur, e[0], e[1]), False


def _search_cone_edge(ctx: _Ctx, s: int, cone: int, target: int, cap: float | None):
    """Alternating doubling search for some vertex with an edge into `cone`.

    Returns (hit, walk_to_x, exploration): hit is (x, v, |xv|) or None when the
    capped search concluded no such vertex is reachable.  Exploration counts
    every out-and-back round trip; walk_to_x is the final productive leg.
    """
    fl_cw = _flank(ctx, s, cone, "cw")
    fl_ccw = _flank(ctx, s, cone, "ccw")
    exploration = 0.0
    state = {"cw": {"fl": fl_cw, "done": fl_cw is None},
             "ccw": {"fl": fl_ccw, "done": fl_ccw is None}}
    if state["cw"]["done"] and state["ccw"]["done"]:
        if cap is None:
            raise InternalInvariantViolation("cone-edge search has nowhere to start")
        return None, 0.0, 0.0
    if state["cw"]["done"]:
        side = "ccw"
    elif state["ccw"]["done"]:
        side = "cw"
    else:
        side = "cw" if fl_cw[1] <= fl_ccw[1] else "ccw"
    budget = state[side]["fl"][1]
    rounds = 0
    while True:
        rounds += 1
        if rounds > 4 * ctx.n + 64:
            raise InternalInvariantViolation("cone-edge search failed to terminate")
        eff = budget if cap is None else min(budget, cap)
        try:
            walked, hit, exhausted = _walk_side(ctx, s, cone, side, eff, target)
        except _Arrived as arr:
            raise _Arrived(arr.travelled, exploration)
        if hit is not None:
            return hit, walked, exploration
        exploration += 2.0 * walked
        if exhausted:
            state[side]["done"] = True
        elif cap is not None and eff >= cap:
            state[side]["done"] = True
        usable = [sd for sd in ("cw", "ccw") if not state[sd]["done"]]
        if not usable:
            if cap is None:
                raise InternalInvariantViolation("cone-edge search exhausted both sides")
            return None, 0.0, exploration
        other = "ccw" if side == "cw" else "cw"
        side = other if other in usable else side
        budget *= 2.0


class _Hints:
    """Parsed g9 construction hints: walk directions and fan-end coordinates."""

    def __init__(self, g: SpannerGraph):
        raw = g.metadata.get("hints")
        if not isinstance(raw, dict):
            raise InvalidParameter("graph lacks the construction hints required for g9 routing")
        self.dir: dict[tuple[int, int], str] = {}
        self.fan: dict[tuple[int, int], tuple[tuple[int, float, float], tuple[int, float, float]]] = {}
        for sid, entry in raw.items():
            u = int(sid)
            for cs, d in entry.get("dir", {}).items():
                self.dir[(u, int(cs))] = d
            for cs, ends in entry.get("fan", {}).items():
                f = ends["first"]
                l = ends["last"]
                self.fan[(u, int(cs))] = (
                    (int(f[0]), float(f[1]), float(f[2])),
                    (int(l[0]), float(l[1]), float(l[2])),
                )


def _hints(g: SpannerGraph) -> _Hints:
    h = getattr(g, "_hint_cache", None)
    if h is None:
        h = _Hints(g)
        g._hint_cache = h
    return h


def _g9_walk_to_cone_edge(ctx: _Ctx, hints: _Hints, s: int, cone: int, target: int,
                          cap: float | None):
    """Follow per-vertex direction hints until a vertex keeps its edge into `cone`.

    Returns (hit, walk_to_x) like the doubling search but with zero exploration;
    with a cap it returns (None, walked) on failure.
    """
    cur = s
    walked = 0.0
    guard = 0
    while True:
        guard += 1
        if guard > ctx.n + 2:
            raise InternalInvariantViolation("hint walk failed to terminate")
        e = ctx.pos_edge.get((cur, cone))
        if e is not None:
            return (cur, e[0], e[1]), walked
        d = hints.dir.get((cur, cone))
        if d is None or d == "self":
            raise InternalInvariantViolation(
                f"hint walk stranded at {cur}: direction missing and no cone-{cone} edge"
            )
        side = "ccw" if d == "ccw" else "cw"
        fl = _flank(ctx, cur, cone, side)
        if fl is None:
            raise InternalInvariantViolation("hint walk has no flank edge to follow")
        nbr, ln = fl
        if cap is not None and walked + ln > cap * (1.0 + 1e-12):
            return None, walked
        cur = nbr
        walked += ln
        if cur == target:
            raise _Arrived(walked)


def _fan_dir_for_sliver(side: str) -> str:
    # S2 members sit below the region in fan order, so ascend; S1 descends.
    return "ccw" if side == "S2" else "cw"


def _route_sub(g: SpannerGraph, source: int, target: int, flavor: str) -> RoutingTrace:
    ctx = _check_graph(g, (flavor,), source, target)
    hints = _hints(g) if flavor == "g9" else None
    base, _ = base_bound(ctx, source, target)
    trace = RoutingTrace(algorithm=flavor, source=source, target=target,
                         bound=ROUTING_FACTORS[flavor] * base)
    s = source
    preferred: str | None = None
    guard = 0
    while s != target:
        guard += 1
        if guard > 3 * ctx.n:
            raise InternalInvariantViolation("subgraph routing exceeded its step budget")
        sx, sy = ctx.pts[s]
        tx, ty = ctx.pts[target]
        j = kernels.cone_index(tx - sx, ty - sy, 6)
        if j % 2 == 0:
            s, preferred = _sub_positive(ctx, hints, flavor, trace, s, target, j, preferred)
            continue
        frame = _NegFrame(ctx, s, target, j)
        if preferred is None:
            s, preferred = _sub_case_b(ctx, hints, flavor, trace, frame, target)
        else:
            s = _sub_case_c(ctx, hints, flavor, trace, frame, target, preferred)
    trace.passed = (trace.total_path_length + trace.exploration_travel
                    <= trace.bound + _PAY_EPS)
    return trace


def _realize_positive(ctx, hints, flavor, s, cone, target):
    """Reach the half-theta-6 positive-cone target of s using subgraph edges only.

    Returns (v, productive, exploration).  Raises _Arrived if the walk steps
    onto the destination.
    """
    direct = ctx.pos_edge.get((s, cone))
    if direct is not None:
        return direct[0], direct[1], 0.0
    if flavor == "g9":
        hit, walked = _g9_walk_to_cone_edge(ctx, hints, s, cone, target, None)
        x, v, vlen = hit
        return v, walked + vlen, 0.0
    hit, walked, expl = _search_cone_edge(ctx, s, cone, target, None)
    x, v, vlen = hit
    return v, walked + vlen, expl


def _sub_positive(ctx, hints, flavor, trace, s, target, cone, preferred):
    try:
        v, productive, expl = _realize_positive(ctx, hints, flavor, s, cone, target)
    except _Arrived as arr:
        trace.steps.append(RoutingStep(s, target, "A", 0.0, 0.0, arr.travelled, arr.exploration))
        trace.total_path_length += arr.travelled
        trace.exploration_travel += arr.exploration
        return target, preferred
    new_pref = preferred
    if v != target:
        new_pref = _initial_preferred(ctx, s, v, target)
    trace.steps.append(RoutingStep(s, v, "A", 0.0, 0.0, productive, expl))
    trace.total_path_length += productive
    trace.exploration_travel += expl
    return v, new_pref


def _trio(ctx: _Ctx, frame: _NegFrame):
    """s's subgraph neighbours inside cone j, azimuth-ascending (g12: exactly the kept trio)."""
    return ctx.neg.get((frame.s, frame.j), [])


def _x0_exists_g12(ctx: _Ctx, frame: _NegFrame) -> bool:
    fan = _trio(ctx, frame)
    if not fan:
        return False
    first = fan[0][1]
    last = fan[-1][1]
    return _x0_exists_from_ends(ctx, frame, ctx.pts[first], ctx.pts[last])


def _x0_exists_from_ends(ctx, frame, first_xy, last_xy) -> bool:
    fin = frame.contains(first_xy)
    lin = frame.contains(last_xy)
    if fin or lin:
        return True
    sf = frame.sliver(first_xy)
    sl = frame.sliver(last_xy)
    if sf == "S2" and sl == "S1":
        return True
    if sf == "S2" and sl == "S2":
        return False
    if sf == "S1" and sl == "S1":
        return False
    raise InternalInvariantViolation("fan ends wrap around the region in the wrong order")


def _closest_neighbor(ctx: _Ctx, frame: _NegFrame) -> int:
    fan = _trio(ctx, frame)
    return _fan_closest_of(ctx, frame, fan)


def _walk_region_landing(ctx, frame, target, start, pref_dir: str | None):
    """Walk fan edges from s's closest fan member to the intended landing in X0.

    Walking the "ccw" flank of the cone that contains the anchor moves to the
    next fan member in ascending azimuth around the anchor; "cw" descends.
    Phase one enters X0 when `start` sits in a sliver; phase two (only with a
    preferred direction) continues while the next fan vertex stays in X0.
    Returns (landing, walk_length).
    """
    anchor_cone = (frame.j + 3) % 6
    sx, sy = frame.s_xy

    def az_from_s(vid: int) -> float:
        px, py = ctx.pts[vid]
        return kernels.azimuth(px - sx, py - sy)

    # Fan members all sit in s's odd cone j, none of which straddles azimuth 0,
    # so plain comparisons track the fan order without wraparound care.
    def advances(side: str, cur_az: float, nxt_az: float) -> bool:
        return nxt_az > cur_az if side == "ccw" else nxt_az < cur_az

    cur = start
    cur_az = az_from_s(cur)
    walked = 0.0
    entered_via = None
    if not frame.contains(ctx.pts[cur]):
        side = _fan_dir_for_sliver(frame.sliver(ctx.pts[cur]))
        entered_via = side
        guard = 0
        while not frame.contains(ctx.pts[cur]):
            guard += 1
            if guard > ctx.n:
                raise InternalInvariantViolation("region entry walk failed to terminate")
            fl = _flank(ctx, cur, anchor_cone, side)
            if fl is None:
                raise InternalInvariantViolation("region entry walk ran off the fan")
            nbr, ln = fl
            nxt_az = az_from_s(nbr)
            if not advances(side, cur_az, nxt_az):
                raise InternalInvariantViolation("region entry walk left the fan order")
            cur = nbr
            cur_az = nxt_az
            walked += ln
            if cur == target:
                raise _Arrived(walked)
    if pref_dir is None or (entered_via is not None and pref_dir != entered_via):
        return cur, walked
    guard = 0
    while True:
        guard += 1
        if guard > ctx.n:
            raise InternalInvariantViolation("region sweep failed to terminate")
        fl = _flank(ctx, cur, anchor_cone, pref_dir)
        if fl is None:
            return cur, walked
        px, py = ctx.pts[fl[0]]
        nxt_az = az_from_s(fl[0])
        if (kernels.cone_index(px - sx, py - sy, 6) != frame.j
                or not frame.contains((px, py))
                or not advances(pref_dir, cur_az, nxt_az)):
            return cur, walked
        cur = fl[0]
        cur_az = nxt_az
        walked += fl[1]
        if cur == target:
            raise _Arrived(walked)


def _x0_exists_sub(ctx, hints, flavor, frame: _NegFrame) -> bool:
    if flavor == "g9":
        ends = hints.fan.get((frame.s, frame.j))
        if ends is None:
            return False
        (_, fx, fy), (_, lx, ly) = ends
        return _x0_exists_from_ends(ctx, frame, (fx, fy), (lx, ly))
    return _x0_exists_g12(ctx, frame)


def _in_region(ctx, frame: _NegFrame, cone: int, v: int) -> bool:
    vx, vy = ctx.pts[v]
    sx, sy = frame.s_xy
    return (kernels.cone_index(vx - sx, vy - sy, 6) == cone
            and frame.contains((vx, vy)))


def _record(trace, s, v, case, productive, expl=0.0):
    trace.steps.append(RoutingStep(s, v, case, 0.0, 0.0, productive, expl))
    trace.total_path_length += productive
    trace.exploration_travel += expl


def _follow_region_walk(ctx, trace, frame, target, case, pref_dir):
    """Follow the closest fan edge, then walk within X0 to the landing vertex."""
    s = frame.s
    closest = _closest_neighbor(ctx, frame)
    hop = ctx.dist(s, closest)
    if closest == target:
        _record(trace, s, target, case, hop)
        return target
    try:
        landing, walked = _walk_region_landing(ctx, frame, target, closest, pref_dir)
    except _Arrived as arr:
        _record(trace, s, target, case, hop + arr.travelled)
        return target
    _record(trace, s, landing, case, hop + walked)
    return landing


def _probe_smaller_side(ctx, hints, flavor, trace, frame: _NegFrame, target,
                        c_sm: int, corner_sm) -> int | None:
    """Rule-4 probe of the smaller empty-candidate side region.

    Returns the next vertex when the region turned out nonempty (or the
    walk hit the target), else None after charging exploration and the
    one-time slack for a failed capped search.
    """
    s = frame.s
    corner_dist = _d(frame.s_xy, corner_sm)
    cap = 2.0 * corner_dist

    direct = ctx.pos_edge.get((s, c_sm))
    if direct is not None:
        v, vlen = direct
        if _in_region(ctx, frame, c_sm, v):
            _record(trace, s, v, "B", vlen)
            return v
        return None

    if flavor == "g9":
        if hints.dir.get((s, c_sm)) is None:
            return None
        try:
            hit, walked = _g9_walk_to_cone_edge(ctx, hints, s, c_sm, target, cap)
        except _Arrived as arr:
            _record(trace, s, target, "B", arr.travelled)
            return target
        if hit is not None:
            x, v, vlen = hit
            if v != s and (v == target or _in_region(ctx, frame, c_sm, v)):
                _record(trace, s, v, "B", walked + vlen)
                return v
        trace.exploration_travel += 2.0 * walked
        slack = 4.0 * corner_dist
        trace.probe_slack += slack
        trace.bound += slack
        return None

    try:
        hit, walked, expl = _search_cone_edge(ctx, s, c_sm, target, cap)
    except _Arrived as arr:
        _record(trace, s, target, "B", arr.travelled, arr.exploration)
        return target
    if hit is not None:
        x, v, vlen = hit
        if v != s and (v == target or _in_region(ctx, frame, c_sm, v)):
            _record(trace, s, v, "B", walked + vlen, expl)
            return v
        expl += 2.0 * walked
    trace.exploration_travel += expl
    slack = 20.0 * corner_dist
    trace.probe_slack += slack
    trace.bound += slack
    return None


def _sub_case_b(ctx, hints, flavor, trace, frame: _NegFrame, target):
    s = frame.s
    if _x0_exists_sub(ctx, hints, flavor, frame):
        return _follow_region_walk(ctx, trace, frame, target, "B", None), None

    if frame.dist_sa < frame.dist_sb:
        smaller, c_sm, corner_sm = "X1", frame.cone_x1, frame.a
        c_lg = frame.cone_x2
    else:
        smaller, c_sm, corner_sm = "X2", frame.cone_x2, frame.b
        c_lg = frame.cone_x1

    nxt = _probe_smaller_side(ctx, hints, flavor, trace, frame, target, c_sm, corner_sm)
    if nxt is not None:
        return nxt, None

    # smaller side confirmed empty: take the larger side's edge, remember the smaller
    try:
        v, productive, expl = _realize_positive(ctx, hints, flavor, s, c_lg, target)
    except _Arrived as arr:
        _record(trace, s, target, "B", arr.travelled, arr.exploration)
        return target, None
    if v != target and not frame.contains(ctx.pts[v]):
        raise InternalInvariantViolation("larger-side edge leaves the triangle")
    _record(trace, s, v, "B", productive, expl)
    return v, smaller


def _sub_case_c(ctx, hints, flavor, trace, frame: _NegFrame, target, preferred):
    s = frame.s
    if _x0_exists_sub(ctx, hints, flavor, frame):
        pref_dir = "ccw" if preferred == "X1" else "cw"
        return _follow_region_walk(ctx, trace, frame, target, "C", pref_dir)
    c_np = frame.cone_x2 if preferred == "X1" else frame.cone_x1
    try:
        v, productive, expl = _realize_positive(ctx, hints, flavor, s, c_np, target)
    except _Arrived as arr:
        _record(trace, s, target, "C", arr.travelled, arr.exploration)
        return target
    if v != target and not frame.contains(ctx.pts[v]):
        raise InternalInvariantViolation("non-preferred edge leaves the triangle")
    _record(trace, s, v, "C", productive, expl)
    return v


def route_g12(g: SpannerGraph, source: int, target: int) -> RoutingTrace:
    """Local routing on the degree-12 subgraph."""
    return _route_sub(g, source, target, "g12")


def route_g9(g: SpannerGraph, source: int, target: int) -> RoutingTrace:
    """Local routing on the degree-9 subgraph, driven by its construction hints."""
    return _route_sub(g, source, target, "g9")
