"""Measurement and certification: exact spanning ratios, named ratio bounds,
short-path witnesses for theta-5, degree-bounded approximation checks, and the
generators for the adversarial lower-bound instances.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from . import kernels
from .build import SpannerGraph, build_half_theta6, build_theta
from .errors import InternalInvariantViolation, InvalidParameter
from .geometry import (
    EPS,
    ConeSystem,
    Point,
    PointSet,
    angle_alpha,
    canonical_triangle,
    direction,
)

#: Per-call length factor of the theta-5 witness recursion, 2*(2+sqrt(5)).
THETA5_WITNESS_FACTOR = 2.0 * (2.0 + math.sqrt(5.0))


def bound_value(name: str, *, k: int | None = None, m: int | None = None, alpha: float | None = None) -> float:
    """Known spanning/routing ratio bounds by name.

    theta, yao        1/(1 - 2 sin(pi/k)) for k >= 7
    yao_odd           1/(1 - 2 sin(3 pi/(4k))) for odd k >= 5
    half_theta6       2
    theta5            sqrt(50 + 22 sqrt(5))
    theta5_lower      (11 sqrt(5) - 17)/2
    rotated_union     sqrt(3) cos(pi/(6m)) + sin(pi/(6m))
    pair_alpha        sqrt(3) cos(alpha) + sin(alpha)
    routing_negative  (5/sqrt(3)) cos(alpha) - sin(alpha)
    """
    if name in ("theta", "yao"):
        if k is None or k < 7:
            raise InvalidParameter(f"bound {name!r} requires k >= 7, got {k!r}")
        return 1.0 / (1.0 - 2.0 * math.sin(math.pi / k))
    if name == "yao_odd":
        if k is None or k < 5 or k % 2 == 0:
            raise InvalidParameter(f"bound 'yao_odd' requires odd k >= 5, got {k!r}")
        return 1.0 / (1.0 - 2.0 * math.sin(3.0 * math.pi / (4.0 * k)))
    if name == "half_theta6":
        return 2.0
    if name == "theta5":
        return math.sqrt(50.0 + 22.0 * math.sqrt(5.0))
    if name == "theta5_lower":
        return (11.0 * math.sqrt(5.0) - 17.0) / 2.0
    if name == "rotated_union":
        if m is None or m < 1:
            raise InvalidParameter(f"bound 'rotated_union' requires m >= 1, got {m!r}")
        return math.sqrt(3.0) * math.cos(math.pi / (6.0 * m)) + math.sin(math.pi / (6.0 * m))
    if name == "pair_alpha":
        if alpha is None:
            raise InvalidParameter("bound 'pair_alpha' requires alpha")
        return math.sqrt(3.0) * math.cos(alpha) + math.sin(alpha)
    if name == "routing_negative":
        if alpha is None:
            raise InvalidParameter("bound 'routing_negative' requires alpha")
        return 5.0 / math.sqrt(3.0) * math.cos(alpha) - math.sin(alpha)
    raise InvalidParameter(f"unknown bound name {name!r}")


@dataclass
class RatioReport:
    max_ratio: float
    witness: tuple[int, int] | None
    bound: float | None = None
    bound_name: str | None = None
    passed: bool | None = None
    per_pair: list[dict] | None = field(default=None, repr=False)

    def to_json(self) -> str:
        obj: dict = {
            "max_ratio": self.max_ratio if math.isfinite(self.max_ratio) else "inf",
            "witness": list(self.witness) if self.witness is not None else None,
        }
        if self.bound is not None:
            obj["bound"] = self.bound
            obj["bound_name"] = self.bound_name
            obj["pass"] = self.passed
        if self.per_pair is not None:
            obj["per_pair"] = self.per_pair
        return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _distance_matrices(g: SpannerGraph):
    """(sorted ids, graph shortest-path matrix, Euclidean matrix)."""
    pts = sorted(g.points, key=lambda p: p.id)
    ids = [p.id for p in pts]
    index = {pid: i for i, pid in enumerate(ids)}
    n = len(ids)
    xs = np.array([p.x for p in pts])
    ys = np.array([p.y for p in pts])
    rows, cols, data = [], [], []
    for u, v in g.edges:
        iu, iv = index[u], index[v]
        w = math.hypot(xs[iv] - xs[iu], ys[iv] - ys[iu])
        rows.extend((iu, iv))
        cols.extend((iv, iu))
        data.extend((w, w))
    mat = csr_matrix((data, (rows, cols)), shape=(n, n))
    dist = _csgraph_dijkstra(mat, directed=False)
    # np.hypot rounds differently from math.hypot in the last ulp; the edge
    # weights above use math.hypot, so the denominators must too or a direct
    # edge's ratio lands a hair off 1.
    euclid = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = math.hypot(xs[j] - xs[i], ys[j] - ys[i])
            euclid[i, j] = euclid[j, i] = d
    return ids, dist, euclid


def spanning_ratio(g: SpannerGraph, per_pair: bool = False) -> RatioReport:
    """Exact spanning ratio: max over pairs of graph distance over Euclidean
    distance. Witness is the lexicographically smallest id pair achieving it;
    a disconnected graph has ratio inf."""
    if len(g.points) < 2:
        return RatioReport(1.0, None)
    ids, dist, euclid = _distance_matrices(g)
    n = len(ids)
    iu, iv = np.triu_indices(n, 1)
    ratios = dist[iu, iv] / euclid[iu, iv]
    best_at = int(np.argmax(ratios))
    best = float(ratios[best_at])
    witness = (ids[int(iu[best_at])], ids[int(iv[best_at])])
    table = None
    if per_pair:
        table = [
            {
                "u": ids[int(a)],
                "v": ids[int(b)],
                "graph_distance": float(dist[a, b]),
                "euclidean": float(euclid[a, b]),
                "ratio": float(r),
            }
            for a, b, r in zip(iu, iv, ratios)
        ]
    return RatioReport(best, witness, per_pair=table)


def verify_bound(g: SpannerGraph, name: str | None = None, tolerance: float = 1e-9) -> RatioReport:
    """Measure the spanning ratio and compare against the named bound (default:
    the bound registered for the graph's kind)."""
    if name is None:
        name, kwargs = _default_bound(g)
    else:
        kwargs = {"k": g.k, "m": g.metadata.get("m")}
        kwargs = {k_: v for k_, v in kwargs.items() if v is not None}
    value = bound_value(name, **kwargs)
    report = spanning_ratio(g)
    report.bound = value
    report.bound_name = name
    report.passed = report.max_ratio <= value + tolerance
    return report


def _default_bound(g: SpannerGraph):
    if g.kind == "half_theta6":
        return "half_theta6", {}
    if g.kind == "rotated_union":
        return "rotated_union", {"m": g.metadata.get("m")}
    if g.kind == "theta":
        if g.k == 5:
            return "theta5", {}
        if g.k == 6:
            return "half_theta6", {}
        return "theta", {"k": g.k}
    if g.kind == "yao":
        if g.k is not None and g.k % 2 == 1 and g.k < 7:
            return "yao_odd", {"k": g.k}
        return "yao", {"k": g.k}
    raise InvalidParameter(f"no registered ratio bound for graph kind {g.kind!r}")


def _length_adjacency(g: SpannerGraph) -> dict[int, list[tuple[int, float]]]:
    cache = getattr(g, "_len_adj", None)
    if cache is None:
        cache = {p.id: [] for p in g.points}
        for u, v in g.edges:
            p, q = g.points[u], g.points[v]
            w = math.hypot(q.x - p.x, q.y - p.y)
            cache[u].append((v, w))
            cache[v].append((u, w))
        for lst in cache.values():
            lst.sort()
        g._len_adj = cache
    return cache


def shortest_path(g: SpannerGraph, s: int, t: int) -> tuple[list[int], float]:
    """One shortest path from s to t, preferring smaller ids on ties.

    Returns (id sequence, length); raises if t is unreachable.
    """
    adj = _length_adjacency(g)
    dist = {t: 0.0}
    heap = [(0.0, t)]
    done = set()
    while heap:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        for y, w in adj[x]:
            nd = d + w
            if nd < dist.get(y, math.inf):
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    if s not in dist:
        raise InternalInvariantViolation(f"no path from {s} to {t}")
    path = [s]
    cur = s
    while cur != t:
        nxt = None
        for y, w in adj[cur]:
            if y in dist and w + dist[y] == dist[cur]:
                nxt = y
                break
        if nxt is None:
            raise InternalInvariantViolation("shortest-path reconstruction failed")
        path.append(nxt)
        cur = nxt
    return path, dist[s]


def restricted_pair_check(
    h: SpannerGraph,
    u: int,
    w: int,
    bound: float | None = None,
    tolerance: float = 1e-9,
) -> dict:
    """Shortest path from u to w using only vertices inside the canonical
    triangle of (u, w), compared against the per-pair bound
    (sqrt(3) cos(alpha) + sin(alpha)) * |uw| by default.

    Absence of such a path on a clean half-theta-6 input is a construction bug,
    so it raises rather than returning a failure.
    """
    cs = ConeSystem(h.k or 6)
    pu, pw = h.points[u], h.points[w]
    tri = canonical_triangle(cs, pu, pw)
    ax, ay = tri.apex
    cax, cay = tri.corner_a
    cbx, cby = tri.corner_b
    allowed = {u, w}
    for p in h.points:
        if kernels.point_in_tri(p.x, p.y, ax, ay, cax, cay, cbx, cby, EPS):
            allowed.add(p.id)
    adj = _length_adjacency(h)
    dist = {u: 0.0}
    parent: dict[int, int] = {}
    heap = [(0.0, u)]
    done = set()
    while heap:
        d, x = heapq.heappop(heap)
        if x == w:
            break
        if x in done:
            continue
        done.add(x)
        for y, wt in adj[x]:
            if y not in allowed:
                continue
            nd = d + wt
            if nd < dist.get(y, math.inf):
                dist[y] = nd
                parent[y] = x
                heapq.heappush(heap, (nd, y))
    if w not in dist:
        raise InternalInvariantViolation(
            f"no path from {u} to {w} inside their canonical triangle"
        )
    path = [w]
    while path[-1] != u:
        path.append(parent[path[-1]])
    path.reverse()
    if bound is None:
        alpha = angle_alpha(cs, pu, pw)
        bound = bound_value("pair_alpha", alpha=alpha) * math.hypot(pw.x - pu.x, pw.y - pu.y)
    length = dist[w]
    return {"path": path, "length": length, "bound": bound, "ok": length <= bound + tolerance}


def g9_approximation_check(h: SpannerGraph, g9: SpannerGraph, tolerance: float = 1e-9) -> tuple[bool, list[dict]]:
    """For every half-theta-6 edge (s, v) with v in a negative cone of s, verify
    the degree-9 subgraph keeps the approximation path (s -> fan-closest ->
    canonical path -> v), that its total length is at most 3|sv| and the
    canonical-path portion at most 2|sv|."""
    from .build import _fan_closest, _fans

    records = []
    ok = True
    fans = _fans(h)
    for (s, _j), members in fans.items():
        ps = h.points[s]
        closest = _fan_closest(h, s, members)
        ci = members.index(closest)
        if not g9.has_edge(s, closest):
            raise InternalInvariantViolation(f"closest fan edge ({s}, {closest}) missing from g9")
        entry = math.hypot(h.points[closest].x - ps.x, h.points[closest].y - ps.y)
        # Prefix path lengths along the fan in both directions from the closest.
        for v in members:
            vi = members.index(v)
            lo, hi = (ci, vi) if ci <= vi else (vi, ci)
            walk = 0.0
            for a, b in zip(members[lo:hi], members[lo + 1 : hi + 1]):
                if not g9.has_edge(a, b):
                    raise InternalInvariantViolation(f"fan path edge ({a}, {b}) missing from g9")
                pa, pb = h.points[a], h.points[b]
                walk += math.hypot(pb.x - pa.x, pb.y - pa.y)
            pv = h.points[v]
            edge_len = math.hypot(pv.x - ps.x, pv.y - ps.y)
            rec = {
                "s": s,
                "v": v,
                "edge": edge_len,
                "path": entry + walk,
                "canonical_portion": walk,
                "ok": entry + walk <= 3.0 * edge_len + tolerance
                and walk <= 2.0 * edge_len + tolerance,
            }
            ok = ok and rec["ok"]
            records.append(rec)
    return ok, records


# ---------------------------------------------------------------------------
# theta-5 short-path witness


def theta5_witness_path(g: SpannerGraph, u: int, w: int) -> list[int]:
    """Path from u to w in a theta-5 graph whose length is at most
    2(2+sqrt(5)) times the size of the canonical triangle of (u, w).

    Follows the constructive connectivity argument: normalize the pair's frame
    (rotate so w sits in cone 0 of u, mirror so it sits on or right of the
    bisector), recurse on a strictly easier pair, and stitch construction edges.
    """
    if g.kind != "theta" or g.k != 5:
        raise InvalidParameter("witness paths require a theta graph with k=5")
    if u == w:
        raise InvalidParameter("witness path endpoints must differ")
    if u not in g.points or w not in g.points:
        raise InvalidParameter("witness path endpoints must be graph vertices")
    cs = ConeSystem(5)
    pts = {p.id: (p.x, p.y) for p in g.points}
    ids = list(pts)
    n = len(ids)
    budget = [n * (n - 1) // 2 + 2]
    theta = cs.theta
    half = theta / 2

    def tri_size(a: int, b: int) -> float:
        (ax, ay), (bx, by) = pts[a], pts[b]
        return kernels.theta_projection_len(bx - ax, by - ay, 5) / math.cos(half)

    def frame(a: int, b: int):
        """Map raw xy to a frame with b in cone 0 of a, azimuth in [0, theta/2]."""
        (ax, ay), (bx, by) = pts[a], pts[b]
        r = kernels.cone_index(bx - ax, by - ay, 5)
        phi = r * theta
        c, s = math.cos(phi), math.sin(phi)

        def rot(p):
            x, y = p
            return (x * c - y * s, x * s + y * c)

        wx, wy = rot((bx - ax, by - ay))
        mirror = wx < 0.0

        def f(pid_or_xy):
            p = pts[pid_or_xy] if isinstance(pid_or_xy, int) else pid_or_xy
            x, y = rot((p[0] - ax, p[1] - ay))
            return (-x, y) if mirror else (x, y)

        return f

    def cone_between(f, a, b) -> int:
        xa, ya = f(a)
        xb, yb = f(b)
        return kernels.cone_index(xb - xa, yb - ya, 5)

    def cone_target(f, a: int, want_cone: int) -> int:
        """Construction target of a in the frame cone want_cone: the
        (projection, distance, id)-smallest vertex there."""
        xa, ya = f(a)
        best = None
        for pid in ids:
            if pid == a:
                continue
            xb, yb = f(pid)
            dx, dy = xb - xa, yb - ya
            if kernels.cone_index(dx, dy, 5) != want_cone:
                continue
            key = (
                kernels.theta_projection_len(dx, dy, 5),
                dx * dx + dy * dy,
                pid,
            )
            if best is None or key < best[0]:
                best = (key, pid)
        if best is None:
            raise InternalInvariantViolation("expected a nonempty cone during witness search")
        return best[1]

    def rec(a: int, b: int) -> list[int]:
        budget[0] -= 1
        if budget[0] <= 0:
            raise InternalInvariantViolation("witness recursion exceeded its call budget")
        if g.has_edge(a, b):
            return [a, b]
        f = frame(a, b)
        xa, ya = f(a)
        xb, yb = f(b)
        az_b = kernels.azimuth(xb - xa, yb - ya)
        if az_b > math.pi:
            az_b -= 2 * math.pi
        if az_b < theta / 4:
            # b's triangle of the reversed pair is strictly smaller: solve that
            # direction and read the path backwards.
            return list(reversed(rec(b, a)))
        v_w = cone_target(f, b, 3)
        if not g.has_edge(b, v_w):
            raise InternalInvariantViolation("cone target is not a construction edge")
        cu = cone_between(f, a, v_w)
        if cu in (0, 1, 2):
            return rec(a, v_w) + [b]
        if cu == 3:
            raise InternalInvariantViolation("cone target cannot be behind the source")
        # v_w lies in frame cone 4 of a.
        size = tri_size(a, b)
        bx = xa + size * math.sin(half)
        by = ya + size * math.cos(half)
        vx, vy = f(v_w)
        if kernels.cone_index(vx - bx, vy - by, 5) == 3:
            return rec(a, v_w) + [b]
        v_u = cone_target(f, a, 0)
        if not g.has_edge(a, v_u):
            raise InternalInvariantViolation("cone target is not a construction edge")
        cw_ = cone_between(f, v_u, b)
        if cw_ in (4, 0):
            return [a] + rec(v_u, b)
        if cw_ != 1:
            raise InternalInvariantViolation("unexpected cone of the target around the helper")
        c_back = cone_between(f, b, v_u)
        if c_back == 3:
            return [a] + rec(v_u, v_w) + [b]
        if c_back != 4:
            raise InternalInvariantViolation("unexpected cone of the helper around the target")
        if tri_size(b, v_u) <= (THETA5_WITNESS_FACTOR - 1.0) / THETA5_WITNESS_FACTOR * tri_size(a, b):
            return [a] + list(reversed(rec(b, v_u)))
        c_vu = cone_between(f, v_w, v_u)
        if c_vu in (0, 1):
            return [a] + list(reversed(rec(v_w, v_u))) + [b]
        raise InternalInvariantViolation("exhausted witness case analysis")

    path = rec(u, w)
    if path[0] != u or path[-1] != w:
        raise InternalInvariantViolation("witness path endpoints mismatch")
    for a, b in zip(path, path[1:]):
        if not g.has_edge(a, b):
            raise InternalInvariantViolation(f"witness path uses a non-edge ({a}, {b})")
    return path


def path_length(ps: PointSet, path: list[int]) -> float:
    total = 0.0
    for a, b in zip(path, path[1:]):
        pa, pb = ps[a], ps[b]
        total += math.hypot(pb.x - pa.x, pb.y - pa.y)
    return total


# ---------------------------------------------------------------------------
# Lower-bound instance generators


def gen_circle(n: int, radius: float = 1.0) -> PointSet:
    """n points equally spaced on a circle, ids in angular order."""
    if n < 2:
        raise InvalidParameter(f"circle needs at least 2 points, got {n}")
    if radius <= 0:
        raise InvalidParameter(f"radius must be positive, got {radius}")
    pts = []
    for i in range(n):
        ang = 2.0 * math.pi * i / n
        pts.append(Point(i, radius * math.cos(ang), radius * math.sin(ang)))
    return PointSet(pts)


def gen_routing_lb(variant: str, alpha: float = 0.0, nudge: float = 1e-4) -> PointSet:
    """Adversarial instances for local routing on the half-theta-6 graph.

    positive:    route 0 -> 1; the detour through the blocker realizes
                 sqrt(3) cos(alpha) + sin(alpha) up to O(nudge).
    negative_a:  route 1 -> 0; a descent chain beside the left corner realizes
                 (5/sqrt(3)) cos(alpha) - sin(alpha) up to O(nudge).
    negative_b:  mirror of negative_a with the chain on the right corner; the
                 multiset of edge directions at vertex 1 is identical to
                 negative_a, so a local router cannot tell them apart.

    Ids: 0 = route endpoint u, 1 = apex w; blockers/chain follow.
    """
    if variant not in ("positive", "negative_a", "negative_b"):
        raise InvalidParameter(f"unknown routing lower-bound variant {variant!r}")
    if not 0.0 <= alpha <= math.pi / 6:
        raise InvalidParameter(f"alpha must be within [0, pi/6], got {alpha}")
    if not 0.0 < nudge <= 1e-2:
        raise InvalidParameter(f"nudge must be in (0, 1e-2], got {nudge}")
    if variant != "positive" and alpha > math.pi / 6 - 10.0 * nudge:
        # Within O(nudge) of pi/6 the apex slides onto the right blocker and
        # the intended edge set collapses.
        raise InvalidParameter(
            f"negative variants need alpha <= pi/6 - 10*nudge, got {alpha}"
        )
    s3 = math.sqrt(3.0)
    d = nudge
    a = (-0.5, s3 / 2)
    b = (0.5, s3 / 2)
    w = (s3 / 2 * math.tan(alpha), s3 / 2)
    pa = (a[0] + d * s3 / 2, a[1] - d * 0.5)
    pb = (b[0] - d * s3 / 2, b[1] - d * 0.5)
    if variant == "positive":
        ps = PointSet([Point(0, 0.0, 0.0), Point(1, *w), Point(2, *pa)])
        expected = {(0, 2), (1, 2)}
    elif variant == "negative_a":
        chain = (-0.25 + d / 4, s3 / 4)
        ps = PointSet(
            [Point(0, 0.0, 0.0), Point(1, *w), Point(2, *pa), Point(3, *pb), Point(4, *chain)]
        )
        expected = {(0, 4), (2, 4), (1, 2), (1, 3), (2, 3)}
    else:
        chain = (0.25 - d / 4, s3 / 4)
        ps = PointSet(
            [Point(0, 0.0, 0.0), Point(1, *w), Point(2, *pa), Point(3, *pb), Point(4, *chain)]
        )
        # Not a perfect mirror of negative_a: boundary ownership is chiral, so
        # the left blocker also links to the chain here. Vertex 1 still sees
        # the same edge directions as in negative_a.
        expected = {(0, 4), (3, 4), (1, 2), (1, 3), (2, 3), (2, 4)}
    h = build_half_theta6(ps)
    if alpha == 0.0:
        if h.edges != expected:
            raise InternalInvariantViolation(
                f"unexpected edge set for {variant}: {sorted(h.edges)}"
            )
    else:
        if not expected <= h.edges or h.has_edge(0, 1):
            raise InternalInvariantViolation(
                f"unexpected edge set for {variant} at alpha={alpha}: {sorted(h.edges)}"
            )
    return ps


# 0-based replay table for the 31-vertex theta-5 lower bound: at each step the
# vertices added (near which corner of whose canonical triangle) and the
# shortest 0 -> 1 path that must result.
_THETA5_LB_STEPS = [
    ([("corner", 0, 1, "ccw"), ("corner", 1, 0, "ccw")], [0, 3, 1]),
    ([("corner", 0, 3, "cw"), ("corner", 3, 0, "ccw")], [0, 2, 1]),
    ([("corner", 1, 2, "cw"), ("corner", 2, 1, "ccw")], [0, 5, 3, 1]),
    ([("corner", 0, 5, "cw"), ("corner", 5, 0, "ccw")], [0, 4, 3, 1]),
    ([("corner", 3, 4, "ccw"), ("corner", 4, 3, "cw")], [0, 4, 5, 3, 1]),
    ([("corner", 4, 5, "ccw"), ("corner", 5, 4, "cw")], [0, 4, 13, 5, 3, 1]),
    ([("corner", 4, 13, "ccw"), ("corner", 13, 4, "cw")], [0, 4, 12, 5, 3, 1]),
    ([("corner", 5, 12, "cw"), ("corner", 12, 5, "ccw")], [0, 2, 7, 1]),
    ([("lens", 1, 7)], [0, 2, 6, 1]),
    ([("corner", 2, 6, "ccw"), ("corner", 6, 2, "cw")], [0, 4, 11, 1]),
    ([("corner", 1, 11, "ccw")], [0, 9, 5, 3, 1]),
    ([("bridge", 9, 0)], [0, 4, 11, 3, 1]),
    ([("corner", 3, 11, "ccw"), ("corner", 11, 3, "cw")], [0, 4, 12, 13, 5, 3, 1]),
    ([("corner", 12, 13, "cw"), ("corner", 13, 12, "ccw")], [0, 8, 17, 5, 3, 1]),
    ([("corner", 8, 17, "cw"), ("corner", 17, 8, "ccw")], [0, 4, 15, 10, 3, 1]),
    ([("corner", 10, 15, "ccw"), ("corner", 15, 10, "cw")], [0, 22, 9, 5, 3, 1]),
]

#: Final shortest 0 -> 1 path of the completed 31-vertex instance.
THETA5_LB_FINAL_PATH = (0, 22, 9, 5, 3, 1)


def _step_paths() -> tuple[tuple[int, tuple[int, ...]], ...]:
    out = []
    count = 2
    for specs, expected in _THETA5_LB_STEPS:
        count += len(specs)
        out.append((count, tuple(expected)))
    return tuple(out)


#: (vertex count, expected shortest 0 -> 1 path) after each construction step,
#: for replaying the instance prefix by prefix.
THETA5_LB_STEP_PATHS = _step_paths()


def gen_theta5_lower_bound(nudge: float = 1e-4) -> PointSet:
    """31-point instance whose theta-5 spanning ratio approaches
    (11 sqrt(5) - 17)/2 as nudge -> 0.

    Built by repeatedly deleting the current shortest path's edges: each new
    vertex sits just inside a canonical triangle near one of its far corners,
    stealing the construction edge. After every step the shortest 0 -> 1 path
    is recomputed and checked against the expected one.
    """
    if not 0.0 < nudge <= 1e-3:
        raise InvalidParameter(f"nudge must be in (0, 1e-3], got {nudge}")
    cs = ConeSystem(5)
    half = cs.theta / 2

    coords: list[tuple[float, float]] = [(0.0, 0.0)]

    def delta(idx: int) -> float:
        # Slightly deeper nudges for later vertices break the exact projection
        # ties between symmetric corner placements.
        return nudge * (1.0 + idx / 50.0)

    def near_corner(tri, which: str, idx: int) -> tuple[float, float]:
        c = tri.corner_a if which == "ccw" else tri.corner_b
        o = tri.corner_b if which == "ccw" else tri.corner_a
        bx, by = _unit_sum(tri.apex, c, o)
        return (c[0] + delta(idx) * bx, c[1] + delta(idx) * by)

    # Bootstrap: vertex 1 near the clockwise corner of an intended unit triangle.
    tri0_a = (-math.sin(half), math.cos(half))
    tri0_b = (math.sin(half), math.cos(half))
    bx, by = _unit_sum((0.0, 0.0), tri0_b, tri0_a)
    coords.append((tri0_b[0] + delta(1) * bx, tri0_b[1] + delta(1) * by))

    def replay(expected: list[int]):
        ps = PointSet.from_pairs(coords)
        g = build_theta(ps, 5)
        got, _ = shortest_path(g, 0, 1)
        if got != expected:
            raise InternalInvariantViolation(
                f"lower-bound replay mismatch after {len(coords)} vertices: "
                f"expected {expected}, got {got}"
            )
        return ps

    replay([0, 1])
    for specs, expected in _THETA5_LB_STEPS:
        for spec in specs:
            idx = len(coords)
            if spec[0] == "corner":
                _, apex, target, which = spec
                tri = canonical_triangle(cs, coords[apex], coords[target])
                coords.append(near_corner(tri, which, idx))
            elif spec[0] == "lens":
                _, p, q = spec
                t1 = canonical_triangle(cs, coords[p], coords[q])
                t2 = canonical_triangle(cs, coords[q], coords[p])
                coords.append(_lens_point(t1, t2, delta(idx)))
            else:  # bridge: blocks (start, far) while staying on the shortest path
                _, blocked, start = spec
                coords.append(_bridge_point(cs, coords[start], coords[blocked], nudge))
        ps = replay(expected)
    return ps


def _unit_sum(apex, corner, other) -> tuple[float, float]:
    """Unit inward bisector at a triangle corner."""
    ux, uy = _unit(apex[0] - corner[0], apex[1] - corner[1])
    vx, vy = _unit(other[0] - corner[0], other[1] - corner[1])
    return _unit(ux + vx, uy + vy)


def _unit(x: float, y: float) -> tuple[float, float]:
    n = math.hypot(x, y)
    if n == 0.0:
        raise InternalInvariantViolation("zero-length direction")
    return (x / n, y / n)


def _lens_point(t1, t2, eps: float) -> tuple[float, float]:
    """Point just inside both of two overlapping canonical triangles, next to
    the boundary crossing that maximizes the walk around their apex pair.

    The apexes are the blocked pair; a vertex here severs their edge while the
    replacement detour through it stays as long as the lens allows.
    """
    e1 = _tri_sides(t1)
    e2 = _tri_sides(t2)
    crossings = []
    for p1, p2 in e1:
        for q1, q2 in e2:
            x = _seg_intersection(p1, p2, q1, q2)
            if x is not None:
                crossings.append(x)
    if len(crossings) < 2:
        raise InternalInvariantViolation("expected two boundary crossings for lens placement")
    best = max(crossings, key=lambda x: math.dist(t1.apex, x) + math.dist(t2.apex, x))
    # Pull toward the apex chord's midpoint: it is interior to both triangles,
    # so a small step that way lands strictly inside the lens.
    mx = (t1.apex[0] + t2.apex[0]) / 2.0
    my = (t1.apex[1] + t2.apex[1]) / 2.0
    ux, uy = _unit(mx - best[0], my - best[1])
    return (best[0] + eps * ux, best[1] + eps * uy)


def _tri_sides(t):
    return [(t.apex, t.corner_a), (t.corner_a, t.corner_b), (t.corner_b, t.apex)]


def _seg_intersection(p1, p2, q1, q2, eps: float = 1e-9):
    rx, ry = p2[0] - p1[0], p2[1] - p1[1]
    sx, sy = q2[0] - q1[0], q2[1] - q1[1]
    den = rx * sy - ry * sx
    if abs(den) < 1e-15:
        return None
    qpx, qpy = q1[0] - p1[0], q1[1] - p1[1]
    t = (qpx * sy - qpy * sx) / den
    s = (qpx * ry - qpy * rx) / den
    if eps < t < 1.0 - eps and eps < s < 1.0 - eps:
        return (p1[0] + t * rx, p1[1] + t * ry)
    return None


def _bridge_point(cs: ConeSystem, start, blocked, nudge: float) -> tuple[float, float]:
    """Vertex blocking the (start, blocked) pair from both sides: it sits just
    inside the upper boundary of the blocked vertex's cone toward it, with the
    start vertex just inside the lower boundary of its own cone in return."""
    az1 = cs.theta / 2 + nudge  # from blocked: just below the cone-1 top boundary
    az2 = cs.theta * 1.5 - nudge + math.pi  # toward start: its reverse azimuth
    d1 = direction(az1)
    d2 = direction(az2)
    den = d1[0] * (-d2[1]) - d1[1] * (-d2[0])
    if abs(den) < 1e-15:
        raise InternalInvariantViolation("bridge rays are parallel")
    ex = start[0] - blocked[0]
    ey = start[1] - blocked[1]
    t = (ex * (-d2[1]) - ey * (-d2[0])) / den
    return (blocked[0] + t * d1[0], blocked[1] + t * d1[1])
