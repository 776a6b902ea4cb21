"""Spanner construction: Yao and theta graphs, the half-theta-6 graph and its
degree-bounded subgraphs, rotated unions, and the Euclidean MST.

All constructions break ties deterministically: theta-style choices by
(projection, distance, id), Yao-style by (distance, id), MST edge order by
(weight, id, id).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from . import kernels
from .errors import InternalInvariantViolation, InvalidParameter
from .geometry import ConeSystem, Point, PointSet, theta_projection

#: Bitmask of the even ("positive") cones of a 6-cone system.
_POSITIVE_MASK_6 = 0b010101


class SpannerGraph:
    """Undirected geometric graph over a PointSet.

    kind identifies the construction; k is the cone count (None for the MST);
    metadata carries construction-specific extras (rotation count, routing hints).
    """

    def __init__(self, kind: str, k, points: PointSet, edges, metadata=None):
        self.kind = kind
        self.k = k
        self.points = points
        self.edges = {_norm_edge(u, v) for (u, v) in edges}
        for u, v in self.edges:
            if u not in points or v not in points:
                raise InvalidParameter(f"edge ({u}, {v}) references unknown point id")
        self.metadata = metadata or {}
        self._adj = None

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    def neighbors(self, u: int) -> list[int]:
        """Neighbour ids sorted by ascending azimuth (clockwise from north) around u."""
        if self._adj is None:
            adj = {p.id: [] for p in self.points}
            for a, b in self.edges:
                adj[a].append(b)
                adj[b].append(a)
            for pid, nbrs in adj.items():
                p = self.points[pid]
                nbrs.sort(key=lambda q: (kernels.azimuth(self.points[q].x - p.x, self.points[q].y - p.y), q))
            self._adj = adj
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self.neighbors(u))

    def max_degree(self) -> int:
        if not len(self.points):
            return 0
        return max(self.degree(p.id) for p in self.points)

    def total_weight(self) -> float:
        total = 0.0
        for u, v in self.edge_list():
            p, q = self.points[u], self.points[v]
            total += math.hypot(q.x - p.x, q.y - p.y)
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpannerGraph):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.k == other.k
            and self.points == other.points
            and self.edges == other.edges
            and self.metadata == other.metadata
        )

    def to_json(self) -> str:
        obj = {
            "kind": self.kind,
            "k": self.k,
            "points": [
                {"id": p.id, "x": p.x, "y": p.y}
                for p in sorted(self.points, key=lambda p: p.id)
            ],
            "edges": [[u, v] for (u, v) in self.edge_list()],
            "metadata": self.metadata,
        }
        return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SpannerGraph":
        obj = json.loads(text)
        try:
            pts = PointSet(Point(int(p["id"]), float(p["x"]), float(p["y"])) for p in obj["points"])
            edges = [(int(u), int(v)) for u, v in obj["edges"]]
            kind = obj["kind"]
            k = obj["k"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameter(f"malformed graph JSON: {exc}") from exc
        return cls(kind, k, pts, edges, obj.get("metadata") or {})


def graph_to_json(g: SpannerGraph) -> str:
    return g.to_json()


def graph_from_json(text: str) -> SpannerGraph:
    return SpannerGraph.from_json(text)


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise InvalidParameter(f"self loop at {u}")
    return (u, v) if u < v else (v, u)


def _id_arrays(ps: PointSet):
    pts = sorted(ps, key=lambda p: p.id)
    ids = [p.id for p in pts]
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    return ids, xs, ys


def build_yao(ps: PointSet, k: int) -> SpannerGraph:
    """Yao graph: from every point, an edge to the Euclidean-closest point in
    each of its k cones."""
    ConeSystem(k)
    ids, xs, ys = _id_arrays(ps)
    raw = kernels.cone_edges(xs, ys, k, False, 0)
    return SpannerGraph("yao", k, ps, ((ids[u], ids[v]) for u, _, v in raw))


def build_theta(ps: PointSet, k: int) -> SpannerGraph:
    """Theta graph: from every point, an edge to the projection-closest point
    (onto the cone bisector) in each of its k cones."""
    ConeSystem(k)
    ids, xs, ys = _id_arrays(ps)
    raw = kernels.cone_edges(xs, ys, k, True, 0)
    return SpannerGraph("theta", k, ps, ((ids[u], ids[v]) for u, _, v in raw))


def build_half_theta6(ps: PointSet) -> SpannerGraph:
    """Half-theta-6 graph: theta edges built only in the three even cones."""
    ids, xs, ys = _id_arrays(ps)
    raw = kernels.cone_edges(xs, ys, 6, True, _POSITIVE_MASK_6)
    return SpannerGraph("half_theta6", 6, ps, ((ids[u], ids[v]) for u, _, v in raw))


@dataclass(frozen=True)
class CanonicalPathInfo:
    """Fan of a vertex's negative cone: the vertices whose construction edge
    targets the anchor, in ascending azimuth order around it."""

    anchor: int
    cone: int
    members: tuple[int, ...]
    closest: int | None
    first: int | None
    last: int | None

    def path_edges(self) -> list[tuple[int, int]]:
        return [(self.members[i], self.members[i + 1]) for i in range(len(self.members) - 1)]


def _fans(h: SpannerGraph) -> dict[tuple[int, int], list[int]]:
    """(anchor id, odd cone index) -> fan member ids sorted by azimuth around the anchor."""
    if h.kind != "half_theta6":
        raise InvalidParameter(f"expected a half_theta6 graph, got kind {h.kind!r}")
    cs = ConeSystem(6)
    fans: dict[tuple[int, int], list[tuple[float, int]]] = {}
    for a, b in h.edges:
        pa, pb = h.points[a], h.points[b]
        ja = cs.cone_of(pa, pb)
        jb = cs.cone_of(pb, pa)
        if (ja % 2 == 1) == (jb % 2 == 1):
            raise InternalInvariantViolation(
                f"edge ({a}, {b}) lacks a unique negative-side endpoint"
            )
        if ja % 2 == 1:
            s, v, j = a, b, ja
        else:
            s, v, j = b, a, jb
        p = h.points[s]
        q = h.points[v]
        fans.setdefault((s, j), []).append((kernels.azimuth(q.x - p.x, q.y - p.y), v))
    return {key: [v for _, v in sorted(members)] for key, members in fans.items()}


def _fan_closest(h: SpannerGraph, anchor: int, members: list[int]) -> int:
    cs = ConeSystem(6)
    p = h.points[anchor]

    def key(v: int):
        q = h.points[v]
        d2 = (q.x - p.x) ** 2 + (q.y - p.y) ** 2
        return (theta_projection(cs, p, q), d2, v)

    return min(members, key=key)


def canonical_path_info(h: SpannerGraph, anchor: int, cone: int) -> CanonicalPathInfo:
    if cone % 2 == 0:
        raise InvalidParameter(f"cone {cone} is positive; fans live in odd cones")
    members = _fans(h).get((anchor, cone), [])
    if not members:
        return CanonicalPathInfo(anchor, cone, (), None, None, None)
    return CanonicalPathInfo(
        anchor,
        cone,
        tuple(members),
        _fan_closest(h, anchor, members),
        members[0],
        members[-1],
    )


def build_g12(h: SpannerGraph) -> SpannerGraph:
    """Degree-12 subgraph: in every negative cone of every vertex, keep only the
    first, last (by azimuth) and projection-closest fan edges."""
    fans = _fans(h)
    kept = set()
    for (s, _j), members in fans.items():
        keep = {members[0], members[-1], _fan_closest(h, s, members)}
        for v in keep:
            kept.add(_norm_edge(s, v))
    return SpannerGraph("g12", 6, h.points, kept)


def build_g9(h: SpannerGraph) -> SpannerGraph:
    """Degree-9 subgraph: keep the projection-closest fan edge per negative cone
    plus every edge between consecutive fan members, and store the per-vertex
    hints local routing needs (walk direction per positive cone, fan endpoint
    coordinates per negative cone)."""
    fans = _fans(h)
    kept = set()
    for (s, _j), members in fans.items():
        kept.add(_norm_edge(s, _fan_closest(h, s, members)))
        for a, b in zip(members, members[1:]):
            if not h.has_edge(a, b):
                raise InternalInvariantViolation(
                    f"consecutive fan members {a}, {b} of {s} are not adjacent"
                )
            kept.add(_norm_edge(a, b))

    hints: dict[str, dict] = {}
    for (v, j), members in fans.items():
        closest = _fan_closest(h, v, members)
        pos_cone = {}
        for idx, s in enumerate(members):
            if s == closest:
                d = "self"
            elif members.index(closest) > idx:
                d = "ccw"
            else:
                d = "cw"
            c = (j + 3) % 6
            pos_cone[(s, c)] = d
        for (s, c), d in pos_cone.items():
            hints.setdefault(str(s), {"dir": {}, "fan": {}})["dir"][str(c)] = d
        first = h.points[members[0]]
        last = h.points[members[-1]]
        hints.setdefault(str(v), {"dir": {}, "fan": {}})["fan"][str(j)] = {
            "first": [first.id, first.x, first.y],
            "last": [last.id, last.x, last.y],
        }
    return SpannerGraph("g9", 6, h.points, kept, {"hints": hints})


def build_rotated_union(ps: PointSet, m: int) -> SpannerGraph:
    """Union of m half-theta-6 graphs, the j-th built in a frame rotated by
    j*pi/(3m)."""
    if not isinstance(m, int) or m < 1:
        raise InvalidParameter(f"rotation count must be an integer >= 1, got {m!r}")
    edges = set()
    for j in range(m):
        phi = j * math.pi / (3 * m)
        c, s = math.cos(phi), math.sin(phi)
        rotated = PointSet(
            Point(p.id, p.x * c - p.y * s, p.x * s + p.y * c) for p in ps
        )
        edges |= build_half_theta6(rotated).edges
    return SpannerGraph("rotated_union", 6, ps, edges, {"m": m})


def build_mst(ps: PointSet) -> SpannerGraph:
    """Euclidean minimum spanning tree (Kruskal, ties by (weight, id, id))."""
    pts = sorted(ps, key=lambda p: p.id)
    cand = []
    for i, p in enumerate(pts):
        for q in pts[i + 1 :]:
            d2 = (q.x - p.x) ** 2 + (q.y - p.y) ** 2
            cand.append((d2, p.id, q.id))
    cand.sort()
    parent = {p.id: p.id for p in pts}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = []
    for _d2, u, v in cand:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            edges.append((u, v))
            if len(edges) == len(pts) - 1:
                break
    return SpannerGraph("mst", None, ps, edges)
