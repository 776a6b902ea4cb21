"""Planar primitives: point sets, cone systems, canonical triangles.

Angles are azimuths measured clockwise from the +y axis in [0, 2*pi).
Cone 0 of a k-cone system is centred on +y; labels increase clockwise; a
direction on a boundary belongs to the counter-clockwise (lower-index) cone.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from . import kernels
from .errors import DegenerateInput, InvalidParameter

#: Distance/angle tolerance used for all boundary ownership decisions.
EPS = 1e-9


@dataclass(frozen=True)
class Point:
    id: int
    x: float
    y: float

    @property
    def xy(self) -> tuple[float, float]:
        return (self.x, self.y)


class PointSet:
    """Ordered collection of points with unique ids and unique coordinates."""

    def __init__(self, points):
        pts = list(points)
        ids = set()
        coords = set()
        for p in pts:
            if p.id in ids:
                raise DegenerateInput(f"duplicate point id {p.id}")
            if (p.x, p.y) in coords:
                raise DegenerateInput(f"duplicate coordinates for point {p.id}")
            ids.add(p.id)
            coords.add((p.x, p.y))
        self._points = pts
        self._by_id = {p.id: p for p in pts}

    @classmethod
    def from_pairs(cls, pairs) -> "PointSet":
        return cls(Point(i, float(x), float(y)) for i, (x, y) in enumerate(pairs))

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self):
        return iter(self._points)

    def __getitem__(self, pid: int) -> Point:
        return self._by_id[pid]

    def __contains__(self, pid: int) -> bool:
        return pid in self._by_id

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return [(p.id, p.x, p.y) for p in self] == [(p.id, p.x, p.y) for p in other]

    @property
    def ids(self) -> list[int]:
        return [p.id for p in self._points]

    def coords(self) -> tuple[list[float], list[float]]:
        return [p.x for p in self._points], [p.y for p in self._points]


def direction(az: float) -> tuple[float, float]:
    """Unit vector at the given clockwise-from-north azimuth."""
    return (math.sin(az), math.cos(az))


class ConeSystem:
    """k equiangular cones around every point, cone 0 bisecting +y."""

    def __init__(self, k: int):
        if not isinstance(k, int) or k < 2:
            raise InvalidParameter(f"cone count must be an integer >= 2, got {k!r}")
        self.k = k
        self.theta = 2 * math.pi / k

    def azimuth(self, u, v) -> float:
        """Azimuth of v as seen from u (points or (x, y) pairs)."""
        ux, uy = _xy(u)
        vx, vy = _xy(v)
        return kernels.azimuth(vx - ux, vy - uy)

    def cone_of(self, u, v) -> int:
        ux, uy = _xy(u)
        vx, vy = _xy(v)
        if vx == ux and vy == uy:
            raise DegenerateInput("cone of a zero vector is undefined")
        return kernels.cone_index(vx - ux, vy - uy, self.k)

    def bisector(self, i: int) -> float:
        return (i % self.k) * self.theta

    def boundary_azimuths(self) -> list[float]:
        return [(self.theta / 2 + i * self.theta) % (2 * math.pi) for i in range(self.k)]


def theta_projection(cs: ConeSystem, u, v) -> float:
    """Projection of the vector u->v onto the bisector of its own cone."""
    ux, uy = _xy(u)
    vx, vy = _xy(v)
    return kernels.theta_projection_len(vx - ux, vy - uy, cs.k)


def angle_alpha(cs: ConeSystem, u, v) -> float:
    """Unsigned angle between u->v and the bisector of the cone containing it,
    in [0, theta/2]."""
    az = cs.azimuth(u, v)
    i = cs.cone_of(u, v)
    d = az - cs.bisector(i)
    if d > math.pi:
        d -= 2 * math.pi
    elif d < -math.pi:
        d += 2 * math.pi
    return abs(d)


@dataclass(frozen=True)
class CanonicalTriangle:
    """Isoceles triangle with apex u whose wedge is u's cone containing w and
    whose far side passes through w (perpendicular to the bisector).

    corner_a is the counter-clockwise (lower azimuth) corner, corner_b the
    clockwise one; size is the apex-to-corner distance.
    """

    apex: tuple[float, float]
    cone: int
    k: int
    projection: float
    size: float
    corner_a: tuple[float, float]
    corner_b: tuple[float, float]

    @property
    def midpoint_m(self) -> tuple[float, float]:
        """Foot of the target's projection on the bisector (midpoint of the far side)."""
        theta = 2 * math.pi / self.k
        dx, dy = direction(self.cone * theta)
        return (self.apex[0] + self.projection * dx, self.apex[1] + self.projection * dy)

    @property
    def balance_x(self) -> tuple[float, float]:
        """Point on the far side where the triangle of the pair (apex, x) and the
        reverse triangle of (x, apex) have equal size."""
        theta = 2 * math.pi / self.k
        r = self.projection / math.cos(theta / 4)
        dx, dy = direction(self.cone * theta + theta / 4)
        return (self.apex[0] + r * dx, self.apex[1] + r * dy)

    def contains(self, p, eps: float = EPS) -> bool:
        px, py = _xy(p)
        return kernels.point_in_tri(
            px,
            py,
            self.apex[0],
            self.apex[1],
            self.corner_a[0],
            self.corner_a[1],
            self.corner_b[0],
            self.corner_b[1],
            eps,
        )

    def polygon(self) -> list[tuple[float, float]]:
        return [self.apex, self.corner_a, self.corner_b]


def canonical_triangle(cs: ConeSystem, u, w) -> CanonicalTriangle:
    """Canonical triangle of the ordered pair (u, w): apex u, wedge = u's cone
    containing w, far side through w."""
    ux, uy = _xy(u)
    i = cs.cone_of(u, w)
    proj = theta_projection(cs, u, w)
    half = cs.theta / 2
    size = proj / math.cos(half)
    bis = cs.bisector(i)
    da = direction(bis - half)
    db = direction(bis + half)
    return CanonicalTriangle(
        apex=(ux, uy),
        cone=i,
        k=cs.k,
        projection=proj,
        size=size,
        corner_a=(ux + size * da[0], uy + size * da[1]),
        corner_b=(ux + size * db[0], uy + size * db[1]),
    )


def general_position_report(ps: PointSet, k: int) -> list[dict]:
    """Findings that violate the general-position assumptions for a k-cone system.

    Flags exact duplicates, pairs equidistant from a common apex, and pairs whose
    direction is within tolerance of a cone boundary direction or its
    perpendicular (mod pi).
    """
    cs = ConeSystem(k)
    findings = []
    pts = list(ps)
    n = len(pts)

    # Directions to avoid, folded mod pi.
    bad = set()
    for az in cs.boundary_azimuths():
        bad.add(az % math.pi)
        bad.add((az + math.pi / 2) % math.pi)
    bad_dirs = sorted(bad)

    for a in range(n):
        for b in range(a + 1, n):
            p, q = pts[a], pts[b]
            az = kernels.azimuth(q.x - p.x, q.y - p.y) % math.pi
            for d in bad_dirs:
                diff = abs(az - d)
                diff = min(diff, math.pi - diff)
                if diff <= EPS:
                    findings.append(
                        {"kind": "cone_boundary_aligned", "pair": [p.id, q.id], "direction": d}
                    )
                    break

    for apex in pts:
        dists = sorted(
            (math.hypot(p.x - apex.x, p.y - apex.y), p.id) for p in pts if p.id != apex.id
        )
        for (d1, i1), (d2, i2) in zip(dists, dists[1:]):
            if abs(d2 - d1) <= EPS * max(1.0, d1):
                findings.append({"kind": "equidistant", "apex": apex.id, "pair": [i1, i2]})

    return findings


def points_to_json(ps: PointSet) -> str:
    obj = {"points": [{"id": p.id, "x": p.x, "y": p.y} for p in ps]}
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def points_from_json(text: str) -> PointSet:
    obj = json.loads(text)
    try:
        pts = [Point(int(p["id"]), float(p["x"]), float(p["y"])) for p in obj["points"]]
    except (KeyError, TypeError) as exc:
        raise InvalidParameter(f"malformed points JSON: {exc}") from exc
    return PointSet(pts)


def _xy(p) -> tuple[float, float]:
    if isinstance(p, Point):
        return (p.x, p.y)
    return (float(p[0]), float(p[1]))
