"""2-D geometric primitives for the museum floorplan.

Everything works on plain (x, y) float tuples. Intersection predicates
are inclusive at tangencies (a sight line grazing a corner counts as
blocked), but contacts that happen only at a segment's own endpoints do
not count: a beacon sitting exactly on a shelf edge does not occlude
itself.
"""

from __future__ import annotations

import math
from bisect import bisect_right

Point = tuple[float, float]

_EPS = 0.0  # predicates are exact; tests rely on inclusive boundaries


def sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def dot(a: Point, b: Point) -> float:
    return a[0] * b[0] + a[1] * b[1]


def cross(a: Point, b: Point) -> float:
    return a[0] * b[1] - a[1] * b[0]


def norm(a: Point) -> float:
    return math.hypot(a[0], a[1])


def dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def normalize(a: Point) -> Point:
    """Unit vector along a. Raises ValueError on the zero vector."""
    n = norm(a)
    if n == 0.0:
        raise ValueError("cannot normalize a zero-length vector")
    return (a[0] / n, a[1] / n)


def lerp(a: Point, b: Point, u: float) -> Point:
    # (1-u)*a + u*b returns a and b bit-exactly at u=0 and u=1
    return ((1.0 - u) * a[0] + u * b[0], (1.0 - u) * a[1] + u * b[1])


def point_in_rect(p: Point, rect: tuple[float, float, float, float]) -> bool:
    """Closed rectangle (xmin, ymin, xmax, ymax) containment."""
    xmin, ymin, xmax, ymax = rect
    return xmin <= p[0] <= xmax and ymin <= p[1] <= ymax


def rect_in_rect(inner: tuple[float, float, float, float],
                 outer: tuple[float, float, float, float]) -> bool:
    return (point_in_rect((inner[0], inner[1]), outer)
            and point_in_rect((inner[2], inner[3]), outer))


def segment_point_distance(p: Point, q: Point, c: Point) -> float:
    """Distance from point c to the closed segment pq."""
    d = sub(q, p)
    dd = dot(d, d)
    if dd == 0.0:
        return dist(p, c)
    u = dot(sub(c, p), d) / dd
    u = min(1.0, max(0.0, u))
    return dist((p[0] + u * d[0], p[1] + u * d[1]), c)


def segment_hits_disk(p: Point, q: Point, center: Point, radius: float) -> bool:
    """Closed segment vs closed disk, inclusive at tangency."""
    return segment_point_distance(p, q, center) <= radius


def _collinear_overlap(p: Point, q: Point, a: Point, b: Point) -> tuple[float, float] | None:
    """Parameter interval on pq covered by the collinear segment ab."""
    d = sub(q, p)
    dd = dot(d, d)
    if dd == 0.0:
        return None
    ta = dot(sub(a, p), d) / dd
    tb = dot(sub(b, p), d) / dd
    lo, hi = (ta, tb) if ta <= tb else (tb, ta)
    lo = max(lo, 0.0)
    hi = min(hi, 1.0)
    if lo > hi:
        return None
    return (lo, hi)


def segment_segment_param(p: Point, q: Point, a: Point, b: Point) -> tuple[float, float] | None:
    """Intersection of segment pq with segment ab as a parameter interval on pq.

    Returns (t0, t1) with t0 <= t1, clipped to [0, 1]; a proper crossing
    yields t0 == t1, a collinear overlap a wider interval. None when the
    segments do not touch.
    """
    d1 = sub(q, p)
    d2 = sub(b, a)
    denom = cross(d1, d2)
    w = sub(a, p)
    if denom == 0.0:
        if cross(w, d1) != 0.0:
            return None  # parallel, disjoint lines
        return _collinear_overlap(p, q, a, b)
    t = cross(w, d2) / denom
    u = cross(w, d1) / denom
    if 0.0 <= t <= 1.0 and 0.0 <= u <= 1.0:
        return (t, t)
    return None


def convex_clip_params(p: Point, q: Point, polygon: list[Point]) -> tuple[float, float] | None:
    """Clip the line through segment pq against a CCW convex polygon.

    Returns the parameter interval (t0, t1) of the line p + t*(q-p) that
    lies inside the closed polygon, before clamping to the segment; None
    when the line misses the polygon. Callers intersect with [0, 1] (or
    an open variant) themselves.
    """
    d = sub(q, p)
    t0 = -math.inf
    t1 = math.inf
    n = len(polygon)
    for i in range(n):
        v = polygon[i]
        e = sub(polygon[(i + 1) % n], v)
        # inside is the left half-plane of each CCW edge
        denom = cross(e, d)
        num = cross(e, sub(p, v))
        if denom == 0.0:
            if num < 0.0:
                return None
            continue
        bound = -num / denom
        if denom > 0.0:
            t0 = max(t0, bound)
        else:
            t1 = min(t1, bound)
        if t0 > t1:
            return None
    return (t0, t1)


def segment_hits_polygon(p: Point, q: Point, polygon: list[Point]) -> bool:
    """Open segment (p, q) vs closed convex polygon, inclusive at grazes.

    Contact that happens only at t=0 or t=1 exactly (an endpoint resting
    on the boundary) does not count.
    """
    iv = convex_clip_params(p, q, polygon)
    if iv is None:
        return False
    t0, t1 = iv
    return t1 > 0.0 and t0 < 1.0


def segment_crosses_segment(p: Point, q: Point, a: Point, b: Point) -> bool:
    """Open segment (p, q) vs closed segment ab, inclusive at endpoints of ab."""
    iv = segment_segment_param(p, q, a, b)
    if iv is None:
        return False
    t0, t1 = iv
    return t1 > 0.0 and t0 < 1.0


def move_blocked_by_segment(p: Point, q: Point, a: Point, b: Point) -> bool:
    """Whether moving from p to q would touch segment ab beyond the start.

    Used for collision: contact at t=0 (already standing on the wall) is
    allowed so a visitor can step off a boundary; contact anywhere in
    (0, 1], including landing exactly on the wall, blocks.
    """
    iv = segment_segment_param(p, q, a, b)
    if iv is None:
        return False
    return iv[1] > 0.0


def move_blocked_by_polygon(p: Point, q: Point, polygon: list[Point]) -> bool:
    """Whether moving from p to q would touch the polygon beyond the start."""
    iv = convex_clip_params(p, q, polygon)
    if iv is None:
        return False
    t0, t1 = iv
    return min(t1, 1.0) > 0.0 and t0 <= 1.0


def point_in_convex(p: Point, polygon: list[Point], strict: bool = False) -> bool:
    """Point containment in a CCW convex polygon.

    strict=True tests the open interior, so boundary points are outside;
    that is the test used for "outside obstacle interiors".
    """
    n = len(polygon)
    for i in range(n):
        v = polygon[i]
        e = sub(polygon[(i + 1) % n], v)
        c = cross(e, sub(p, v))
        if strict:
            if c <= 0.0:
                return False
        else:
            if c < 0.0:
                return False
    return True


def polygon_signed_area(polygon: list[Point]) -> float:
    s = 0.0
    n = len(polygon)
    for i in range(n):
        a = polygon[i]
        b = polygon[(i + 1) % n]
        s += cross(a, b)
    return 0.5 * s


def is_convex_ccw(polygon: list[Point]) -> bool:
    """True for a CCW-ordered convex polygon with nonzero area.

    Collinear consecutive edges are tolerated; any clockwise turn is not.
    """
    n = len(polygon)
    if n < 3:
        return False
    if polygon_signed_area(polygon) <= 0.0:
        return False
    for i in range(n):
        e1 = sub(polygon[(i + 1) % n], polygon[i])
        e2 = sub(polygon[(i + 2) % n], polygon[(i + 1) % n])
        if cross(e1, e2) < 0.0:
            return False
    return True


def ensure_ccw(polygon: list[Point]) -> list[Point]:
    if polygon_signed_area(polygon) < 0.0:
        return list(reversed(polygon))
    return list(polygon)


def interpolate_waypoints(waypoints: list[tuple[float, Point]], t: float) -> Point:
    """Piecewise-linear position over (time, point) waypoints.

    Clamps before the first and after the last waypoint. At a waypoint
    time the returned point equals that waypoint bit-exactly.
    """
    if not waypoints:
        raise ValueError("waypoints must be non-empty")
    times = [w[0] for w in waypoints]
    if t <= times[0]:
        return waypoints[0][1]
    if t >= times[-1]:
        return waypoints[-1][1]
    i = bisect_right(times, t) - 1
    t0, p0 = waypoints[i]
    t1, p1 = waypoints[i + 1]
    u = (t - t0) / (t1 - t0)
    return lerp(p0, p1, u)
