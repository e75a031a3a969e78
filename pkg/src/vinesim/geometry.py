"""Planar geometry primitives for contact checks: points, segments, convex polygons."""

from __future__ import annotations

import math
from typing import Sequence, Tuple

Point = Tuple[float, float]


def dot(a: Point, b: Point) -> float:
    return a[0] * b[0] + a[1] * b[1]


def cross(a: Point, b: Point) -> float:
    return a[0] * b[1] - a[1] * b[0]


def sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def norm(a: Point) -> float:
    return math.hypot(a[0], a[1])


def normalize(a: Point) -> Point:
    n = norm(a)
    if n == 0.0:
        raise ValueError("cannot normalize zero vector")
    return (a[0] / n, a[1] / n)


def closest_point_on_segment(p: Point, a: Point, b: Point) -> Point:
    ab = sub(b, a)
    denom = dot(ab, ab)
    if denom == 0.0:
        return a
    t = dot(sub(p, a), ab) / denom
    t = min(1.0, max(0.0, t))
    return (a[0] + t * ab[0], a[1] + t * ab[1])


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    return norm(sub(p, closest_point_on_segment(p, a, b)))


def is_convex(poly: Sequence[Point]) -> bool:
    """Convexity check tolerant of collinear runs; needs >= 3 vertices."""
    n = len(poly)
    if n < 3:
        return False
    sign = 0.0
    for i in range(n):
        a, b, c = poly[i], poly[(i + 1) % n], poly[(i + 2) % n]
        z = cross(sub(b, a), sub(c, b))
        if z != 0.0:
            if sign != 0.0 and (z > 0) != (sign > 0):
                return False
            sign = z
    return sign != 0.0


def point_in_convex_polygon(p: Point, poly: Sequence[Point]) -> bool:
    n = len(poly)
    sign = 0.0
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        z = cross(sub(b, a), sub(p, a))
        if z != 0.0:
            if sign != 0.0 and (z > 0) != (sign > 0):
                return False
            sign = z
    return True


def polygon_boundary_closest(p: Point, poly: Sequence[Point]) -> Tuple[Point, float]:
    """Closest boundary point and its distance."""
    best: Point = poly[0]
    best_d = math.inf
    n = len(poly)
    for i in range(n):
        q = closest_point_on_segment(p, poly[i], poly[(i + 1) % n])
        d = norm(sub(p, q))
        if d < best_d:
            best_d = d
            best = q
    return best, best_d


def signed_distance_to_polygon(p: Point, poly: Sequence[Point]) -> float:
    """Distance to a convex polygon's boundary, negative inside."""
    _, d = polygon_boundary_closest(p, poly)
    return -d if point_in_convex_polygon(p, poly) else d


def outward_normal_at(p: Point, poly: Sequence[Point]) -> Point:
    """Unit normal pointing away from the polygon at the point nearest p.

    For an exterior point this is the direction from the closest boundary
    point toward p; for an interior or on-boundary point, the outward
    normal of the nearest edge.
    """
    q, _ = polygon_boundary_closest(p, poly)
    v = sub(p, q)
    if norm(v) > 1e-12 and not point_in_convex_polygon(p, poly):
        return normalize(v)
    # Nearest edge normal; polygon orientation inferred from signed area.
    n_pts = len(poly)
    area = sum(cross(poly[i], poly[(i + 1) % n_pts]) for i in range(n_pts))
    best_edge = None
    best_d = math.inf
    for i in range(n_pts):
        a, b = poly[i], poly[(i + 1) % n_pts]
        d = point_segment_distance(p, a, b)
        if d < best_d:
            best_d = d
            best_edge = (a, b)
    a, b = best_edge
    e = normalize(sub(b, a))
    # CCW polygons (positive area) have outward normals to the right of edges.
    return (e[1], -e[0]) if area > 0 else (-e[1], e[0])


def polyline_length(points: Sequence[Point]) -> float:
    return sum(norm(sub(points[i + 1], points[i])) for i in range(len(points) - 1))
