"""
Exact planar predicates over rational coordinates
"""

import math
from fractions import Fraction
from typing import List, Sequence, Tuple

Coord = Tuple[Fraction, Fraction]


def orient(a: Coord, b: Coord, c: Coord) -> Fraction:
    """Twice the signed area of (a, b, c); positive when counter-clockwise."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def centroid(points: Sequence[Coord]) -> Coord:
    n = len(points)
    return (
        sum((p[0] for p in points), Fraction(0)) / n,
        sum((p[1] for p in points), Fraction(0)) / n,
    )


def strictly_between(p: Coord, a: Coord, b: Coord) -> bool:
    """True if p lies on segment ab but is neither endpoint."""
    if orient(a, b, p) != 0 or p == a or p == b:
        return False
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def segments_conflict(a: Coord, b: Coord, c: Coord, d: Coord) -> bool:
    """True if segments ab and cd meet anywhere other than a shared endpoint."""
    shared = {a, b} & {c, d}
    if len(shared) == 2:
        # identical segments are a duplicate realization, not an overlap
        return False
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 == 0 and o2 == 0:
        # collinear: any overlap beyond a single shared endpoint is improper
        return any(
            strictly_between(p, a, b) for p in (c, d)
        ) or any(strictly_between(p, c, d) for p in (a, b))
    if shared:
        return False
    if (o1 > 0) != (o2 > 0) and (o3 > 0) != (o4 > 0) and 0 not in (o1, o2, o3, o4):
        return True
    # touching at a non-endpoint
    return (
        strictly_between(c, a, b)
        or strictly_between(d, a, b)
        or strictly_between(a, c, d)
        or strictly_between(b, c, d)
    )


def strictly_inside_triangle(p: Coord, a: Coord, b: Coord, c: Coord) -> bool:
    o1, o2, o3 = orient(a, b, p), orient(b, c, p), orient(c, a, p)
    return (o1 > 0 and o2 > 0 and o3 > 0) or (o1 < 0 and o2 < 0 and o3 < 0)


def on_polygon_boundary(p: Coord, polygon: Sequence[Coord]) -> bool:
    n = len(polygon)
    for i in range(n):
        a, b = polygon[i], polygon[(i + 1) % n]
        if p == a or strictly_between(p, a, b):
            return True
    return False


def strictly_inside_polygon(p: Coord, polygon: Sequence[Coord]) -> bool:
    """Crossing-number test; points on the boundary are not inside."""
    if on_polygon_boundary(p, polygon):
        return False
    inside = False
    n = len(polygon)
    for i in range(n):
        a, b = polygon[i], polygon[(i + 1) % n]
        if (a[1] > p[1]) != (b[1] > p[1]):
            x_cross = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if p[0] < x_cross:
                inside = not inside
    return inside


def pseudo_angle(dx: Fraction, dy: Fraction) -> Fraction:
    """Monotone stand-in for atan2 in [0, 4), counter-clockwise from +x."""
    if dy >= 0:
        if dx >= 0:
            return dy / (dx + dy)
        return 1 + (-dx) / (-dx + dy)
    if dx < 0:
        return 2 + (-dy) / (-dx - dy)
    return 3 + dx / (dx - dy)


def clockwise_turn(reference: Coord, direction: Coord) -> Fraction:
    """Clockwise sweep from `reference` to `direction`, in (0, 4]."""
    turn = (pseudo_angle(*reference) - pseudo_angle(*direction)) % 4
    return turn if turn != 0 else Fraction(4)


def polygon_length(polygon: List[Coord]) -> float:
    n = len(polygon)
    total = 0.0
    for i in range(n):
        a, b = polygon[i], polygon[(i + 1) % n]
        total += math.hypot(b[0] - a[0], b[1] - a[1])
    return total
