"""Small planar geometry helpers shared by the figure operations."""

import math
from typing import NamedTuple


class Point(NamedTuple):
    x: float
    y: float


def intersect_lines(m1: float, c1: float, m2: float, c2: float) -> Point:
    """Intersection of y = m1*x + c1 and y = m2*x + c2 (slopes distinct)."""
    x = (c2 - c1) / (m1 - m2)
    return Point(x, m1 * x + c1)


def shoelace_area(points) -> float:
    """Unsigned polygon area of an ordered (simple) vertex sequence."""
    acc = 0.0
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        acc += x1 * y2 - x2 * y1
    return 0.5 * abs(acc)


def distance(p: Point, q: Point) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def point_line_distance(a: float, b: float, c: float, p: Point) -> float:
    """Distance from p to the line a*x + b*y + c = 0."""
    return abs(a * p.x + b * p.y + c) / math.hypot(a, b)
