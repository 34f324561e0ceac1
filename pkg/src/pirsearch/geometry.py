"""Planar primitives: points, intervals and simple polygons.

Coordinates are real-valued model units with +x right and +y up; pixel
coordinates are accepted as reals (callers flip screen-space y before
reaching this module). Everything here is a pure function over immutable
values, so concurrent use needs no coordination.

Polygon overlap and boundary-distance queries delegate to shapely; the
remaining formulas (shoelace area, centroid, axis projection) are spelled
out directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import shapely
import shapely.geometry

from .errors import DegenerateGeometryError, ValidationError

# Default tolerance for endpoint / boundary-contact comparisons, in model
# units. Hand-traced pixel boundaries typically pass something like 0.5.
EPS = 1e-6

# Relative tolerance for comparing polygon areas.
EPS_AREA = 1e-6


@dataclass(frozen=True)
class Point:
    """Immutable 2D point."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValidationError(f"point coordinates must be finite, got ({self.x}, {self.y})")

    def translated(self, dx: float, dy: float) -> "Point":
        return Point(self.x + dx, self.y + dy)


@dataclass(frozen=True)
class Interval:
    """Closed real interval with strictly positive length."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValidationError("interval endpoints must be finite")
        if not self.lo < self.hi:
            raise DegenerateGeometryError(f"interval requires lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def negated(self) -> "Interval":
        """The interval occupied after negating the axis."""
        return Interval(-self.hi, -self.lo)


def _shoelace(vertices: tuple[Point, ...]) -> float:
    """Signed shoelace area; positive for counter-clockwise order."""
    total = 0.0
    n = len(vertices)
    for i in range(n):
        a = vertices[i]
        b = vertices[(i + 1) % n]
        total += a.x * b.y - b.x * a.y
    return 0.5 * total


@dataclass(frozen=True)
class Polygon:
    """Simple polygon, stored counter-clockwise and implicitly closed.

    Construction normalizes clockwise input to counter-clockwise and
    rejects self-intersecting or zero-area boundaries. Holes and
    multi-part boundaries are unsupported.
    """

    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(self.vertices)
        if len(verts) < 3:
            raise ValidationError(f"polygon needs at least 3 vertices, got {len(verts)}")
        signed = _shoelace(verts)
        if abs(signed) <= EPS * EPS:
            raise DegenerateGeometryError("polygon has (near-)zero area")
        if signed < 0:
            verts = tuple(reversed(verts))
        object.__setattr__(self, "vertices", verts)
        shape = _as_shape(self)
        if not shape.is_valid:
            raise DegenerateGeometryError("polygon boundary is self-intersecting or degenerate")

    @staticmethod
    def from_coords(coords) -> "Polygon":
        return Polygon(tuple(Point(float(x), float(y)) for x, y in coords))

    @staticmethod
    def _trusted(vertices: tuple[Point, ...]) -> "Polygon":
        """Skip validation for images of an already-valid polygon under a
        similarity transform (translation / positive scaling)."""
        p = object.__new__(Polygon)
        object.__setattr__(p, "vertices", vertices)
        return p

    def coords(self) -> list[tuple[float, float]]:
        return [(p.x, p.y) for p in self.vertices]

    def translated(self, dx: float, dy: float) -> "Polygon":
        return Polygon._trusted(tuple(Point(p.x + dx, p.y + dy) for p in self.vertices))

    def scaled(self, factor: float, about: Point | None = None) -> "Polygon":
        if factor <= 0:
            raise ValidationError(f"scale factor must be positive, got {factor}")
        c = about or Point(0.0, 0.0)
        return Polygon._trusted(
            tuple(Point(c.x + (p.x - c.x) * factor, c.y + (p.y - c.y) * factor) for p in self.vertices)
        )


@lru_cache(maxsize=4096)
def _as_shape(p: Polygon) -> shapely.geometry.Polygon:
    return shapely.geometry.Polygon([(v.x, v.y) for v in p.vertices])


def project(p: Polygon, axis: str) -> Interval:
    """Extent of the polygon along ``axis`` ('x' or 'y')."""
    if axis == "x":
        values = [v.x for v in p.vertices]
    elif axis == "y":
        values = [v.y for v in p.vertices]
    else:
        raise ValidationError(f"axis must be 'x' or 'y', got {axis!r}")
    lo, hi = min(values), max(values)
    if hi - lo <= EPS:
        raise DegenerateGeometryError(f"degenerate projection on {axis}-axis: [{lo}, {hi}]")
    return Interval(lo, hi)


def area(p: Polygon) -> float:
    """Positive shoelace area."""
    return _shoelace(p.vertices)


def intersection_area(a: Polygon, b: Polygon) -> float:
    """Area of the overlap region; 0 when the interiors are disjoint."""
    inter = _as_shape(a).intersection(_as_shape(b))
    return float(inter.area)


def boundaries_touch(a: Polygon, b: Polygon, eps: float = EPS) -> bool:
    """True iff the two boundary polylines come within ``eps`` of each other."""
    return _as_shape(a).exterior.distance(_as_shape(b).exterior) <= eps


def centroid(p: Polygon) -> Point:
    """Area centroid of the polygon."""
    a6 = 0.0
    cx = 0.0
    cy = 0.0
    n = len(p.vertices)
    for i in range(n):
        u = p.vertices[i]
        v = p.vertices[(i + 1) % n]
        cross = u.x * v.y - v.x * u.y
        a6 += cross
        cx += (u.x + v.x) * cross
        cy += (u.y + v.y) * cross
    a6 *= 3.0  # 6 * signed area
    return Point(cx / a6, cy / a6)


def rectangle(x0: float, y0: float, x1: float, y1: float) -> Polygon:
    """Axis-aligned rectangle helper, counter-clockwise from (x0, y0)."""
    return Polygon(
        (
            Point(x0, y0),
            Point(x1, y0),
            Point(x1, y1),
            Point(x0, y1),
        )
    )
