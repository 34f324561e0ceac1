"""Qualitative relation algebra.

Three layers combine into one symbolic description of how a pair of
planar objects sit relative to each other:

* the 13 Allen relations between two intervals,
* the 8 region topological relations (disjoint .. equal),
* the PIR triple (delta, chi, psi) = one topological relation plus the
  Allen relations of the x- and y-axis projections.

On top of the enumerations the module fixes conceptual-neighborhood
graphs whose BFS-normalized shortest paths act as relation distances,
converse maps for reversing an ordered pair, and the dihedral (rotation
and reflection) action on triples that makes retrieval invariant under
the 8 symmetries of the plane.

All tables are built once at import; every function here is pure.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from enum import Enum

from .errors import ConfigurationError, ValidationError
from .geometry import (
    EPS,
    EPS_AREA,
    Interval,
    Point,
    Polygon,
    area,
    boundaries_touch,
    intersection_area,
    project,
)


class AllenRel(str, Enum):
    """The 13 interval relations, serialized by their short codes."""

    BEFORE = "<"
    EQUAL = "="
    MEETS = "m"
    OVERLAPS = "o"
    DURING = "d"
    STARTS = "s"
    FINISHES = "f"
    AFTER = ">"
    MET_BY = "mi"
    OVERLAPPED_BY = "oi"
    CONTAINS = "di"
    STARTED_BY = "si"
    FINISHED_BY = "fi"


class TopoRel(str, Enum):
    """The 8 region topological relations."""

    DISJOINT = "dt"
    TOUCHES = "to"
    CONTAINS = "ct"
    INSIDE = "in"
    OVERLAPS = "ov"
    COVERS = "co"
    EQUAL = "eq"
    COVERED_BY = "cb"


class D4(Enum):
    """The 8 plane symmetries: quarter turns and their x-negating mirrors.

    Value is (quarter_turns, mirrored); the action applies the rotation
    first, then the mirror. rot90 is a counter-clockwise quarter turn
    (x, y) -> (-y, x); the mirror negates x: (x, y) -> (-x, y).
    """

    IDENTITY = (0, False)
    ROT90 = (1, False)
    ROT180 = (2, False)
    ROT270 = (3, False)
    MIRROR_X = (0, True)
    MIRROR_X_ROT90 = (1, True)
    MIRROR_X_ROT180 = (2, True)
    MIRROR_X_ROT270 = (3, True)

    @property
    def quarter_turns(self) -> int:
        return self.value[0]

    @property
    def mirrored(self) -> bool:
        return self.value[1]

    def apply_point(self, p: Point) -> Point:
        x, y = p.x, p.y
        for _ in range(self.quarter_turns):
            x, y = -y, x
        if self.mirrored:
            x = -x
        return Point(x, y)

    def apply_polygon(self, p: Polygon) -> Polygon:
        return Polygon(tuple(self.apply_point(v) for v in p.vertices))


@dataclass(frozen=True)
class PIR:
    """Projection interval relationship triple for an ordered object pair.

    ``delta`` is the topological relation of the first object relative to
    the second; ``chi`` and ``psi`` are the Allen relations between their
    x- and y-axis projections.
    """

    delta: TopoRel
    chi: AllenRel
    psi: AllenRel

    def codes(self) -> tuple[str, str, str]:
        return (self.delta.value, self.chi.value, self.psi.value)

    @staticmethod
    def from_codes(codes) -> "PIR":
        if len(codes) != 3:
            raise ValidationError(f"relation triple needs 3 codes, got {len(codes)}")
        d, c, p = codes
        try:
            return PIR(TopoRel(d), AllenRel(c), AllenRel(p))
        except ValueError as exc:
            raise ValidationError(f"unknown relation code in {list(codes)!r}: {exc}") from None


ALLEN_CONVERSE = {
    AllenRel.BEFORE: AllenRel.AFTER,
    AllenRel.AFTER: AllenRel.BEFORE,
    AllenRel.MEETS: AllenRel.MET_BY,
    AllenRel.MET_BY: AllenRel.MEETS,
    AllenRel.OVERLAPS: AllenRel.OVERLAPPED_BY,
    AllenRel.OVERLAPPED_BY: AllenRel.OVERLAPS,
    AllenRel.STARTS: AllenRel.STARTED_BY,
    AllenRel.STARTED_BY: AllenRel.STARTS,
    AllenRel.DURING: AllenRel.CONTAINS,
    AllenRel.CONTAINS: AllenRel.DURING,
    AllenRel.FINISHES: AllenRel.FINISHED_BY,
    AllenRel.FINISHED_BY: AllenRel.FINISHES,
    AllenRel.EQUAL: AllenRel.EQUAL,
}

# Relation between (-a) and (-b) given the relation between a and b.
ALLEN_MIRROR = {
    AllenRel.BEFORE: AllenRel.AFTER,
    AllenRel.AFTER: AllenRel.BEFORE,
    AllenRel.MEETS: AllenRel.MET_BY,
    AllenRel.MET_BY: AllenRel.MEETS,
    AllenRel.OVERLAPS: AllenRel.OVERLAPPED_BY,
    AllenRel.OVERLAPPED_BY: AllenRel.OVERLAPS,
    AllenRel.STARTS: AllenRel.FINISHES,
    AllenRel.FINISHES: AllenRel.STARTS,
    AllenRel.STARTED_BY: AllenRel.FINISHED_BY,
    AllenRel.FINISHED_BY: AllenRel.STARTED_BY,
    AllenRel.DURING: AllenRel.DURING,
    AllenRel.CONTAINS: AllenRel.CONTAINS,
    AllenRel.EQUAL: AllenRel.EQUAL,
}

TOPO_CONVERSE = {
    TopoRel.DISJOINT: TopoRel.DISJOINT,
    TopoRel.TOUCHES: TopoRel.TOUCHES,
    TopoRel.CONTAINS: TopoRel.INSIDE,
    TopoRel.INSIDE: TopoRel.CONTAINS,
    TopoRel.OVERLAPS: TopoRel.OVERLAPS,
    TopoRel.COVERS: TopoRel.COVERED_BY,
    TopoRel.COVERED_BY: TopoRel.COVERS,
    TopoRel.EQUAL: TopoRel.EQUAL,
}

# Conceptual neighborhood: relations joined by an edge are reachable from
# each other through a continuous deformation of one interval.
_ALLEN_NEIGHBOR_EDGES = [
    (AllenRel.BEFORE, AllenRel.MEETS),
    (AllenRel.MEETS, AllenRel.OVERLAPS),
    (AllenRel.OVERLAPS, AllenRel.STARTS),
    (AllenRel.OVERLAPS, AllenRel.FINISHED_BY),
    (AllenRel.STARTS, AllenRel.DURING),
    (AllenRel.STARTS, AllenRel.EQUAL),
    (AllenRel.FINISHED_BY, AllenRel.EQUAL),
    (AllenRel.FINISHED_BY, AllenRel.CONTAINS),
    (AllenRel.DURING, AllenRel.FINISHES),
    (AllenRel.EQUAL, AllenRel.FINISHES),
    (AllenRel.EQUAL, AllenRel.STARTED_BY),
    (AllenRel.CONTAINS, AllenRel.STARTED_BY),
    (AllenRel.FINISHES, AllenRel.OVERLAPPED_BY),
    (AllenRel.STARTED_BY, AllenRel.OVERLAPPED_BY),
    (AllenRel.OVERLAPPED_BY, AllenRel.MET_BY),
    (AllenRel.MET_BY, AllenRel.AFTER),
]

_TOPO_NEIGHBOR_EDGES = [
    (TopoRel.DISJOINT, TopoRel.TOUCHES),
    (TopoRel.TOUCHES, TopoRel.OVERLAPS),
    (TopoRel.OVERLAPS, TopoRel.COVERS),
    (TopoRel.OVERLAPS, TopoRel.COVERED_BY),
    (TopoRel.COVERS, TopoRel.CONTAINS),
    (TopoRel.COVERED_BY, TopoRel.INSIDE),
    (TopoRel.COVERS, TopoRel.EQUAL),
    (TopoRel.COVERED_BY, TopoRel.EQUAL),
]

ALLEN_DIAMETER = 8
TOPO_DIAMETER = 4


def _bfs_hops(nodes, edges) -> dict:
    adjacency: dict = {n: [] for n in nodes}
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    hops = {}
    for source in nodes:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            cur = queue.popleft()
            for nxt in adjacency[cur]:
                if nxt not in dist:
                    dist[nxt] = dist[cur] + 1
                    queue.append(nxt)
        for target, d in dist.items():
            hops[(source, target)] = d
    return hops

_ALLEN_HOPS = _bfs_hops(list(AllenRel), _ALLEN_NEIGHBOR_EDGES)
_TOPO_HOPS = _bfs_hops(list(TopoRel), _TOPO_NEIGHBOR_EDGES)

assert max(_ALLEN_HOPS.values()) == ALLEN_DIAMETER
assert max(_TOPO_HOPS.values()) == TOPO_DIAMETER


def allen_relation(a: Interval, b: Interval, eps: float = EPS) -> AllenRel:
    """Classify two intervals into exactly one of the 13 relations.

    Endpoint comparisons treat |u - v| <= eps as equality, so meets /
    starts / finishes stay reachable from measured data.
    """

    def cmp(u: float, v: float) -> int:
        if abs(u - v) <= eps:
            return 0
        return -1 if u < v else 1

    hi_lo = cmp(a.hi, b.lo)
    if hi_lo < 0:
        return AllenRel.BEFORE
    if hi_lo == 0:
        return AllenRel.MEETS
    lo_hi = cmp(a.lo, b.hi)
    if lo_hi > 0:
        return AllenRel.AFTER
    if lo_hi == 0:
        return AllenRel.MET_BY

    lo = cmp(a.lo, b.lo)
    hi = cmp(a.hi, b.hi)
    if lo < 0:
        if hi < 0:
            return AllenRel.OVERLAPS
        return AllenRel.FINISHED_BY if hi == 0 else AllenRel.CONTAINS
    if lo == 0:
        if hi < 0:
            return AllenRel.STARTS
        return AllenRel.EQUAL if hi == 0 else AllenRel.STARTED_BY
    if hi < 0:
        return AllenRel.DURING
    return AllenRel.FINISHES if hi == 0 else AllenRel.OVERLAPPED_BY


def allen_converse(r: AllenRel) -> AllenRel:
    return ALLEN_CONVERSE[r]


def allen_mirror(r: AllenRel) -> AllenRel:
    return ALLEN_MIRROR[r]


def topo_relation(a: Polygon, b: Polygon, eps: float = EPS, eps_area: float = EPS_AREA) -> TopoRel:
    """Classify region topology of ``a`` relative to ``b``.

    Decision procedure over the overlap area and a boundary-contact test;
    area comparisons use the relative tolerance ``eps_area``.
    """
    area_a = area(a)
    area_b = area(b)
    overlap = intersection_area(a, b)
    touching = boundaries_touch(a, b, eps)

    def close(u: float, v: float) -> bool:
        return abs(u - v) <= eps_area * max(abs(u), abs(v))

    if overlap <= eps_area * min(area_a, area_b):
        return TopoRel.TOUCHES if touching else TopoRel.DISJOINT
    if close(overlap, area_a) and close(overlap, area_b):
        return TopoRel.EQUAL
    if close(overlap, area_b) and area_b < area_a:
        return TopoRel.COVERS if touching else TopoRel.CONTAINS
    if close(overlap, area_a) and area_a < area_b:
        return TopoRel.COVERED_BY if touching else TopoRel.INSIDE
    return TopoRel.OVERLAPS


def topo_converse(r: TopoRel) -> TopoRel:
    return TOPO_CONVERSE[r]


def compute_pir(a: Polygon, b: Polygon, eps: float = EPS) -> PIR:
    """Full relation triple describing ``a`` relative to ``b``."""
    return PIR(
        delta=topo_relation(a, b, eps),
        chi=allen_relation(project(a, "x"), project(b, "x"), eps),
        psi=allen_relation(project(a, "y"), project(b, "y"), eps),
    )


def pir_converse(p: PIR) -> PIR:
    """Triple for the reversed pair; equals compute_pir(b, a)."""
    return PIR(
        delta=topo_converse(p.delta),
        chi=allen_converse(p.chi),
        psi=allen_converse(p.psi),
    )


def allen_distance(r1: AllenRel, r2: AllenRel) -> float:
    """Neighborhood-graph hops between two interval relations, scaled to [0, 1]."""
    return _ALLEN_HOPS[(r1, r2)] / ALLEN_DIAMETER


def topo_distance(t1: TopoRel, t2: TopoRel) -> float:
    """Neighborhood-graph hops between two topological relations, scaled to [0, 1]."""
    return _TOPO_HOPS[(t1, t2)] / TOPO_DIAMETER


DEFAULT_PIR_WEIGHTS = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)


def pir_distance(p1: PIR, p2: PIR, weights: tuple[float, float, float] = DEFAULT_PIR_WEIGHTS) -> float:
    """Weighted blend of the component distances; weights must sum to 1."""
    w_delta, w_chi, w_psi = weights
    if min(weights) < 0 or not math.isclose(w_delta + w_chi + w_psi, 1.0, abs_tol=1e-9):
        raise ConfigurationError(f"relation weights must be >= 0 and sum to 1, got {weights}")
    return (
        w_delta * topo_distance(p1.delta, p2.delta)
        + w_chi * allen_distance(p1.chi, p2.chi)
        + w_psi * allen_distance(p1.psi, p2.psi)
    )


def transform_pir(p: PIR, g: D4) -> PIR:
    """Triple after moving both objects by the symmetry ``g``.

    Topology is unchanged by any isometry. A quarter turn sends the old
    y-projection (mirrored) to the x-axis and the old x-projection to the
    y-axis; the x-negating mirror flips only the x component.
    """
    chi, psi = p.chi, p.psi
    for _ in range(g.quarter_turns):
        chi, psi = ALLEN_MIRROR[psi], chi
    if g.mirrored:
        chi = ALLEN_MIRROR[chi]
    return PIR(delta=p.delta, chi=chi, psi=psi)
