"""Planar partitions into convex polygons, lowered to CDCs.

All predicates use exact rationals. A partition is valid when every polygon
is strictly convex and counterclockwise, interiors are pairwise disjoint, and
any vertex that lies in a polygon (boundary included) is one of its vertices.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .cdc import CDC, minimal_infeasible_sets, new_cdc
from .errors import PartitionError, TheoremViolationError

RPoint = tuple[Fraction, Fraction]


def parse_point(p: Sequence) -> RPoint:
    return Fraction(str(p[0])), Fraction(str(p[1]))


def format_coord(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class PlanarPartition:
    polygons: tuple[tuple[RPoint, ...], ...]

    def __post_init__(self):
        polys = tuple(tuple(parse_point(p) for p in poly) for poly in self.polygons)
        object.__setattr__(self, "polygons", polys)


@dataclass(frozen=True)
class PartitionViolation:
    kind: str
    polygons: tuple[int, ...]
    vertex: RPoint | None = None
    detail: str = ""

    def __str__(self):
        where = f" at ({format_coord(self.vertex[0])},{format_coord(self.vertex[1])})" if self.vertex else ""
        return f"{self.kind}{list(self.polygons)}{where} {self.detail}".rstrip()


def _cross(o: RPoint, a: RPoint, b: RPoint) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _edges(poly):
    return [(poly[i], poly[(i + 1) % len(poly)]) for i in range(len(poly))]


def _contains(poly, p: RPoint) -> bool:
    """Closed containment for a counterclockwise convex polygon."""
    return all(_cross(a, b, p) >= 0 for a, b in _edges(poly))


def _interiors_overlap(p, q) -> bool:
    # Separating-axis test over both polygons' edge normals: interiors are
    # disjoint iff some axis has touching-or-separated projections.
    for poly in (p, q):
        for a, b in _edges(poly):
            nx, ny = a[1] - b[1], b[0] - a[0]
            pp = [nx * x + ny * y for x, y in p]
            qq = [nx * x + ny * y for x, y in q]
            if max(pp) <= min(qq) or max(qq) <= min(pp):
                return False
    return True


def validate_partition(part: PlanarPartition) -> list[PartitionViolation]:
    out: list[PartitionViolation] = []
    good = []
    for i, poly in enumerate(part.polygons):
        if len(poly) < 3:
            out.append(PartitionViolation("NonConvex", (i,), detail="fewer than 3 vertices"))
        elif len(set(poly)) != len(poly):
            out.append(PartitionViolation("NonConvex", (i,), detail="repeated vertex"))
        else:
            turns = [_cross(poly[j - 1], poly[j], poly[(j + 1) % len(poly)]) for j in range(len(poly))]
            if all(t < 0 for t in turns):
                out.append(PartitionViolation("NonConvex", (i,), detail="clockwise orientation"))
            elif not all(t > 0 for t in turns) or not _winding_once(poly):
                out.append(PartitionViolation("NonConvex", (i,), detail="not strictly convex"))
            else:
                good.append(i)
    polys = part.polygons
    for i, j in combinations(good, 2):
        if _interiors_overlap(polys[i], polys[j]):
            out.append(PartitionViolation("Overlap", (i, j)))
    for i in good:
        own = set(polys[i])
        seen = set()
        for poly in polys:
            for v in poly:
                if v in own or v in seen:
                    continue
                seen.add(v)
                if _contains(polys[i], v):
                    out.append(PartitionViolation("InternalVertex", (i,), vertex=v))
    return out


def _winding_once(poly) -> bool:
    # All left turns also admit star polygons; a convex one has edge
    # directions that wrap around exactly once.
    edges = _edges(poly)
    dirs = [(b[0] - a[0], b[1] - a[1]) for a, b in edges]
    ups = 0
    for u, w in zip(dirs, dirs[1:] + dirs[:1]):
        if _half(u) != _half(w) and _half(w) == 0:
            ups += 1
    return ups == 1


def _half(d) -> int:
    # 0 for directions with angle in [0, pi), 1 for [pi, 2pi)
    return 0 if d[1] > 0 or (d[1] == 0 and d[0] > 0) else 1


def partition_to_cdc(part: PlanarPartition) -> CDC:
    violations = validate_partition(part)
    if violations:
        raise PartitionError(violations)
    order: dict[RPoint, int] = {}
    for poly in part.polygons:
        for v in poly:
            order.setdefault(v, len(order))
    labels = [f"{format_coord(x)},{format_coord(y)}" for x, y in order]
    sets = [[labels[order[v]] for v in poly] for poly in part.polygons]
    return new_cdc(labels, sets)


def partition_rank(part: PlanarPartition) -> int:
    """Rank of the lowered CDC's conflict hypergraph; 0 when nothing is infeasible."""
    cdc = partition_to_cdc(part)
    hyper = minimal_infeasible_sets(cdc, 4)
    if hyper.truncated_at is not None or hyper.rank > 3:
        raise TheoremViolationError("valid partition with a minimal infeasible set of size above 3")
    return hyper.rank
