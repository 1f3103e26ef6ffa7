"""Constructors for the standard CDC families and for grid triangulations.

Chains use decimal labels ``"1".."N"``; lattice points use ``"x,y"`` (or
``"a,b,c"`` in higher dimension) in row-major order with the first
coordinate varying slowest.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .cdc import CDC, new_cdc
from .errors import BadParameterError, TriangulationError

Point = tuple[int, int]


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise BadParameterError(msg)


def chain_labels(n: int) -> list[str]:
    return [str(i) for i in range(1, n + 1)]


def point_label(p: Sequence[int]) -> str:
    return ",".join(str(c) for c in p)


def sos2(n: int) -> CDC:
    _check(n >= 2, f"SOS2 needs N >= 2, got {n}")
    return sosk(n, 2)


def sosk(n: int, k: int) -> CDC:
    _check(n >= 2, f"SOSk needs N >= 2, got {n}")
    _check(1 <= k <= n, f"SOSk needs 1 <= k <= N, got k={k}, N={n}")
    labels = chain_labels(n)
    sets = [labels[t : t + k] for t in range(n - k + 1)]
    return new_cdc(labels, sets)


def cardinality(n: int, ell: int) -> CDC:
    _check(n >= 1, f"cardinality needs n >= 1, got {n}")
    _check(1 <= ell <= n, f"cardinality needs 1 <= l <= n, got l={ell}, n={n}")
    labels = chain_labels(n)
    return new_cdc(labels, combinations(labels, ell))


def lattice(dims: Sequence[int]) -> list[tuple[int, ...]]:
    return list(product(*(range(1, d + 1) for d in dims)))


def multilinear_grid(dims: Sequence[int]) -> CDC:
    dims = list(dims)
    _check(len(dims) >= 1 and all(d >= 2 for d in dims), f"every dimension must be >= 2, got {dims}")
    labels = [point_label(p) for p in lattice(dims)]
    sets = []
    for corner in lattice([d - 1 for d in dims]):
        box = product(*((c, c + 1) for c in corner))
        sets.append([point_label(p) for p in box])
    return new_cdc(labels, sets)


@dataclass(frozen=True)
class GridTriangulation:
    """Triangles of the rectangle [1,M] x [1,N] with vertices on the integer grid."""

    M: int
    N: int
    triangles: tuple[tuple[Point, Point, Point], ...]

    def __post_init__(self):
        tris = tuple(tuple(sorted(tuple(int(c) for c in p) for p in tri)) for tri in self.triangles)
        object.__setattr__(self, "triangles", tris)

    def node(self, p: Point) -> int:
        """Ground-set index of grid point ``p`` (row-major, x slowest)."""
        return (p[0] - 1) * self.N + (p[1] - 1)

    def point(self, v: int) -> Point:
        return v // self.N + 1, v % self.N + 1


def _cell(x: int, y: int, main: bool) -> list[tuple[Point, Point, Point]]:
    """Split the unit cell at (x,y) along (x,y)-(x+1,y+1) if ``main``, else the other diagonal."""
    a, b, c, d = (x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)
    if main:
        return [(a, b, d), (a, c, d)]
    return [(a, b, c), (b, c, d)]


def _from_diagonals(m: int, n: int, main_diagonal) -> GridTriangulation:
    _check(m >= 2 and n >= 2, f"grid needs M,N >= 2, got {m}x{n}")
    tris = []
    for x in range(1, m):
        for y in range(1, n):
            tris.extend(_cell(x, y, main_diagonal(x, y)))
    return GridTriangulation(m, n, tuple(tris))


def union_jack(m: int, n: int) -> GridTriangulation:
    # Each cell uses the diagonal joining its two corners with even coordinate sum.
    _check(m % 2 == 1 and n % 2 == 1, f"Union Jack needs odd M and N, got {m}x{n}")
    return _from_diagonals(m, n, lambda x, y: (x + y) % 2 == 0)


def k1(m: int, n: int) -> GridTriangulation:
    return _from_diagonals(m, n, lambda x, y: True)


def random_triangulation(m: int, n: int, seed: int) -> GridTriangulation:
    """Per-cell diagonal drawn from numpy's PCG64 stream seeded with ``seed``."""
    _check(m >= 2 and n >= 2, f"grid needs M,N >= 2, got {m}x{n}")
    bits = np.random.Generator(np.random.PCG64(seed)).integers(0, 2, size=(m - 1) * (n - 1))
    choice = {(x, y): bool(bits[(x - 1) * (n - 1) + (y - 1)]) for x in range(1, m) for y in range(1, n)}
    return _from_diagonals(m, n, lambda x, y: choice[(x, y)])


@dataclass(frozen=True)
class TriangulationViolation:
    kind: str
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


def _twice_area(p: Point, q: Point, r: Point) -> int:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def validate_triangulation(tri: GridTriangulation) -> list[TriangulationViolation]:
    """Check the grid-triangulation conditions; an empty list means valid."""
    out: list[TriangulationViolation] = []
    if tri.M < 2 or tri.N < 2:
        out.append(TriangulationViolation("BadGrid", f"{tri.M}x{tri.N}"))
        return out
    by_cell: dict[Point, list[int]] = {}
    area = 0
    for i, t in enumerate(tri.triangles):
        if len(set(t)) != 3:
            out.append(TriangulationViolation("Degenerate", f"triangle {i} has repeated vertices {t}"))
            continue
        if any(not (1 <= x <= tri.M and 1 <= y <= tri.N) for x, y in t):
            out.append(TriangulationViolation("OutOfGrid", f"triangle {i} {t}"))
            continue
        if any(max(abs(p[0] - q[0]), abs(p[1] - q[1])) > 1 for p, q in combinations(t, 2)):
            out.append(TriangulationViolation("NotRegularGrid", f"triangle {i} {t}"))
            continue
        a2 = abs(_twice_area(*t))
        if a2 == 0:
            out.append(TriangulationViolation("Degenerate", f"triangle {i} {t} has zero area"))
            continue
        area += a2
        cell = (min(p[0] for p in t), min(p[1] for p in t))
        by_cell.setdefault(cell, []).append(i)
    for cell, members in sorted(by_cell.items()):
        for i, j in combinations(members, 2):
            shared = set(tri.triangles[i]) & set(tri.triangles[j])
            if len(shared) != 2 or not _is_diagonal(*shared):
                out.append(TriangulationViolation("PartitionOverlap", f"triangles {i} and {j} in cell {cell}"))
    expected = 2 * (tri.M - 1) * (tri.N - 1)
    if area != expected and not any(v.kind == "PartitionOverlap" for v in out):
        out.append(TriangulationViolation("AreaMismatch", f"doubled area {area}, expected {expected}"))
    return out


def _is_diagonal(p: Point, q: Point) -> bool:
    return abs(p[0] - q[0]) == 1 and abs(p[1] - q[1]) == 1


def triangulation_to_cdc(tri: GridTriangulation) -> CDC:
    violations = validate_triangulation(tri)
    if violations:
        raise TriangulationError(violations)
    labels = [point_label(tri.point(v)) for v in range(tri.M * tri.N)]
    sets = [[point_label(p) for p in t] for t in tri.triangles]
    return new_cdc(labels, sets)
