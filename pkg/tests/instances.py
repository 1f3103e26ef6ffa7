"""Generator instances shared by the test modules."""
from __future__ import annotations

from itertools import product

from cdcform.cdc import CDC, conflict_graph, is_pairwise_representable
from cdcform.covers import (
    multilinear_cover,
    sos2_gray_cover,
    sosk_cover,
    stars_cover,
    triangulation_cover,
)
from cdcform.generators import (
    _from_diagonals,
    cardinality,
    multilinear_grid,
    sos2,
    sosk,
    triangulation_to_cdc,
)
from cdcform.schemes import BicliqueCover


def all_triangulations(m: int, n: int):
    cells = [(x, y) for x in range(1, m) for y in range(1, n)]
    for bits in product((False, True), repeat=len(cells)):
        choice = dict(zip(cells, bits))
        yield _from_diagonals(m, n, lambda x, y, c=choice: c[(x, y)])


def generator_instances(max_nodes: int) -> list[tuple[str, CDC, BicliqueCover | None]]:
    """Every generator CDC on at most ``max_nodes`` elements, with a family cover when pairwise."""
    out: list[tuple[str, CDC, BicliqueCover | None]] = []
    for n in range(2, max_nodes + 1):
        out.append((f"sos2({n})", sos2(n), sos2_gray_cover(n)))
        for k in range(1, n + 1):
            if k != 2:
                out.append((f"sosk({n},{k})", sosk(n, k), sosk_cover(n, k)))
    for n in range(1, max_nodes + 1):
        for ell in range(1, n + 1):
            cdc = cardinality(n, ell)
            cover = stars_cover(conflict_graph(cdc)) if is_pairwise_representable(cdc)[0] else None
            out.append((f"cardinality({n},{ell})", cdc, cover))
    for dims in [(2, 2), (2, 3), (3, 2), (2, 4), (4, 2), (3, 3), (2, 2, 2), (2, 5), (5, 2), (3, 4), (2, 2, 3), (2, 3, 2), (3, 2, 2), (2, 6), (6, 2), (2, 2, 2, 2)]:
        size = 1
        for d in dims:
            size *= d
        if size <= max_nodes:
            out.append((f"multilinear{dims}", multilinear_grid(dims), multilinear_cover(dims)))
    for m in range(2, max_nodes + 1):
        for n in range(2, max_nodes // m + 1):
            for i, tri in enumerate(all_triangulations(m, n)):
                out.append((f"triangulation({m}x{n})#{i}", triangulation_to_cdc(tri), triangulation_cover(tri)))
    return out


def random_partition(seed: int):
    """Perturbed grid cells, each kept whole or split on a diagonal, with some pieces dropped.

    Interior points move by at most 1/5 per coordinate, which keeps every
    quadrilateral strictly convex and the pieces edge-to-edge.
    """
    from fractions import Fraction

    import numpy as np

    from cdcform.geometry import PlanarPartition

    rng = np.random.Generator(np.random.PCG64(seed))
    cols, rows = (int(v) for v in rng.integers(1, 5, size=2))
    pts = {}
    for x in range(cols + 1):
        for y in range(rows + 1):
            dx, dy = (Fraction(int(v), 10) for v in rng.integers(-2, 3, size=2))
            pts[x, y] = (x + dx, y + dy)
    pieces = []
    for x in range(cols):
        for y in range(rows):
            a, b, c, d = pts[x, y], pts[x + 1, y], pts[x + 1, y + 1], pts[x, y + 1]
            split = int(rng.integers(0, 3))
            if split == 0:
                pieces.append((a, b, c, d))
            elif split == 1:
                pieces += [(a, b, c), (a, c, d)]
            else:
                pieces += [(a, b, d), (b, c, d)]
    keep = [p for p in pieces if rng.random() >= 0.15] or pieces[:1]
    return PlanarPartition(tuple(keep))
