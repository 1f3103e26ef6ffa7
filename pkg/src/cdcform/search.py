"""Exact minimum biclique covers, lower bounds, and the cover-existence MIP.

The decision search builds levels one at a time. The lowest-indexed uncovered
edge must be covered by some level, and since levels are interchangeable it
may be taken to be the next one; orienting that edge as ``u in A, v in B``
and restricting to maximal bicliques loses no solutions.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from itertools import combinations

from .cdc import CDC, ConflictGraph, conflict_graph, is_pairwise_representable
from .covers import ceil_log2, validate_cover
from .errors import BadParameterError, SizeLimitError
from .model import BINARY, MipModel, ModelBuilder
from .schemes import BicliqueCover

EXACT_NODE_LIMIT = 16


def log_lower_bound(cdc: CDC) -> int:
    return ceil_log2(len(cdc.sets))


def sosk_lower_bound(n: int, k: int) -> int:
    if not 1 <= k <= n:
        raise BadParameterError(f"need 1 <= k <= N, got N={n}, k={k}")
    return min(k, n - k)


@dataclass(frozen=True)
class SearchResult:
    depth: int
    cover: BicliqueCover | None
    explored: int

    @property
    def sat(self) -> bool:
        return self.cover is not None


class _Searcher:
    def __init__(self, graph: ConflictGraph):
        self.graph = graph
        self.adj = graph.adjacency
        self.edges = graph.edges
        self.edge_bit = {e: 1 << i for i, e in enumerate(self.edges)}
        self.explored = 0
        self.failed: dict[int, int] = {}
        self._bicliques: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
        self._compat: dict[tuple[int, int], bool] = {}

    def closure(self, side: int) -> int:
        """Common neighbourhood of the nodes in ``side``."""
        out = (1 << self.graph.node_count) - 1
        rest = side
        while rest:
            bit = rest & -rest
            out &= self.adj[bit.bit_length() - 1]
            rest ^= bit
        return out

    def covered_mask(self, a: int, b: int) -> int:
        m = 0
        for (u, v), bit in self.edge_bit.items():
            if (a >> u & 1 and b >> v & 1) or (b >> u & 1 and a >> v & 1):
                m |= bit
        return m

    def bicliques(self, u: int, v: int) -> list[tuple[int, int, int]]:
        """Maximal bicliques with u in A and v in B, as (A, B, covered-edge mask)."""
        key = (u, v)
        if key in self._bicliques:
            return self._bicliques[key]
        out = []
        items = [x for x in range(self.graph.node_count) if self.adj[v] >> x & 1]

        def grow(a: int, b: int, start: int) -> None:
            out.append((a, b, self.covered_mask(a, b)))
            for x in items:
                if x < start or a >> x & 1:
                    continue
                b2 = b & self.adj[x]
                a2 = self.closure(b2)
                low = (1 << x) - 1
                if a2 & low != a & low:
                    continue  # reached from a smaller prefix already
                grow(a2, b2, x + 1)

        b0 = self.adj[u]
        grow(self.closure(b0), b0, 0)
        self._bicliques[key] = out
        return out

    def compatible(self, i: int, j: int) -> bool:
        key = (i, j) if i < j else (j, i)
        if key not in self._compat:
            (a, b), (c, d) = self.edges[key[0]], self.edges[key[1]]
            self._compat[key] = self._joint(a, b, c, d) or self._joint(a, b, d, c)
        return self._compat[key]

    def _joint(self, a, b, c, d) -> bool:
        left, right = {a, c}, {b, d}
        if left & right:
            return False
        return all(self.adj[x] >> y & 1 for x in left for y in right)

    def lower_bound(self, uncovered: int) -> int:
        idx = [i for i in range(len(self.edges)) if uncovered >> i & 1]
        fooling: list[int] = []
        for i in idx:
            if all(not self.compatible(i, j) for j in fooling):
                fooling.append(i)
        return max(len(fooling), ceil_log2(self._clique(idx)))

    def _clique(self, idx: list[int]) -> int:
        n = self.graph.node_count
        adj = [0] * n
        for i in idx:
            u, v = self.edges[i]
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        best = 1 if idx else 0

        def extend(size: int, cand: int) -> None:
            nonlocal best
            best = max(best, size)
            while cand:
                if size + cand.bit_count() <= best:
                    return
                bit = cand & -cand
                cand ^= bit
                extend(size + 1, cand & adj[bit.bit_length() - 1])

        extend(0, (1 << n) - 1)
        return best

    def solve(self, uncovered: int, remaining: int):
        self.explored += 1
        if not uncovered:
            return []
        if remaining == 0 or self.failed.get(uncovered, -1) >= remaining:
            return None
        if self.lower_bound(uncovered) > remaining:
            self.failed[uncovered] = max(self.failed.get(uncovered, -1), remaining)
            return None
        first = (uncovered & -uncovered).bit_length() - 1
        u, v = self.edges[first]
        options = sorted(
            self.bicliques(u, v), key=lambda abm: (-(abm[2] & uncovered).bit_count(), abm[0], abm[1])
        )
        seen = set()
        for a, b, m in options:
            rest = uncovered & ~m
            if rest in seen:
                continue
            seen.add(rest)
            sub = self.solve(rest, remaining - 1)
            if sub is not None:
                return [(a, b)] + sub
        self.failed[uncovered] = max(self.failed.get(uncovered, -1), remaining)
        return None


def _bits_to_set(mask: int) -> set[int]:
    return {i for i in range(mask.bit_length()) if mask >> i & 1}


def min_cover_decide(graph: ConflictGraph, t: int, node_limit: int = EXACT_NODE_LIMIT) -> SearchResult:
    """Find a cover of depth at most ``t`` or prove none exists.

    An unsat result carries the number of explored search nodes.
    """
    if t < 0:
        raise BadParameterError(f"depth must be >= 0, got {t}")
    if graph.node_count > node_limit:
        raise SizeLimitError(f"{graph.node_count} nodes exceeds the exact-search bound {node_limit}")
    searcher = _Searcher(graph)
    levels = searcher.solve((1 << len(graph.edges)) - 1, t)
    if levels is None:
        return SearchResult(t, None, searcher.explored)
    cover = BicliqueCover(graph.node_count, [(_bits_to_set(a), _bits_to_set(b)) for a, b in levels]).canonical()
    if validate_cover(graph, cover):
        raise AssertionError("exact search produced an invalid cover")
    return SearchResult(t, cover, searcher.explored)


def min_cover(
    graph: ConflictGraph,
    lower_bound: int = 0,
    node_limit: int = EXACT_NODE_LIMIT,
    max_depth: int | None = None,
) -> tuple[int, BicliqueCover]:
    """Iterative deepening from ``lower_bound``; returns the optimal depth and a witness."""
    if graph.node_count > node_limit:
        raise SizeLimitError(f"{graph.node_count} nodes exceeds the exact-search bound {node_limit}")
    # stars give a cover of depth at most the number of non-isolated nodes
    ceiling = sum(1 for v in range(graph.node_count) if graph.adjacency[v])
    if max_depth is not None:
        ceiling = min(ceiling, max_depth)
    for t in range(max(lower_bound, 0), ceiling + 1):
        res = min_cover_decide(graph, t, node_limit)
        if res.sat:
            return t, res.cover
    raise SizeLimitError(f"no cover of depth <= {ceiling}")


def min_cover_cdc(cdc: CDC, node_limit: int = EXACT_NODE_LIMIT, max_depth: int | None = None):
    """Minimum cover of a CDC's conflict graph, starting at the log bound when it applies.

    The bound needs the cover to yield a formulation, i.e. pairwise
    representability; otherwise deepening starts at 0.
    """
    graph = conflict_graph(cdc)
    pairwise, _ = is_pairwise_representable(cdc)
    start = log_lower_bound(cdc) if pairwise else 0
    return min_cover(graph, start, node_limit, max_depth)


def _pairs(n: int):
    return list(combinations(range(n), 2))


def feasibility_mip(graph: ConflictGraph, t: int) -> MipModel:
    """Binary model whose solutions are depth-``t`` covers; nodes are named 1..n."""
    if t < 1:
        raise BadParameterError(f"depth must be >= 1, got {t}")
    n = graph.node_count
    mb = ModelBuilder(f"cover_depth_{t}")
    x = {(r, j): mb.var(f"x_{r + 1}_{j}", "x", BINARY) for r in range(n) for j in range(1, t + 1)}
    y = {(r, j): mb.var(f"y_{r + 1}_{j}", "y", BINARY) for r in range(n) for j in range(1, t + 1)}
    z = {
        (r, s, j): mb.var(f"z_{r + 1}_{s + 1}_{j}", "z", BINARY)
        for r, s in _pairs(n)
        for j in range(1, t + 1)
    }
    for r, s in _pairs(n):
        for j in range(1, t + 1):
            zz, tag = z[r, s, j], f"{r + 1}_{s + 1}_{j}"
            xr, xs, yr, ys = x[r, j], x[s, j], y[r, j], y[s, j]
            mb.row(f"a_{tag}", [(zz, 1), (xr, -1), (xs, -1)], "<=", 0)
            mb.row(f"b_{tag}", [(zz, 1), (xr, -1), (yr, -1)], "<=", 0)
            mb.row(f"c_{tag}", [(zz, 1), (xs, -1), (ys, -1)], "<=", 0)
            mb.row(f"d_{tag}", [(zz, 1), (yr, -1), (ys, -1)], "<=", 0)
            mb.row(f"e_{tag}", [(zz, 1), (xr, -1), (ys, -1)], ">=", -1)
            mb.row(f"f_{tag}", [(zz, 1), (xs, -1), (yr, -1)], ">=", -1)
    for r in range(n):
        for j in range(1, t + 1):
            mb.row(f"side_{r + 1}_{j}", [(x[r, j], 1), (y[r, j], 1)], "<=", 1)
    for r, s in _pairs(n):
        terms = [(z[r, s, j], 1) for j in range(1, t + 1)]
        if graph.has_edge(r, s):
            mb.row(f"cover_{r + 1}_{s + 1}", terms, ">=", 1)
        else:
            mb.row(f"skip_{r + 1}_{s + 1}", terms, "=", 0)
    return mb.build(kind="cover_feasibility")


def decode_cover(graph: ConflictGraph, t: int, assignment: Mapping[str, int]) -> BicliqueCover:
    """Read ``A^j = {r : x_r_j = 1}`` and ``B^j = {r : y_r_j = 1}`` from a solution."""
    n = graph.node_count
    levels = []
    for j in range(1, t + 1):
        a = {r for r in range(n) if assignment.get(f"x_{r + 1}_{j}", 0) == 1}
        b = {r for r in range(n) if assignment.get(f"y_{r + 1}_{j}", 0) == 1}
        levels.append((a, b))
    return BicliqueCover(n, levels)
