"""Combinatorial disjunctive constraints (CDCs) and their conflict structure.

A CDC is a ground set of labeled elements together with a family of feasible
sets; a support ``T`` is feasible when it is contained in some member of the
family. Elements are addressed by dense indices ``0..n-1`` and sets are kept
both as frozensets and as integer bitmasks.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Literal

from .errors import (
    CapTooSmallError,
    CoverageGapError,
    DuplicateLabelError,
    EmptySetError,
    IndexOutOfRangeError,
    RankExceedsCapError,
    RedundantSetError,
    SizeLimitError,
    UnknownLabelError,
)
from .schemes import IBScheme, scheme_counterexample

MAX_MIS_NODES = 40
SCHEME_CHECK_NODES = 12


def to_mask(indices: Iterable[int]) -> int:
    m = 0
    for v in indices:
        m |= 1 << v
    return m


def from_mask(mask: int) -> frozenset[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


@dataclass(frozen=True)
class GroundElement:
    label: str
    index: int


@dataclass(frozen=True)
class CDC:
    """Validated CDC; build instances with :func:`new_cdc`."""

    labels: tuple[str, ...]
    sets: tuple[frozenset[int], ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def ground(self) -> tuple[GroundElement, ...]:
        return tuple(GroundElement(lab, i) for i, lab in enumerate(self.labels))

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(to_mask(s) for s in self.sets)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabelError(label) from None

    def indices(self, labels: Iterable[str]) -> frozenset[int]:
        return frozenset(self.index_of(lab) for lab in labels)

    def label_set(self, s: Iterable[int]) -> list[str]:
        return [self.labels[v] for v in sorted(s)]

    def is_feasible_mask(self, t: int) -> bool:
        return any(t & ~m == 0 for m in self.masks)


def new_cdc(
    labels: Sequence[str],
    sets: Iterable[Iterable[str]],
    mode: Literal["strict", "normalize"] = "strict",
) -> CDC:
    """Build a CDC from labels and label-sets.

    ``strict`` rejects any set contained in another; ``normalize`` drops
    dominated sets (and duplicates) instead. Both reject empty sets, an empty
    family and uncovered labels.
    """
    labels = tuple(str(lab) for lab in labels)
    index: dict[str, int] = {}
    for i, lab in enumerate(labels):
        if lab in index:
            raise DuplicateLabelError(f"duplicate label {lab!r}")
        index[lab] = i

    family: list[frozenset[int]] = []
    for s in sets:
        members = []
        for lab in s:
            lab = str(lab)
            if lab not in index:
                raise UnknownLabelError(lab)
            members.append(index[lab])
        if not members:
            raise EmptySetError("feasible sets must be nonempty")
        family.append(frozenset(members))
    if not family:
        raise EmptySetError("a CDC needs at least one feasible set")

    if mode == "strict":
        for a, b in combinations(range(len(family)), 2):
            if family[a] <= family[b]:
                raise RedundantSetError(_labels(labels, family[a]), _labels(labels, family[b]))
            if family[b] <= family[a]:
                raise RedundantSetError(_labels(labels, family[b]), _labels(labels, family[a]))
    elif mode == "normalize":
        kept: list[frozenset[int]] = []
        for i, s in enumerate(family):
            dominated = any(
                s < t or (s == t and j < i) for j, t in enumerate(family) if j != i
            )
            if not dominated:
                kept.append(s)
        family = kept
    else:
        raise ValueError(f"unknown mode {mode!r}")

    covered = frozenset().union(*family)
    missing = [labels[v] for v in range(len(labels)) if v not in covered]
    if missing:
        raise CoverageGapError(missing)
    return CDC(labels, tuple(family))


def _labels(labels, s):
    return [labels[v] for v in sorted(s)]


def is_feasible_set(cdc: CDC, support: Iterable[int]) -> bool:
    support = list(support)
    for v in support:
        if not 0 <= v < cdc.n:
            raise IndexOutOfRangeError(f"index {v} outside 0..{cdc.n - 1}")
    return cdc.is_feasible_mask(to_mask(support))


@dataclass(frozen=True)
class ConflictGraph:
    """Graph whose edges are the infeasible pairs of a CDC."""

    node_count: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise IndexOutOfRangeError(f"edge {(u, v)} outside 0..{self.node_count - 1}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        adj = [0] * self.node_count
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def neighbors(self, v: int) -> frozenset[int]:
        return from_mask(self.adjacency[v])

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v + 1)


def conflict_graph(cdc: CDC) -> ConflictGraph:
    feasible_pair = set()
    for s in cdc.sets:
        feasible_pair.update(combinations(sorted(s), 2))
    edges = [p for p in combinations(range(cdc.n), 2) if p not in feasible_pair]
    return ConflictGraph(cdc.n, tuple(edges), cdc.labels)


def to_dot(graph: ConflictGraph, name: str = "conflict") -> str:
    lines = [f"graph {name} {{"]
    for v in range(graph.node_count):
        lines.append(f'  n{v} [label="{graph.label(v)}"];')
    for u, v in graph.edges:
        lines.append(f"  n{u} -- n{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ConflictHypergraph:
    """Minimal infeasible sets up to a cardinality cap.

    ``truncated_at`` is the cap when some minimal infeasible set is larger than
    it, so ``rank`` is then only a lower bound.
    """

    node_count: int
    hyperedges: tuple[frozenset[int], ...]
    truncated_at: int | None = None

    @property
    def rank(self) -> int:
        return max((len(e) for e in self.hyperedges), default=0)


def minimal_infeasible_sets(cdc: CDC, max_card: int) -> ConflictHypergraph:
    """Enumerate minimal infeasible sets level by level.

    A candidate of size ``c`` is built from a feasible set of size ``c-1`` by
    adding a larger index, and is kept only if all its ``(c-1)``-subsets are
    feasible. Past the cap the search continues without recording, stopping at
    the first minimal infeasible set found (which sets ``truncated_at``) or
    when no feasible set can be extended, so the flag is exact.
    """
    if max_card < 2:
        raise CapTooSmallError(f"cap must be at least 2, got {max_card}")
    n = cdc.n
    feasible = {1 << v for v in range(n)}
    found: list[int] = []
    truncated = None
    size = 2
    while feasible:
        nxt = set()
        for f in feasible:
            for v in range(f.bit_length(), n):
                cand = f | 1 << v
                if not _all_facets_in(cand, feasible):
                    continue
                if cdc.is_feasible_mask(cand):
                    nxt.add(cand)
                elif size <= max_card:
                    found.append(cand)
                else:
                    truncated = max_card
                    break
            if truncated is not None:
                break
        if truncated is not None:
            break
        feasible = nxt
        size += 1
    edges = sorted((from_mask(m) for m in found), key=lambda e: (len(e), sorted(e)))
    return ConflictHypergraph(n, tuple(edges), truncated)


def _all_facets_in(mask: int, level: set[int]) -> bool:
    rest = mask
    while rest:
        bit = rest & -rest
        if mask ^ bit not in level:
            return False
        rest ^= bit
    return True


def k_way_representable(cdc: CDC, k: int) -> bool:
    """True iff the conflict hypergraph has rank at most ``k``."""
    if k < 2:
        raise CapTooSmallError(f"k must be at least 2, got {k}")
    return minimal_infeasible_sets(cdc, k).truncated_at is None


def maximal_independent_sets(graph: ConflictGraph, max_nodes: int = MAX_MIS_NODES) -> list[frozenset[int]]:
    """All maximal independent sets, via pivoting Bron-Kerbosch on the complement."""
    n = graph.node_count
    if n > max_nodes:
        raise SizeLimitError(f"{n} nodes exceeds the enumeration bound {max_nodes}")
    full = (1 << n) - 1
    comp = [full & ~graph.adjacency[v] & ~(1 << v) for v in range(n)]
    out: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(r)
            return
        px = p | x
        pivot = max(_bits(px), key=lambda u: (comp[u] & p).bit_count())
        for v in _bits(p & ~comp[pivot]):
            expand(r | 1 << v, p & comp[v], x & comp[v])
            p &= ~(1 << v)
            x |= 1 << v

    if n:
        expand(0, full, 0)
    return sorted((from_mask(m) for m in out), key=sorted)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        bit = mask & -mask
        out.append(bit.bit_length() - 1)
        mask ^= bit
    return out


def is_pairwise_representable(
    cdc: CDC, max_nodes: int = MAX_MIS_NODES
) -> tuple[bool, frozenset[int] | None]:
    """Compare the feasible family with the maximal independent sets of the conflict graph.

    On a mismatch the witness is a maximal independent set that is not a
    feasible set; one always exists because every feasible set lies inside
    some maximal independent set.
    """
    mis = maximal_independent_sets(conflict_graph(cdc), max_nodes)
    family = set(cdc.sets)
    for s in mis:
        if s not in family:
            return False, s
    return len(mis) == len(family), None


def cnf_ib_scheme(cdc: CDC, cap: int) -> IBScheme:
    """One level per minimal infeasible set ``E``; alternatives ``J - {e}`` for ``e`` in ``E``.

    Levels are padded with empty alternatives up to ``k = rank`` (at least 2).
    """
    hyper = minimal_infeasible_sets(cdc, cap)
    if hyper.truncated_at is not None:
        raise RankExceedsCapError(f"conflict hypergraph rank exceeds cap {cap}")
    k = max(hyper.rank, 2)
    ground = frozenset(range(cdc.n))
    levels = []
    for e in hyper.hyperedges:
        alts = [ground - {v} for v in sorted(e)]
        alts += [frozenset()] * (k - len(alts))
        levels.append(tuple(alts))
    scheme = IBScheme(cdc.n, k, levels)
    if cdc.n <= SCHEME_CHECK_NODES and scheme_counterexample(cdc, scheme) is not None:
        raise AssertionError("CNF scheme does not represent the CDC")
    return scheme
