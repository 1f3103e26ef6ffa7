"""Biclique covers and independent-branching schemes, and the maps between them.

A cover level is a pair ``(A, B)`` of disjoint node sets; a scheme level is a
tuple of ``k`` alternatives ``L_1, ..., L_k``. A pairwise scheme and a cover are
complements of each other: ``L = J - A`` and ``R = J - B``.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

Level = tuple[frozenset[int], frozenset[int]]


def _freeze_level(level) -> Level:
    a, b = level
    return frozenset(a), frozenset(b)


@dataclass(frozen=True)
class BicliqueCover:
    """Levels of a biclique cover over nodes ``0..node_count-1``.

    Levels with an empty side are kept (they preserve formula-exact level
    numbering) but are flagged trivial and do not count toward ``depth``.
    """

    node_count: int
    levels: tuple[Level, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(_freeze_level(lv) for lv in self.levels))

    def is_trivial(self, j: int) -> bool:
        a, b = self.levels[j]
        return not a or not b

    @property
    def depth(self) -> int:
        return sum(1 for j in range(len(self.levels)) if not self.is_trivial(j))

    def nontrivial(self) -> BicliqueCover:
        keep = [lv for j, lv in enumerate(self.levels) if not self.is_trivial(j)]
        return BicliqueCover(self.node_count, keep)

    def canonical(self) -> BicliqueCover:
        """Orient each level so min(A) < min(B) and sort the levels."""
        out = []
        for a, b in self.levels:
            if a and b and min(b) < min(a):
                a, b = b, a
            out.append((a, b))
        out.sort(key=lambda lv: (sorted(lv[0]), sorted(lv[1])))
        return BicliqueCover(self.node_count, out)

    def pretty(self, labels: Sequence[str] | None = None) -> str:
        """Render as ``A^j = {...}, B^j = {...}`` lines, 1-based by default."""
        def name(v):
            return labels[v] if labels is not None else str(v + 1)

        def fmt(s):
            return "{" + ",".join(name(v) for v in sorted(s)) + "}"

        lines = []
        for j, (a, b) in enumerate(self.levels, start=1):
            tag = "  (trivial)" if not a or not b else ""
            lines.append(f"A^{j} = {fmt(a)}, B^{j} = {fmt(b)}{tag}")
        return "\n".join(lines)


@dataclass(frozen=True)
class IBScheme:
    """A ``k``-way independent branching scheme over nodes ``0..node_count-1``."""

    node_count: int
    k: int
    levels: tuple[tuple[frozenset[int], ...], ...] = ()

    def __post_init__(self):
        levels = tuple(tuple(frozenset(alt) for alt in lv) for lv in self.levels)
        for lv in levels:
            if len(lv) != self.k:
                raise ValueError(f"level has {len(lv)} alternatives, expected {self.k}")
        object.__setattr__(self, "levels", levels)

    def admits(self, support: Iterable[int]) -> bool:
        """True when every level has an alternative containing ``support``."""
        t = frozenset(support)
        return all(any(t <= alt for alt in lv) for lv in self.levels)


def cover_to_scheme(cover: BicliqueCover, node_count: int | None = None) -> IBScheme:
    n = cover.node_count if node_count is None else node_count
    ground = frozenset(range(n))
    return IBScheme(n, 2, [(ground - a, ground - b) for a, b in cover.levels])


def scheme_to_cover(scheme: IBScheme) -> BicliqueCover:
    if scheme.k != 2:
        raise ValueError(f"only pairwise schemes map to covers, got k={scheme.k}")
    ground = frozenset(range(scheme.node_count))
    return BicliqueCover(scheme.node_count, [(ground - left, ground - right) for left, right in scheme.levels])


def scheme_counterexample(cdc, scheme: IBScheme) -> frozenset[int] | None:
    """Return a support on which ``scheme`` and ``cdc`` disagree, or None.

    Enumerates every subset of the ground set, so callers keep it small.
    """
    n = cdc.n
    if scheme.node_count != n:
        raise ValueError("scheme and CDC have different ground sets")
    level_masks = [[_mask(alt) for alt in lv] for lv in scheme.levels]
    for t in range(1 << n):
        by_scheme = all(any(t & ~m == 0 for m in lv) for lv in level_masks)
        if by_scheme != cdc.is_feasible_mask(t):
            return frozenset(v for v in range(n) if t >> v & 1)
    return None


def _mask(s: Iterable[int]) -> int:
    m = 0
    for v in s:
        m |= 1 << v
    return m
