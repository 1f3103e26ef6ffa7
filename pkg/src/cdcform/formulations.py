"""MIP formulations of a CDC, data embedding, and desk-scale correctness checks.

Variable names: ``lam_<label>`` for the simplex multipliers, ``z_<j>`` for
level or set binaries (``z_<j>_<i>`` for multiway alternatives),
``gam_<set>_<label>`` for disaggregated multipliers, ``x_<i>`` and
``y_out[_<i>]`` for embedded data. Set and level numbers are 1-based.
"""
from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .cdc import CDC, conflict_graph, minimal_infeasible_sets
from .covers import ceil_log2, validate_cover
from .errors import (
    BadParameterError,
    DuplicateCodeError,
    InvalidCoverError,
    MissingValueError,
    NotIBModelError,
    SizeLimitError,
    TheoremViolationError,
    WidthMismatchError,
)
from .exact import System, enumerate_vertices, mixed_feasible, propagate
from .model import BINARY, Constraint, MipModel, ModelBuilder, Variable, extend, safe_name
from .schemes import BicliqueCover, IBScheme

PROJECTION_NODE_LIMIT = 10
IDEALNESS_VARIABLE_LIMIT = 14


def _lambda(mb: ModelBuilder, labels: Sequence[str]) -> list[str]:
    lam = [mb.var(f"lam_{safe_name(lab)}", "lam", upper=1) for lab in labels]
    return lam


def _simplex(mb: ModelBuilder, lam: Sequence[str]) -> None:
    mb.row("simplex", [(v, 1) for v in lam], "=", 1)


def jeroslow(cdc: CDC) -> MipModel:
    mb = ModelBuilder("jeroslow")
    lam = _lambda(mb, cdc.labels)
    z = [mb.var(f"z_{i}", "z", BINARY) for i in range(1, len(cdc.sets) + 1)]
    gam = _gammas(mb, cdc)
    _link(mb, cdc, lam, gam)
    for i, s in enumerate(cdc.sets):
        mb.row(f"zlink_{i + 1}", [(z[i], 1)] + [(gam[i, v], -1) for v in sorted(s)], "=", 0)
    mb.row("zsum", [(v, 1) for v in z], "=", 1)
    _simplex(mb, lam)
    return mb.build(kind="jeroslow")


def _gammas(mb: ModelBuilder, cdc: CDC) -> dict[tuple[int, int], str]:
    return {
        (i, v): mb.var(f"gam_{i + 1}_{safe_name(cdc.labels[v])}", "gam")
        for i, s in enumerate(cdc.sets)
        for v in sorted(s)
    }


def _link(mb: ModelBuilder, cdc: CDC, lam, gam) -> None:
    for v in range(cdc.n):
        terms = [(lam[v], 1)] + [(gam[i, v], -1) for i, s in enumerate(cdc.sets) if v in s]
        mb.row(f"link_{safe_name(cdc.labels[v])}", terms, "=", 0)


def counting_codes(d: int) -> list[tuple[int, ...]]:
    """Binary counting order, most significant bit first, width ceil(log2 d)."""
    width = ceil_log2(d)
    return [tuple((i >> (width - 1 - j)) & 1 for j in range(width)) for i in range(d)]


def encoded_extended(cdc: CDC, codes: Sequence[Sequence[int]] | None = None) -> MipModel:
    """Disaggregated multipliers with one binary per code bit."""
    d = len(cdc.sets)
    codes = counting_codes(d) if codes is None else [tuple(int(b) for b in c) for c in codes]
    if len(codes) != d:
        raise BadParameterError(f"{len(codes)} codes for {d} sets")
    widths = {len(c) for c in codes}
    if len(widths) > 1:
        raise WidthMismatchError(f"codes have mixed widths {sorted(widths)}")
    if len(set(codes)) != d:
        raise DuplicateCodeError("codes must be distinct")
    if any(b not in (0, 1) for c in codes for b in c):
        raise BadParameterError("codes must be 0/1 vectors")
    width = widths.pop() if widths else 0
    mb = ModelBuilder("encoded")
    lam = _lambda(mb, cdc.labels)
    z = [mb.var(f"z_{j}", "z", BINARY) for j in range(1, width + 1)]
    gam = _gammas(mb, cdc)
    _link(mb, cdc, lam, gam)
    mb.row("gsum", [(g, 1) for g in gam.values()], "=", 1)
    for j in range(width):
        terms = [(gam[i, v], 1) for (i, v) in gam if codes[i][j]]
        mb.row(f"code_{j + 1}", terms + [(z[j], -1)], "=", 0)
    _simplex(mb, lam)
    return mb.build(kind="encoded")


def adhoc_disaggregated(cdc: CDC) -> MipModel:
    mb = ModelBuilder("adhoc")
    lam = _lambda(mb, cdc.labels)
    z = [mb.var(f"z_{i}", "z", BINARY) for i in range(1, len(cdc.sets) + 1)]
    for v in range(cdc.n):
        terms = [(lam[v], 1)] + [(z[i], -1) for i, s in enumerate(cdc.sets) if v in s]
        mb.row(f"cover_{safe_name(cdc.labels[v])}", terms, "<=", 0)
    mb.row("zsum", [(v, 1) for v in z], "=", 1)
    _simplex(mb, lam)
    return mb.build(kind="adhoc")


def _default_labels(n: int, labels: Sequence[str] | None) -> Sequence[str]:
    if labels is None:
        return [str(v) for v in range(1, n + 1)]
    if len(labels) != n:
        raise BadParameterError(f"{len(labels)} labels for {n} nodes")
    return labels


def multiway_ib(scheme: IBScheme, labels: Sequence[str] | None = None) -> MipModel:
    labels = _default_labels(scheme.node_count, labels)
    mb = ModelBuilder("multiway_ib")
    lam = _lambda(mb, labels)
    ground = range(scheme.node_count)
    for j, level in enumerate(scheme.levels, start=1):
        zs = [mb.var(f"z_{j}_{i}", "z", BINARY) for i in range(1, scheme.k + 1)]
        for i, alt in enumerate(level):
            outside = [(lam[v], 1) for v in ground if v not in alt]
            mb.row(f"alt_{j}_{i + 1}", outside + [(zs[i], 1)], "<=", 1)
        mb.row(f"pick_{j}", [(v, 1) for v in zs], "=", 1)
    _simplex(mb, lam)
    return mb.build(kind="multiway_ib")


def pairwise_ideal(
    cover: BicliqueCover, cdc: CDC | None = None, labels: Sequence[str] | None = None
) -> MipModel:
    """One binary per nontrivial level; level order is kept as given.

    With ``cdc`` the cover is revalidated against its conflict graph and the
    CDC's labels name the multipliers.
    """
    if cdc is not None:
        if cover.node_count != cdc.n:
            raise InvalidCoverError([f"cover has {cover.node_count} nodes, CDC has {cdc.n}"])
        bad = validate_cover(conflict_graph(cdc), cover)
        if bad:
            raise InvalidCoverError(bad)
        labels = cdc.labels
    labels = _default_labels(cover.node_count, labels)
    cover = cover.nontrivial()
    mb = ModelBuilder("pairwise_ib")
    lam = _lambda(mb, labels)
    for j, (a, b) in enumerate(cover.levels, start=1):
        z = mb.var(f"z_{j}", "z", BINARY)
        mb.row(f"a_{j}", [(lam[v], 1) for v in sorted(a)] + [(z, -1)], "<=", 0)
        mb.row(f"b_{j}", [(lam[v], 1) for v in sorted(b)] + [(z, 1)], "<=", 1)
    _simplex(mb, lam)
    return mb.build(kind="pairwise_ib", cover=cover)


def embed_data(
    model: MipModel,
    values: Mapping[str, Sequence | Fraction | int],
    extra_values: Mapping[str, Sequence | Fraction | int] | None = None,
) -> MipModel:
    """Append free outputs ``x = sum_v lam_v * values[v]`` (and ``y_out`` likewise).

    Keys are ground-set labels; scalars are treated as length-1 vectors.
    """
    lam = model.lam
    if not lam:
        raise BadParameterError("model has no simplex multipliers to embed data on")
    x = _outputs(lam, values, "x")
    variables, constraints = x
    if extra_values is not None:
        yv, yc = _outputs(lam, extra_values, "y_out")
        variables += yv
        constraints += yc
    return extend(model, variables, constraints, "data")


def _outputs(lam: Sequence[str], values, prefix: str):
    if not isinstance(values, Mapping):
        raise BadParameterError("data values must map ground-set labels to numbers or vectors")
    by_name = {f"lam_{safe_name(str(k))}": _as_vector(val) for k, val in values.items()}
    missing = [v for v in lam if v not in by_name]
    if missing:
        raise MissingValueError(f"no value for {', '.join(m[4:] for m in missing)}")
    dims = {len(by_name[v]) for v in lam}
    if len(dims) != 1:
        raise MissingValueError(f"values have inconsistent dimensions {sorted(dims)}")
    dim = dims.pop()
    if prefix == "x":
        names = [f"x_{i}" for i in range(1, dim + 1)]
    else:
        names = [prefix] if dim == 1 else [f"{prefix}_{i}" for i in range(1, dim + 1)]
    variables = [Variable(n, lower=None, upper=None) for n in names]
    constraints = []
    for i, n in enumerate(names):
        terms = [(n, Fraction(1))] + [(v, -by_name[v][i]) for v in lam if by_name[v][i] != 0]
        constraints.append(Constraint(f"def_{n}", tuple(terms), "=", Fraction(0)))
    return variables, constraints


def _as_vector(val) -> list[Fraction]:
    if isinstance(val, (int, Fraction, str, float)):
        val = [val]
    return [Fraction(str(c)) if isinstance(c, float) else Fraction(c) for c in val]


# -- checks -------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectionReport:
    ok: bool
    checked: int
    counterexample: frozenset[int] | None = None
    extends: bool | None = None

    def __str__(self):
        if self.ok:
            return f"projection: ok ({self.checked} supports)"
        kind = "infeasible support extends" if self.extends else "feasible support does not extend"
        return f"projection: FAIL, {kind}: {sorted(v + 1 for v in self.counterexample)}"


def projection_check(model: MipModel, cdc: CDC, max_support: int | None = None) -> ProjectionReport:
    """Compare, for every small support, extendability of its barycenter with feasibility.

    Supports go up to ``max(3, rank + 1)`` elements unless ``max_support`` is set.
    """
    if cdc.n > PROJECTION_NODE_LIMIT:
        raise SizeLimitError(f"|J| = {cdc.n} exceeds the projection-check bound {PROJECTION_NODE_LIMIT}")
    lam = model.lam
    if len(lam) != cdc.n:
        raise BadParameterError(f"model has {len(lam)} multipliers, CDC has {cdc.n} elements")
    if max_support is None:
        rank = minimal_infeasible_sets(cdc, max(cdc.n, 2)).rank
        max_support = max(3, rank + 1)
    system = System(model)
    checked = 0
    for size in range(1, min(max_support, cdc.n) + 1):
        share = Fraction(1, size)
        for support in combinations(range(cdc.n), size):
            inside = set(support)
            fixed = {lam[v]: (share if v in inside else Fraction(0)) for v in range(cdc.n)}
            extends = mixed_feasible(system, fixed) is not None
            feasible = cdc.is_feasible_mask(sum(1 << v for v in support))
            checked += 1
            if extends != feasible:
                return ProjectionReport(False, checked, frozenset(support), extends)
    return ProjectionReport(True, checked)


@dataclass(frozen=True)
class IdealnessReport:
    ideal: bool
    vertices: int
    witness: dict[str, Fraction] | None = None

    def __str__(self):
        if self.ideal:
            return f"ideal: yes ({self.vertices} vertices)"
        frac = {k: str(v) for k, v in self.witness.items() if v != 0}
        return f"ideal: no, fractional vertex {frac}"


def idealness_check(model: MipModel, max_variables: int = IDEALNESS_VARIABLE_LIMIT) -> IdealnessReport:
    """Enumerate relaxation vertices exactly and look for a fractional binary coordinate."""
    if len(model.variables) > max_variables:
        raise SizeLimitError(f"{len(model.variables)} variables exceed the idealness bound {max_variables}")
    names = [v.name for v in model.variables]
    binary = [i for i, v in enumerate(model.variables) if v.kind == BINARY]
    vertices = enumerate_vertices(model)
    for point in vertices:
        if any(point[i].denominator != 1 for i in binary):
            return IdealnessReport(False, len(vertices), dict(zip(names, point)))
    return IdealnessReport(True, len(vertices))


@dataclass(frozen=True)
class BranchLevel:
    level: int
    variable: str
    down: frozenset[int]
    up: frozenset[int]


@dataclass(frozen=True)
class BranchingReport:
    levels: tuple[BranchLevel, ...]
    node_count: int

    @property
    def covers_ground(self) -> bool:
        """Every multiplier is fixed to zero by some single branching decision."""
        hit = set()
        for lv in self.levels:
            hit |= lv.down | lv.up
        return hit == set(range(self.node_count))

    def table(self, labels: Sequence[str] | None = None) -> str:
        def fmt(s):
            return "{" + ",".join(labels[v] if labels else str(v + 1) for v in sorted(s)) + "}"

        rows = ["level\tvariable\tdown\tup"]
        rows += [f"{lv.level}\t{lv.variable}\t{fmt(lv.down)}\t{fmt(lv.up)}" for lv in self.levels]
        return "\n".join(rows) + "\n"


def forced_zero(model: MipModel, fixings: Mapping[str, int]) -> frozenset[int] | None:
    """Multipliers that bound propagation pins to zero under ``fixings``; None if infeasible."""
    bounds = propagate(model, {k: Fraction(v) for k, v in fixings.items()})
    if bounds is None:
        return None
    _, hi = bounds
    pos = {v.name: i for i, v in enumerate(model.variables)}
    return frozenset(k for k, name in enumerate(model.lam) if hi[pos[name]] == 0)


def branching_report(model: MipModel) -> BranchingReport:
    """Multipliers fixed to zero by branching down or up on each level binary alone."""
    if model.kind != "pairwise_ib" or model.cover is None or not model.cover.levels:
        raise NotIBModelError("branching report needs a pairwise independent-branching model with levels")
    levels = []
    for j, (a, b) in enumerate(model.cover.levels, start=1):
        z = f"z_{j}"
        down = forced_zero(model, {z: 0})
        up = forced_zero(model, {z: 1})
        if down != a or up != b:
            raise TheoremViolationError(f"level {j}: branching fixes {down} / {up}, expected {set(a)} / {set(b)}")
        levels.append(BranchLevel(j, z, down, up))
    return BranchingReport(tuple(levels), len(model.lam))
