"""Exact rational feasibility and vertex enumeration for small models.

Nothing here rounds: the simplex pivots on ``Fraction``s, and the float
determinant pass in vertex enumeration only screens candidate bases, each of
which is re-solved and re-checked exactly.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, lcm

import numpy as np

from .errors import SizeLimitError
from .model import BINARY, MipModel

Bound = Fraction | None


@dataclass(frozen=True)
class Row:
    index: tuple[int, ...]
    coef: tuple[Fraction, ...]
    sense: str
    rhs: Fraction


class System:
    """Index-based view of a model for repeated feasibility queries.

    Propagation runs on integers: each row is scaled to integer coefficients
    and every value ``v`` is stored as ``v * scale``.
    """

    def __init__(self, model: MipModel):
        self.names = [v.name for v in model.variables]
        self.pos = {n: i for i, n in enumerate(self.names)}
        self.binary = [v.kind == BINARY for v in model.variables]
        self.lower: list[Bound] = [v.lower for v in model.variables]
        self.upper: list[Bound] = [v.upper for v in model.variables]
        self.rows = [
            Row(tuple(self.pos[n] for n, _ in c.terms), tuple(c for _, c in c.terms), c.sense, c.rhs)
            for c in model.constraints
        ]
        self.int_rows = []
        dens = [b.denominator for b in self.lower + self.upper if b is not None]
        # propagation sees the model rows plus implied ones; the LP sees only the model
        for row in self.rows + _implied_rows(self.rows):
            f = lcm(1, *(a.denominator for a in row.coef))
            rhs = row.rhs * f
            self.int_rows.append((row.index, tuple(int(a * f) for a in row.coef), row.sense, rhs))
            dens.append(rhs.denominator)
        self.base_scale = lcm(1, *dens)
        self.rows_of: list[list[int]] = [[] for _ in self.names]
        for r, row in enumerate(self.int_rows):
            for i in row[0]:
                self.rows_of[i].append(r)

    @property
    def size(self) -> int:
        return len(self.names)


def _implied_rows(rows: list[Row]) -> list[Row]:
    """Differences of equality rows that are shorter than the longer row.

    Single-row propagation cannot combine rows; these differences expose
    fixings such as ``sum(all) = 1, sum(part) = 1 => rest = 0``.
    """
    eqs = [r for r in rows if r.sense == "="]
    out = []
    for r1, r2 in combinations(eqs, 2):
        if len(r1.index) > len(r2.index):
            r1, r2 = r2, r1
        diff = dict(zip(r2.index, r2.coef))
        for i, a in zip(r1.index, r1.coef):
            diff[i] = diff.get(i, Fraction(0)) - a
        terms = [(i, a) for i, a in diff.items() if a != 0]
        if terms and len(terms) < len(r2.index):
            out.append(Row(tuple(i for i, _ in terms), tuple(a for _, a in terms), "=", r2.rhs - r1.rhs))
    return out


class _Infeasible(Exception):
    pass


class _State:
    """Scaled integer bounds plus the row right-hand sides at that scale."""

    def __init__(self, sys: System, fixed: Mapping[int, Fraction]):
        self.scale = d = lcm(sys.base_scale, *(Fraction(v).denominator for v in fixed.values()))
        self.rhs = [int(rhs * d) for _, _, _, rhs in sys.int_rows]
        self.lo = [None if b is None else int(b * d) for b in sys.lower]
        self.hi = [None if b is None else int(b * d) for b in sys.upper]
        for i, v in fixed.items():
            self.lo[i] = self.hi[i] = int(Fraction(v) * d)

    def copy(self) -> _State:
        out = object.__new__(_State)
        out.scale, out.rhs, out.lo, out.hi = self.scale, self.rhs, list(self.lo), list(self.hi)
        return out

    def bounds(self) -> tuple[list[Bound], list[Bound]]:
        d = self.scale
        return (
            [None if b is None else Fraction(b, d) for b in self.lo],
            [None if b is None else Fraction(b, d) for b in self.hi],
        )


def _tighten(sys: System, st: _State, changed, max_rounds: int = 60) -> None:
    """Bound propagation to a fixpoint (or ``max_rounds``); raises on contradiction."""
    queue = set()
    for i in changed:
        queue.update(sys.rows_of[i])
    rounds = 0
    while queue and rounds < max_rounds:
        rounds += 1
        rows, queue = queue, set()
        for r in rows:
            for i in _tighten_row(sys, st, r):
                queue.update(sys.rows_of[i])


def _tighten_row(sys: System, st: _State, r: int) -> list[int]:
    index, coefs, sense, _ = sys.int_rows[r]
    lo, hi, d, binary = st.lo, st.hi, st.scale, sys.binary
    moved = []
    for sign in (1,) if sense == "<=" else (-1,) if sense == ">=" else (1, -1):
        # sign * (a . x) <= sign * rhs; gap is what the minimum activity leaves
        gap = sign * st.rhs[r]
        inf_at, inf_count = -1, 0
        for i, a in zip(index, coefs):
            b = lo[i] if a * sign > 0 else hi[i]
            if b is None:
                inf_count += 1
                inf_at = i
                if inf_count > 1:
                    break
            else:
                gap -= a * sign * b
        if inf_count > 1:
            continue
        if inf_count == 0 and gap < 0:
            raise _Infeasible
        for i, a in zip(index, coefs):
            if inf_count and i != inf_at:
                continue
            a *= sign
            if a > 0:
                base = lo[i]
                if base is not None and hi[i] is not None and a * (hi[i] - base) <= gap:
                    continue
                num = gap + (a * base if base is not None else 0)
                # continuous bounds round outward; binaries snap to {0, scale}
                bound = num // a // d * d if binary[i] else -(-num // a)
                if hi[i] is None or bound < hi[i]:
                    hi[i] = bound
                    moved.append(i)
            else:
                base = hi[i]
                if base is not None and lo[i] is not None and -a * (base - lo[i]) <= gap:
                    continue
                num = gap + (a * base if base is not None else 0)
                bound = -(-(num // a) // d) * d if binary[i] else num // a
                if lo[i] is None or bound > lo[i]:
                    lo[i] = bound
                    moved.append(i)
            if lo[i] is not None and hi[i] is not None and lo[i] > hi[i]:
                raise _Infeasible
    return moved


def propagate(model: MipModel | System, fixed: Mapping[str, Fraction]) -> tuple[list[Bound], list[Bound]] | None:
    """Bounds implied by ``fixed`` through single-row reasoning; None on contradiction."""
    sys = model if isinstance(model, System) else System(model)
    st = _State(sys, {sys.pos[n]: v for n, v in fixed.items()})
    try:
        _tighten(sys, st, [sys.pos[n] for n in fixed])
    except _Infeasible:
        return None
    return st.bounds()


def lp_feasible(sys: System, lo: list, hi: list) -> dict[int, Fraction] | None:
    """Phase-one simplex over ``lo <= x <= hi`` and the rows; returns a point or None.

    Variables with ``lo == hi`` are substituted out first.
    """
    fixed = {i: lo[i] for i in range(sys.size) if lo[i] is not None and lo[i] == hi[i]}
    free = [i for i in range(sys.size) if i not in fixed]
    # x_i = shift + sign * y  (y >= 0), with free variables split in two columns
    cols: list[tuple[int, int]] = []
    shift: dict[int, Fraction] = {}
    extra_rows = []
    for i in free:
        if lo[i] is not None:
            shift[i] = lo[i]
            cols.append((i, 1))
            if hi[i] is not None:
                extra_rows.append((len(cols) - 1, hi[i] - lo[i]))
        elif hi[i] is not None:
            shift[i] = hi[i]
            cols.append((i, -1))
        else:
            shift[i] = Fraction(0)
            cols.append((i, 1))
            cols.append((i, -1))
    col_of: dict[int, list[tuple[int, int]]] = {}
    for c, (i, s) in enumerate(cols):
        col_of.setdefault(i, []).append((c, s))

    eqs: list[tuple[list[Fraction], Fraction]] = []
    width = len(cols)
    slack_needed = []
    for row in sys.rows:
        vec = [Fraction(0)] * width
        rhs = row.rhs
        for i, a in zip(row.index, row.coef):
            if i in fixed:
                rhs -= a * fixed[i]
                continue
            rhs -= a * shift[i]
            for c, s in col_of[i]:
                vec[c] += a * s
        if not any(vec):
            ok = (rhs >= 0) if row.sense == "<=" else (rhs <= 0) if row.sense == ">=" else rhs == 0
            if not ok:
                return None
            continue
        eqs.append((vec, rhs))
        slack_needed.append(row.sense)
    for c, cap in extra_rows:
        vec = [Fraction(0)] * width
        vec[c] = Fraction(1)
        eqs.append((vec, cap))
        slack_needed.append("<=")

    y = _phase_one(eqs, slack_needed, width)
    if y is None:
        return None
    point = dict(fixed)
    for i in free:
        point[i] = shift[i] + sum(s * y[c] for c, s in col_of[i])
    return point


def _phase_one(eqs, senses, width) -> list[Fraction] | None:
    """Minimize the artificial sum of ``A y (sense) b, y >= 0`` with Bland's rule."""
    m = len(eqs)
    if m == 0:
        return [Fraction(0)] * width
    n_slack = sum(1 for s in senses if s != "=")
    total = width + n_slack + m
    tab: list[list[Fraction]] = []
    basis = []
    k = width
    for r, ((vec, rhs), sense) in enumerate(zip(eqs, senses)):
        row = vec + [Fraction(0)] * (n_slack + m) + [rhs]
        if sense != "=":
            row[k] = Fraction(1) if sense == "<=" else Fraction(-1)
            k += 1
        if row[-1] < 0:
            row = [-x for x in row]
        row[width + n_slack + r] = Fraction(1)
        tab.append(row)
        basis.append(width + n_slack + r)
    art_start = width + n_slack
    # reduced costs of the artificial objective
    obj = [Fraction(0)] * (total + 1)
    for row in tab:
        for c in range(art_start):
            obj[c] -= row[c]
        obj[-1] -= row[-1]
    while True:
        enter = next((c for c in range(art_start) if obj[c] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for r in range(m):
            a = tab[r][enter]
            if a > 0:
                ratio = tab[r][-1] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    leave, best = r, ratio
        if leave is None:
            break  # unbounded direction cannot occur in phase one; defensive
        _pivot(tab, obj, leave, enter)
        basis[leave] = enter
    if obj[-1] != 0:
        return None
    y = [Fraction(0)] * width
    for r, b in enumerate(basis):
        if b < width:
            y[b] = tab[r][-1]
    return y


def _pivot(tab, obj, r, c) -> None:
    pr = tab[r]
    p = pr[c]
    if p != 1:
        tab[r] = pr = [x / p for x in pr]
    nz = [j for j, x in enumerate(pr) if x != 0]
    for i, row in enumerate(tab):
        if i != r and row[c] != 0:
            f = row[c]
            for j in nz:
                row[j] -= f * pr[j]
    if obj[c] != 0:
        f = obj[c]
        for j in nz:
            obj[j] -= f * pr[j]


def mixed_feasible(
    model: MipModel | System, fixed: Mapping[str, Fraction] | None = None
) -> dict[str, Fraction] | None:
    """Decide whether the model has a point with binary variables in {0,1}.

    Depth-first over binaries; propagation and the exact LP only discard
    subtrees with no feasible completion, so the search is equivalent to
    enumerating every binary assignment.
    """
    sys = model if isinstance(model, System) else System(model)
    st = _State(sys, {sys.pos[n]: v for n, v in (fixed or {}).items()})
    try:
        _tighten(sys, st, range(sys.size))
    except _Infeasible:
        return None
    point = _dfs(sys, st)
    if point is None:
        return None
    return {sys.names[i]: v for i, v in sorted(point.items())}


def _dfs(sys: System, st: _State):
    open_bin = next((i for i in range(sys.size) if sys.binary[i] and st.lo[i] != st.hi[i]), None)
    if open_bin is None:
        return lp_feasible(sys, *st.bounds())
    for val in (st.scale, 0):
        child = st.copy()
        child.lo[open_bin] = child.hi[open_bin] = val
        try:
            _tighten(sys, child, [open_bin])
        except _Infeasible:
            continue
        found = _dfs(sys, child)
        if found is not None:
            return found
    return None


# -- vertex enumeration -------------------------------------------------------


def _integer_row(coefs: list[Fraction], rhs: Fraction) -> tuple[list[int], int]:
    scale = lcm(*(c.denominator for c in coefs), rhs.denominator)
    return [int(c * scale) for c in coefs], int(rhs * scale)


def _constraint_matrix(model: MipModel):
    """Equalities and inequalities (as ``a.x <= b``) over all variables, bounds included."""
    names = [v.name for v in model.variables]
    pos = {n: i for i, n in enumerate(names)}
    n = len(names)
    eq, ineq = [], []
    for c in model.constraints:
        vec = [Fraction(0)] * n
        for var, a in c.terms:
            vec[pos[var]] += a
        if c.sense == "=":
            eq.append(_integer_row(vec, c.rhs))
        elif c.sense == "<=":
            ineq.append(_integer_row(vec, c.rhs))
        else:
            ineq.append(_integer_row([-a for a in vec], -c.rhs))
    for i, v in enumerate(model.variables):
        if v.lower is not None:
            vec = [Fraction(0)] * n
            vec[i] = Fraction(-1)
            ineq.append(_integer_row(vec, -v.lower))
        if v.upper is not None:
            vec = [Fraction(0)] * n
            vec[i] = Fraction(1)
            ineq.append(_integer_row(vec, v.upper))
    return names, eq, ineq


def _row_basis(rows: list[tuple[list[int], int]]) -> list[tuple[list[int], int]]:
    """Linearly independent subset of ``rows`` (exact elimination)."""
    kept, reduced = [], []
    for vec, rhs in rows:
        cur = [Fraction(x) for x in vec]
        for piv, basis_vec in reduced:
            if cur[piv] != 0:
                f = cur[piv] / basis_vec[piv]
                cur = [a - f * b for a, b in zip(cur, basis_vec)]
        piv = next((j for j, x in enumerate(cur) if x != 0), None)
        if piv is not None:
            reduced.append((piv, cur))
            kept.append((vec, rhs))
    return kept


def _solve_exact(mat: list[list[int]], rhs: list[int]) -> list[Fraction] | None:
    n = len(mat)
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(mat, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def enumerate_vertices(model: MipModel, chunk: int = 20000, max_bases: int = 5_000_000) -> list[tuple[Fraction, ...]]:
    """All extreme points of the model's continuous relaxation, sorted.

    A vertex is the unique solution of ``n`` linearly independent tight
    constraints, every equality among them.
    """
    names, eq, ineq = _constraint_matrix(model)
    n = len(names)
    eq = _row_basis(eq)
    need = n - len(eq)
    if need < 0:
        return []
    total = comb(len(ineq), need)
    if total > max_bases:
        raise SizeLimitError(f"{total} candidate bases exceed the enumeration budget {max_bases}")
    eq_mat = np.array([v for v, _ in eq], dtype=float).reshape(len(eq), n)
    ineq_mat = np.array([v for v, _ in ineq], dtype=float).reshape(len(ineq), n)
    eq_rhs = np.array([r for _, r in eq], dtype=float)
    ineq_rhs = np.array([r for _, r in ineq], dtype=float)
    found: set[tuple[Fraction, ...]] = set()
    screened: set[tuple[float, ...]] = set()
    combos = combinations(range(len(ineq)), need)
    while True:
        batch = [c for _, c in zip(range(chunk), combos)]
        if not batch:
            break
        idx = np.array(batch, dtype=int).reshape(len(batch), need)
        mats = np.concatenate([np.broadcast_to(eq_mat, (len(batch), len(eq), n)), ineq_mat[idx]], axis=1)
        dets = np.linalg.det(mats) if n else np.ones(len(batch))
        # integer matrices have integer determinants; 0.5 separates zero from nonzero
        keep = np.nonzero(np.abs(dets) > 0.5)[0]
        if not len(keep):
            continue
        rhs = np.concatenate([np.broadcast_to(eq_rhs, (len(keep), len(eq))), ineq_rhs[idx[keep]]], axis=1)
        approx = np.linalg.solve(mats[keep], rhs[..., None])[..., 0]
        # float screen only; survivors are re-solved and re-checked exactly
        slack = approx @ ineq_mat.T - ineq_rhs
        near = np.nonzero((slack <= 1e-7).all(axis=1))[0]
        for b in near:
            key = tuple(np.round(approx[b], 9))
            if key in screened:
                continue
            screened.add(key)
            rows = eq + [ineq[j] for j in batch[keep[b]]]
            point = _solve_exact([v for v, _ in rows], [r for _, r in rows])
            if point is None:
                continue
            if all(sum(a * x for a, x in zip(vec, point)) <= r for vec, r in ineq):
                found.add(tuple(point))
    return sorted(found)
