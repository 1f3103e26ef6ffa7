"""Mixed-integer model container and its LP-format writer.

Coefficients, right-hand sides and bounds are ``Fraction``s; ``None`` bounds
are infinite. Variable order is declaration order and is what the writer
emits, so output is byte-deterministic.
"""
from __future__ import annotations

import json
import re
from collections.abc import Iterable
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import NonRepresentableCoefficientError
from .schemes import BicliqueCover

CONTINUOUS = "continuous"
BINARY = "binary"
SENSES = ("<=", "=", ">=")


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str = CONTINUOUS
    lower: Fraction | None = Fraction(0)
    upper: Fraction | None = None


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[str, Fraction], ...]
    sense: str
    rhs: Fraction


@dataclass(frozen=True)
class MipModel:
    """A linear model with optional binary variables.

    ``groups`` tags variable roles (``lam``, ``z``, ``gam``, ...). ``lam`` lists
    the simplex variables in ground-set order when the model formulates a CDC;
    ``cover`` is set for pairwise independent-branching models.
    """

    name: str
    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]
    objective: tuple[tuple[str, Fraction], ...] = ()
    groups: tuple[tuple[str, tuple[str, ...]], ...] = ()
    kind: str = ""
    cover: BicliqueCover | None = None

    def __post_init__(self):
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        declared = set(names)
        for c in self.constraints:
            if c.sense not in SENSES:
                raise ValueError(f"constraint {c.name}: unknown sense {c.sense!r}")
            for var, _ in c.terms:
                if var not in declared:
                    raise ValueError(f"constraint {c.name} references undeclared {var}")

    def group(self, name: str) -> tuple[str, ...]:
        return dict(self.groups).get(name, ())

    @property
    def lam(self) -> tuple[str, ...]:
        return self.group("lam")

    def variable(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)

    @property
    def binaries(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables if v.kind == BINARY)


class ModelBuilder:
    def __init__(self, name: str):
        self.name = name
        self.variables: list[Variable] = []
        self.constraints: list[Constraint] = []
        self.groups: dict[str, list[str]] = {}

    def var(self, name: str, group: str, kind: str = CONTINUOUS, lower=0, upper=None) -> str:
        lower = None if lower is None else Fraction(lower)
        upper = None if upper is None else Fraction(upper)
        if kind == BINARY:
            lower, upper = Fraction(0), Fraction(1)
        self.variables.append(Variable(name, kind, lower, upper))
        self.groups.setdefault(group, []).append(name)
        return name

    def row(self, name: str, terms: Iterable[tuple[str, object]], sense: str, rhs=0) -> None:
        merged: dict[str, Fraction] = {}
        for var, coef in terms:
            merged[var] = merged.get(var, Fraction(0)) + Fraction(coef)
        clean = tuple((v, c) for v, c in merged.items() if c != 0)
        self.constraints.append(Constraint(name, clean, sense, Fraction(rhs)))

    def build(self, kind: str = "", cover: BicliqueCover | None = None) -> MipModel:
        groups = tuple((g, tuple(names)) for g, names in self.groups.items())
        return MipModel(self.name, tuple(self.variables), tuple(self.constraints), (), groups, kind, cover)


def safe_name(label: str) -> str:
    """Map a label onto LP-safe characters."""
    return re.sub(r"[^A-Za-z0-9]", "_", label)


def extend(model: MipModel, variables: Iterable[Variable], constraints: Iterable[Constraint], group: str) -> MipModel:
    new_vars = tuple(variables)
    groups = dict(model.groups)
    groups[group] = groups.get(group, ()) + tuple(v.name for v in new_vars)
    return replace(
        model,
        variables=model.variables + new_vars,
        constraints=model.constraints + tuple(constraints),
        groups=tuple(groups.items()),
    )


def decimal(value: Fraction) -> str:
    """Exact decimal rendering; raises when the denominator has factors other than 2 and 5."""
    value = Fraction(value)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        raise NonRepresentableCoefficientError(
            f"{value} has no finite decimal form; scale the data to integers before emitting"
        )
    places = max(twos, fives)
    scaled = abs(value.numerator) * 10**places // value.denominator
    digits = str(scaled).rjust(places + 1, "0")
    text = digits if places == 0 else (digits[:-places] + "." + digits[-places:]).rstrip("0").rstrip(".")
    return ("-" if value < 0 else "") + text


def _linear(terms) -> list[str]:
    parts = []
    for i, (var, coef) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = var if mag == 1 else f"{decimal(mag)} {var}"
        parts.append((f"- {body}" if sign == "-" else body) if i == 0 else f"{sign} {body}")
    return parts


def _wrap(head: str, parts: list[str], tail: str, per_line: int = 8) -> list[str]:
    lines = []
    for i in range(0, max(len(parts), 1), per_line):
        chunk = " ".join(parts[i : i + per_line])
        lines.append((head if i == 0 else "   ") + (" " + chunk if chunk else ""))
    lines[-1] += tail
    return lines


def emit_lp(model: MipModel) -> str:
    """Render ``model`` in the CPLEX LP subset: Minimize, Subject To, Bounds, Binaries, End."""
    out = [f"\\ {model.name}" if model.name else "\\ model", "Minimize"]
    out += _wrap(" obj:", _linear(model.objective), "")
    out.append("Subject To")
    for c in model.constraints:
        parts = _linear(c.terms)
        if not parts and model.variables:
            # the format needs a term on every row
            parts = [f"0 {model.variables[0].name}"]
        out += _wrap(f" {c.name}:", parts, f" {c.sense} {decimal(c.rhs)}")
    out.append("Bounds")
    for v in model.variables:
        if v.kind == BINARY:
            continue
        lo, hi = v.lower, v.upper
        if lo is None and hi is None:
            out.append(f" {v.name} free")
        elif hi is None:
            out.append(f" {v.name} >= {decimal(lo)}")
        elif lo is None:
            out.append(f" -inf <= {v.name} <= {decimal(hi)}")
        else:
            out.append(f" {decimal(lo)} <= {v.name} <= {decimal(hi)}")
    bins = model.binaries
    if bins:
        out.append("Binaries")
        out += [f" {b}" for b in bins]
    out.append("End")
    return "\n".join(out) + "\n"


def size_report(model: MipModel) -> dict[str, int]:
    lam = set(model.lam)
    continuous = [v for v in model.variables if v.kind == CONTINUOUS]
    return {
        "variables": len(model.variables),
        "binaries": len(model.binaries),
        "lambda": len(lam),
        "auxiliary_continuous": sum(1 for v in continuous if v.name not in lam),
        "general_inequalities": sum(1 for c in model.constraints if c.sense != "="),
        "equalities": sum(1 for c in model.constraints if c.sense == "="),
        "general_constraints": len(model.constraints),
    }


def size_report_tsv(model: MipModel) -> str:
    rep = size_report(model)
    return "".join(f"{k}\t{v}\n" for k, v in rep.items())


def model_summary_json(model: MipModel) -> str:
    summary = {
        "name": model.name,
        "kind": model.kind,
        "sizes": size_report(model),
        "groups": {g: list(names) for g, names in model.groups},
    }
    return json.dumps(summary, indent=2, sort_keys=True) + "\n"
