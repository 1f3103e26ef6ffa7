"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 size-gate refusal.
"""
from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor

from . import io
from .cdc import (
    CDC,
    cnf_ib_scheme,
    conflict_graph,
    is_pairwise_representable,
    minimal_infeasible_sets,
    to_dot,
)
from .covers import (
    chromatic_triangulation_cover,
    multilinear_cover,
    sos2_gray_cover,
    sosk_cover,
    sosk_half_cover,
    stars_cover,
    triangulation_cover,
    validate_cover,
)
from .errors import CDCError, SizeLimitError
from .formulations import (
    IDEALNESS_VARIABLE_LIMIT,
    adhoc_disaggregated,
    branching_report,
    embed_data,
    encoded_extended,
    idealness_check,
    jeroslow,
    multiway_ib,
    pairwise_ideal,
    projection_check,
)
from .generators import (
    cardinality,
    k1,
    lattice,
    multilinear_grid,
    random_triangulation,
    sos2,
    sosk,
    triangulation_to_cdc,
    union_jack,
)
from .geometry import partition_rank, partition_to_cdc
from .model import emit_lp, size_report_tsv
from .schemes import BicliqueCover, cover_to_scheme, scheme_to_cover
from .search import EXACT_NODE_LIMIT, feasibility_mip, log_lower_bound, min_cover_cdc, min_cover_decide

OK, FAILED, USAGE, SIZE_GATE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load(path: str):
    obj = io.read_json(path)
    kind = io.kind_of(obj)
    loaders = {
        "cdc": io.cdc_from_json,
        "triangulation": io.triangulation_from_json,
        "partition": io.partition_from_json,
        "cover": io.cover_from_json,
        "scheme": io.scheme_from_json,
    }
    return kind, loaders[kind](obj)


def _load_cdc(path: str) -> tuple[str, object, CDC]:
    kind, obj = _load(path)
    if kind == "cdc":
        return kind, obj, obj
    if kind == "triangulation":
        return kind, obj, triangulation_to_cdc(obj)
    if kind == "partition":
        return kind, obj, partition_to_cdc(obj)
    raise UsageError(f"{path}: expected a CDC, triangulation or partition file, got a {kind}")


# -- generate -------------------------------------------------------------------


def cmd_generate(args) -> int:
    fam = args.family
    if fam == "sos2":
        doc = io.cdc_to_json(sos2(_need(args.n, "--n")))
    elif fam == "sosk":
        doc = io.cdc_to_json(sosk(_need(args.n, "--n"), _need(args.k, "--k")))
    elif fam == "cardinality":
        doc = io.cdc_to_json(cardinality(_need(args.n, "--n"), _need(args.l, "--l")))
    elif fam == "multilinear":
        doc = io.cdc_to_json(multilinear_grid(_dims(_need(args.dims, "--dims"))))
    elif fam == "unionjack":
        doc = io.triangulation_to_json(union_jack(_need(args.m, "--m"), _need(args.n, "--n")))
    elif fam == "k1":
        doc = io.triangulation_to_json(k1(_need(args.m, "--m"), _need(args.n, "--n")))
    else:
        doc = io.triangulation_to_json(
            random_triangulation(_need(args.m, "--m"), _need(args.n, "--n"), _need(args.seed, "--seed"))
        )
    io.write_text(args.out, io.dumps(doc))
    return OK


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required for this family")
    return value


def _dims(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--dims expects comma-separated integers, got {text!r}") from None


# -- analyze --------------------------------------------------------------------


def cmd_analyze(args) -> int:
    kind, obj, cdc = _load_cdc(args.input)
    graph = conflict_graph(cdc)
    hyper = minimal_infeasible_sets(cdc, max(args.max_rank, 2))
    rank = f"> {hyper.truncated_at}" if hyper.truncated_at is not None else str(hyper.rank)
    pairwise = "yes" if hyper.truncated_at is None and hyper.rank <= 2 else "no"
    if cdc.n <= 40:
        pairwise = "yes" if is_pairwise_representable(cdc)[0] else "no"
    lines = [
        f"ground set: {cdc.n}",
        f"sets: {len(cdc.sets)}",
        f"conflict edges: {len(graph.edges)}",
        f"rank: {rank}",
        f"pairwise: {pairwise}",
    ]
    if hyper.truncated_at is None:
        lines.append(f"k-way: {max(hyper.rank, 1)}")
    lines.append(f"log-lb: {log_lower_bound(cdc)}")
    if kind == "partition":
        lines.append(f"partition rank <= 3: {'yes' if partition_rank(obj) <= 3 else 'no'}")
    lines.append(f"pairwise: {pairwise}, rank {rank}, log-lb {log_lower_bound(cdc)}")
    print("\n".join(lines))
    if args.dot:
        io.write_text(args.dot, to_dot(graph))
    return OK


# -- cover ----------------------------------------------------------------------


def _sosk_shape(cdc: CDC) -> int | None:
    """Window size ``k`` if the CDC is SOSk in label order, else None."""
    sizes = {len(s) for s in cdc.sets}
    if len(sizes) != 1:
        return None
    k = sizes.pop()
    windows = {frozenset(range(t, t + k)) for t in range(cdc.n - k + 1)}
    return k if set(cdc.sets) == windows else None


def _multilinear_shape(cdc: CDC) -> list[int] | None:
    try:
        points = [tuple(int(c) for c in lab.split(",")) for lab in cdc.labels]
    except ValueError:
        return None
    dims = [max(p[i] for p in points) for i in range(len(points[0]))]
    if len({len(p) for p in points}) != 1 or points != lattice(dims):
        return None
    ref = multilinear_grid(dims)
    return dims if set(ref.sets) == set(cdc.sets) else None


def cmd_cover(args) -> int:
    kind, obj, cdc = _load_cdc(args.input)
    graph = conflict_graph(cdc)
    method = args.method
    note = ""
    if method == "stars":
        cover = stars_cover(graph)
    elif method in ("gray", "sosk", "sosk-half"):
        k = _sosk_shape(cdc)
        if k is None or (method == "gray" and k != 2):
            raise UsageError(f"--method {method} needs an SOS{'2' if method == 'gray' else 'k'} input")
        if method == "gray":
            cover = sos2_gray_cover(cdc.n)
        elif method == "sosk":
            cover = sosk_cover(cdc.n, k)
        else:
            cover = sosk_half_cover(cdc.n, k)
    elif method == "multilinear":
        dims = _multilinear_shape(cdc)
        if dims is None:
            raise UsageError("--method multilinear needs a multilinear grid input")
        cover = multilinear_cover(dims)
    elif method in ("triangulation", "chromatic"):
        if kind != "triangulation":
            raise UsageError(f"--method {method} needs a triangulation file")
        if method == "triangulation":
            cover = triangulation_cover(obj)
        else:
            res = chromatic_triangulation_cover(obj)
            if res.cover is None:
                cycle = ", ".join(cdc.labels[v] for v in res.witness)
                print(f"no chromatic cover: odd cycle {cycle}", file=sys.stderr)
                return FAILED
            cover = res.cover
    elif method == "exact":
        limit = args.exact_node_limit
        depth, cover = min_cover_cdc(cdc, node_limit=limit, max_depth=args.max_depth)
        note = f"optimal depth {depth}"
        if depth > 0:
            proof = min_cover_decide(graph, depth - 1, limit)
            note += f"; depth {depth - 1} unsat after {proof.explored} search nodes"
    else:
        scheme = cnf_ib_scheme(cdc, max(args.max_rank, 2))
        if scheme.k != 2:
            io.write_text(args.out, io.dumps(io.scheme_to_json(scheme)))
            print(f"{scheme.k}-way scheme of depth {len(scheme.levels)}", file=sys.stderr)
            return OK
        cover = scheme_to_cover(scheme)
    bad = validate_cover(graph, cover)
    if bad:
        print("\n".join(str(v) for v in bad), file=sys.stderr)
        return FAILED
    io.write_text(args.out, io.dumps(io.cover_to_json(cover, cdc.labels)))
    print(f"depth {cover.depth}" + (f" ({note})" if note else ""), file=sys.stderr)
    return OK


# -- emit -----------------------------------------------------------------------


def _build(cdc: CDC, formulation: str, cover_path: str | None, depth: int | None, max_rank: int):
    if formulation == "jeroslow":
        return jeroslow(cdc)
    if formulation == "encoded":
        return encoded_extended(cdc)
    if formulation == "adhoc":
        return adhoc_disaggregated(cdc)
    if formulation == "covermip":
        if depth is None:
            raise UsageError("--formulation covermip needs --depth")
        return feasibility_mip(conflict_graph(cdc), depth)
    if formulation == "ideal":
        if cover_path is None:
            raise UsageError("--formulation ideal needs --cover")
        kind, cover = _load(cover_path)
        if kind != "cover":
            raise UsageError(f"{cover_path}: expected a cover file")
        return pairwise_ideal(cover, cdc)
    # multiway: an explicit scheme or cover, else the CNF scheme
    if cover_path is None:
        scheme = cnf_ib_scheme(cdc, max(max_rank, 2))
    else:
        kind, obj = _load(cover_path)
        if kind not in ("cover", "scheme"):
            raise UsageError(f"{cover_path}: expected a cover or scheme file")
        scheme = cover_to_scheme(obj) if isinstance(obj, BicliqueCover) else obj
    return multiway_ib(scheme, cdc.labels)


def cmd_emit(args) -> int:
    _, _, cdc = _load_cdc(args.input)
    model = _build(cdc, args.formulation, args.cover, args.depth, args.max_rank)
    if args.data:
        data = io.read_json(args.data)
        model = embed_data(model, data["values"], data.get("extra_values"))
    io.write_text(args.out, emit_lp(model))
    if args.sizes:
        sys.stderr.write(size_report_tsv(model))
    return OK


# -- verify ---------------------------------------------------------------------

EXPECT_IDEAL = {"jeroslow", "encoded", "ideal"}


def _verify_one(job: tuple[str, str | None, str | None, int]) -> tuple[int, str]:
    path, cover_path, formulation, max_rank = job
    try:
        _, _, cdc = _load_cdc(path)
        out = []
        status = OK
        if cover_path and formulation is None:
            kind, cover = _load(cover_path)
            if kind != "cover":
                raise UsageError(f"{cover_path}: expected a cover file")
            bad = validate_cover(conflict_graph(cdc), cover)
            if bad:
                out += [f"{path}: invalid cover"] + [f"  {v}" for v in bad]
                status = FAILED
            else:
                out.append(f"{path}: cover ok, depth {cover.depth}")
        if formulation:
            model = _build(cdc, formulation, cover_path, None, max_rank)
            proj = projection_check(model, cdc)
            out.append(f"{path}: {proj}")
            if not proj.ok:
                status = FAILED
            if len(model.variables) <= IDEALNESS_VARIABLE_LIMIT:
                ideal = idealness_check(model)
                out.append(f"{path}: {ideal}")
                if not ideal.ideal and formulation in EXPECT_IDEAL:
                    status = FAILED
            else:
                out.append(f"{path}: ideal: skipped ({len(model.variables)} variables exceed the size gate)")
            if model.kind == "pairwise_ib" and model.cover.levels:
                out.append(branching_report(model).table(cdc.labels).rstrip())
        return status, "\n".join(out)
    except SizeLimitError as exc:
        return SIZE_GATE, f"{path}: size gate: {exc}"
    except (CDCError, UsageError, OSError, KeyError) as exc:
        return USAGE, f"{path}: {exc}"


def cmd_verify(args) -> int:
    if not args.cover and not args.formulation:
        raise UsageError("verify needs --cover and/or --formulation")
    jobs = [(p, args.cover, args.formulation, args.max_rank) for p in args.inputs]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_verify_one, jobs))
    else:
        results = [_verify_one(j) for j in jobs]
    for _, text in results:
        print(text)
    return max(code for code, _ in results)


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cdcform", description="Formulation compiler for combinatorial disjunctive constraints.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a constraint family instance")
    g.add_argument("family", choices=["sos2", "sosk", "cardinality", "multilinear", "unionjack", "k1", "random-triangulation"])
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--l", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--dims")
    g.add_argument("--seed", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="report conflict structure and representability")
    a.add_argument("input")
    a.add_argument("--max-rank", type=int, default=4)
    a.add_argument("--dot", help="write the conflict graph as DOT to this file")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("cover", help="build and validate a biclique cover or scheme")
    c.add_argument("input")
    c.add_argument(
        "--method",
        required=True,
        choices=["stars", "gray", "multilinear", "triangulation", "chromatic", "sosk", "sosk-half", "exact", "cnf"],
    )
    c.add_argument("--out")
    c.add_argument("--max-depth", type=int)
    c.add_argument("--exact-node-limit", type=int, default=EXACT_NODE_LIMIT)
    c.add_argument("--max-rank", type=int, default=4)
    c.set_defaults(func=cmd_cover)

    e = sub.add_parser("emit", help="write a formulation in LP format")
    e.add_argument("input")
    e.add_argument("--formulation", required=True, choices=["jeroslow", "encoded", "adhoc", "ideal", "multiway", "covermip"])
    e.add_argument("--cover")
    e.add_argument("--data")
    e.add_argument("--depth", type=int)
    e.add_argument("--max-rank", type=int, default=4)
    e.add_argument("--sizes", action="store_true", help="print the size report to stderr")
    e.add_argument("--out")
    e.set_defaults(func=cmd_emit)

    v = sub.add_parser("verify", help="check covers or formulations by brute force")
    v.add_argument("inputs", nargs="+")
    v.add_argument("--cover")
    v.add_argument("--formulation", choices=["jeroslow", "encoded", "adhoc", "ideal", "multiway"])
    v.add_argument("--max-rank", type=int, default=4)
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SizeLimitError as exc:
        print(f"size gate: {exc}", file=sys.stderr)
        return SIZE_GATE
    except (CDCError, UsageError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
