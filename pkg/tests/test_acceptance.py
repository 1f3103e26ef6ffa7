"""Acceptance gate: one test per criterion, each with its time budget.

The terminal summary prints one PASS/FAIL line per criterion.
"""
from __future__ import annotations

import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import product

import pytest

from cdcform.cdc import (
    ConflictGraph,
    cnf_ib_scheme,
    conflict_graph,
    is_pairwise_representable,
    k_way_representable,
)
from cdcform.covers import (
    ceil_log2,
    chromatic_triangulation_cover,
    multilinear_cover,
    sos2_gray_cover,
    sosk_cover,
    sosk_half_cover,
    triangulation_cover,
    validate_cover,
)
from cdcform.formulations import (
    adhoc_disaggregated,
    branching_report,
    encoded_extended,
    idealness_check,
    jeroslow,
    multiway_ib,
    pairwise_ideal,
    projection_check,
)
from cdcform.generators import (
    _from_diagonals,
    cardinality,
    k1,
    multilinear_grid,
    random_triangulation,
    sos2,
    sosk,
    triangulation_to_cdc,
    union_jack,
)
from cdcform.geometry import PlanarPartition, partition_rank, validate_partition
from cdcform.schemes import BicliqueCover
from cdcform.search import (
    decode_cover,
    log_lower_bound,
    min_cover,
    min_cover_decide,
    sosk_lower_bound,
)

from instances import all_triangulations, generator_instances, random_partition
from oracles import cover_mip_table, pair_index


@contextmanager
def budget(seconds: float):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.1f}s, budget {seconds}s"


def one_based(levels):
    return BicliqueCover(max(max(a | b) for a, b in levels), [({v - 1 for v in a}, {v - 1 for v in b}) for a, b in levels])


def levels_of(cover):
    return [({v + 1 for v in a}, {v + 1 for v in b}) for a, b in cover.levels]


@pytest.mark.criterion(1, "SOS2 Gray covers")
def test_criterion_01_gray_covers():
    with budget(1):
        for n in range(3, 66):
            cover = sos2_gray_cover(n)
            assert validate_cover(conflict_graph(sos2(n)), cover) == []
            assert cover.depth == ceil_log2(n - 1)
        assert levels_of(sos2_gray_cover(9)) == [
            ({1, 5, 9}, {3, 7}),
            ({1, 2, 8, 9}, {4, 5, 6}),
            ({1, 2, 3, 4}, {6, 7, 8, 9}),
        ]


@pytest.mark.criterion(2, "exact search on SOS3(6) and the SOS3(10) cover")
def test_criterion_02_exact_search():
    with budget(30):
        graph = conflict_graph(sosk(6, 3))
        depth, cover = min_cover(graph)
        assert depth == 3
        assert validate_cover(graph, cover) == []
        assert not min_cover_decide(graph, 2).sat
        fixed = one_based([
            ({1, 8, 9, 10}, {4, 5}),
            ({1, 2, 10}, {5, 6, 7}),
            ({1, 2, 3, 9, 10}, {6}),
            ({1, 2, 3, 4}, {7, 8, 9, 10}),
        ])
        assert validate_cover(conflict_graph(sosk(10, 3)), fixed) == []


@pytest.mark.criterion(3, "lower bounds on exact covers")
def test_criterion_03_lower_bounds():
    with budget(60):
        for name, cdc, _ in generator_instances(10):
            depth, cover = min_cover(conflict_graph(cdc))
            assert validate_cover(conflict_graph(cdc), cover) == [], name
            # the log bound needs a formulation from the cover
            if is_pairwise_representable(cdc)[0]:
                assert depth >= log_lower_bound(cdc), name
            if name.startswith(("sos2", "sosk")):
                n, k = cdc.n, max(len(s) for s in cdc.sets)
                assert depth >= sosk_lower_bound(n, k), name
        # the chain bound is tight here; four feasible sets only give a log bound of 2
        depth, _ = min_cover(conflict_graph(sosk(6, 3)))
        assert depth == 3 == sosk_lower_bound(6, 3)
        assert log_lower_bound(sosk(6, 3)) == 2


@pytest.mark.criterion(4, "multilinear covers")
def test_criterion_04_multilinear():
    with budget(5):
        for dims in [(3, 3), (9, 9), (4, 3), (3, 3, 3)]:
            cover = multilinear_cover(dims)
            assert validate_cover(conflict_graph(multilinear_grid(dims)), cover) == []
            assert cover.depth == sum(ceil_log2(d - 1) for d in dims)
        assert multilinear_cover((9, 9)).depth == 6 == log_lower_bound(multilinear_grid((9, 9)))


@pytest.mark.criterion(5, "triangulation covers")
def test_criterion_05_triangulations():
    with budget(10):
        for m in (6, 8):
            for seed in range(20):
                tri = random_triangulation(m, m, seed)
                cover = triangulation_cover(tri)
                assert validate_cover(conflict_graph(triangulation_to_cdc(tri)), cover) == []
                assert cover.depth == 2 * ceil_log2(m - 1) + 9
        for tri, depth in ((union_jack(3, 3), 3), (k1(3, 3), 4)):
            res = chromatic_triangulation_cover(tri)
            assert res.cover.depth == depth
            assert validate_cover(conflict_graph(triangulation_to_cdc(tri)), res.cover) == []
        # one main diagonal in a 3x4 grid: an interior node of odd degree, yet a coloring exists
        tri = _from_diagonals(3, 4, lambda x, y: (x, y) == (1, 3))
        res = chromatic_triangulation_cover(tri)
        assert res.odd_degree_nodes["even"] != ()
        assert res.sufficient_condition == {"even": False, "odd": True}
        assert res.cover is not None
        assert validate_cover(conflict_graph(triangulation_to_cdc(tri)), res.cover) == []


@pytest.mark.criterion(6, "SOSk covers")
def test_criterion_06_sosk():
    with budget(5):
        for n, k in [(10, 3), (26, 3), (12, 4)]:
            cover = sosk_cover(n, k)
            assert validate_cover(conflict_graph(sosk(n, k)), cover) == []
            assert cover.depth <= ceil_log2(-(-n // k) - 1) + 3 * k
        assert len(sosk_cover(26, 3).levels) == 12 == sosk_cover(26, 3).depth
        assert levels_of(sosk_half_cover(6, 3)) == [({1}, {4, 5, 6}), ({1, 2}, {5, 6}), ({1, 2, 3}, {6})]


@pytest.mark.criterion(7, "representability")
def test_criterion_07_representability():
    with budget(30):
        for n in range(1, 7):
            for ell in range(1, n):
                for k in range(2, n + 2):
                    assert k_way_representable(cardinality(n, ell), k) == (k > ell), (n, ell, k)
        positive = [sos2(n) for n in range(2, 21)]
        positive += [sosk(n, k) for n in range(2, 21) for k in range(1, n + 1)]
        for m, n in product(range(2, 11), repeat=2):
            if m * n > 20:
                continue
            if (m - 1) * (n - 1) <= 6:
                positive += [triangulation_to_cdc(t) for t in all_triangulations(m, n)]
            else:
                positive += [triangulation_to_cdc(random_triangulation(m, n, s)) for s in range(10)]
        for dims in [(2, 2), (3, 3), (4, 5), (2, 10), (2, 2, 5), (2, 2, 2, 2), (3, 3, 2)]:
            positive.append(multilinear_grid(dims))
        for cdc in positive:
            assert cdc.n <= 20
            assert is_pairwise_representable(cdc)[0]
        for n in range(3, 13):
            for ell in range(2, n):
                ok, witness = is_pairwise_representable(cardinality(n, ell))
                assert not ok and witness is not None


@pytest.mark.criterion(8, "projection checks on every generator CDC with |J| <= 8")
def test_criterion_08_projection():
    with budget(120):
        count = 0
        for name, cdc, cover in generator_instances(8):
            models = [
                jeroslow(cdc),
                encoded_extended(cdc),
                adhoc_disaggregated(cdc),
                multiway_ib(cnf_ib_scheme(cdc, max(cdc.n, 2)), labels=cdc.labels),
            ]
            if cover is not None:
                models.append(pairwise_ideal(cover, cdc=cdc))
            for model in models:
                report = projection_check(model, cdc)
                assert report.ok, f"{name} {model.kind}: {report}"
                count += 1
        assert count > 400


@pytest.mark.criterion(9, "idealness by exact vertex enumeration")
def test_criterion_09_idealness():
    with budget(120):
        cases = [
            pairwise_ideal(sos2_gray_cover(5), cdc=sos2(5)),
            pairwise_ideal(sosk_half_cover(6, 3), cdc=sosk(6, 3)),
            jeroslow(sos2(4)),
        ]
        for model in cases:
            report = idealness_check(model)
            assert report.ideal, str(report)
            assert report.vertices > 0


def _graph(n: int, mask: int) -> ConflictGraph:
    return ConflictGraph(n, tuple(p for i, p in enumerate(pair_index(n)) if mask >> i & 1))


@pytest.mark.criterion(10, "cover-existence model against exact search")
def test_criterion_10_cover_mip():
    with budget(120):
        for n in range(2, 6):
            pairs = len(pair_index(n))
            full = (1 << pairs) - 1
            for t in (1, 2):
                valid, can_cover, can_skip, covered, raw = cover_mip_table(n, t)
                # a valid x, y leaves z no freedom: it is forced to the covered pairs
                assert (covered[valid] == can_cover[valid]).all()
                assert ((full & ~can_skip[valid]) == covered[valid]).all()
                feasible = set(covered[valid].tolist())
                for mask in range(full + 1):
                    graph = _graph(n, mask)
                    assert min_cover_decide(graph, t).sat == (mask in feasible), (n, t, mask)
                # decode one assignment per reachable graph through the package
                seen = set()
                for row in range(len(valid)):
                    if not valid[row] or int(covered[row]) in seen:
                        continue
                    seen.add(int(covered[row]))
                    graph = _graph(n, int(covered[row]))
                    x, y = raw[row]
                    assignment = {f"x_{r + 1}_{j + 1}": int(x[r, j]) for r in range(n) for j in range(t)}
                    assignment.update({f"y_{r + 1}_{j + 1}": int(y[r, j]) for r in range(n) for j in range(t)})
                    assert validate_cover(graph, decode_cover(graph, t, assignment)) == []
                assert seen == feasible


@pytest.mark.criterion(11, "branching independence on the two-level SOS2(5) model")
def test_criterion_11_branching():
    with budget(1):
        cover = one_based([({1, 2}, {4, 5}), ({3}, {1, 5})])
        report = branching_report(pairwise_ideal(cover, cdc=sos2(5)))
        level = report.levels[1]
        assert level.variable == "z_2"
        assert level.down == {2}
        assert level.up == {0, 4}
        assert report.covers_ground


@pytest.mark.criterion(12, "planar partitions")
def test_criterion_12_geometry():
    with budget(30):
        pinwheel = PlanarPartition((
            ((0, 0), (2, 0), (2, 1), (0, 1)),
            ((2, 0), (3, 0), (3, 2), (2, 2)),
            ((1, 2), (3, 2), (3, 3), (1, 3)),
            ((0, 1), (1, 1), (1, 3), (0, 3)),
        ))
        assert {v.kind for v in validate_partition(pinwheel)} == {"InternalVertex"}
        ring = PlanarPartition((
            ((0, 0), (3, 0), (2, 1), (1, 1)),
            ((3, 0), (3, 3), (2, 2), (2, 1)),
            ((3, 3), (0, 3), (1, 2), (2, 2)),
            ((0, 3), (0, 0), (1, 1), (1, 2)),
        ))
        third = Fraction(4, 3)
        nested = PlanarPartition((
            ((0, 0), (6, 0), (4, third), (2, third)),
            ((6, 0), (3, 6), (3, Fraction(10, 3)), (4, third)),
            ((3, 6), (0, 0), (2, third), (3, Fraction(10, 3))),
        ))
        for part in (ring, nested):
            assert validate_partition(part) == []
            assert partition_rank(part) <= 3
        for seed in range(50):
            part = random_partition(seed)
            assert validate_partition(part) == []
            assert partition_rank(part) <= 3
