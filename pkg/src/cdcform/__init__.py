"""Formulation compiler for combinatorial disjunctive constraints (CDCs).

Analyze a CDC's conflict structure, build small biclique covers or
independent-branching schemes, and emit ideal MIP formulations, each with a
brute-force check alongside.
"""
from .cdc import (
    CDC,
    ConflictGraph,
    ConflictHypergraph,
    cnf_ib_scheme,
    conflict_graph,
    is_pairwise_representable,
    k_way_representable,
    maximal_independent_sets,
    minimal_infeasible_sets,
    new_cdc,
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
from .formulations import (
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
from .generators import cardinality, k1, multilinear_grid, random_triangulation, sos2, sosk, union_jack
from .model import MipModel, emit_lp
from .schemes import BicliqueCover, IBScheme
from .search import feasibility_mip, log_lower_bound, min_cover, min_cover_decide, sosk_lower_bound

__all__ = [
    "CDC",
    "BicliqueCover",
    "ConflictGraph",
    "ConflictHypergraph",
    "IBScheme",
    "MipModel",
    "adhoc_disaggregated",
    "branching_report",
    "cardinality",
    "chromatic_triangulation_cover",
    "cnf_ib_scheme",
    "conflict_graph",
    "embed_data",
    "emit_lp",
    "encoded_extended",
    "feasibility_mip",
    "idealness_check",
    "is_pairwise_representable",
    "jeroslow",
    "k1",
    "k_way_representable",
    "log_lower_bound",
    "maximal_independent_sets",
    "min_cover",
    "min_cover_decide",
    "minimal_infeasible_sets",
    "multilinear_cover",
    "multilinear_grid",
    "multiway_ib",
    "new_cdc",
    "pairwise_ideal",
    "projection_check",
    "random_triangulation",
    "sos2",
    "sos2_gray_cover",
    "sosk",
    "sosk_cover",
    "sosk_half_cover",
    "sosk_lower_bound",
    "stars_cover",
    "triangulation_cover",
    "union_jack",
    "validate_cover",
]

__version__ = "0.1.0"
