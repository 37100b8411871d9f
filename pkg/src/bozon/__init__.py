"""Exact verification of squared order/disorder correlations against
dimer partition-function ratios on sphere-embedded planar graphs.

The pipeline: a rotation system (combinatorial map) carries an Ising
model whose couplings can be modified along disjoint order and disorder
defect paths; the squared modified-to-plain partition-function ratio
equals a signed ratio of dimer partition functions on the derived
bipartite graph G_Q, with a pair-polygon expansion connecting the two.
Every identity is checked two ways at desk scale.
"""

from __future__ import annotations

from .boundary import (
    ReductionResult,
    reduce_dobrushin,
    reduce_plus,
    reduce_plus_free,
)
from .consequences import (
    CorrelationReport,
    SpinorSpec,
    dimer_correlation_ratio,
    kw_duality_check,
    magnetization,
    magnetization_report,
    spin_correlation,
    spin_correlation_squared_dimer,
    spinor_correlation_squared,
)
from .dimer import (
    DIMER_CAP,
    QuadDimerGraph,
    brute_force_dimer_Z,
    build_gq,
    calibration_sign,
    dimer_partition_function,
    dimer_Z_det,
    enumerate_matchings,
    kasteleyn_matrix,
    kasteleyn_orientation,
    matching_count_report,
    matching_pair_histogram,
    nu,
    nu_from_couplings,
    nu_modified,
    pair_of_matching,
    polygon_to_dimer_count,
    structure_check,
    theorem_reports,
    verify_bipartite_dimer_identity,
    verify_theorem_main,
)
from .errors import BozonError, IdentityViolation
from .graphs import BUILTIN_EXAMPLES, builtin, c4, grid, k3, wheel
from .ising import (
    EDGE_CAP,
    SPIN_CAP,
    CouplingAssignment,
    IsingCorrelator,
    base_couplings,
    dual_couplings,
    high_temp_expansion_check,
    modify_couplings,
    order_disorder_correlation,
    partition_function,
    spin_expectation,
    uniform_couplings,
)
from .planar_map import (
    CombinatorialMap,
    DefectSet,
    DualMap,
    PathSpec,
    build_map,
    dual,
    path_spec_from_edges,
    quad_graph,
    shortest_path,
    validate_defects,
    vertex_to_dual_face,
    walk_path,
)
from .polygon import (
    PolygonPair,
    cycle_basis_masks,
    enumerate_polygons,
    pair_polygon_sum,
    polygon_weights,
    verify_squared_partition,
)
from .reports import IdentityReport, compare, flatten_check
from .serialize import (
    canonical_json,
    correlator_to_dict,
    couplings_from_dict,
    couplings_to_dict,
    defect_paths_from_dict,
    defects_to_dict,
    gq_to_dict,
    map_from_dict,
    map_to_dict,
)
from .suites import (
    SUITE_NAMES,
    explicit_instance,
    run_explicit,
    run_suite,
    suite_summary,
)

__all__ = [
    "BOZON_VERSION",
    "BUILTIN_EXAMPLES",
    "BozonError",
    "CombinatorialMap",
    "CorrelationReport",
    "CouplingAssignment",
    "DIMER_CAP",
    "DefectSet",
    "DualMap",
    "EDGE_CAP",
    "IdentityReport",
    "IdentityViolation",
    "IsingCorrelator",
    "PathSpec",
    "PolygonPair",
    "QuadDimerGraph",
    "ReductionResult",
    "SPIN_CAP",
    "SUITE_NAMES",
    "SpinorSpec",
    "base_couplings",
    "brute_force_dimer_Z",
    "build_gq",
    "build_map",
    "builtin",
    "c4",
    "calibration_sign",
    "canonical_json",
    "compare",
    "correlator_to_dict",
    "couplings_from_dict",
    "couplings_to_dict",
    "cycle_basis_masks",
    "defect_paths_from_dict",
    "defects_to_dict",
    "dimer_Z_det",
    "dimer_correlation_ratio",
    "dimer_partition_function",
    "dual",
    "dual_couplings",
    "enumerate_matchings",
    "enumerate_polygons",
    "explicit_instance",
    "flatten_check",
    "gq_to_dict",
    "grid",
    "high_temp_expansion_check",
    "k3",
    "kasteleyn_matrix",
    "kasteleyn_orientation",
    "kw_duality_check",
    "magnetization",
    "magnetization_report",
    "map_from_dict",
    "map_to_dict",
    "matching_count_report",
    "matching_pair_histogram",
    "modify_couplings",
    "nu",
    "nu_from_couplings",
    "nu_modified",
    "order_disorder_correlation",
    "pair_of_matching",
    "pair_polygon_sum",
    "partition_function",
    "path_spec_from_edges",
    "polygon_to_dimer_count",
    "polygon_weights",
    "quad_graph",
    "reduce_dobrushin",
    "reduce_plus",
    "reduce_plus_free",
    "run_explicit",
    "run_suite",
    "shortest_path",
    "spin_correlation",
    "spin_correlation_squared_dimer",
    "spin_expectation",
    "spinor_correlation_squared",
    "structure_check",
    "suite_summary",
    "theorem_reports",
    "uniform_couplings",
    "validate_defects",
    "verify_bipartite_dimer_identity",
    "verify_squared_partition",
    "verify_theorem_main",
    "vertex_to_dual_face",
    "walk_path",
    "wheel",
]

BOZON_VERSION = "0.1.0"
