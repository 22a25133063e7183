"""Tuple-refinement toolkit: k-dim color refinement, certificates, gadget
counterexample constructions, fibre schemes, and stable-subset reduction."""

__version__ = "0.1.0"

from .canon import Certificate, aut_generators_via_recursion, certify, depth_d_1dim, individualize
from .cfi import CFIMap, cfi_build, gadget_size, iterate_lambda, lambda_inverse
from .coherent import (
    CoherentConfig,
    ValidationReport,
    cellular_closure,
    config_graph,
    klein_merge_groups,
    klein_relation_count,
    klein_scheme,
    merge_relations,
    parse_scheme,
    psi_twist,
    scheme_graph,
    serialize_scheme,
    validate,
)
from .cws import (
    CWSRecord,
    DecompositionTree,
    closure,
    contract,
    cws_spectrum,
    decompose,
    is_cws,
    is_prime,
    mutually_stable_trivial,
    normalize_cliques,
    normalize_overlaps,
    reduce_graph,
    twin_classes,
)
from .errors import (
    CoherenceError,
    DecompositionError,
    ParseError,
    ResourceLimitError,
    UnsupportedGraphError,
    WlkitError,
)
from .graph import (
    ColoredGraph,
    complement,
    connected_components,
    disjoint_union,
    distance,
    is_connected,
    join,
    min_separator_size,
    parse_wlg,
    random_relabel,
    serialize_wlg,
)
from .limits import DEFAULT_LIMITS, Limits, limits_from_env
from .oracle import (
    aut_group_order,
    aut_order_oracle,
    is_automorphism,
    is_isomorphism,
    iso_oracle,
    orbits_oracle,
)
from .refine import (
    LiftedColoring,
    ProjectedColoring,
    TupleColoring,
    count_paths,
    iso_type,
    lift,
    project,
    refine_1,
    refine_2,
    refine_k,
    similar_k,
    stable_vertex_names,
    vertex_classes,
)

__all__ = [name for name in dir() if not name.startswith("_")]
