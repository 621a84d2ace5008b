"""Exact-arithmetic chain complexes on finite trees and their products.

The package provides alternating chains with rational coefficients,
aligned subcomplexes of trees with a norm-bounded projection onto them,
orbit signatures with constructive witnesses, exactness audits by sparse
rational elimination, and l1-minimal filling norms by exact simplex.
"""

from .chains import AltChain, canonicalize_tuple, chain_from_lines, chain_to_lines
from .exactness import (
    ColumnEchelon,
    DegreeExactness,
    aligned_exactness,
    full_exactness,
    rank_of_columns,
    verify_exactness,
)
from .flatmate import (
    HomotopyNormReport,
    ProductComplex,
    aligned_boundary_problem,
    flag_growth,
    flatmate_boundary_problem,
    flatmate_exactness,
    flatmate_tuples,
    homotopy_norm_probe,
    hull_problem,
    is_flatmate,
    path_product_family,
    sample_unit_cycles,
    sample_window_cycles,
)
from .limits import (
    DEFAULT_DIM_CAP,
    DEFAULT_LP_BASIS_CAP,
    DEFAULT_VERTEX_CAP,
    CapExceeded,
)
from .lp import BoundaryProblem, PreimageResult, min_l1_preimage
from .orbits import (
    AlignedSignature,
    CensusReport,
    OrbitClassRecord,
    WitnessResult,
    aligned_signature,
    orbit_class_census,
    orbit_witness,
)
from .projection import (
    BracketReport,
    CaterpillarForm,
    ChainMapReport,
    NormScanReport,
    bracket_from_layout,
    caterpillar_layout,
    end_pair_bracket,
    end_pair_bracket_terms,
    project_to_aligned,
    project_tuple,
    projection_norm_scan,
    verify_bracket_identities,
    verify_chain_map,
)
from .trees import (
    ConvexHull,
    PartialIsometry,
    Tree,
    aligned_tuples,
    build_tree,
    convex_hull,
    extend_partial_isometry,
    geodesic,
    is_aligned,
    load_tree,
    nonisomorphic_trees,
    parse_edge_list,
    path_tree,
    project_to_segment,
    random_tree,
    regular_ball,
    tree_from_pruefer,
)

__version__ = "0.1.0"

__all__ = [
    "AltChain",
    "AlignedSignature",
    "BoundaryProblem",
    "BracketReport",
    "CapExceeded",
    "CaterpillarForm",
    "CensusReport",
    "ChainMapReport",
    "ColumnEchelon",
    "ConvexHull",
    "DEFAULT_DIM_CAP",
    "DEFAULT_LP_BASIS_CAP",
    "DEFAULT_VERTEX_CAP",
    "DegreeExactness",
    "HomotopyNormReport",
    "NormScanReport",
    "OrbitClassRecord",
    "PartialIsometry",
    "PreimageResult",
    "ProductComplex",
    "Tree",
    "WitnessResult",
    "aligned_boundary_problem",
    "aligned_exactness",
    "aligned_signature",
    "aligned_tuples",
    "bracket_from_layout",
    "build_tree",
    "canonicalize_tuple",
    "caterpillar_layout",
    "chain_from_lines",
    "chain_to_lines",
    "convex_hull",
    "end_pair_bracket",
    "end_pair_bracket_terms",
    "extend_partial_isometry",
    "flag_growth",
    "flatmate_boundary_problem",
    "flatmate_exactness",
    "flatmate_tuples",
    "full_exactness",
    "geodesic",
    "homotopy_norm_probe",
    "hull_problem",
    "is_aligned",
    "is_flatmate",
    "load_tree",
    "min_l1_preimage",
    "nonisomorphic_trees",
    "orbit_class_census",
    "orbit_witness",
    "parse_edge_list",
    "path_product_family",
    "path_tree",
    "project_to_aligned",
    "project_to_segment",
    "project_tuple",
    "projection_norm_scan",
    "random_tree",
    "rank_of_columns",
    "regular_ball",
    "sample_unit_cycles",
    "sample_window_cycles",
    "tree_from_pruefer",
    "verify_bracket_identities",
    "verify_chain_map",
    "verify_exactness",
]
