"""Second-order cone programs as semidefinite programs.

Arrow-head embeddings of SOCO problems on both the dual and the primal side,
solution transport in both directions at selectable ranks, admissibility
checking, and the optimal-partition correspondence between the two problem
classes.
"""

from .errors import (
    BadSubset,
    ConicEmbedError,
    DimensionMismatch,
    EighConvergenceError,
    EpsilonInvalid,
    GenerationError,
    InconsistentDual,
    InconsistentPair,
    LabelMismatch,
    MissingSolutionPart,
    NotArrowHead,
    NotComplementary,
    NotInterior,
    NotPSD,
    NotSymmetric,
    OutsideCone,
    ParseError,
    ProvenanceMismatch,
    TemplateViolation,
)
from .linalg import (
    DEFAULT_TOL,
    EigenDecomposition,
    PsdStatus,
    SymMatrix,
    block_diag,
    eigh,
    numeric_rank,
    orthonormal_complement,
    psd_status,
    trace_inner,
)
from .soco import (
    BlockLayout,
    ConePosition,
    SocoProblem,
    SocoSolution,
    arrow_head,
    arrow_head_inv,
    block_arrow_head,
    cone_position,
    duality_gap,
    dual_residual,
    jordan_product,
    jordan_product_blocks,
    primal_residual,
)
from .sdo import (
    DualSplit,
    EmbeddingMeta,
    SdoProblem,
    SdoSolution,
    Side,
    sdo_dual_residual,
    sdo_gap,
    sdo_primal_residual,
)
from .embed_dual import (
    FullRank,
    RankK,
    RankOne,
    SimZhao,
    build_dual_embedding,
    extract_block_vector,
    full_rank_factors,
    full_rank_map,
    inverse_map_dual,
    map_block,
    map_solution_dual,
    rank_k_map,
    rank_one_map,
    sim_zhao_map,
)
from .embed_primal import (
    StructuralIndex,
    build_primal_embedding,
    inverse_map_primal,
    map_solution_primal,
    recover_uw,
    scaled_arrow_head_blocks,
)
from .partition import (
    ConeLabel,
    SdoPartition,
    arrowhead_eigensystem,
    classify_cones,
    map_partition,
    max_principal_angle,
    proper_map_solution,
    sdo_partition_from_solution,
)
from .verify import (
    AdmissibilityReport,
    GeneratedInstance,
    check_admissibility,
    example1_counterexample,
    generate_instance,
    with_duality_gap,
)
from .io import (
    export_sdpa,
    flatten_blocks,
    load_problem,
    load_sdo_problem,
    load_sdo_solution,
    load_solution,
    save_problem,
    save_sdo_problem,
    save_sdo_solution,
    save_solution,
    split_vector,
    write_json,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityReport",
    "BadSubset",
    "BlockLayout",
    "ConeLabel",
    "ConePosition",
    "ConicEmbedError",
    "DEFAULT_TOL",
    "DimensionMismatch",
    "DualSplit",
    "EigenDecomposition",
    "EighConvergenceError",
    "EmbeddingMeta",
    "EpsilonInvalid",
    "FullRank",
    "GeneratedInstance",
    "GenerationError",
    "InconsistentDual",
    "InconsistentPair",
    "LabelMismatch",
    "MissingSolutionPart",
    "NotArrowHead",
    "NotComplementary",
    "NotInterior",
    "NotPSD",
    "NotSymmetric",
    "OutsideCone",
    "ParseError",
    "ProvenanceMismatch",
    "PsdStatus",
    "RankK",
    "RankOne",
    "SdoPartition",
    "SdoProblem",
    "SdoSolution",
    "Side",
    "SimZhao",
    "SocoProblem",
    "SocoSolution",
    "StructuralIndex",
    "SymMatrix",
    "TemplateViolation",
    "arrow_head",
    "arrow_head_inv",
    "arrowhead_eigensystem",
    "block_arrow_head",
    "block_diag",
    "build_dual_embedding",
    "build_primal_embedding",
    "check_admissibility",
    "classify_cones",
    "cone_position",
    "dual_residual",
    "duality_gap",
    "eigh",
    "example1_counterexample",
    "export_sdpa",
    "extract_block_vector",
    "flatten_blocks",
    "full_rank_factors",
    "full_rank_map",
    "generate_instance",
    "inverse_map_dual",
    "inverse_map_primal",
    "jordan_product",
    "jordan_product_blocks",
    "load_problem",
    "load_sdo_problem",
    "load_sdo_solution",
    "load_solution",
    "map_block",
    "map_partition",
    "map_solution_dual",
    "map_solution_primal",
    "max_principal_angle",
    "numeric_rank",
    "orthonormal_complement",
    "primal_residual",
    "proper_map_solution",
    "psd_status",
    "rank_k_map",
    "rank_one_map",
    "recover_uw",
    "save_problem",
    "save_sdo_problem",
    "save_sdo_solution",
    "save_solution",
    "scaled_arrow_head_blocks",
    "sdo_dual_residual",
    "sdo_gap",
    "sdo_partition_from_solution",
    "sdo_primal_residual",
    "sim_zhao_map",
    "split_vector",
    "trace_inner",
    "with_duality_gap",
    "write_json",
]
