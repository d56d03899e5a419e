"""Cumulative statistics, projection entropy and entropy agglomeration for
sample sets of partitionings and feature allocations."""

from .agglomeration import (
    Dendrogram,
    IntersectionCache,
    MergeStep,
    entropy_agglomeration,
    leaf_order,
)
from .cod import (
    CodMatrix,
    CrpParams,
    cod_matrix,
    crp_expected_cod,
    crp_residual_matrix,
    equilibrium_discrepancy,
    expected_cod,
)
from .entropy import (
    EntropySequence,
    entropy,
    entropy_from_statistic,
    entropy_sequence,
    expected_projection_entropy,
    per_element_information,
    projection_entropy,
)
from .errors import EquilibriumError, InputError, ParseError, UnsupportedKindError
from .gibbs import (
    ChainConfig,
    Dataset,
    GibbsState,
    ModelConfig,
    gibbs_sweep,
    log_predictive,
    run_chain,
    sample_crp_prior,
    synthetic_clusters,
)
from .partitions import (
    FeatureAllocation,
    GroundSet,
    Partitioning,
    SampleSet,
    block_count,
    cumulative_statistic,
    exact_block_size_distribution,
    mean_cumulative_statistic,
    pairwise_occurrence,
    project,
    subset_occurrence,
)

__all__ = [
    "EquilibriumError",
    "InputError",
    "ParseError",
    "UnsupportedKindError",
    "block_count",
    "ChainConfig",
    "cod_matrix",
    "CodMatrix",
    "crp_expected_cod",
    "crp_residual_matrix",
    "CrpParams",
    "cumulative_statistic",
    "Dataset",
    "Dendrogram",
    "entropy",
    "entropy_agglomeration",
    "entropy_from_statistic",
    "entropy_sequence",
    "EntropySequence",
    "equilibrium_discrepancy",
    "exact_block_size_distribution",
    "expected_cod",
    "expected_projection_entropy",
    "FeatureAllocation",
    "gibbs_sweep",
    "GibbsState",
    "GroundSet",
    "IntersectionCache",
    "leaf_order",
    "log_predictive",
    "mean_cumulative_statistic",
    "MergeStep",
    "ModelConfig",
    "pairwise_occurrence",
    "Partitioning",
    "per_element_information",
    "project",
    "projection_entropy",
    "run_chain",
    "sample_crp_prior",
    "SampleSet",
    "subset_occurrence",
    "synthetic_clusters",
]

__version__ = "0.1.0"
