"""Tensor-train compression with an evolutionary search over tensor shapes.

The pipeline: pad the data into a candidate shape, decompose with
sequentially truncated SVDs under a relative error bound, and score the
shape by how much smaller the cores are than the original. A small genetic
algorithm searches the shape space; archives round-trip through a
checksummed binary container.
"""

from . import errors
from .archive import ArchiveContents, pack_archive, read_archive, unpack_archive, write_archive
from .ga import (
    GAConfig,
    GenerationRecord,
    Individual,
    SearchHistory,
    crossover,
    default_upper,
    init_population,
    mutate,
    repair_feasibility,
    run_search,
    select_parents,
    selection_probabilities,
)
from .images import load_image, resize_longest_side, save_image
from .tensor import (
    MAX_CARDINALITY,
    as_shape,
    as_tensor,
    cardinality,
    frobenius_norm,
    pad_reshape,
    reshape,
    unfold,
    unpad,
)
from .tt import (
    DecompositionReport,
    FitnessRecord,
    TTCores,
    compression_ratio,
    evaluate_shape,
    param_count,
    relative_error,
    truncated_svd,
    tt_reconstruct,
    tt_svd,
    validate_chain,
)

__version__ = "0.1.0"

__all__ = [
    "ArchiveContents",
    "DecompositionReport",
    "FitnessRecord",
    "GAConfig",
    "GenerationRecord",
    "Individual",
    "MAX_CARDINALITY",
    "SearchHistory",
    "TTCores",
    "as_shape",
    "as_tensor",
    "cardinality",
    "compression_ratio",
    "crossover",
    "default_upper",
    "errors",
    "evaluate_shape",
    "frobenius_norm",
    "init_population",
    "load_image",
    "mutate",
    "pack_archive",
    "param_count",
    "read_archive",
    "relative_error",
    "repair_feasibility",
    "reshape",
    "resize_longest_side",
    "run_search",
    "save_image",
    "select_parents",
    "selection_probabilities",
    "truncated_svd",
    "tt_reconstruct",
    "tt_svd",
    "unfold",
    "unpack_archive",
    "unpad",
    "validate_chain",
    "write_archive",
]
