"""Local color contrastive descriptor pipeline.

Thin wrapper over the native module: color transforms, region histograms,
f-divergence contrast features, PCA reduction, GMM codebooks and
Fisher-vector encoding.
"""

from lccd._lccd import (
    GmmModel,
    InvalidConfigError,
    InvalidInputError,
    PcaModel,
    __version__,
    bow_encode,
    divergence,
    extract,
    fisher_vector,
    fisher_vector_raw,
    load_image,
    mean_log_likelihood,
    opponent_planes,
    opponent_ranges,
    region_histograms,
    resize,
    responsibilities,
    split_planes,
    subspace_divergence,
    write_raw_image,
)

__all__ = [
    "GmmModel",
    "InvalidConfigError",
    "InvalidInputError",
    "PcaModel",
    "__version__",
    "bow_encode",
    "divergence",
    "extract",
    "fisher_vector",
    "fisher_vector_raw",
    "load_image",
    "mean_log_likelihood",
    "opponent_planes",
    "opponent_ranges",
    "region_histograms",
    "resize",
    "responsibilities",
    "split_planes",
    "subspace_divergence",
    "write_raw_image",
]
