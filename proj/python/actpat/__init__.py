"""Statistical-feature activity pattern pipeline."""

from ._actpat import (
    ContingencyTable,
    CvReport,
    Dataset,
    Embedding,
    IgEntry,
    IgReport,
    Metrics,
    Model,
    PipelineError,
    __version__,
    axis_statistics,
    compute_metrics,
    contingency,
    cross_validate,
    entropy,
    feature_names,
    fit,
    information_gain,
    information_gain_of,
    load_study,
    load_uci,
    mdl_discretize,
    stratified_folds,
    synth_dataset,
    transfer,
    tsne,
)

__all__ = [
    "ContingencyTable",
    "CvReport",
    "Dataset",
    "Embedding",
    "IgEntry",
    "IgReport",
    "Metrics",
    "Model",
    "PipelineError",
    "__version__",
    "axis_statistics",
    "compute_metrics",
    "contingency",
    "cross_validate",
    "entropy",
    "feature_names",
    "fit",
    "information_gain",
    "information_gain_of",
    "load_study",
    "load_uci",
    "mdl_discretize",
    "stratified_folds",
    "synth_dataset",
    "transfer",
    "tsne",
]
