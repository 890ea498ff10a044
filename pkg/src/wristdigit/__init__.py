"""Wrist-motion digit recognition toolkit.

End-to-end pipeline for telling handwritten 0s from 1s using only
wrist-worn accelerometer and pitch-angle channels: seeded synthetic data,
switch-gated segmentation, time-decoupled feature extraction, PCA,
gradient-boosted trees, model selection, evaluation, and a streaming
replayer whose predictions match batch inference bit for bit.
"""

from .errors import (
    CompatibilityError,
    GridSearchError,
    LabelError,
    ModelFormatError,
    SequencingError,
    StreamOverflowError,
    ToolkitError,
    TraceFormatError,
)
from .features import (
    FEATURE_NAMES,
    N_FEATURES,
    FeatureExtractor,
    extract_features,
    extract_matrix,
    feature_names,
    integrate_trapezoid,
)
from .gbdt import GradientBoostedTrees, TrainConfig, load_model, sigmoid
from .metrics import (
    ConfusionMatrix,
    MetricsReport,
    RocCurve,
    auroc,
    classification_metrics,
    confusion,
    roc_curve,
)
from .pca import DegenerateFeatureWarning, LoadingEntry, PrincipalComponents
from .segments import CHANNELS, Dataset, ImuSample, Segment, validate_segment
from .selection import (
    GridEntry,
    GridResult,
    SplitSpec,
    baseline_config,
    default_grid,
    derive_config_seed,
    grid_search,
    kfold,
    make_grid,
    retrain_final,
    smoke_grid,
    split_dataset,
    split_indices,
)
from .synth import GeneratorConfig, generate_corpus, generate_segment
from .trace_io import TRACE_HEADER, parse_trace_csv, write_trace_csv

__version__ = "0.1.0"

__all__ = [
    "CHANNELS",
    "CompatibilityError",
    "ConfusionMatrix",
    "Dataset",
    "DegenerateFeatureWarning",
    "FEATURE_NAMES",
    "FeatureExtractor",
    "GeneratorConfig",
    "GradientBoostedTrees",
    "GridEntry",
    "GridResult",
    "GridSearchError",
    "ImuSample",
    "LabelError",
    "LoadingEntry",
    "MetricsReport",
    "ModelFormatError",
    "N_FEATURES",
    "PrincipalComponents",
    "RocCurve",
    "Segment",
    "SequencingError",
    "SplitSpec",
    "StreamOverflowError",
    "TRACE_HEADER",
    "ToolkitError",
    "TraceFormatError",
    "TrainConfig",
    "auroc",
    "baseline_config",
    "classification_metrics",
    "confusion",
    "default_grid",
    "derive_config_seed",
    "extract_features",
    "extract_matrix",
    "feature_names",
    "generate_corpus",
    "generate_segment",
    "grid_search",
    "integrate_trapezoid",
    "kfold",
    "load_model",
    "make_grid",
    "parse_trace_csv",
    "retrain_final",
    "roc_curve",
    "sigmoid",
    "smoke_grid",
    "split_dataset",
    "split_indices",
    "write_trace_csv",
    "__version__",
]
