"""Binary quantum phase classification from randomized Pauli measurements.

Pipeline: measurement records -> per-qubit classical shadows -> Pauli X/Z
expectation features -> PCA + angle normalization -> two-qubit variational
circuit -> SPSA-trained hinge-loss classifier -> metrics and a resource
efficiency report.
"""

__version__ = "0.1.0"

from .circuit import CircuitParams, circuit_metrics, run_circuit, z_mean_exact, z_mean_sampled
from .data import Dataset, GenConfig, OutcomeSymbol, Sample, generate_synthetic, parse_dataset, write_dataset
from .errors import ConfigError, DataError, NumericalError, ShadowVqcError
from .features import FeaturePipelineModel, pipeline_apply, pipeline_fit
from .shadows import ExpectationTable, shadow_features
from .training import (
    SplitSpec,
    SpsaConfig,
    TrainReport,
    classification_metrics,
    efficiency_score,
    train_evaluate,
)

__all__ = [
    "CircuitParams",
    "ConfigError",
    "DataError",
    "Dataset",
    "ExpectationTable",
    "FeaturePipelineModel",
    "GenConfig",
    "NumericalError",
    "OutcomeSymbol",
    "Sample",
    "ShadowVqcError",
    "SplitSpec",
    "SpsaConfig",
    "TrainReport",
    "circuit_metrics",
    "classification_metrics",
    "efficiency_score",
    "generate_synthetic",
    "parse_dataset",
    "pipeline_apply",
    "pipeline_fit",
    "run_circuit",
    "shadow_features",
    "train_evaluate",
    "write_dataset",
    "z_mean_exact",
    "z_mean_sampled",
    "__version__",
]
