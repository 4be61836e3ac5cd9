from credlens.ml.evaluation import (
    EvalReport,
    F1Scores,
    cross_validate,
    cross_validate_frame,
    f1_scores,
    stratified_folds,
)
from credlens.ml.features import CONFIGS, REGISTRY, FeatureConfig, FeatureVector, assemble_features
from credlens.ml.learners import KINDS, ModelSpec, TrainedModel, fit, predict

__all__ = [
    "CONFIGS",
    "EvalReport",
    "F1Scores",
    "FeatureConfig",
    "FeatureVector",
    "KINDS",
    "ModelSpec",
    "REGISTRY",
    "TrainedModel",
    "assemble_features",
    "cross_validate",
    "cross_validate_frame",
    "f1_scores",
    "fit",
    "predict",
    "stratified_folds",
]
