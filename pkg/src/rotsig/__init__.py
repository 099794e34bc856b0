"""Rotation-invariant features of planar curves from truncated path signatures."""

from .estimators import SignatureInvariants
from .features import extract_features
from .invariants import (
    FeatureVector,
    InvariantTable,
    InvariantVector,
    default_table,
    derive_basis,
    evaluate_features,
    real_invariant_span,
    shuffle_closure,
)
from .knn import KNNClassifier, knn_classify
from .signature import Polyline, Signature, brute_force_signature, rotate, signature
from .strokes import Dataset, StrokeSample, join_strokes, normalize
from .tensor_algebra import ContractError, TensorSeries, Word

__version__ = "0.1.0"

__all__ = [
    "ContractError",
    "Dataset",
    "FeatureVector",
    "InvariantTable",
    "InvariantVector",
    "KNNClassifier",
    "Polyline",
    "Signature",
    "SignatureInvariants",
    "StrokeSample",
    "TensorSeries",
    "Word",
    "brute_force_signature",
    "default_table",
    "derive_basis",
    "evaluate_features",
    "extract_features",
    "join_strokes",
    "knn_classify",
    "normalize",
    "real_invariant_span",
    "rotate",
    "shuffle_closure",
    "signature",
]
