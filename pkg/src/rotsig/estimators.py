"""scikit-learn compatible front end for invariant signature features."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_samples, check_even_order
from .features import extract_features
from .invariants import VARIANTS, default_table
from .strokes import canonical_normalization


class SignatureInvariants(TransformerMixin, BaseEstimator):
    """Map paths (or multi-stroke samples) to rotation-invariant features.

    Inputs to ``transform`` may be a :class:`~rotsig.strokes.Dataset`, or a
    sequence whose items are ``(m, 2)`` arrays, polylines, stroke lists or
    :class:`~rotsig.strokes.StrokeSample` objects.

    Parameters
    ----------
    order : int
        Even truncation order; features of all even levels up to it are used.
    variant : {"new", "full"}
        ``"new"`` drops invariants that are shuffle products of lower ones.
    normalize : {"total-variation", "tv", "bbox", "none"}
    rotate_seed : int or None
        If set, each sample is rotated by a seeded random angle first. Only
        useful to demonstrate invariance.
    n_jobs : int or None
    """

    def __init__(self, order=4, variant="new", normalize="total-variation", rotate_seed=None, n_jobs=None):
        self.order = order
        self.variant = variant
        self.normalize = normalize
        self.rotate_seed = rotate_seed
        self.n_jobs = n_jobs

    def fit(self, X=None, y=None):
        order = check_even_order(self.order)
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        canonical_normalization(self.normalize)
        self.table_ = default_table(max(order, 2))
        self.feature_names_ = np.array(self.table_.labels(order, self.variant), dtype=object)
        self.n_features_out_ = len(self.feature_names_)
        return self

    def transform(self, X):
        check_is_fitted(self, "table_")
        samples = as_samples(X)
        feats, errors = extract_features(
            samples, self.order, self.variant, self.normalize, self.rotate_seed, self.table_, self.n_jobs
        )
        if errors:
            e = errors[0]
            raise ValueError(f"{len(errors)} sample(s) failed; first: item {e.index} ({e.message})")
        return np.array([f.values for f in feats]).reshape(len(feats), self.n_features_out_)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "table_")
        return self.feature_names_.copy()
