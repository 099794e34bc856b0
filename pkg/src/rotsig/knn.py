"""Euclidean k-nearest-neighbour classifier with a deterministic tie rule."""

import warnings

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_features, check_matching_dims


class KNNClassifier(ClassifierMixin, BaseEstimator):
    """Majority vote among the ``k`` closest training points.

    Neighbours at equal distance are taken in training order; vote ties go
    to the smallest label. With ``standardize=True`` every feature is
    shifted and scaled by the training-set mean and standard deviation
    (constant features are left unscaled).
    """

    def __init__(self, k=1, standardize=False):
        self.k = k
        self.standardize = standardize

    def fit(self, X, y):
        X = check_features(X)
        y = np.asarray(y)
        if len(X) == 0:
            raise ValueError("training set is empty")
        if len(y) != len(X):
            raise ValueError(f"{len(X)} samples but {len(y)} labels")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.standardize:
            self.mean_ = X.mean(axis=0)
            sd = X.std(axis=0)
            self.scale_ = np.where(sd > 0, sd, 1.0)
        else:
            self.mean_ = np.zeros(X.shape[1])
            self.scale_ = np.ones(X.shape[1])
        self.X_ = (X - self.mean_) / self.scale_
        self.y_ = y
        self.classes_ = np.unique(y)
        self.n_features_in_ = X.shape[1]
        return self

    def _k(self):
        if self.k > len(self.X_):
            warnings.warn(f"k={self.k} exceeds the training size; using k={len(self.X_)}", stacklevel=3)
            return len(self.X_)
        return self.k

    def kneighbors(self, X):
        check_is_fitted(self, "X_")
        X = check_features(X)
        check_matching_dims(self.n_features_in_, X)
        Z = (X - self.mean_) / self.scale_
        # explicit differences keep equal distances exactly equal
        d2 = np.empty((len(Z), len(self.X_)))
        for lo in range(0, len(Z), 256):
            diff = Z[lo : lo + 256, None, :] - self.X_[None, :, :]
            d2[lo : lo + 256] = np.einsum("ijk,ijk->ij", diff, diff)
        k = self._k()
        idx = np.argsort(d2, axis=1, kind="stable")[:, :k]
        return np.sqrt(np.take_along_axis(d2, idx, axis=1)), idx

    def predict(self, X):
        _, idx = self.kneighbors(X)
        # classes_ is sorted, so argmax picks the smallest label among tied votes
        codes = np.searchsorted(self.classes_, self.y_)
        votes = np.zeros((len(idx), len(self.classes_)), dtype=int)
        for j in range(idx.shape[1]):
            np.add.at(votes, (np.arange(len(idx)), codes[idx[:, j]]), 1)
        return self.classes_[np.argmax(votes, axis=1)]


def knn_classify(train_X, train_y, test_X, k=1, standardize=False, test_y=None):
    """Fit on the training features and predict the test set.

    Returns ``(predictions, error_rate)``; the error rate is ``None`` when no
    test labels are given.
    """
    clf = KNNClassifier(k=k, standardize=standardize).fit(train_X, train_y)
    pred = clf.predict(test_X)
    err = None
    if test_y is not None:
        err = float(np.mean(pred != np.asarray(test_y)))
    return pred, err
