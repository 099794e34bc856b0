"""Input validation shared by the estimators and the CLI."""

import numpy as np
from sklearn.utils.validation import check_array

from .signature import Polyline
from .strokes import StrokeSample
from .tensor_algebra import ContractError


def check_features(X):
    return check_array(X, dtype=np.float64, ensure_2d=True, ensure_min_samples=0)


def check_matching_dims(expected, X):
    if X.shape[1] != expected:
        raise ValueError(f"feature dimension mismatch: fitted on {expected}, got {X.shape[1]}")


def check_even_order(order):
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)) or order < 2 or order % 2:
        raise ContractError(f"order must be an even integer >= 2, got {order!r}")
    return int(order)


def as_sample(x, index=0):
    """Coerce one input item to a :class:`StrokeSample`.

    Accepts a sample, a polyline, an ``(m, 2)`` array, or a list of strokes.
    """
    if isinstance(x, StrokeSample):
        return x
    if isinstance(x, Polyline):
        return StrokeSample(str(index), (x,))
    if isinstance(x, np.ndarray) and x.ndim == 2:
        return StrokeSample(str(index), (x,))
    if isinstance(x, (list, tuple)) and x:
        first = x[0]
        if isinstance(first, Polyline) or np.ndim(first) == 2:
            return StrokeSample(str(index), tuple(x))
        return StrokeSample(str(index), (np.asarray(x, dtype=np.float64),))
    raise ContractError(f"cannot interpret item {index} as a path or stroke list")


def as_samples(X):
    if hasattr(X, "samples"):
        return list(X.samples)
    return [as_sample(x, i) for i, x in enumerate(X)]
