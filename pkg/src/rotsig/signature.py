"""Piecewise-linear curves and their truncated signatures."""

import hashlib
from dataclasses import dataclass

import numpy as np

from .tensor_algebra import (
    N_MAX_DEFAULT,
    REAL,
    ContractError,
    TensorSeries,
    check_order,
    concat_product,
)


class Polyline:
    """Ordered 2D vertex list; consecutive duplicate vertices are dropped."""

    __slots__ = ("_v",)

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ContractError(f"vertices must have shape (m, 2), got {v.shape}")
        if len(v) == 0:
            raise ContractError("a polyline needs at least one vertex")
        if not np.all(np.isfinite(v)):
            raise ContractError("vertices must be finite")
        keep = np.ones(len(v), dtype=bool)
        keep[1:] = np.any(v[1:] != v[:-1], axis=1)
        v = v[keep].copy()
        v.flags.writeable = False
        self._v = v

    @property
    def vertices(self):
        return self._v

    @property
    def increments(self):
        return np.diff(self._v, axis=0)

    @property
    def segment_count(self):
        return len(self._v) - 1

    def __len__(self):
        return len(self._v)

    def reversed(self):
        return Polyline(self._v[::-1])

    def translated(self, offset):
        return Polyline(self._v + np.asarray(offset, dtype=np.float64))

    def then(self, other):
        """Concatenate ``other`` after this path, translating it onto our endpoint."""
        other = as_polyline(other)
        shifted = other.vertices - other.vertices[0] + self._v[-1]
        return Polyline(np.vstack([self._v, shifted[1:]]))

    def __eq__(self, other):
        return isinstance(other, Polyline) and np.array_equal(self._v, other._v)

    __hash__ = None

    def __repr__(self):
        return f"Polyline({self._v.tolist()})"


def as_polyline(path):
    return path if isinstance(path, Polyline) else Polyline(path)


@dataclass(frozen=True)
class Signature:
    series: TensorSeries
    source_hash: str = ""

    @property
    def order(self):
        return self.series.order

    def __getitem__(self, w):
        return self.series[w]


def segment_exp(delta, order):
    """Tensor exponential of the level-1 element ``delta[0] x1 + delta[1] x2``."""
    order = check_order(order)
    d = np.asarray(delta, dtype=np.float64).reshape(2)
    levels = [np.ones(1)]
    for k in range(1, order + 1):
        # delta^{(x)k} / k! built incrementally: (prev / k) (x) d
        levels.append(np.multiply.outer(levels[-1], d).ravel() / k)
    return TensorSeries(levels, REAL)


def _path_hash(vertices, order):
    h = hashlib.sha1(np.ascontiguousarray(vertices).tobytes())
    h.update(str(order).encode())
    return h.hexdigest()[:16]


def _chen_fold(increments, order):
    levels = [np.ones(1)] + [np.zeros(1 << n) for n in range(1, order + 1)]
    for d in increments:
        # right-multiply the running signature by exp(d)
        powers = [np.ones(1)]
        for k in range(1, order + 1):
            powers.append(np.multiply.outer(powers[-1], d).ravel() / k)
        new = [levels[0]]
        for n in range(1, order + 1):
            acc = levels[n] + powers[n]
            for i in range(1, n):
                acc = acc + np.multiply.outer(levels[i], powers[n - i]).ravel()
            new.append(acc)
        levels = new
    return levels


def signature(path, order, n_max=N_MAX_DEFAULT):
    """Signature of a polyline, Chen products taken in traversal order.

    ``S = exp(d_1) . exp(d_2) . ... . exp(d_m)`` where ``d_k`` is the k-th
    segment displacement, so the earliest segment sits leftmost.
    """
    path = as_polyline(path)
    order = check_order(order, n_max)
    levels = _chen_fold(path.increments, order)
    return Signature(TensorSeries(levels, REAL), _path_hash(path.vertices, order))


def brute_force_signature(path, order, steps_per_segment):
    """Euler-discretized iterated integrals; independent check for :func:`signature`.

    Each segment is sampled at ``steps_per_segment`` equal steps and the
    running values obey ``S_{w i}(t+dt) = S_{w i}(t) + S_w(t) dX^i(t)``,
    i.e. a left-point Riemann-Stieltjes sum of the nested integrals.
    """
    path = as_polyline(path)
    order = check_order(order)
    if steps_per_segment < 1:
        raise ContractError("steps_per_segment must be >= 1")
    if order == 0 or path.segment_count == 0:
        levels = [np.ones(1)] + [np.zeros(1 << n) for n in range(1, order + 1)]
        return TensorSeries(levels, REAL)
    dx = np.repeat(path.increments / steps_per_segment, steps_per_segment, axis=0)
    # prev[t] holds S_w(t) for all words of the current level before step t
    prev = np.ones((len(dx), 1))
    levels = [np.ones(1)]
    for _ in range(order):
        incr = (prev[:, :, None] * dx[:, None, :]).reshape(len(dx), -1)
        run = np.cumsum(incr, axis=0)
        levels.append(run[-1].copy())
        prev = np.vstack([np.zeros((1, run.shape[1])), run[:-1]])
    return TensorSeries(levels, REAL)


def chen_concat(a, b):
    """Signature of the concatenated path, from the signatures of its parts."""
    if a.order != b.order:
        raise ContractError(f"order mismatch: {a.order} vs {b.order}")
    return Signature(concat_product(a.series, b.series))


def rotate(path, theta):
    """Apply ``[[cos, sin], [-sin, cos]]`` to every vertex."""
    path = as_polyline(path)
    c, s = np.cos(theta), np.sin(theta)
    r = np.array([[c, s], [-s, c]])
    return Polyline(path.vertices @ r.T)


def endpoint_distance_sq(path):
    path = as_polyline(path)
    d = path.vertices[-1] - path.vertices[0]
    return float(d @ d)


def signed_area(path):
    """Shoelace area of the curve closed by the chord from end back to start."""
    v = as_polyline(path).vertices
    x, y = v[:, 0], v[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    return float(0.5 * np.sum(x * yn - xn * y))


def total_variation(path):
    return float(np.sum(np.hypot(*as_polyline(path).increments.T)))
