import itertools

import numpy as np
import pytest


def random_polyline(rng, max_segments=8):
    """2..max_segments+1 vertices with coordinates in [-1, 1]."""
    n = int(rng.integers(1, max_segments + 1)) + 1
    return rng.uniform(-1, 1, size=(n, 2))


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * (1 + abs(b))


def brute_shuffle(u, v):
    """Shuffle of two letter strings by choosing the positions of ``u``."""
    n = len(u) + len(v)
    out = {}
    for pos in itertools.combinations(range(n), len(u)):
        w, iu, iv = [], iter(u), iter(v)
        for k in range(n):
            w.append(next(iu) if k in pos else next(iv))
        key = "".join(w)
        out[key] = out.get(key, 0) + 1
    return out


def brute_expand(zword):
    """Coefficients of c_w on x-words via complex numbers."""
    out = {}
    for xs in itertools.product("12", repeat=len(zword)):
        c = 1 + 0j
        for z, x in zip(zword, xs):
            c *= 1 if x == "1" else (1j if z == "1" else -1j)
        out["".join(xs)] = c
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
