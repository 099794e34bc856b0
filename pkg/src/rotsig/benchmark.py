"""Synthetic stroke benchmark: eight shape classes drawn with jitter and random rotation."""

import numpy as np

from .strokes import Dataset, StrokeSample

CLASSES = ("circle-ccw", "circle-cw", "M", "W", "L", "L-mirror", "hook", "hook-mirror")

_POLYS = {
    # M turns right after the first upstroke, W turns left after the first downstroke
    "M": [[(0, 0), (0, 1), (0.5, 0.4), (1, 1), (1, 0)]],
    "W": [[(0, 1), (0.25, 0), (0.5, 0.6), (0.75, 0), (1, 1)]],
    "L": [[(0, 1), (0, 0), (0.6, 0)]],
    "hook": [[(0, 1), (0, 0), (0.4, 0), (0.4, 0.3)]],
}


def _mirror(strokes):
    # reflect x and reverse traversal: endpoint distance and signed area are
    # unchanged, so only invariants of order >= 4 tell the pair apart
    return [[(-x, y) for x, y in reversed(s)] for s in reversed(strokes)]


_POLYS["L-mirror"] = _mirror(_POLYS["L"])
_POLYS["hook-mirror"] = _mirror(_POLYS["hook"])


def _densify(poly, n):
    poly = np.asarray(poly, dtype=np.float64)
    seg = np.hypot(*np.diff(poly, axis=0).T)
    s = np.concatenate([[0], np.cumsum(seg)])
    t = np.linspace(0, s[-1], n)
    return np.column_stack([np.interp(t, s, poly[:, 0]), np.interp(t, s, poly[:, 1])])


def _template(name, rng, n_points):
    if name in ("circle-ccw", "circle-cw"):
        t = rng.uniform(0, 2 * np.pi) + np.linspace(0, 2 * np.pi, n_points)
        sign = 1 if name == "circle-ccw" else -1
        return [0.5 * np.column_stack([np.cos(t), sign * np.sin(t)])]
    strokes = _POLYS[name]
    per = max(2, n_points // len(strokes))
    return [_densify(s, per) for s in strokes]


def make_sample(name, rng, jitter=0.03, sample_id=""):
    n_points = int(rng.integers(24, 48))
    strokes = _template(name, rng, n_points)
    aspect = np.diag([rng.uniform(0.8, 1.25), 1.0]) * rng.uniform(0.5, 2.0)
    theta = rng.uniform(0, 2 * np.pi)
    c, s = np.cos(theta), np.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    out = []
    for st in strokes:
        p = st @ aspect.T
        p = p + rng.normal(scale=jitter * np.ptp(p, axis=0).max(), size=p.shape)
        out.append(p @ rot.T + rng.uniform(-5, 5, size=2))
    return StrokeSample(sample_id, tuple(out), name)


def make_benchmark(n_samples=400, seed=0, jitter=0.03, split="train", classes=CLASSES):
    """``n_samples`` samples cycling through ``classes``; deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    samples = []
    for i in range(n_samples):
        name = classes[i % len(classes)]
        samples.append(make_sample(name, rng, jitter, f"{split}-{i:05d}"))
    return Dataset(samples, split)
