"""Stroke samples, datasets and the path preprocessing applied before signatures."""

from dataclasses import dataclass, field

import numpy as np

from .signature import Polyline, as_polyline, total_variation
from .tensor_algebra import ContractError

NORMALIZATIONS = ("none", "total-variation", "bbox")
_ALIASES = {"tv": "total-variation", "total_variation": "total-variation"}


@dataclass(frozen=True)
class StrokeSample:
    id: str
    strokes: tuple
    label: object = None

    def __post_init__(self):
        strokes = tuple(as_polyline(s) for s in self.strokes)
        if not strokes:
            raise ContractError(f"sample {self.id!r} has no strokes")
        object.__setattr__(self, "strokes", strokes)


@dataclass
class Dataset:
    samples: list = field(default_factory=list)
    split: str = "unlabeled"

    def __post_init__(self):
        seen = set()
        for s in self.samples:
            if s.id in seen:
                raise ContractError(f"duplicate sample id {s.id!r}")
            seen.add(s.id)

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, i):
        return self.samples[i]

    @property
    def labels(self):
        return [s.label for s in self.samples]


def join_strokes(sample):
    """Concatenate pen-down strokes, bridging pen-up gaps with straight segments."""
    strokes = sample.strokes if isinstance(sample, StrokeSample) else [as_polyline(s) for s in sample]
    if len(strokes) == 1:
        return strokes[0]
    # Polyline drops the zero-length connectors
    return Polyline(np.vstack([s.vertices for s in strokes]))


def canonical_normalization(mode):
    mode = _ALIASES.get(mode, mode)
    if mode not in NORMALIZATIONS:
        raise ContractError(f"normalization must be one of {NORMALIZATIONS}, got {mode!r}")
    return mode


def normalize(path, mode="total-variation"):
    """Uniformly rescale a path; translation is left alone (signatures ignore it)."""
    mode = canonical_normalization(mode)
    path = as_polyline(path)
    if mode == "none":
        return path
    if path.segment_count == 0:
        raise ContractError(f"cannot apply {mode} normalization to a single-vertex path")
    if mode == "total-variation":
        scale = total_variation(path)
    else:
        scale = float(np.max(np.ptp(path.vertices, axis=0)))
    return Polyline(path.vertices / scale)
