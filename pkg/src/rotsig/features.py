"""Batch feature extraction and the feature CSV / sidecar formats."""

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .invariants import VARIANTS, default_table, evaluate_features
from .signature import rotate, signature
from .strokes import canonical_normalization, join_strokes, normalize
from .tensor_algebra import ContractError

ROTATION_GENERATOR = "philox4x64-10(key=seed, counter=index)"


def rotation_angle(seed, index):
    """Uniform angle in [0, 2*pi) for sample ``index``; Philox keyed by ``seed``."""
    bitgen = np.random.Philox(key=int(seed) % (1 << 128), counter=int(index))
    return float(np.random.Generator(bitgen).random() * 2 * np.pi)


@dataclass(frozen=True)
class SampleError:
    sample_id: str
    index: int
    message: str


def sample_features(sample, table, order, variant="new", normalization="total-variation", angle=None):
    path = normalize(join_strokes(sample), normalization)
    if angle is not None:
        path = rotate(path, angle)
    sig = signature(path, order)
    return evaluate_features(sig, table, variant, order, normalization, getattr(sample, "id", ""))


def extract_features(
    dataset,
    order,
    variant="new",
    normalization="total-variation",
    rotate_seed=None,
    table=None,
    n_jobs=None,
):
    """Invariant features for every sample, in input order.

    Returns ``(features, errors)``; a sample that fails is reported in
    ``errors`` and skipped rather than aborting the batch.
    """
    if variant not in VARIANTS:
        raise ContractError(f"variant must be one of {VARIANTS}, got {variant!r}")
    normalization = canonical_normalization(normalization)
    table = default_table(order) if table is None else table
    if order > table.max_level:
        raise ContractError(f"order {order} exceeds table max_level {table.max_level}")
    table.matrix(order, variant)  # warm the shared cache before threads read it

    def work(item):
        i, sample = item
        angle = None if rotate_seed is None else rotation_angle(rotate_seed, i)
        try:
            return sample_features(sample, table, order, variant, normalization, angle)
        except (ContractError, ValueError, FloatingPointError) as exc:
            return SampleError(getattr(sample, "id", str(i)), i, str(exc))

    items = list(enumerate(dataset))
    if n_jobs and n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            results = list(pool.map(work, items))
    else:
        results = [work(it) for it in items]
    feats = [r for r in results if not isinstance(r, SampleError)]
    errors = [r for r in results if isinstance(r, SampleError)]
    return feats, errors


def features_to_csv(features, labels, dataset=None):
    """CSV with columns ``id,label,<invariant labels...>``; floats in ``repr`` form."""
    by_id = {s.id: s.label for s in dataset} if dataset is not None else {}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "label", *labels])
    for f in features:
        label = by_id.get(f.sample_id)
        w.writerow([f.sample_id, "" if label is None else label, *(repr(float(v)) for v in f.values)])
    return buf.getvalue()


def read_feature_csv(text):
    """Inverse of :func:`features_to_csv`: ``(ids, labels, X, feature_names)``."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0][:2] != ["id", "label"]:
        raise ValueError("feature CSV must start with an 'id,label,...' header")
    names = rows[0][2:]
    ids, labels, values = [], [], []
    for lineno, row in enumerate(rows[1:], 2):
        if not row:
            continue
        if len(row) != len(names) + 2:
            raise ValueError(f"line {lineno}: expected {len(names) + 2} fields, got {len(row)}")
        ids.append(row[0])
        lab = row[1]
        try:
            lab = int(lab)
        except ValueError:
            lab = lab or None
        labels.append(lab)
        try:
            values.append([float(x) for x in row[2:]])
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric feature value") from None
    X = np.array(values, dtype=np.float64).reshape(len(values), len(names))
    return ids, labels, X, names


def run_metadata(order, variant, normalization, rotate_seed, table, n_samples, errors):
    return {
        "order": order,
        "variant": variant,
        "normalization": canonical_normalization(normalization),
        "rotate_seed": rotate_seed,
        "rotation_generator": ROTATION_GENERATOR if rotate_seed is not None else None,
        "table_version": table.version,
        "pivot_rule": table.pivot_rule,
        "feature_labels": table.labels(order, variant),
        "n_samples": n_samples,
        "errors": [{"id": e.sample_id, "index": e.index, "message": e.message} for e in errors],
    }


def dump_metadata(meta):
    return json.dumps(meta, indent=2, sort_keys=True) + "\n"
