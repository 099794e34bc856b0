"""Quick invariant/property checks runnable from an installed package."""

from importlib.resources import files
from math import comb

import numpy as np

from .invariants import (
    default_table,
    derive_basis,
    dump_table,
    evaluate_features,
    real_invariant_span,
    verify_span_lemma,
)
from .signature import (
    brute_force_signature,
    chen_concat,
    endpoint_distance_sq,
    rotate,
    signature,
    signed_area,
)
from .tensor_algebra import TensorSeries, pairing, shuffle_product, words


def _close(a, b, tol=1e-9):
    return abs(a - b) <= tol * (1 + abs(b))


def _random_path(rng, max_segments=8):
    return rng.uniform(-1, 1, size=(int(rng.integers(2, max_segments + 2)), 2))


def check_shuffle_identity(rng, n_paths=5):
    monos = [(n, TensorSeries.from_dict({w: 1}, 4)) for n in range(1, 4) for w in words(n)]
    for _ in range(n_paths):
        s = signature(_random_path(rng), 4).series
        for p, a in monos:
            for q, b in monos:
                if p + q > 4:
                    continue
                ab = shuffle_product(a, b)
                if not _close(pairing(s, a) * pairing(s, b), pairing(s, ab)):
                    return False
    return True


def check_chen(rng):
    p, q = _random_path(rng), _random_path(rng)
    whole = signature(np.vstack([p, q[1:] - q[0] + p[-1]]), 5).series
    parts = chen_concat(signature(p, 5), signature(q, 5)).series
    return all(np.allclose(a, b, rtol=1e-12, atol=1e-14) for a, b in zip(whole.levels, parts.levels))


def check_oracle(rng):
    path = _random_path(rng, 4)
    exact = signature(path, 3).series
    errs = []
    for steps in (500, 1000):
        approx = brute_force_signature(path, 3, steps)
        errs.append(max(np.max(np.abs(a - b)) for a, b in zip(exact.levels, approx.levels)))
    return errs[1] < 1e-2 and errs[0] / errs[1] >= 1.8


def check_geometry(rng):
    for _ in range(10):
        path = _random_path(rng)
        s = signature(path, 2)
        i1 = s["11"] + s["22"]
        i2 = s["12"] - s["21"]
        if not (_close(i1, endpoint_distance_sq(path) / 2) and _close(i2, 2 * signed_area(path))):
            return False
    return True


def check_dimensions():
    ok = all(len(real_invariant_span(n)) == comb(n, n // 2) for n in (2, 4, 6))
    ok &= all(real_invariant_span(n) == [] for n in (1, 3, 5))
    return ok and all(verify_span_lemma(n) for n in (1, 2, 3))


def check_rotation(rng):
    table = default_table(6)
    for _ in range(5):
        path = _random_path(rng)
        f = evaluate_features(signature(path, 6), table, "full").values
        g = evaluate_features(signature(rotate(path, rng.uniform(0, 2 * np.pi)), 6), table, "full").values
        if not np.all(np.abs(f - g) <= 1e-9 * (1 + np.abs(f))):
            return False
    return True


def check_golden_table():
    golden = files("rotsig").joinpath("data", "invariants_6.txt").read_text(encoding="utf-8")
    return dump_table(derive_basis(6)) == golden


def check_counts():
    t = default_table(6)
    return [t.feature_count(o, "new") for o in (2, 4, 6)] == [2, 5, 15] and [
        t.feature_count(o, "full") for o in (2, 4, 6)
    ] == [2, 8, 28]


CHECKS = {
    "shuffle identity": check_shuffle_identity,
    "chen identity": check_chen,
    "euler oracle agreement": check_oracle,
    "geometric identities": check_geometry,
    "invariant dimensions": check_dimensions,
    "rotation invariance": check_rotation,
    "golden invariant table": check_golden_table,
    "feature counts": check_counts,
}


def run(seed=0):
    """Run every check; returns a list of ``(name, passed)``."""
    results = []
    for name, fn in CHECKS.items():
        rng = np.random.default_rng(seed)
        try:
            ok = bool(fn(rng) if fn.__code__.co_argcount else fn())
        except Exception:  # a crash is a failed check, not a selftest crash
            ok = False
        results.append((name, ok))
    return results

