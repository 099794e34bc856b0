"""Rotation-invariant linear functionals on the signature.

Invariants live on even levels only. At level ``n`` the complex words
``c_w = z_{w_1} ... z_{w_n}`` with ``z_1 = x1 + i x2`` and ``z_2 = x1 - i x2``
are invariant whenever ``w`` has as many 1s as 2s; their real and imaginary
parts span the real invariant subspace, which has dimension ``C(n, n/2)``.

Part of that subspace is redundant for feature extraction: a shuffle product
of lower-level invariants evaluates to the product of their feature values.
:func:`derive_basis` separates the shuffle-derived part from genuinely new
invariants, using exact arithmetic and a fixed candidate order so the
resulting table is reproducible bit for bit.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import comb

import numpy as np

from ._exact import GaussianRational, IncrementalBasis, rank
from .tensor_algebra import (
    EXACT_COMPLEX,
    N_MAX_DEFAULT,
    RATIONAL,
    ContractError,
    TensorSeries,
    Word,
    shuffle_product,
    words,
)

TABLE_VERSION = 1
PIVOT_RULE = "first-nonzero"
NEW = "new"
SHUFFLE = "shuffle-derived"
SPAN = "span"
VARIANTS = ("new", "full")


def _check_even(level, lo=2):
    if not isinstance(level, (int, np.integer)) or level < lo or level % 2:
        raise ContractError(f"level must be an even integer >= {lo}, got {level!r}")
    return int(level)


def is_balanced(w):
    return 2 * bin(w.bits).count("1") == w.level


def enumerate_invariant_words(level):
    """Balanced words of an even level, lexicographically ordered."""
    level = _check_even(level)
    return [w for w in words(level) if is_balanced(w)]


@lru_cache(maxsize=None)
def _expand(w):
    # coefficient of x-word v in c_w: product over positions of 1 (x1) or +-i (x2)
    coeffs = []
    for v in range(1 << w.level):
        re, im = 1, 0
        for k in range(w.level):
            shift = w.level - 1 - k
            if (v >> shift) & 1:
                sign = 1 if ((w.bits >> shift) & 1) == 0 else -1
                re, im = -sign * im, sign * re
        coeffs.append(GaussianRational(re, im))
    return tuple(coeffs)


def expand_complex_word(w):
    """Expand ``c_w`` into the x-monomial basis with exact complex coefficients."""
    if not isinstance(w, Word):
        w = Word.parse(w)
    levels = [[GaussianRational(0)] * (1 << n) for n in range(w.level)]
    levels.append(list(_expand(w)))
    return TensorSeries(levels, EXACT_COMPLEX)


@dataclass(frozen=True, eq=False)
class InvariantVector:
    """Homogeneous exact-rational functional on a single even level."""

    level: int
    coefficients: TensorSeries
    label: str
    kind: str

    def __post_init__(self):
        if self.coefficients.kind != RATIONAL:
            raise ContractError("invariant coefficients must be exact rationals")
        if not self.coefficients.is_homogeneous(self.level):
            raise ContractError(f"{self.label} is not homogeneous of level {self.level}")

    @property
    def row(self):
        """Level slice as a list of Fractions (lexicographic word order)."""
        return list(self.coefficients.levels[self.level])

    def __eq__(self, other):
        return (
            isinstance(other, InvariantVector)
            and (self.level, self.label, self.kind) == (other.level, other.label, other.kind)
            and self.row == other.row
        )

    __hash__ = None


def _vector(level, row, label, kind):
    levels = [[Fraction(0)] * (1 << n) for n in range(level)] + [row]
    return InvariantVector(level, TensorSeries(levels, RATIONAL), label, kind)


def _leading_one(row):
    lead = next(x for x in row if x != 0)
    return [x / lead for x in row]


def _candidates(level):
    """Re/Im rows of every balanced c-word, in enumeration order, Re before Im."""
    out = []
    for w in enumerate_invariant_words(level):
        coeffs = _expand(w)
        out.append((f"Re(c{w})", [c.re for c in coeffs]))
        out.append((f"Im(c{w})", [c.im for c in coeffs]))
    return out


@lru_cache(maxsize=None)
def _real_span(level):
    basis = IncrementalBasis(1 << level)
    kept = []
    for label, row in _candidates(level):
        if any(x != 0 for x in row) and basis.try_add(row):
            kept.append(_vector(level, _leading_one(row), label, SPAN))
    return tuple(kept)


def real_invariant_span(level):
    """Independent subset of the Re/Im parts of all balanced c-words.

    Candidates are scanned in word order with Re before Im; a candidate is
    kept iff it raises the exact rank. Kept rows are scaled so their first
    nonzero coefficient is +1. Odd levels carry no invariants.
    """
    if isinstance(level, (int, np.integer)) and level >= 1 and level % 2:
        return []
    return list(_real_span(_check_even(level)))


@dataclass(frozen=True)
class InvariantTable:
    max_level: int
    levels: dict  # level -> tuple of InvariantVector, shuffle-derived first
    version: int = TABLE_VERSION
    pivot_rule: str = PIVOT_RULE
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def vectors(self, level=None, kind=None):
        lvls = sorted(self.levels) if level is None else [level]
        return [
            v for n in lvls for v in self.levels.get(n, ()) if kind is None or v.kind == kind
        ]

    def new(self, max_order=None):
        m = self.max_level if max_order is None else max_order
        return [v for v in self.vectors(kind=NEW) if v.level <= m]

    def shuffle_derived(self, level=None):
        return self.vectors(level, SHUFFLE)

    def features(self, order=None, variant="new"):
        """Vectors evaluated as features for the given cumulative order."""
        order = self.max_level if order is None else order
        if variant not in VARIANTS:
            raise ContractError(f"variant must be one of {VARIANTS}, got {variant!r}")
        if order > self.max_level:
            raise ContractError(f"order {order} exceeds table max_level {self.max_level}")
        if variant == "new":
            return self.new(order)
        return [v for n in range(2, order + 1, 2) for v in real_invariant_span(n)]

    def labels(self, order=None, variant="new"):
        return [v.label for v in self.features(order, variant)]

    def feature_count(self, order=None, variant="new"):
        return len(self.features(order, variant))

    def matrix(self, order=None, variant="new"):
        """Float matrix mapping flattened signature levels ``0..order`` to features."""
        order = self.max_level if order is None else order
        key = (order, variant)
        if key not in self._cache:
            vecs = self.features(order, variant)
            offsets = np.cumsum([0] + [1 << n for n in range(order + 1)])
            m = np.zeros((len(vecs), offsets[-1]))
            for r, v in enumerate(vecs):
                m[r, offsets[v.level] : offsets[v.level + 1]] = [float(x) for x in v.row]
            m.flags.writeable = False
            self._cache[key] = m
        return self._cache[key]

    def __eq__(self, other):
        if not isinstance(other, InvariantTable):
            return NotImplemented
        return (self.max_level, self.version, self.pivot_rule) == (
            other.max_level,
            other.version,
            other.pivot_rule,
        ) and {k: list(v) for k, v in self.levels.items()} == {
            k: list(v) for k, v in other.levels.items()
        }


def _lift(series, order):
    if series.order == order:
        return series
    levels = list(series.levels) + [[Fraction(0)] * (1 << n) for n in range(series.order + 1, order + 1)]
    return TensorSeries(levels, RATIONAL)


def _shuffle_many(vectors, order):
    out = _lift(vectors[0].coefficients, order)
    for v in vectors[1:]:
        out = shuffle_product(out, _lift(v.coefficients, order))
    return out


def _generators(lower):
    if isinstance(lower, InvariantTable):
        return lower.vectors(kind=NEW)
    return [v for v in lower if v.kind == NEW]


def shuffle_closure(level, lower):
    """Independent shuffle products of lower-level invariants landing on ``level``.

    Products of two or more new invariants (with repetition) whose levels add
    up to ``level`` are scanned in lexicographic order of their factor
    indices; a product is kept iff it raises the exact rank. Products of
    shuffle-derived vectors add nothing, since those are already products of
    new ones.
    """
    level = _check_even(level)
    gens = [g for g in _generators(lower) if g.level < level]
    basis = IncrementalBasis(1 << level)
    kept = []
    for k in range(2, level // 2 + 1):
        for combo in combinations_with_replacement(range(len(gens)), k):
            factors = [gens[i] for i in combo]
            if sum(f.level for f in factors) != level:
                continue
            row = list(_shuffle_many(factors, level).levels[level])
            if basis.try_add(row):
                label = "*".join(f.label for f in factors)
                kept.append(_vector(level, row, label, SHUFFLE))
    return kept


def derive_basis(max_level, n_max=N_MAX_DEFAULT):
    """Build the invariant table up to an even ``max_level``.

    Per level: keep the independent shuffle products of lower invariants, then
    extend by Re/Im c-word candidates (enumeration order, Re before Im) that
    raise the exact rank. The extension vectors are scaled to a leading +1
    and labelled ``I1, I2, ...`` consecutively across levels.
    """
    max_level = _check_even(max_level)
    if max_level > n_max:
        raise ContractError(f"max_level {max_level} exceeds the limit {n_max}")
    levels = {}
    gens = []
    counter = 0
    for n in range(2, max_level + 1, 2):
        derived = shuffle_closure(n, gens)
        basis = IncrementalBasis(1 << n)
        for v in derived:
            basis.try_add(v.row)
        new = []
        for _, row in _candidates(n):
            if any(x != 0 for x in row) and basis.try_add(row):
                counter += 1
                new.append(_vector(n, _leading_one(row), f"I{counter}", NEW))
        levels[n] = tuple(derived + new)
        gens.extend(new)
        if len(levels[n]) != comb(n, n // 2):
            raise AssertionError(f"level {n}: {len(levels[n])} invariants, expected {comb(n, n // 2)}")
    return InvariantTable(max_level, levels)


def span_contains(vectors, row):
    """Exact membership of ``row`` in the span of ``vectors``."""
    basis = IncrementalBasis(len(row))
    for v in vectors:
        basis.try_add(v.row if isinstance(v, InvariantVector) else list(v))
    return basis.contains([Fraction(x) for x in row])


def span_rank(vectors):
    return rank([v.row if isinstance(v, InvariantVector) else list(v) for v in vectors])


def verify_span_lemma(level):
    """Check that the ``2**level`` expanded c-words (balanced or not) are a basis."""
    if not isinstance(level, (int, np.integer)) or level < 1:
        raise ContractError(f"level must be >= 1, got {level!r}")
    rows = [list(_expand(w)) for w in words(level)]
    return rank(rows) == 1 << level


# evaluation ----------------------------------------------------------------


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    labels: tuple
    order: int
    variant: str
    normalization: str = "none"
    sample_id: str = ""

    def __len__(self):
        return len(self.values)


def flatten_levels(series, order):
    return np.concatenate([np.asarray(series.levels[n], dtype=np.float64) for n in range(order + 1)])


def evaluate_features(sig, table, variant="new", order=None, normalization="none", sample_id=""):
    """Pair a signature against the table's invariants, in table order."""
    order = table.max_level if order is None else order
    series = getattr(sig, "series", sig)
    if series.order < order:
        raise ContractError(f"signature order {series.order} is below the feature order {order}")
    values = table.matrix(order, variant) @ flatten_levels(series, order)
    return FeatureVector(
        values, tuple(table.labels(order, variant)), order, variant, normalization, sample_id
    )


# table file format -----------------------------------------------------------


def dump_table(table):
    """UTF-8 text: header lines, then one block per vector."""
    out = [
        "# rotsig invariant table",
        f"version\t{table.version}",
        f"max_level\t{table.max_level}",
        f"pivot_rule\t{table.pivot_rule}",
    ]
    for n in sorted(table.levels):
        for v in table.levels[n]:
            out.append(f"vector\t{v.label}\t{v.level}\t{v.kind}")
            for w, x in zip(words(n), v.row):
                if x != 0:
                    out.append(f"{w}\t{x.numerator}/{x.denominator}")
            out.append("end")
    return "\n".join(out) + "\n"


def load_table(text):
    header = {}
    levels = {}
    cur = None
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        try:
            if parts[0] == "vector":
                _, label, lvl, kind = parts
                cur = (label, int(lvl), kind, {})
            elif parts[0] == "end":
                label, lvl, kind, coeffs = cur
                row = [Fraction(0)] * (1 << lvl)
                for w, x in coeffs.items():
                    row[w.bits] = x
                levels.setdefault(lvl, []).append(_vector(lvl, row, label, kind))
                cur = None
            elif cur is not None:
                w, x = parts
                w = Word.parse(w)
                if w.level != cur[1]:
                    raise ContractError(f"word {w} not on level {cur[1]}")
                cur[3][w] = Fraction(x)
            else:
                key, value = parts
                header[key] = value
        except (ValueError, TypeError, ContractError) as exc:
            raise ValueError(f"invariant table line {lineno}: {exc}") from None
    if cur is not None:
        raise ValueError("invariant table ends inside a vector block")
    return InvariantTable(
        int(header["max_level"]),
        {k: tuple(v) for k, v in levels.items()},
        int(header.get("version", TABLE_VERSION)),
        header.get("pivot_rule", PIVOT_RULE),
    )


def default_table(max_level=6):
    """Invariant table from the bundled golden file, derived on demand beyond it."""
    return _default_table(_check_even(max_level))


@lru_cache(maxsize=None)
def _default_table(max_level):
    from importlib.resources import files

    res = files("rotsig").joinpath("data", "invariants_6.txt")
    if max_level <= 6 and res.is_file():
        full = load_table(res.read_text(encoding="utf-8"))
        return InvariantTable(max_level, {n: v for n, v in full.levels.items() if n <= max_level})
    return derive_basis(max_level)
