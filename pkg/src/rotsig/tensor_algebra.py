"""Truncated free tensor algebra over the two letters 1 and 2.

A word of level ``n`` is packed as ``(level, bits)`` with letter 1 -> bit 0
and letter 2 -> bit 1, most significant bit first, so lexicographic order on
words coincides with integer order on ``bits`` within a level. A
:class:`TensorSeries` keeps one dense coefficient array of length ``2**n``
per level ``n = 0..order``; the entry at index ``bits`` is the coefficient of
that word.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from ._exact import GaussianRational

N_MAX_DEFAULT = 8
N_MAX_HARD = 12

REAL = "real-float"
COMPLEX = "complex-float"
RATIONAL = "exact-rational"
EXACT_COMPLEX = "exact-complex"
SCALAR_KINDS = (REAL, COMPLEX, RATIONAL, EXACT_COMPLEX)

_DTYPES = {REAL: np.float64, COMPLEX: np.complex128, RATIONAL: object, EXACT_COMPLEX: object}


class ContractError(ValueError):
    """Raised when an operation's preconditions are violated."""


@dataclass(frozen=True, order=True)
class Word:
    level: int
    bits: int

    def __post_init__(self):
        if self.level < 0 or not 0 <= self.bits < (1 << self.level):
            raise ContractError(f"invalid word encoding (level={self.level}, bits={self.bits})")

    @classmethod
    def from_letters(cls, letters):
        bits = 0
        for a in letters:
            a = int(a)
            if a not in (1, 2):
                raise ContractError(f"letter must be 1 or 2, got {a!r}")
            bits = (bits << 1) | (a - 1)
        return cls(len(letters), bits)

    @classmethod
    def parse(cls, s):
        """``"1212"`` -> Word; the empty string is the empty word."""
        return cls.from_letters([int(c) for c in s])

    @property
    def letters(self):
        return tuple(((self.bits >> (self.level - 1 - k)) & 1) + 1 for k in range(self.level))

    def __add__(self, other):
        return Word(self.level + other.level, (self.bits << other.level) | other.bits)

    def __len__(self):
        return self.level

    def __str__(self):
        return "".join(str(a) for a in self.letters)


def words(level):
    """All words of the given level in lexicographic order."""
    return [Word(level, b) for b in range(1 << level)]


def check_order(order, n_max=N_MAX_HARD):
    if not isinstance(order, (int, np.integer)) or isinstance(order, bool) or order < 0:
        raise ContractError(f"order must be a non-negative integer, got {order!r}")
    if order > n_max:
        raise ContractError(f"order {order} exceeds the maximum of {n_max}")
    return int(order)


def _convert(value, kind):
    if kind == RATIONAL:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (float, np.floating)):
            return Fraction(float(value))
        return Fraction(value)
    if kind == EXACT_COMPLEX:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return GaussianRational(Fraction(value.real), Fraction(value.imag))
        return GaussianRational(value)
    return value


def _zeros(n, kind):
    if kind == RATIONAL:
        a = np.empty(n, dtype=object)
        a[:] = [Fraction(0)] * n
        return a
    if kind == EXACT_COMPLEX:
        a = np.empty(n, dtype=object)
        a[:] = [GaussianRational(0)] * n
        return a
    return np.zeros(n, dtype=_DTYPES[kind])


class TensorSeries:
    """Immutable truncated series with dense per-level coefficients."""

    __slots__ = ("order", "kind", "levels")

    def __init__(self, levels, kind=REAL):
        if kind not in SCALAR_KINDS:
            raise ContractError(f"unknown scalar kind {kind!r}")
        levels = list(levels)
        if not levels:
            raise ContractError("a series needs at least the level-0 slice")
        order = check_order(len(levels) - 1)
        frozen = []
        for n, lv in enumerate(levels):
            if kind in (RATIONAL, EXACT_COMPLEX):
                a = np.empty(1 << n, dtype=object)
                vals = list(np.asarray(lv, dtype=object).ravel())
                if len(vals) != 1 << n:
                    raise ContractError(f"level {n} needs {1 << n} coefficients, got {len(vals)}")
                a[:] = [_convert(v, kind) for v in vals]
            else:
                a = np.array(lv, dtype=_DTYPES[kind]).ravel()
                if a.size != 1 << n:
                    raise ContractError(f"level {n} needs {1 << n} coefficients, got {a.size}")
            a.flags.writeable = False
            frozen.append(a)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "levels", tuple(frozen))

    def __setattr__(self, name, value):
        raise AttributeError("TensorSeries is immutable")

    # constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, order, kind=REAL):
        return cls([_zeros(1 << n, kind) for n in range(check_order(order) + 1)], kind)

    @classmethod
    def unit(cls, order, kind=REAL):
        levels = [_zeros(1 << n, kind) for n in range(check_order(order) + 1)]
        levels[0][0] = _convert(1, kind) if kind in (RATIONAL, EXACT_COMPLEX) else 1
        return cls(levels, kind)

    @classmethod
    def from_dict(cls, coeffs, order, kind=REAL):
        """Build from ``{word: value}``; words may be :class:`Word` or digit strings."""
        levels = [_zeros(1 << n, kind) for n in range(check_order(order) + 1)]
        for w, v in coeffs.items():
            if not isinstance(w, Word):
                w = Word.parse(w)
            if w.level > order:
                raise ContractError(f"word {w} has level above the truncation order {order}")
            levels[w.level][w.bits] = levels[w.level][w.bits] + _convert(v, kind)
        return cls(levels, kind)

    # access -------------------------------------------------------------

    def __getitem__(self, w):
        if not isinstance(w, Word):
            w = Word.parse(w)
        if w.level > self.order:
            return _convert(0, self.kind) if self.kind in (RATIONAL, EXACT_COMPLEX) else self.levels[0].dtype.type(0)
        return self.levels[w.level][w.bits]

    def level(self, n):
        return self.levels[n]

    def items(self):
        """Nonzero ``(word, coefficient)`` pairs sorted by (level, lexicographic)."""
        for n, lv in enumerate(self.levels):
            for b, v in enumerate(lv):
                if v != 0:
                    yield Word(n, b), v

    def to_dict(self):
        return {str(w): v for w, v in self.items()}

    def is_homogeneous(self, n):
        return all(w.level == n for w, _ in self.items())

    def astype(self, kind):
        """Convert exact kinds to float kinds (real or complex)."""
        if kind == self.kind:
            return self
        if kind == REAL:
            if self.kind == EXACT_COMPLEX or self.kind == COMPLEX:
                raise ContractError("cannot convert complex series to real")
            return TensorSeries([np.array([float(x) for x in lv]) for lv in self.levels], REAL)
        if kind == COMPLEX:
            return TensorSeries([np.array([complex(x) for x in lv]) for lv in self.levels], COMPLEX)
        if kind == RATIONAL and self.kind == REAL:
            return TensorSeries(self.levels, RATIONAL)
        if kind == EXACT_COMPLEX and self.kind in (RATIONAL, COMPLEX, REAL):
            return TensorSeries(self.levels, EXACT_COMPLEX)
        raise ContractError(f"unsupported conversion {self.kind} -> {kind}")

    def truncate(self, order):
        if order > self.order:
            raise ContractError(f"cannot truncate order {self.order} series to {order}")
        return TensorSeries(self.levels[: order + 1], self.kind)

    def real(self):
        if self.kind == EXACT_COMPLEX:
            return TensorSeries([[x.re for x in lv] for lv in self.levels], RATIONAL)
        return TensorSeries([np.real(lv) for lv in self.levels], REAL)

    def imag(self):
        if self.kind == EXACT_COMPLEX:
            return TensorSeries([[x.im for x in lv] for lv in self.levels], RATIONAL)
        return TensorSeries([np.imag(lv) for lv in self.levels], REAL)

    # linear structure ---------------------------------------------------

    def _check_compatible(self, other):
        if not isinstance(other, TensorSeries):
            raise ContractError("operand is not a TensorSeries")
        if self.order != other.order:
            raise ContractError(f"order mismatch: {self.order} vs {other.order}")
        if self.kind != other.kind:
            raise ContractError(f"scalar kind mismatch: {self.kind} vs {other.kind}")

    def __add__(self, other):
        self._check_compatible(other)
        return TensorSeries([a + b for a, b in zip(self.levels, other.levels)], self.kind)

    def __sub__(self, other):
        self._check_compatible(other)
        return TensorSeries([a - b for a, b in zip(self.levels, other.levels)], self.kind)

    def __neg__(self):
        return TensorSeries([-a for a in self.levels], self.kind)

    def scale(self, c):
        if self.kind in (RATIONAL, EXACT_COMPLEX):
            c = _convert(c, self.kind)
        return TensorSeries([a * c for a in self.levels], self.kind)

    def __eq__(self, other):
        if not isinstance(other, TensorSeries) or self.kind != other.kind:
            return NotImplemented
        n = max(self.order, other.order)
        return all(
            np.array_equal(_padded(self, k), _padded(other, k)) for k in range(n + 1)
        )

    __hash__ = None

    def __mul__(self, other):
        return concat_product(self, other)

    def __repr__(self):
        terms = ", ".join(f"{str(w) or 'ε'}: {v}" for w, v in self.items())
        return f"TensorSeries(order={self.order}, kind={self.kind}, {{{terms}}})"


def _padded(s, n):
    if n <= s.order:
        return s.levels[n]
    return _zeros(1 << n, s.kind)


def _outer(a, b):
    return np.multiply.outer(a, b).ravel()


def concat_product(a, b):
    """Truncated concatenation product: ``(a.b)[w] = sum_{w=uv} a[u] b[v]``."""
    a._check_compatible(b)
    out = []
    for n in range(a.order + 1):
        acc = _outer(a.levels[0], b.levels[n])
        for i in range(1, n + 1):
            acc = acc + _outer(a.levels[i], b.levels[n - i])
        out.append(acc)
    return TensorSeries(out, a.kind)


@lru_cache(maxsize=None)
def shuffle_words(u, v):
    """Shuffle of two words as a tuple of ``(word, multiplicity)`` pairs.

    The multiplicities add up to ``comb(len(u) + len(v), len(u))``.
    """
    if u.level == 0:
        return ((v, 1),)
    if v.level == 0:
        return ((u, 1),)
    # split off the last letter of each word: (u'a) sh (v'b) = (u' sh v'b)a + (u'a sh v')b
    ua, a = Word(u.level - 1, u.bits >> 1), Word(1, u.bits & 1)
    vb, b = Word(v.level - 1, v.bits >> 1), Word(1, v.bits & 1)
    acc = {}
    for w, m in shuffle_words(ua, v):
        k = w + a
        acc[k] = acc.get(k, 0) + m
    for w, m in shuffle_words(u, vb):
        k = w + b
        acc[k] = acc.get(k, 0) + m
    return tuple(sorted(acc.items()))


def shuffle_product(a, b):
    """Bilinear extension of the word shuffle, truncated at ``a.order``."""
    a._check_compatible(b)
    out = [_zeros(1 << n, a.kind) for n in range(a.order + 1)]
    nz_a = list(a.items())
    nz_b = list(b.items())
    for u, x in nz_a:
        for v, y in nz_b:
            if u.level + v.level > a.order:
                continue
            xy = x * y
            lv = out[u.level + v.level]
            for w, m in shuffle_words(u, v):
                lv[w.bits] = lv[w.bits] + m * xy
    return TensorSeries(out, a.kind)


def pairing(series, poly):
    """``<series, poly>`` with monomials orthonormal.

    Exact polynomials pair against float series after conversion to float.
    Words beyond either truncation read as zero.
    """
    n = min(series.order, poly.order)
    sk, pk = series.kind, poly.kind
    if sk in (REAL, COMPLEX) and pk in (RATIONAL, EXACT_COMPLEX):
        poly = poly.astype(COMPLEX if pk == EXACT_COMPLEX else REAL)
    elif pk in (REAL, COMPLEX) and sk in (RATIONAL, EXACT_COMPLEX):
        series = series.astype(COMPLEX if sk == EXACT_COMPLEX else REAL)
    if series.kind in (RATIONAL, EXACT_COMPLEX):
        total = _convert(0, series.kind)
        for k in range(n + 1):
            for x, y in zip(series.levels[k], poly.levels[k]):
                total = total + x * y
        return total
    return sum(np.dot(series.levels[k], poly.levels[k]) for k in range(n + 1))


def project_level(a, n):
    """Keep only the level-``n`` coefficients."""
    if not isinstance(n, (int, np.integer)) or not 0 <= n <= a.order:
        raise ContractError(f"level {n!r} outside 0..{a.order}")
    out = [a.levels[k] if k == n else _zeros(1 << k, a.kind) for k in range(a.order + 1)]
    return TensorSeries(out, a.kind)


def shuffle_term_count(p, q):
    return comb(p + q, p)


# text serialization ---------------------------------------------------------


def dumps(series):
    """One line per nonzero coefficient: ``word<TAB>num/den`` or ``word<TAB>float``."""
    lines = []
    for w, v in series.items():
        if series.kind == RATIONAL:
            lines.append(f"{w}\t{v.numerator}/{v.denominator}")
        elif series.kind == REAL:
            lines.append(f"{w}\t{float(v)!r}")
        else:
            raise ContractError(f"text serialization not defined for {series.kind}")
    return "".join(line + "\n" for line in lines)


def loads(text, order, kind=None):
    """Inverse of :func:`dumps`; the kind is inferred from the first value if not given."""
    coeffs = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            w, v = line.split("\t")
            if kind is None:
                kind = RATIONAL if "/" in v else REAL
            coeffs[Word.parse(w)] = Fraction(v) if kind == RATIONAL else float(v)
        except (ValueError, ContractError) as exc:
            raise ValueError(f"line {lineno}: cannot parse {line!r}: {exc}") from None
    return TensorSeries.from_dict(coeffs, order, kind or REAL)
