"""Exact scalar helpers: Gaussian rationals and row reduction over a field."""

from fractions import Fraction


class GaussianRational:
    """Complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        if isinstance(other, complex) and other.real.is_integer() and other.imag.is_integer():
            return GaussianRational(int(other.real), int(other.imag))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


def rref(rows):
    """Reduced row echelon form of a list of rows over an exact field.

    Pivot rule: leftmost column first, first row (in current order) with a
    nonzero entry in that column. Returns ``(reduced_rows, pivot_columns)``;
    zero rows are dropped. Input rows are not modified.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    n_cols = len(m[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        for i in range(r, len(m)):
            if m[i][c] != 0:
                break
        else:
            continue
        m[r], m[i] = m[i], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for j in range(len(m)):
            if j != r and m[j][c] != 0:
                f = m[j][c]
                m[j] = [a - f * b for a, b in zip(m[j], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows):
    return len(rref(rows)[1])


class IncrementalBasis:
    """Greedy independent-subset selection in exact arithmetic.

    Keeps an echelon form of the accepted rows; ``try_add`` reduces a
    candidate against it and accepts the candidate iff the remainder is
    nonzero.
    """

    def __init__(self, n_cols):
        self.n_cols = n_cols
        self._rows = []  # (pivot column, normalized row)

    def __len__(self):
        return len(self._rows)

    def reduce(self, row):
        v = list(row)
        for c, b in self._rows:
            f = v[c]
            if f != 0:
                v = [x - f * y for x, y in zip(v, b)]
        return v

    def contains(self, row):
        return not any(x != 0 for x in self.reduce(row))

    def try_add(self, row):
        v = self.reduce(row)
        for c, x in enumerate(v):
            if x != 0:
                v = [y / x for y in v]
                # keep the stored rows fully reduced in the new pivot column
                self._rows = [
                    (pc, [a - b[c] * y for a, y in zip(b, v)] if b[c] != 0 else b)
                    for pc, b in self._rows
                ]
                self._rows.append((c, v))
                return True
        return False
