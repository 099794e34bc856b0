from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_shuffle
from rotsig.tensor_algebra import (
    RATIONAL,
    ContractError,
    TensorSeries,
    Word,
    concat_product,
    dumps,
    loads,
    pairing,
    project_level,
    shuffle_product,
    shuffle_words,
    words,
)


def series(d, order=4, kind="real-float"):
    return TensorSeries.from_dict(d, order, kind)


# words ---------------------------------------------------------------------


def test_word_roundtrip_and_order():
    assert str(Word.parse("1212")) == "1212"
    assert Word.parse("") == Word(0, 0)
    assert [str(w) for w in words(2)] == ["11", "12", "21", "22"]
    assert sorted(words(3)) == words(3)
    assert Word.parse("12") + Word.parse("21") == Word.parse("1221")


@pytest.mark.parametrize("bad", ["3", "102"])
def test_word_rejects_other_letters(bad):
    with pytest.raises(ContractError):
        Word.parse(bad)


# concatenation -----------------------------------------------------------------


def test_concat_monomials():
    out = concat_product(series({"1": 1}, 2), series({"2": 1}, 2))
    assert out.to_dict() == {"12": 1.0}


def test_concat_unit_is_identity():
    b = series({"": 2, "1": 3, "21": -1, "122": 5}, 3)
    one = TensorSeries.unit(3)
    assert concat_product(one, b) == b
    assert concat_product(b, one) == b


def test_concat_expand_by_hand():
    out = concat_product(series({"": 1, "1": 1}, 2), series({"": 1, "2": 1}, 2))
    assert out.to_dict() == {"": 1, "1": 1, "2": 1, "12": 1}


def test_concat_truncates():
    out = concat_product(series({"11": 1}, 3), series({"22": 1}, 3))
    assert out.to_dict() == {}


def test_concat_rejects_mismatch():
    with pytest.raises(ContractError):
        concat_product(series({}, 2), series({}, 3))
    with pytest.raises(ContractError):
        concat_product(series({}, 2), series({}, 2, RATIONAL))


# shuffle -------------------------------------------------------------------------


def test_shuffle_letters():
    assert shuffle_product(series({"1": 1}), series({"2": 1})).to_dict() == {"12": 1, "21": 1}


def test_shuffle_worked_example():
    a = series({"12": 1})
    assert shuffle_product(a, a).to_dict() == {"1122": 4, "1212": 2}


@pytest.mark.parametrize("w", ["", "1", "21", "1122"])
def test_shuffle_unit(w):
    assert shuffle_product(series({"": 1}), series({w: 1})).to_dict() == {w: 1}


def test_shuffle_term_counts_exhaustive():
    for p in range(0, 7):
        for q in range(0, 7 - p):
            for u in words(p):
                for v in words(q):
                    terms = shuffle_words(u, v)
                    assert sum(m for _, m in terms) == comb(p + q, p)
                    assert {str(w): m for w, m in terms} == brute_shuffle(str(u), str(v))


# pairing / projection -----------------------------------------------------------


def test_pairing_worked_example():
    s = series({"": 1, "1": 4.3, "12": 7.9, "121": -0.2})
    assert pairing(s, series({"12": 1})) == pytest.approx(7.9, abs=0)


def test_pairing_with_zero():
    assert pairing(series({"": 3, "2": 1}), series({})) == 0


def test_pairing_orthogonal_combinations():
    assert pairing(series({"12": 1, "21": 1}), series({"12": 1, "21": -1})) == 0


def test_pairing_rational_against_float():
    s = series({"11": 0.25, "22": 0.5})
    p = series({"11": Fraction(1, 3), "22": 2}, kind=RATIONAL)
    assert pairing(s, p) == pytest.approx(0.25 / 3 + 1.0)


def test_project_level_examples():
    s = series({"": 1, "12": 1, "21": 1, "1112": 1})
    assert project_level(s, 2).to_dict() == {"12": 1, "21": 1}
    assert project_level(s, 0).to_dict() == {"": 1}
    assert project_level(series({"": 1, "1": 2, "21": 3}, 2), 1).to_dict() == {"1": 2}
    with pytest.raises(ContractError):
        project_level(s, 5)


def test_series_immutable_and_zero_reads():
    s = series({"1": 1, "2": 0})
    assert s == series({"1": 1})
    assert s["22"] == 0 and s["2222222"] == 0
    with pytest.raises(ValueError):
        s.levels[1][0] = 5
    with pytest.raises(AttributeError):
        s.order = 3


def test_order_limit():
    with pytest.raises(ContractError):
        TensorSeries.zeros(13)
    with pytest.raises(ContractError):
        series({"111": 1}, 2)


# serialization ---------------------------------------------------------------------


def test_text_format_sorted_by_level_then_lex():
    s = series({"21": Fraction(-1, 2), "": 1, "2": Fraction(6, 4), "12": 3}, 2, RATIONAL)
    assert dumps(s) == "\t1/1\n2\t3/2\n12\t3/1\n21\t-1/2\n"
    assert loads(dumps(s), 2) == s


def test_text_format_float_roundtrip(rng):
    s = TensorSeries([rng.normal(size=1 << n) for n in range(4)])
    assert loads(dumps(s), 3) == s


# algebraic properties (exact rationals) --------------------------------------------

ORDER = 4
coeff = st.integers(-5, 5)


@st.composite
def rational_series(draw, order=ORDER):
    levels = [draw(st.lists(coeff, min_size=1 << n, max_size=1 << n)) for n in range(order + 1)]
    return TensorSeries(levels, RATIONAL)


@settings(max_examples=30, deadline=None)
@given(rational_series(), rational_series(), rational_series())
def test_concat_associative(a, b, c):
    assert concat_product(concat_product(a, b), c) == concat_product(a, concat_product(b, c))


@settings(max_examples=20, deadline=None)
@given(rational_series(), rational_series(), rational_series())
def test_shuffle_commutative_associative(a, b, c):
    assert shuffle_product(a, b) == shuffle_product(b, a)
    assert shuffle_product(shuffle_product(a, b), c) == shuffle_product(a, shuffle_product(b, c))


@settings(max_examples=30, deadline=None)
@given(rational_series(), rational_series(), rational_series(), coeff, coeff)
def test_pairing_bilinear(s, a, b, alpha, beta):
    lhs = pairing(s, a.scale(alpha) + b.scale(beta))
    assert lhs == alpha * pairing(s, a) + beta * pairing(s, b)


@settings(max_examples=30, deadline=None)
@given(rational_series(), rational_series(), st.integers(0, ORDER), st.integers(0, ORDER))
def test_projection_idempotent_and_orthogonal(s, p, m, n):
    assert project_level(project_level(s, m), m) == project_level(s, m)
    if m != n:
        assert pairing(project_level(s, m), project_level(p, n)) == 0
