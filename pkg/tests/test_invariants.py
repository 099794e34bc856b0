import itertools
from fractions import Fraction
from importlib.resources import files
from math import comb

import numpy as np
import pytest

from conftest import brute_expand, brute_shuffle, close, random_polyline
from rotsig._exact import GaussianRational, rank, rref
from rotsig.invariants import (
    InvariantTable,
    default_table,
    derive_basis,
    dump_table,
    enumerate_invariant_words,
    evaluate_features,
    expand_complex_word,
    load_table,
    real_invariant_span,
    shuffle_closure,
    span_contains,
    span_rank,
    verify_span_lemma,
)
from rotsig.signature import endpoint_distance_sq, rotate, signature, signed_area
from rotsig.tensor_algebra import ContractError, pairing, words


def float_rows(vectors):
    return np.array([[float(x) for x in v.row] for v in vectors])


def balanced(n):
    return ["".join(w) for w in itertools.product("12", repeat=n) if w.count("1") == w.count("2")]


def oracle_real_rows(n):
    xs = ["".join(w) for w in itertools.product("12", repeat=n)]
    rows = []
    for z in balanced(n):
        e = brute_expand(z)
        rows.append([e[x].real for x in xs])
        rows.append([e[x].imag for x in xs])
    return np.array(rows)


def oracle_shuffle(r1, r2, n1, n2):
    xs1 = ["".join(w) for w in itertools.product("12", repeat=n1)]
    xs2 = ["".join(w) for w in itertools.product("12", repeat=n2)]
    out = {}
    for u, a in zip(xs1, r1):
        for v, b in zip(xs2, r2):
            if a and b:
                for w, m in brute_shuffle(u, v).items():
                    out[w] = out.get(w, 0) + m * a * b
    xs = ["".join(w) for w in itertools.product("12", repeat=n1 + n2)]
    return np.array([out.get(x, 0) for x in xs], dtype=float)


# exact helpers --------------------------------------------------------------------


def test_gaussian_rational_field_ops():
    a, b = GaussianRational(1, 2), GaussianRational(Fraction(1, 3), -1)
    assert complex(a * b) == pytest.approx(complex(1, 2) * complex(1 / 3, -1))
    assert complex(a / b) == pytest.approx(complex(1, 2) / complex(1 / 3, -1))
    assert (a / b) * b == a
    assert a - a == 0 and not (a - a)


def test_rref_deterministic_first_nonzero_pivot():
    rows = [[0, 2, 4], [1, 1, 1], [1, 3, 5]]
    red, piv = rref([[Fraction(x) for x in r] for r in rows])
    assert piv == [0, 1]
    assert red == [[1, 0, -1], [0, 1, 2]]
    assert rank([[Fraction(0)] * 3]) == 0


# enumeration / expansion ---------------------------------------------------------------


def test_enumerate_words():
    assert [str(w) for w in enumerate_invariant_words(2)] == ["12", "21"]
    assert [str(w) for w in enumerate_invariant_words(4)] == ["1122", "1212", "1221", "2112", "2121", "2211"]
    assert [str(w) for w in enumerate_invariant_words(6)] == balanced(6)
    assert len(enumerate_invariant_words(6)) == 20


@pytest.mark.parametrize("bad", [0, 1, 3, -2])
def test_enumerate_rejects_odd_or_nonpositive(bad):
    with pytest.raises(ContractError):
        enumerate_invariant_words(bad)


def test_expand_c12_c21():
    c12 = expand_complex_word("12").to_dict()
    assert {k: complex(v) for k, v in c12.items()} == {"11": 1, "12": -1j, "21": 1j, "22": 1}
    c21 = expand_complex_word("21").to_dict()
    assert {k: complex(v) for k, v in c21.items()} == {"11": 1, "12": 1j, "21": -1j, "22": 1}


def test_expand_single_letter():
    assert {k: complex(v) for k, v in expand_complex_word("1").to_dict().items()} == {"1": 1, "2": 1j}


@pytest.mark.parametrize("n", [3, 4, 5])
def test_expand_matches_complex_oracle(n):
    for w in words(n):
        got = expand_complex_word(w)
        exp = brute_expand(str(w))
        assert all(complex(got[x]) == exp[str(x)] for x in words(n))


# spans and dimensions ---------------------------------------------------------------------


def test_real_span_level2_is_i1_i2():
    span = real_invariant_span(2)
    assert [v.label for v in span] == ["Re(c12)", "Im(c12)"]
    assert [v.coefficients.to_dict() for v in span] == [{"11": 1, "22": 1}, {"12": 1, "21": -1}]


@pytest.mark.parametrize("n", [2, 4, 6])
def test_real_span_dimension(n):
    span = real_invariant_span(n)
    assert len(span) == comb(n, n // 2)
    assert np.linalg.matrix_rank(oracle_real_rows(n)) == len(span)
    # same space as the oracle rows
    both = np.vstack([oracle_real_rows(n), float_rows(span)])
    assert np.linalg.matrix_rank(both) == len(span)
    assert all(next(x for x in v.row if x != 0) == 1 for v in span)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_odd_levels_have_no_invariants(n):
    assert real_invariant_span(n) == []
    assert not any(w.count("1") == w.count("2") for w in map("".join, itertools.product("12", repeat=n)))


def test_shuffle_closure_level2_empty():
    assert shuffle_closure(2, derive_basis(2)) == []


def test_shuffle_closure_level4():
    table = derive_basis(2)
    closure = shuffle_closure(4, table)
    assert [v.label for v in closure] == ["I1*I1", "I1*I2", "I2*I2"]
    i1, i2 = [list(map(float, v.row)) for v in table.new()]
    oracle = np.array([oracle_shuffle(a, b, 2, 2) for a, b in [(i1, i1), (i1, i2), (i2, i2)]])
    np.testing.assert_array_equal(float_rows(closure), oracle)


def test_shuffle_closure_level6_rank():
    table = derive_basis(4)
    gens = {v.label: list(map(float, v.row)) for v in table.new()}
    prods = []
    for a in ("I1", "I2"):
        for b in ("I3", "I4", "I5"):
            prods.append(oracle_shuffle(gens[a], gens[b], 2, 4))
    for combo in itertools.combinations_with_replacement(("I1", "I2"), 3):
        ab = oracle_shuffle(gens[combo[0]], gens[combo[1]], 2, 2)
        prods.append(oracle_shuffle(list(ab), gens[combo[2]], 4, 2))
    expected = np.linalg.matrix_rank(np.array(prods))
    closure = shuffle_closure(6, table)
    assert len(closure) == expected == 10
    assert np.linalg.matrix_rank(np.vstack([prods, float_rows(closure)])) == expected


# derive_basis --------------------------------------------------------------------------------


def test_derive_basis_level2_matches_i1_i2():
    t = derive_basis(2)
    assert [v.label for v in t.new()] == ["I1", "I2"]
    assert [v.coefficients.to_dict() for v in t.new()] == [{"11": 1, "22": 1}, {"12": 1, "21": -1}]


@pytest.mark.parametrize("max_level,new_counts", [(2, [2]), (4, [2, 3]), (6, [2, 3, 10])])
def test_derive_basis_counts_and_span(max_level, new_counts):
    t = derive_basis(max_level)
    for n, k in zip(range(2, max_level + 1, 2), new_counts):
        vecs = t.vectors(n)
        assert len(t.vectors(n, "new")) == k
        assert len(vecs) == comb(n, n // 2) == span_rank(vecs)
        full = real_invariant_span(n)
        assert span_rank(list(vecs) + full) == len(full)


def test_labels_are_consecutive():
    t = derive_basis(6)
    assert [v.label for v in t.new()] == [f"I{k}" for k in range(1, 16)]


def test_derive_basis_rejects_bad_levels():
    for bad in (3, 0, 10):
        with pytest.raises(ContractError):
            derive_basis(bad)


def test_new_vectors_have_leading_plus_one():
    for v in derive_basis(6).new():
        assert next(x for x in v.row if x != 0) == 1


def test_golden_table_matches_derivation():
    golden = files("rotsig").joinpath("data", "invariants_6.txt").read_text(encoding="utf-8")
    assert dump_table(derive_basis(6)) == golden


def test_table_roundtrip():
    t = derive_basis(6)
    assert load_table(dump_table(t)) == t


def test_table_parse_error_has_line():
    with pytest.raises(ValueError, match="line 3"):
        load_table("version\t1\nmax_level\t2\nvector\tI1\ttwo\tnew\n")


def test_default_table_restricts_golden():
    t = default_table(4)
    assert t.max_level == 4 and sorted(t.levels) == [2, 4]
    assert t.new() == derive_basis(4).new()


def test_span_lemma():
    assert all(verify_span_lemma(n) for n in (1, 2, 3, 4))
    with pytest.raises(ContractError):
        verify_span_lemma(0)


def test_span_lemma_matrix_level1():
    rows = [[complex(x) for x in expand_complex_word(w).levels[1]] for w in ("1", "2")]
    assert rows == [[1, 1j], [1, -1j]]


# evaluation ------------------------------------------------------------------------------------


@pytest.fixture(scope="module")
def table():
    return derive_basis(6)


def test_feature_counts(table):
    assert [table.feature_count(o, "new") for o in (2, 4, 6)] == [2, 5, 15]
    assert [table.feature_count(o, "full") for o in (2, 4, 6)] == [2, 8, 28]


def test_unit_segment_features(table):
    f = evaluate_features(signature([(0, 0), (1, 0)], 2), table, "new", order=2)
    assert f.labels == ("I1", "I2")
    np.testing.assert_allclose(f.values, [0.5, 0])


def test_triangle_features(table):
    f = evaluate_features(signature([(0, 0), (1, 0), (0, 1), (0, 0)], 2), table, "new", order=2)
    np.testing.assert_allclose(f.values, [0, 1], atol=1e-15)


def test_evaluate_requires_enough_order(table):
    with pytest.raises(ContractError):
        evaluate_features(signature([(0, 0), (1, 0)], 4), table, "new", order=6)


def test_evaluate_matches_pairing(rng, table):
    s = signature(random_polyline(rng), 6)
    f = evaluate_features(s, table, "full")
    direct = [pairing(s.series, v.coefficients) for v in table.features(6, "full")]
    np.testing.assert_allclose(f.values, direct, rtol=1e-13, atol=1e-15)


def test_rotation_invariance(rng, table):
    for _ in range(20):
        path = random_polyline(rng)
        f = evaluate_features(signature(path, 6), table, "full").values
        for theta in rng.uniform(0, 2 * np.pi, size=5):
            g = evaluate_features(signature(rotate(path, theta), 6), table, "full").values
            assert np.all(np.abs(g - f) <= 1e-9 * (1 + np.abs(f)))


def test_shuffle_derived_features_are_products(rng, table):
    by_label = {v.label: v for v in table.vectors()}
    for _ in range(10):
        s = signature(random_polyline(rng), 6).series
        value = {k: pairing(s, v.coefficients) for k, v in by_label.items()}
        assert close(value["I1"] ** 2, value["I1*I1"])
        for v in table.shuffle_derived():
            assert close(np.prod([value[f] for f in v.label.split("*")]), value[v.label])


def test_geometric_identities(rng, table):
    for _ in range(50):
        path = random_polyline(rng)
        i1, i2 = evaluate_features(signature(path, 2), table, "new", order=2).values
        assert close(i1, endpoint_distance_sq(path) / 2)
        assert close(i2, 2 * signed_area(path))


def test_span_contains():
    span = real_invariant_span(2)
    assert span_contains(span, [1, 0, 0, 1])
    assert not span_contains(span, [1, 0, 0, 0])
