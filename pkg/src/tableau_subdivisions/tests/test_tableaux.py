#################################################################################
# tableau-subdivisions Copyright (c) 2024, the tableau-subdivisions developers.
# All rights reserved.
#
# Please see the files COPYRIGHT.md and LICENSE.md for full copyright and license
# information, respectively.
#################################################################################
"""
Tests for the tableaux module
"""
from itertools import combinations
import random

import pytest

from tableau_subdivisions import tableaux as tx
from tableau_subdivisions.tableaux import Tableau


def one(col, n):
    return Tableau.one_column(col, n)


def random_tableau(rng, k, n, width):
    cols = [tuple(sorted(rng.sample(range(1, n + 1), k))) for _ in range(width)]
    return Tableau.from_columns(cols, k, n)


@pytest.mark.unit
def test_parse_tableau():
    t = tx.parse_tableau("1,2,3;2,5,6;4,7,8", 3, 8)
    assert t.columns == ((1, 2, 4), (2, 5, 7), (3, 6, 8))
    assert t.rows == ((1, 2, 3), (2, 5, 6), (4, 7, 8))
    assert tx.parse_tableau("1;3", 2, 5).columns == ((1, 3),)
    assert tx.parse_tableau("1,2,3;2,5,6;4,7,8", 3, 8).to_text() == "1,2,3;2,5,6;4,7,8"


@pytest.mark.unit
@pytest.mark.parametrize(
    "text,k,n,row,column",
    [
        ("2;1", 2, 4, 2, 1),
        ("1,2;3", 2, 4, 2, None),
        ("1;9", 2, 5, 2, 1),
        ("2,1;3,4", 2, 4, 1, 2),
    ],
)
def test_parse_tableau_errors(text, k, n, row, column):
    with pytest.raises(tx.TableauValidationError) as excinfo:
        tx.parse_tableau(text, k, n)
    assert excinfo.value.row == row
    assert excinfo.value.column == column


@pytest.mark.unit
def test_parse_tableau_wrong_row_count():
    with pytest.raises(tx.TableauValidationError):
        tx.parse_tableau("1;2;3", 2, 4)
    with pytest.raises(tx.TableauValidationError):
        tx.parse_tableau("1;x", 2, 4)


@pytest.mark.unit
def test_tableau_model():
    t = Tableau(k=2, n=4, columns=[(1, 4), (2, 3)])
    assert t == Tableau(k=2, n=4, columns=[(1, 3), (2, 4)])
    assert Tableau.empty(3, 7).rows == ((), (), ())
    assert str(Tableau.empty(3, 7)) == "1"
    assert t.to_json() == '{"columns":[[1,3],[2,4]],"k":2,"n":4}'
    with pytest.raises(ValueError):
        Tableau(k=3, n=2)
    with pytest.raises(ValueError):
        Tableau(k=2, n=4, columns=[(1, 2, 3)])


@pytest.mark.unit
def test_union():
    t = tx.union(one((3, 4, 7), 7), one((4, 6, 7), 7))
    assert t.rows == ((3, 4), (4, 6), (7, 7))
    assert t.columns == ((3, 4, 7), (4, 6, 7))
    assert tx.union(one((1, 3), 5), one((2, 4), 5)).columns == ((1, 3), (2, 4))
    assert tx.union(t, Tableau.empty(3, 7)) == t
    with pytest.raises(tx.UsageError):
        tx.union(one((1, 3), 5), one((1, 3), 6))


@pytest.mark.unit
def test_quotient():
    t = tx.union(one((3, 4, 7), 7), one((4, 6, 7), 7))
    assert tx.quotient(t, one((4, 6, 7), 7)) == one((3, 4, 7), 7)
    assert tx.quotient(t, t).is_empty()
    with pytest.raises(tx.NotAFactorError) as excinfo:
        tx.quotient(one((1, 3), 5), one((2, 4), 5))
    assert excinfo.value.row == 1


@pytest.mark.unit
def test_quotient_not_semistandard():
    # rows (1,2),(2,3) minus (1),(3) leaves the column (2,2)
    t = Tableau.from_columns([(1, 2), (2, 3)], 2, 4)
    with pytest.raises(tx.NotAFactorError):
        tx.quotient(t, one((1, 3), 4))


@pytest.mark.unit
def test_union_quotient_inverse():
    rng = random.Random(3)
    for _ in range(50):
        s = random_tableau(rng, 3, 7, rng.randint(0, 3))
        t = random_tableau(rng, 3, 7, rng.randint(0, 3))
        assert tx.quotient(tx.union(s, t), s) == t
        assert tx.is_factor(s, tx.union(s, t))


@pytest.mark.unit
def test_reduce():
    assert tx.reduce(one((2, 3), 5)).is_empty()
    assert tx.reduce(one((3, 4, 7), 7)) == one((3, 4, 7), 7)
    padded = tx.union(one((3, 4, 7), 7), one((4, 5, 6), 7))
    assert tx.reduce(padded) == one((3, 4, 7), 7)
    assert tx.trivial_multiplicities(padded) == {4: 1}
    with pytest.raises(tx.UsageError):
        tx.trivial_tableau(6, 3, 7)


@pytest.mark.unit
def test_reduce_idempotent():
    rng = random.Random(5)
    for _ in range(100):
        t = random_tableau(rng, rng.randint(2, 4), 8, rng.randint(0, 4))
        assert tx.reduce(tx.reduce(t)) == tx.reduce(t)


@pytest.mark.unit
def test_equivalent():
    t23 = tx.fundamental_tableau(2, 3, 3, 7)
    t24 = tx.fundamental_tableau(2, 4, 3, 7)
    assert t23.columns == ((3, 4, 6),)
    assert t24.columns == ((4, 5, 7),)
    s = one((3, 4, 7), 7)
    assert tx.equivalent(s, tx.union(t23, t24))
    assert tx.padding_equivalent(s, tx.union(t23, t24))
    assert tx.equivalent(s, s)
    assert not tx.equivalent(one((1, 3), 5), one((1, 4), 5))
    assert not tx.padding_equivalent(one((1, 3), 5), one((1, 4), 5))


@pytest.mark.unit
def test_equivalent_matches_padding_search():
    rng = random.Random(11)
    for _ in range(60):
        k, n = rng.randint(2, 3), rng.randint(4, 6)
        s = random_tableau(rng, k, n, rng.randint(0, 2))
        t = random_tableau(rng, k, n, rng.randint(0, 2))
        assert tx.equivalent(s, t) == tx.padding_equivalent(s, t)
        padded = tx.union(s, tx.trivial_tableau(rng.randint(1, n - k + 1), k, n))
        assert tx.equivalent(s, padded)


@pytest.mark.unit
@pytest.mark.parametrize(
    "col,k,n,tag,ij",
    [
        ((4, 6, 7), 3, 7, tx.ColumnTag.fundamental, (1, 4)),
        ((2, 3, 4), 3, 7, tx.ColumnTag.trivial, (None, None)),
        ((1, 2, 7), 3, 7, tx.ColumnTag.frozen_wrap, (None, None)),
        ((1, 3, 6), 3, 7, tx.ColumnTag.generic, (None, None)),
        ((1, 3), 2, 5, tx.ColumnTag.fundamental, (1, 1)),
    ],
)
def test_classify_column(col, k, n, tag, ij):
    cls = tx.classify_column(col, k, n)
    assert cls.tag == tag
    assert (cls.i, cls.j) == ij


@pytest.mark.unit
def test_fundamental_columns():
    for k, n in [(2, 5), (3, 7), (4, 9)]:
        indices = list(tx.fundamental_indices(k, n))
        assert len(indices) == (k - 1) * (n - k)
        for i, j in indices:
            col = tx.fundamental_column(i, j, k, n)
            assert set(col) == set(range(j, j + k + 1)) - {i + j}
            cls = tx.classify_column(col, k, n)
            if cls.tag == tx.ColumnTag.fundamental:
                assert (cls.i, cls.j) == (i, j)
    with pytest.raises(tx.UsageError):
        tx.fundamental_column(3, 1, 3, 7)


@pytest.mark.unit
def test_fundamental_decomposition():
    dec = tx.fundamental_decomposition(one((1, 3), 5))
    assert dec.c == {(1, 1): 1}
    assert dec.v == (1, 0, 0)
    dec = tx.fundamental_decomposition(one((3, 4, 7), 7))
    assert dec.c == {(2, 3): 1, (2, 4): 1}
    assert len(dec.v) == 8
    assert dec.v[4 + 2] == 1 and dec.v[4 + 3] == 1
    assert tx.fundamental_decomposition(one((2, 3, 4), 7)).c == {}


@pytest.mark.unit
def test_fundamental_decomposition_sound_and_additive():
    rng = random.Random(7)
    for _ in range(150):
        k = rng.randint(2, 4)
        n = rng.randint(k + 1, 9)
        s = random_tableau(rng, k, n, rng.randint(0, 2))
        t = random_tableau(rng, k, n, rng.randint(0, 2))
        ds, dt = tx.fundamental_decomposition(s), tx.fundamental_decomposition(t)
        both = tx.fundamental_decomposition(tx.union(s, t))
        assert both.v == tuple(a + b for a, b in zip(ds.v, dt.v))
        assert tx.padding_equivalent(both.union(), tx.union(s, t), bound=8)


@pytest.mark.unit
def test_decomposition_model_validation():
    with pytest.raises(ValueError):
        tx.FundamentalDecomposition(k=2, n=5, c={(2, 1): 1})
    assert tx.FundamentalDecomposition(k=2, n=5, c={(1, 2): 0}).c == {}


@pytest.mark.unit
def test_root():
    t = tx.power(one((1, 3), 5), 2)
    assert tx.root(t) == (one((1, 3), 5), 2)
    assert tx.root(one((3, 4, 7), 7)) == (one((3, 4, 7), 7), 1)
    mixed = Tableau.from_columns([(1, 3), (1, 3), (1, 4)], 2, 5)
    assert tx.root(mixed) == (mixed, 1)
    with pytest.raises(tx.UsageError):
        tx.root(Tableau.empty(2, 5))


@pytest.mark.unit
def test_frozen_factor():
    t = Tableau.from_columns([(1, 2, 7), (3, 4, 7)], 3, 7)
    frozen, rest = tx.frozen_factor(t)
    assert frozen.columns == ((1, 2, 7),)
    assert rest.columns == ((3, 4, 7),)


@pytest.mark.unit
def test_weakly_separated():
    assert tx.weakly_separated((3, 4, 7), (4, 6, 7))
    assert not tx.weakly_separated((1, 3), (2, 4))
    assert tx.weakly_separated((1, 3), (1, 3))
    assert tx.weakly_separated((1, 4), (2, 3))
    assert not tx.weakly_separated((1, 3, 5), (2, 4, 5))
    # {5, 1} is a cyclic interval
    assert tx.weakly_separated((1, 5), (2, 3))


@pytest.mark.unit
def test_ws_column_decomposition():
    t = Tableau.from_columns([(1, 3), (1, 4)], 2, 5)
    assert tx.ws_column_decomposition(t) == [(1, 3), (1, 4)]
    t = tx.union(one((3, 4, 7), 7), one((4, 6, 7), 7))
    assert tx.ws_column_decomposition(t) == [(3, 4, 7), (4, 6, 7)]
    t = tx.parse_tableau("1,2;3,4", 2, 4)
    assert tx.ws_column_decomposition(t) == [(1, 4), (2, 3)]
    assert tx.ws_column_decomposition(Tableau.empty(2, 4)) == []


@pytest.mark.unit
def test_ws_column_decomposition_unique_for_two_rows():
    rng = random.Random(13)
    for _ in range(80):
        n = rng.randint(4, 8)
        t = random_tableau(rng, 2, n, rng.randint(1, 4))
        cols = tx.ws_column_decomposition(t)
        assert cols is not None
        assert Tableau.from_columns(cols, 2, n) == t
        assert all(tx.weakly_separated(a, b) for a, b in combinations(cols, 2))


@pytest.mark.unit
def test_choose_decomposition(caplog):
    t = Tableau.from_columns([(1, 2, 5), (3, 4, 6)], 3, 6)
    other = [(1, 3, 5), (2, 4, 6)]
    solutions = [[(1, 2, 5), (3, 4, 6)], other]
    with caplog.at_level("WARNING", logger="tableau_subdivisions.tableaux"):
        assert tx.choose_decomposition(t, solutions) == [(1, 2, 5), (3, 4, 6)]
    assert "2 weakly separated column decompositions" in caplog.text
    assert tx.choose_decomposition(t, [other]) == other

    t = tx.parse_tableau("1,2;3,4", 2, 4)
    with pytest.raises(tx.AmbiguousDecompositionError) as excinfo:
        tx.choose_decomposition(t, [[(1, 3), (2, 4)], [(1, 4), (2, 3)]])
    assert len(excinfo.value.solutions) == 2
    assert tx.choose_decomposition(t, [[(1, 4), (2, 3)]]) == [(1, 4), (2, 3)]


@pytest.mark.unit
def test_nonfrozen_prime_k2():
    assert tx.nonfrozen_prime_k2(one((1, 3), 5))
    assert not tx.nonfrozen_prime_k2(one((1, 2), 5))
    assert not tx.nonfrozen_prime_k2(one((1, 5), 5))
    assert not tx.nonfrozen_prime_k2(tx.power(one((1, 3), 5), 2))
    with pytest.raises(tx.UsageError):
        tx.nonfrozen_prime_k2(one((1, 3, 5), 5))
    primes = [c for c in combinations(range(1, 6), 2) if tx.nonfrozen_prime_k2(one(c, 5))]
    assert primes == [(1, 3), (1, 4), (2, 4), (2, 5), (3, 5)]


@pytest.mark.unit
def test_one_cyclic_gap():
    assert tx.one_cyclic_gap((3, 4, 7), 7)
    assert not tx.one_cyclic_gap((2, 5, 8), 8)
    assert not tx.one_cyclic_gap((1, 2, 8), 8)
    assert tx.is_frozen((1, 2, 8), 8)
    for k, n in [(2, 5), (3, 7), (3, 8), (4, 8)]:
        count = sum(1 for c in combinations(range(1, n + 1), k) if tx.one_cyclic_gap(c, n))
        assert 2 * count == (k - 1) * n * (n - k - 1)
