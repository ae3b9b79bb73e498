import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permcover.latin import (
    LatinViolation,
    PartialTransversal,
    cayley_table,
    count_transversals,
    is_row_latin,
    latin_corpus,
    longest_partial_transversal,
    parse_square,
    random_latin_square,
    rows_as_permset,
    rows_covering_radius,
    transversals,
    validate,
)
from permcover.perm_core import hamming

from . import oracles

# exhaustive counts over all column permutations (see tests/oracles.py)
CAYLEY_TRANSVERSALS = {1: 1, 2: 0, 3: 3, 4: 0, 5: 15, 6: 0}


def test_validate_examples():
    assert validate([[1, 2], [2, 1]]).n == 2
    with pytest.raises(LatinViolation) as err:
        validate([[1, 2], [1, 2]])
    assert (err.value.kind, err.value.index, err.value.symbol) == ("column", 1, 1)
    with pytest.raises(LatinViolation):
        validate([[1, 3], [2, 1]])
    with pytest.raises(LatinViolation):
        validate([[1, 2, 3], [2, 3, 1]])


def test_cayley_small():
    assert cayley_table(2).cells == ((1, 2), (2, 1))
    assert cayley_table(3).cells == ((1, 2, 3), (2, 3, 1), (3, 1, 2))
    for n in range(1, 9):
        validate(cayley_table(n).cells)


@pytest.mark.parametrize("n,count", sorted(CAYLEY_TRANSVERSALS.items()))
def test_cayley_transversal_counts(n, count):
    L = cayley_table(n)
    assert count_transversals(L) == count
    assert oracles.transversal_count(L.cells) == count


def test_odd_cayley_has_transversal_even_does_not():
    assert count_transversals(cayley_table(7), limit=1) == 1
    for n in (2, 4, 6):
        assert count_transversals(cayley_table(n)) == 0


def test_transversal_limit():
    assert count_transversals(cayley_table(5), limit=4) == 4


def test_longest_partial_transversal_examples():
    assert len(longest_partial_transversal(cayley_table(4))) == 3
    assert len(longest_partial_transversal(cayley_table(5))) == 5
    assert len(longest_partial_transversal(validate([[1]]))) == 1


def test_partial_transversal_rejects_clash():
    with pytest.raises(ValueError):
        PartialTransversal(((1, 1, 1), (2, 2, 1)))


def test_rows_as_permset():
    S = rows_as_permset(cayley_table(2))
    assert [p.image for p in S] == [(1, 2), (2, 1)]
    for n in range(1, 6):
        rows = list(rows_as_permset(cayley_table(n)))
        assert len(rows) == n
        for a in range(n):
            for b in range(a + 1, n):
                assert hamming(rows[a], rows[b]) == n


def test_rows_covering_radius_examples():
    assert rows_covering_radius(cayley_table(4)) == 2
    assert rows_covering_radius(cayley_table(6)) == 4
    assert rows_covering_radius(cayley_table(2)) == 0
    assert rows_covering_radius(cayley_table(3)) == 2
    assert rows_covering_radius(cayley_table(1)) == 0


def test_is_row_latin():
    assert is_row_latin([[1, 2], [1, 2]])
    assert not is_row_latin([[1, 1], [2, 2]])
    assert is_row_latin(cayley_table(5).cells)


def test_parse_round_trip():
    L = cayley_table(4)
    assert parse_square("# cyclic\n" + L.to_text()) == L
    with pytest.raises(LatinViolation):
        parse_square("1 2\n1 2\n")


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_random_square_is_latin_and_seeded(n):
    a = random_latin_square(n, random.Random(11))
    b = random_latin_square(n, random.Random(11))
    assert a == b
    validate(a.cells)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_transversals_match_far_permutations(n, seed):
    # a transversal is a permutation disagreeing with every row everywhere but
    # one, the column it takes from that row; count both sides by brute force
    L = random_latin_square(n, random.Random(seed))
    rows = [p.image for p in rows_as_permset(L)]
    count = count_transversals(L)
    assert count == oracles.transversal_count(L.cells)
    as_perms = set()
    for cols in transversals(L):
        # the transversal read as a permutation: column -> symbol
        image = [0] * n
        for r, c in enumerate(cols):
            image[c] = L.cells[r][c]
        as_perms.add(tuple(image))
    assert len(as_perms) == count
    for q in as_perms:
        assert all(oracles.dist(q, row) == n - 1 for row in rows)
    exact = sum(1 for q in oracles.perms(n) if all(oracles.dist(q, row) == n - 1 for row in rows))
    assert exact == count


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_random_squares_have_near_transversals_and_radius(n, seed):
    L = random_latin_square(n, random.Random(seed))
    assert len(longest_partial_transversal(L)) >= n - 1
    r = rows_covering_radius(L)
    assert r >= n - 2
    if count_transversals(L, limit=1) == 0:
        assert r == n - 2
    else:
        assert r == n - 1


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.data())
def test_row_latin_radius_at_least_n_minus_2(n, data):
    rows = [data.draw(st.permutations(range(1, n + 1))) for _ in range(n)]
    assert is_row_latin(rows)
    from permcover.perm_core import PermSet, covering_radius

    assert covering_radius(PermSet.of([tuple(r) for r in rows], n=n)) >= n - 2


def test_corpus_is_reproducible():
    a = latin_corpus(5, 3, seed=4)
    b = latin_corpus(5, 3, seed=4)
    assert a == b
    assert len(a) == 5 + 4 * 3
