import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permcover.counting import ball_size
from permcover.cover_solver import (
    EXHAUSTED,
    PROVEN,
    build_instance,
    f_exact,
    greedy_cover,
    harmonic_cap,
    identity_stabilizer,
    lex_rank,
    split_bound_fails,
    verify_cover,
)
from permcover.perm_core import EnumerationCapExceeded, PermSet, all_perms_array, covering_radius

from . import oracles


@pytest.mark.parametrize("n,s", [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2)])
def test_f_exact_matches_subset_enumeration(n, s):
    res = f_exact(n, s)
    assert res.status == PROVEN
    assert res.size == oracles.min_cover_size(n, s)


@pytest.mark.parametrize("n,s", [(5, 1), (5, 2)])
def test_f_exact_matches_milp(n, s):
    pytest.importorskip("scipy")
    assert f_exact(n, s).size == oracles.cover_ilp(n, s)


@pytest.mark.parametrize("n,s", [(3, 2), (4, 2), (5, 2), (4, 1), (5, 1)])
def test_witness_really_covers(n, s):
    res = f_exact(n, s)
    assert len(res.witness) == res.size
    assert covering_radius(res.witness) <= n - s


def test_search_without_pruning_aids_agrees():
    for n, s in [(4, 2), (4, 1), (5, 2)]:
        plain = f_exact(n, s, split_bound=False, symmetry=False)
        assert plain.size == f_exact(n, s).size


def test_budget_exhaustion_reports_best_known():
    res = f_exact(5, 2, budget=3)
    assert res.status == EXHAUSTED
    assert res.size == len(greedy_cover(5, 2))
    assert verify_cover(res.witness, 2)
    assert res.lower_bound >= 4


def test_cap():
    with pytest.raises(EnumerationCapExceeded):
        f_exact(7, 2)


@pytest.mark.parametrize("n", range(1, 6))
def test_greedy_is_a_cover_within_harmonic_cap(n):
    for s in range(1, n + 1):
        G = greedy_cover(n, s)
        assert verify_cover(G, s)
        lower = math.ceil(math.factorial(n) / ball_size(n, n - s))
        assert lower <= len(G) <= harmonic_cap(n, s)


def test_greedy_is_deterministic():
    assert greedy_cover(5, 3) == greedy_cover(5, 3)


def test_verify_cover_rejects_short_sets():
    assert not verify_cover(PermSet.of([(1, 2, 3)]), 2)
    assert verify_cover(PermSet.of([(1, 2, 3), (2, 3, 1), (3, 1, 2)]), 1)
    with pytest.raises(ValueError):
        verify_cover(PermSet.of([(1, 2, 3)]), 0)


def test_instance_balls_have_expected_size():
    inst = build_instance(5, 2)
    assert all(bin(mask).count("1") == ball_size(5, 3) for mask in inst.balls)
    assert bin(inst.even).count("1") == 60


def test_lex_rank_is_row_index():
    A = all_perms_array(5)
    assert np.array_equal(lex_rank(A), np.arange(120))


def test_stabilizer_maps_are_isometries_fixing_identity():
    n = 4
    table = identity_stabilizer(n)
    A = all_perms_array(n)
    assert table.shape == (2 * math.factorial(n), math.factorial(n))
    for row in table[::5]:
        assert row[0] == 0
        assert sorted(row) == list(range(24))
        for i, j in [(1, 2), (3, 17), (5, 23)]:
            assert (A[i] != A[j]).sum() == (A[row[i]] != A[row[j]]).sum()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**24 - 1), st.integers(1, 3))
def test_split_bound_is_sound(seed, left):
    # whenever the bound claims infeasibility, no choice of `left` centres covers everything
    inst = build_instance(4, 2)
    rng = np.random.default_rng(seed)
    uncovered = 0
    for e in rng.choice(24, size=8, replace=False):
        uncovered |= 1 << int(e)
    usable = inst.full
    if split_bound_fails(inst.balls, uncovered, usable, left, inst.even):
        import itertools

        for combo in itertools.combinations(range(24), left):
            cov = 0
            for c in combo:
                cov |= inst.balls[c]
            assert uncovered & ~cov
