"""Brute-force reference implementations, deliberately naive and independent of the package."""
from __future__ import annotations

import itertools
import math


def perms(n):
    return list(itertools.permutations(range(1, n + 1)))


def dist(p, q):
    return sum(a != b for a, b in zip(p, q))


def ball_count(n, k):
    e = tuple(range(1, n + 1))
    return sum(1 for p in perms(n) if dist(p, e) <= k)


def crad(S, n):
    return max(min(dist(p, q) for q in S) for p in perms(n))


def min_cover_size(n, s, limit=None):
    """Smallest |S| with crad(S) <= n - s, by trying every subset in size order."""
    universe = perms(n)
    r = n - s
    near = {p: frozenset(i for i, q in enumerate(universe) if dist(p, q) <= r) for p in universe}
    everything = frozenset(range(len(universe)))
    for k in range(1, (limit or len(universe)) + 1):
        for combo in itertools.combinations(universe, k):
            if frozenset().union(*(near[p] for p in combo)) == everything:
                return k
    return None


def transversal_count(cells):
    n = len(cells)
    return sum(
        1
        for cols in itertools.permutations(range(n))
        if len({cells[i][cols[i]] for i in range(n)}) == n
    )


def far_from_all(S, n, d):
    """Number of permutations at distance >= d from every member of S."""
    return sum(1 for p in perms(n) if all(dist(p, q) >= d for q in S))


def all_perfect_matchings(n):
    return itertools.permutations(range(n))


def cover_ilp(n, s):
    """Optimal cover size from a MILP solve; cross-check only."""
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp

    universe = perms(n)
    r = n - s
    A = np.array([[1 if dist(p, q) <= r else 0 for q in universe] for p in universe])
    res = milp(
        c=np.ones(len(universe)),
        constraints=LinearConstraint(A, lb=1),
        integrality=np.ones(len(universe)),
        bounds=Bounds(0, 1),
    )
    assert res.success
    return int(round(res.fun))


def factorial(n):
    return math.factorial(n)
