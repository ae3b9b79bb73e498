"""Exact and greedy covering of S_n by Hamming balls.

Universe elements and ball centres are both indexed by the lexicographic
position of a permutation in S_n; balls are Python ints used as bitsets.
"""
from __future__ import annotations

import math
import os
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numba import njit

from .counting import ball_size, harmonic_fraction
from .perm_core import (
    EnumerationCapExceeded,
    Permutation,
    PermSet,
    all_perms_array,
    enum_cap,
)

PROVEN = "proven-optimal"
EXHAUSTED = "budget-exhausted"


def fexact_cap() -> int:
    return int(os.environ.get("PERMCOVER_FEXACT_CAP", "6"))


class BudgetExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class CoverInstance:
    n: int
    s: int
    balls: tuple[int, ...] = field(repr=False)
    b: int
    even: int = field(default=0, repr=False)

    @property
    def radius(self) -> int:
        return self.n - self.s

    @property
    def size(self) -> int:
        return len(self.balls)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def perm(self, index: int) -> Permutation:
        return Permutation.from_zero_based(all_perms_array(self.n)[index])

    def index(self, p: Permutation) -> int:
        # lexicographic rank of p
        rest = list(range(self.n))
        rank = 0
        for i, v in enumerate(p.zero_based()):
            pos = rest.index(v)
            rank += pos * math.factorial(self.n - 1 - i)
            rest.pop(pos)
        return rank

    def permset(self, indices) -> PermSet:
        return PermSet(self.n, tuple(self.perm(i) for i in indices))


@lru_cache(maxsize=8)
def _build(n: int, s: int) -> CoverInstance:
    universe = all_perms_array(n)
    radius = n - s
    rows = []
    step = max(1, (1 << 24) // (len(universe) * n))
    for start in range(0, len(universe), step):
        block = universe[start:start + step]
        close = (block[:, None, :] != universe[None, :, :]).sum(axis=2) <= radius
        packed = np.packbits(close, axis=1, bitorder="little")
        rows.extend(int.from_bytes(r.tobytes(), "little") for r in packed)
    even = 0
    for i, p in enumerate(universe):
        if _is_even(p):
            even |= 1 << i
    return CoverInstance(n, s, tuple(rows), ball_size(n, radius), even)


def _is_even(p) -> bool:
    seen = [False] * len(p)
    transpositions = 0
    for start in range(len(p)):
        j, length = start, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length:
            transpositions += length - 1
    return transpositions % 2 == 0


def build_instance(n: int, s: int, cap: int | None = None) -> CoverInstance:
    if not 1 <= s <= n:
        raise ValueError(f"need 1 <= s <= n, got n={n}, s={s}")
    cap = enum_cap() if cap is None else cap
    if n > cap:
        raise EnumerationCapExceeded(f"n={n} exceeds enumeration cap {cap}")
    return _build(n, s)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def greedy_indices(inst: CoverInstance) -> list[int]:
    uncovered = inst.full
    chosen = []
    balls = inst.balls
    while uncovered:
        best, best_gain = -1, -1
        for c, ball in enumerate(balls):
            gain = (ball & uncovered).bit_count()
            if gain > best_gain:
                best, best_gain = c, gain
        chosen.append(best)
        uncovered &= ~balls[best]
    return chosen


@lru_cache(maxsize=8)
def _members(n: int, s: int) -> np.ndarray:
    """Row c lists the indices inside ball c (balls are symmetric, so also the centres covering c)."""
    inst = _build(n, s)
    return np.array([list(_bits(ball)) for ball in inst.balls], dtype=np.int32)


@njit(cache=True)
def _tabu_cover(members, start, seed, max_steps, tenure):
    # fixed-size swap search with element weights: drop the centre whose
    # uniquely covered weight is least, add the centre covering a random
    # uncovered element with the most uncovered weight, then bump the weight
    # of everything still uncovered so long-uncovered elements get priority
    np.random.seed(seed)
    m, b = members.shape
    chosen = np.zeros(m, np.bool_)
    cnt = np.zeros(m, np.int32)
    weight = np.ones(m, np.int64)
    for c in start:
        chosen[c] = True
        for e in members[c]:
            cnt[e] += 1
    tabu = np.zeros(m, np.int64)
    for step in range(max_steps):
        unc = np.flatnonzero(cnt == 0)
        if unc.size == 0:
            return np.flatnonzero(chosen), True
        drop, drop_loss, ties = -1, np.int64(1) << 62, 0
        for r in np.flatnonzero(chosen):
            if tabu[r] > step:
                continue
            loss = 0
            for x in members[r]:
                if cnt[x] == 1:
                    loss += weight[x]
            if loss < drop_loss:
                drop, drop_loss, ties = r, loss, 1
            elif loss == drop_loss:
                ties += 1
                if np.random.randint(ties) == 0:
                    drop = r
        if drop >= 0:
            chosen[drop] = False
            for x in members[drop]:
                cnt[x] -= 1
            tabu[drop] = step + tenure
        unc = np.flatnonzero(cnt == 0)
        e = unc[np.random.randint(unc.size)]
        add, add_gain, ties = -1, np.int64(-1), 0
        for a in members[e]:
            if chosen[a] or tabu[a] > step:
                continue
            g = 0
            for x in members[a]:
                if cnt[x] == 0:
                    g += weight[x]
            if g > add_gain:
                add, add_gain, ties = a, g, 1
            elif g == add_gain:
                ties += 1
                if np.random.randint(ties) == 0:
                    add = a
        if add < 0:
            add = drop
        chosen[add] = True
        for x in members[add]:
            cnt[x] += 1
        tabu[add] = step + tenure
        for x in np.flatnonzero(cnt == 0):
            weight[x] += 1
    return np.flatnonzero(chosen), False


def shrink_cover(inst: CoverInstance, cover: list[int], seed: int = 0, steps: int | None = None) -> list[int]:
    """Try to drop one centre at a time from ``cover`` with a seeded tabu search.

    Returns the smallest cover found; it is never larger than the input.
    """
    members = _members(inst.n, inst.s)
    if steps is None:
        # a step costs about b * (b + k) operations; keep each attempt to ~1e8
        steps = max(2_000, min(50_000, 10**8 // (inst.b * (inst.b + len(cover)))))
    lower = max(1, -(-inst.size // inst.b))
    best = list(cover)
    while len(best) > lower:
        found, ok = _tabu_cover(members, np.array(best[:-1], dtype=np.int64), seed, steps, 2)
        if not ok:
            break
        best = sorted(int(c) for c in found)
    return best


def greedy_cover(n: int, s: int, cap: int | None = None) -> PermSet:
    """Max-coverage greedy; ties go to the lexicographically least centre."""
    inst = build_instance(n, s, cap)
    return inst.permset(greedy_indices(inst))


def verify_cover(S: PermSet, s: int, cap: int | None = None) -> bool:
    if len(S) == 0:
        raise ValueError("empty set cannot cover")
    inst = build_instance(S.n, s, cap)
    covered = 0
    for p in S:
        covered |= inst.balls[inst.index(p)]
    return covered == inst.full


@dataclass(frozen=True)
class CoverResult:
    n: int
    s: int
    size: int
    witness: PermSet
    status: str
    nodes_explored: int
    lower_bound: int

    @property
    def proven(self) -> bool:
        return self.status == PROVEN

    def to_text(self) -> str:
        return (
            f"status {self.status}\n"
            f"size {self.size}\n"
            f"nodes {self.nodes_explored}\n"
            f"lower_bound {self.lower_bound}\n"
            + self.witness.to_text()
        )


def split_bound_fails(balls, uncovered: int, usable: int, left: int, part: int) -> bool:
    """True when no ``left`` usable centres can cover both sides of ``uncovered`` split by ``part``.

    Exact 2-D cardinality knapsack over centre types (gain on each side).
    """
    u0, u1 = uncovered & part, uncovered & ~part
    need0, need1 = u0.bit_count(), u1.bit_count()
    types = Counter(((balls[c] & u0).bit_count(), (balls[c] & u1).bit_count()) for c in _bits(usable))
    items = np.array([(a, g, min(m, left)) for (a, g), m in sorted(types.items())], dtype=np.int64)
    return _knapsack_fails(items, left, need0, need1)


@njit(cache=True)
def _knapsack_fails(items, left, need0, need1):
    # best[j, x]: max side-1 gain using j centres with side-0 gain min(x, need0); -1 = unreachable
    best = np.full((left + 1, need0 + 1), -1, dtype=np.int64)
    best[0, 0] = 0
    for t in range(items.shape[0]):
        a, g, copies = items[t, 0], items[t, 1], items[t, 2]
        for _ in range(copies):
            for j in range(left - 1, -1, -1):
                for x in range(need0, -1, -1):
                    y = best[j, x]
                    if y < 0:
                        continue
                    nx = min(x + a, need0)
                    ny = min(y + g, need1)
                    if ny > best[j + 1, nx]:
                        best[j + 1, nx] = ny
                        if nx == need0 and ny == need1:
                            return False
    # feasible states return early above; only the zero-demand start is left
    return best[0, need0] < need1


@lru_cache(maxsize=4)
def identity_stabilizer(n: int) -> np.ndarray:
    """Isometries of (S_n, Hamming) fixing the identity, as index maps on lex ranks.

    Row g is the image of every rank under one of ``p -> a p a^-1`` or
    ``p -> a p^-1 a^-1``; shape (2 n!, n!).
    """
    universe = all_perms_array(n).astype(np.int64)
    inverses = np.argsort(universe, axis=1)
    rows = []
    for a in universe:
        a_inv = np.argsort(a)
        for source in (universe, inverses):
            rows.append(lex_rank(a[source[:, a_inv]]))
    table = np.array(rows, dtype=np.int32)
    table.setflags(write=False)
    return table


def lex_rank(perms: np.ndarray) -> np.ndarray:
    """Lexicographic rank of each 0-based row (Lehmer code)."""
    m, n = perms.shape
    rank = np.zeros(m, dtype=np.int64)
    for i in range(n - 1):
        smaller = (perms[:, i + 1:] < perms[:, i:i + 1]).sum(axis=1)
        rank += smaller * math.factorial(n - 1 - i)
    return rank


class _Search:
    """Depth-first cover search from a partial cover containing the identity.

    Each node carries a group ``H`` of isometries fixing both the chosen set
    and the excluded set.  Candidate centres for the branching element ``e``
    are taken one representative per orbit of the stabiliser of ``e`` in
    ``H``; once a representative's subtree is exhausted its whole orbit is
    excluded for later siblings.  Any cover reachable through an orbit
    member maps under that stabiliser onto one through the representative.
    """

    def __init__(self, inst: CoverInstance, budget: int, split_bound: bool, symmetry: bool):
        self.inst = inst
        self.budget = budget
        self.split_bound = split_bound
        self.nodes = 0
        self.order = "lex"
        self.table = identity_stabilizer(inst.n) if symmetry else None

    def run(self, k: int) -> list[int] | None:
        balls = self.inst.balls
        group = None if self.table is None else np.arange(len(self.table))
        return self._dfs(self.inst.full & ~balls[0], k - 1, 1, [0], group)

    def _dfs(self, uncovered, left, excluded, chosen, group) -> list[int] | None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExhausted
        if not uncovered:
            return list(chosen)
        if left == 0:
            return None
        balls = self.inst.balls
        need = uncovered.bit_count()
        if need > left * self.inst.b:
            return None
        # fail-first: uncovered element with the fewest usable centres
        allowed = ~excluded
        best_e, best_opts, best_cnt = -1, 0, -1
        for e in _bits(uncovered):
            opts = balls[e] & allowed
            cnt = opts.bit_count()
            if best_cnt < 0 or cnt < best_cnt:
                best_e, best_opts, best_cnt = e, opts, cnt
                if cnt <= 1:
                    break
        if best_cnt == 0:
            return None
        if left > 1:
            usable = _usable(balls, uncovered, allowed)
            gains = sorted(((balls[c] & uncovered).bit_count() for c in _bits(usable)), reverse=True)
            if sum(gains[:left]) < need:
                return None
            if self.split_bound and split_bound_fails(balls, uncovered, usable, left, self.inst.even):
                return None
        options = list(_bits(best_opts))
        if self.order == "gain":
            options.sort(key=lambda c: -(balls[c] & uncovered).bit_count())
        orbit_of = None
        if group is not None and len(group) > 1:
            sub = self.table[group]
            fixing_e = sub[sub[:, best_e] == best_e]
            if len(fixing_e) > 1:
                images = fixing_e[:, options]
                orbit_of = {c: images[:, j] for j, c in enumerate(options)}
        for c in options:
            if excluded >> c & 1:
                continue  # swallowed by an earlier sibling's orbit
            chosen.append(c)
            child_group = None
            if group is not None and len(group) > 1:
                child_group = self._stabilizer(group, chosen, excluded)
            found = self._dfs(uncovered & ~balls[c], left - 1, excluded, chosen, child_group)
            chosen.pop()
            if found is not None:
                return found
            if orbit_of is None:
                excluded |= 1 << c
            else:
                for d in orbit_of[c]:
                    excluded |= 1 << int(d)
        return None

    def _stabilizer(self, group: np.ndarray, chosen: list[int], excluded: int) -> np.ndarray:
        sub = self.table[group]
        size = self.inst.size
        in_chosen = np.zeros(size, dtype=bool)
        in_chosen[chosen] = True
        keep = in_chosen[sub[:, chosen]].all(axis=1)
        ex = np.fromiter(_bits(excluded), dtype=np.int64)
        if len(ex):
            in_ex = np.zeros(size, dtype=bool)
            in_ex[ex] = True
            keep &= in_ex[sub[:, ex]].all(axis=1)
        return group[keep]


def _usable(balls, uncovered: int, allowed: int) -> int:
    # centres covering some uncovered element are exactly the union of their balls
    mask = 0
    for e in _bits(uncovered):
        mask |= balls[e]
    return mask & allowed


def f_exact(
    n: int,
    s: int,
    budget: int = 10**9,
    cap: int | None = None,
    split_bound: bool | None = None,
    symmetry: bool = True,
) -> CoverResult:
    """Minimum cover of S_n by balls of radius n - s, by iterative deepening.

    ``budget`` caps search nodes over all depths.  ``split_bound`` toggles the
    even/odd knapsack bound; by default it is on for radius <= 3, where balls
    are lopsided between the two parity classes.  ``symmetry`` enables orbit
    pruning under the isometries that fix the identity.  The incumbent is the
    greedy cover shrunk by a seeded local search, so depths at or above its
    size are never searched.
    """
    cap = fexact_cap() if cap is None else cap
    if n > cap:
        raise EnumerationCapExceeded(f"n={n} exceeds f_exact cap {cap}")
    inst = build_instance(n, s, cap=max(cap, n))
    incumbent = shrink_cover(inst, greedy_indices(inst))
    k = max(1, -(-inst.size // inst.b))
    if split_bound is None:
        split_bound = inst.radius <= 3
    search = _Search(inst, budget, split_bound, symmetry and n <= 6)
    while k < len(incumbent):
        try:
            found = search.run(k)
        except BudgetExhausted:
            return CoverResult(n, s, len(incumbent), inst.permset(incumbent), EXHAUSTED, search.nodes, k)
        if found is not None:
            return CoverResult(n, s, k, inst.permset(found), PROVEN, search.nodes, k)
        k += 1
    return CoverResult(n, s, len(incumbent), inst.permset(incumbent), PROVEN, search.nodes, k)


def harmonic_cap(n: int, s: int) -> int:
    """ceil(H_b n! / b): the greedy guarantee, computed exactly."""
    b = ball_size(n, n - s)
    return math.ceil(harmonic_fraction(b) * math.factorial(n) / b)
