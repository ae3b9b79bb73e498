"""Seeded sweeps that exercise the existence theorems on random small instances.

Each sweep draws its instances from one ``random.Random(seed)`` so a run is
reproducible from its config alone.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import rainbow_matching as rm
from .counting import alpha2
from .latin import latin_corpus, longest_partial_transversal
from .perm_core import Permutation, PermSet, all_perms, covering_radius, is_transitive, reduce_nontransitive


@dataclass(frozen=True)
class SweepConfig:
    kind: str  # "light" | "klight" | "reduce" | "latin"
    orders: tuple[int, ...]
    trials: int = 500
    s: int = 3
    seed: int = 0
    exhaustive_order: int | None = None  # light sweep: also run every small multiset of this degree


@dataclass
class SweepResult:
    config: SweepConfig
    instances: int = 0
    fallbacks: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_structured(self) -> str:
        c = self.config
        lines = [
            f"sweep kind={c.kind} orders={','.join(map(str, c.orders))} trials={c.trials} s={c.s} seed={c.seed}",
            f"instances={self.instances}",
            f"fallbacks={self.fallbacks}",
            f"violations={len(self.violations)}",
        ]
        return "\n".join(lines) + "\n"


def random_permset(n: int, size: int, rng: random.Random) -> PermSet:
    """``size`` independent uniform permutations (repeats allowed)."""
    return PermSet(n, tuple(Permutation(tuple(rng.sample(range(1, n + 1), n))) for _ in range(size)))


def clustered_permset(n: int, size: int, rng: random.Random) -> PermSet:
    """Members are a random base permutation perturbed by 0-2 random transpositions.

    Near-copies share many edges, which produces the polychromatic edges that
    uniform samples of this size rarely have.
    """
    base = rng.sample(range(1, n + 1), n)
    members = []
    for _ in range(size):
        p = list(base)
        for _ in range(rng.randint(0, 2)):
            a, b = rng.sample(range(n), 2)
            p[a], p[b] = p[b], p[a]
        members.append(Permutation(tuple(p)))
    return PermSet(n, tuple(members))


def mixed_permset(n: int, size: int, rng: random.Random) -> PermSet:
    """Uniform or clustered with equal probability."""
    if rng.random() < 0.5:
        return random_permset(n, size, rng)
    return clustered_permset(n, size, rng)


def _size(limit: int, rng: random.Random) -> int:
    # half the draws sit at the regime boundary, where matchings are hardest to find
    return limit if rng.random() < 0.5 else rng.randint(1, limit)


def all_multisets(n: int, max_size: int):
    """Every multiset of at most ``max_size`` permutations of degree n, nonempty."""
    perms = list(all_perms(n))
    for k in range(1, max_size + 1):
        for combo in itertools.combinations_with_replacement(perms, k):
            yield PermSet(n, combo)


def _check_light(S: PermSet, result: SweepResult) -> None:
    G = rm.build_colored_graph(S)
    log = rm.SearchLog()
    result.instances += 1
    try:
        M = rm.find_light_rainbow_pm(G, log=log)
    except rm.TheoremViolation as exc:
        result.violations.append(exc.report())
        return
    result.fallbacks += log.used_fallback
    blank = rm.max_blank_matching(G).size
    if not (M.is_perfect and M.is_light(1) and M.is_rainbow(1) and M.blank_edge_count >= blank):
        result.violations.append("# returned matching fails its contract\n" + S.to_text())


def light_rainbow_sweep(config: SweepConfig) -> SweepResult:
    """Random sets of size <= 3n/4 per order, plus every small multiset if requested."""
    result = SweepResult(config)
    rng = random.Random(config.seed)
    m = config.exhaustive_order
    if m is not None:
        for S in all_multisets(m, 3 * m // 4):
            _check_light(S, result)
    for n in config.orders:
        for _ in range(config.trials):
            _check_light(mixed_permset(n, _size(3 * n // 4, rng), rng), result)
    return result


def klight_sweep(config: SweepConfig) -> SweepResult:
    """Random sets with ``2|S| <= alpha2(s) n``; checks lightness and rainbow level."""
    result = SweepResult(config)
    rng = random.Random(config.seed)
    s = config.s
    ax2 = alpha2(s)
    for n in config.orders:
        for _ in range(config.trials):
            S = mixed_permset(n, _size(ax2 * n // 2, rng), rng)
            G = rm.build_colored_graph(S)
            log = rm.SearchLog()
            result.instances += 1
            try:
                M = rm.find_klight_srainbow_pm(G, s, log=log)
            except rm.TheoremViolation as exc:
                result.violations.append(exc.report())
                continue
            result.fallbacks += log.used_fallback
            if not (M.is_perfect and M.is_light(ax2 - 1) and M.is_rainbow(s - 1)):
                result.violations.append("# returned matching fails its contract\n" + S.to_text())
    return result


def random_nontransitive(n: int, rng: random.Random, target_radius: int, max_size: int = 40) -> PermSet:
    """Grow a set avoiding a random (x, y) pair until its covering radius is <= target_radius."""
    while True:
        x, y = rng.randint(1, n), rng.randint(1, n)
        members: list[Permutation] = []
        while len(members) < max_size:
            p = rng.sample(range(1, n + 1), n)
            if p[x - 1] == y:
                continue
            members.append(Permutation(tuple(p)))
            S = PermSet(n, tuple(members))
            if covering_radius(S) <= target_radius:
                return S


def reduction_sweep(config: SweepConfig) -> SweepResult:
    """Random non-transitive S with crad(S) = n - s; checks crad(g(S)) <= n - 1 - s."""
    result = SweepResult(config)
    rng = random.Random(config.seed)
    for n in config.orders:
        for _ in range(config.trials):
            S = random_nontransitive(n, rng, target_radius=rng.choice((n - 1, n - 2)))
            assert not is_transitive(S)[0]
            s = n - covering_radius(S)
            red = reduce_nontransitive(S, s)
            result.instances += 1
            if covering_radius(red.result) > n - 1 - s:
                result.violations.append(f"# reduction raised the radius (s={s})\n" + S.to_text())
    return result


def near_transversal_sweep(config: SweepConfig) -> SweepResult:
    """Every corpus square has a partial transversal of length >= n - 1."""
    result = SweepResult(config)
    for L in latin_corpus(max(config.orders), config.trials, config.seed):
        result.instances += 1
        if len(longest_partial_transversal(L)) < L.n - 1:
            result.violations.append("# no near transversal\n" + L.to_text())
    return result


SWEEPS = {
    "light": light_rainbow_sweep,
    "klight": klight_sweep,
    "reduce": reduction_sweep,
    "latin": near_transversal_sweep,
}
