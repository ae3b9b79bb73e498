"""Permutations of [n] under the Hamming metric.

All public values are 1-based: ``Permutation((2, 3, 1))`` maps 1->2, 2->3,
3->1.  Hot loops work on 0-based tuples / numpy arrays internally.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np


def enum_cap() -> int:
    """Largest degree for which S_n is enumerated (env ``PERMCOVER_ENUM_CAP``)."""
    return int(os.environ.get("PERMCOVER_ENUM_CAP", "8"))


class DegreeMismatch(ValueError):
    pass


class EnumerationCapExceeded(ValueError):
    pass


class TransitiveSetError(ValueError):
    """The non-transitive reduction was asked to reduce a transitive set."""


class PermSetParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Permutation:
    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(v) for v in self.image)
        object.__setattr__(self, "image", image)
        n = len(image)
        if n == 0:
            raise ValueError("permutation of degree 0")
        if sorted(image) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {image}")

    @property
    def n(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> "Permutation":
        image = list(range(1, n + 1))
        image[a - 1], image[b - 1] = b, a
        return cls(tuple(image))

    @classmethod
    def from_zero_based(cls, image: Iterable[int]) -> "Permutation":
        return cls(tuple(int(v) + 1 for v in image))

    def zero_based(self) -> tuple[int, ...]:
        return tuple(v - 1 for v in self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """Return ``self o other``, i.e. ``i -> self(other(i))``."""
        _check_degree(self.n, other.n)
        return Permutation(tuple(self.image[j - 1] for j in other.image))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.image, start=1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def __str__(self) -> str:
        return " ".join(map(str, self.image))


@dataclass(frozen=True)
class PermSet:
    """Ordered multiset of permutations sharing one degree."""

    n: int
    members: tuple[Permutation, ...] = field(default=())

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        for p in members:
            if p.n != self.n:
                raise DegreeMismatch(f"member {p} has degree {p.n}, expected {self.n}")

    @classmethod
    def of(cls, perms: Sequence[Permutation | Sequence[int]], n: int | None = None) -> "PermSet":
        members = tuple(p if isinstance(p, Permutation) else Permutation(tuple(p)) for p in perms)
        if n is None:
            if not members:
                raise ValueError("degree required for an empty PermSet")
            n = members[0].n
        return cls(n, members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.members)

    def __getitem__(self, i: int) -> Permutation:
        return self.members[i]

    def distinct_count(self) -> int:
        return len(set(self.members))

    def array(self) -> np.ndarray:
        """0-based image array of shape (len, n)."""
        if not self.members:
            return np.zeros((0, self.n), dtype=np.int8)
        return np.array([p.zero_based() for p in self.members], dtype=np.int8)

    # -- text format ---------------------------------------------------
    def to_text(self) -> str:
        return "".join(f"{p}\n" for p in self.members)

    @classmethod
    def parse(cls, text: str) -> "PermSet":
        members: list[Permutation] = []
        n = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values = tuple(int(tok) for tok in line.split())
            except ValueError:
                raise PermSetParseError(lineno, f"non-integer token in {line!r}") from None
            if n is None:
                n = len(values)
            elif len(values) != n:
                raise PermSetParseError(lineno, f"expected {n} entries, got {len(values)}")
            try:
                members.append(Permutation(values))
            except ValueError as exc:
                raise PermSetParseError(lineno, str(exc)) from None
        if n is None:
            raise PermSetParseError(0, "no permutations found")
        return cls(n, tuple(members))

    @classmethod
    def load(cls, path: str | Path) -> "PermSet":
        return cls.parse(Path(path).read_text())


def _check_degree(a: int, b: int) -> None:
    if a != b:
        raise DegreeMismatch(f"degree mismatch: {a} vs {b}")


def _check_cap(n: int, cap: int | None) -> None:
    cap = enum_cap() if cap is None else cap
    if n > cap:
        raise EnumerationCapExceeded(f"n={n} exceeds enumeration cap {cap}")


@lru_cache(maxsize=None)
def all_perms_array(n: int) -> np.ndarray:
    """All of S_n in lexicographic order as a 0-based (n!, n) int8 array."""
    arr = np.array(list(itertools.permutations(range(n))), dtype=np.int8)
    arr.setflags(write=False)
    return arr


def all_perms(n: int) -> Iterator[Permutation]:
    for image in itertools.permutations(range(1, n + 1)):
        yield Permutation(image)


def hamming(p: Permutation, q: Permutation) -> int:
    _check_degree(p.n, q.n)
    return sum(a != b for a, b in zip(p.image, q.image))


def distances_to_set(S: PermSet, cap: int | None = None) -> Iterator[np.ndarray]:
    """Yield, chunk by chunk over S_n in lex order, min distance to S."""
    _check_cap(S.n, cap)
    universe = all_perms_array(S.n)
    members = S.array()
    # keep the broadcast block around 16M cells
    chunk = max(1, (1 << 24) // max(1, len(S) * S.n))
    for start in range(0, len(universe), chunk):
        block = universe[start:start + chunk]
        d = (block[:, None, :] != members[None, :, :]).sum(axis=2)
        yield d.min(axis=1)


def farthest_point(S: PermSet, cap: int | None = None) -> tuple[int, Permutation]:
    """Covering radius of S together with the lex-least permutation attaining it."""
    if len(S) == 0:
        raise ValueError("covering radius of an empty set")
    best, where, offset = -1, 0, 0
    for mins in distances_to_set(S, cap):
        i = int(mins.argmax())
        if mins[i] > best:
            best, where = int(mins[i]), offset + i
        offset += len(mins)
        if best == S.n:
            break
    return best, Permutation.from_zero_based(all_perms_array(S.n)[where])


def covering_radius(S: PermSet, cap: int | None = None) -> int:
    return farthest_point(S, cap)[0]


def is_transitive(S: PermSet) -> tuple[bool, tuple[int, int] | None]:
    """Return (True, None) or (False, lex-least (x, y) with p(x) != y for all p)."""
    if len(S) == 0:
        raise ValueError("transitivity of an empty set")
    hit = [[False] * S.n for _ in range(S.n)]
    for p in S:
        for x, y in enumerate(p.image):
            hit[x][y - 1] = True
    for x in range(S.n):
        for y in range(S.n):
            if not hit[x][y]:
                return False, (x + 1, y + 1)
    return True, None


def relabel(S: PermSet, sigma: Permutation, tau: Permutation) -> PermSet:
    """Return ``{tau o p o sigma : p in S}`` in input order."""
    _check_degree(sigma.n, S.n)
    _check_degree(tau.n, S.n)
    return PermSet(S.n, tuple(tau.compose(p.compose(sigma)) for p in S))


def collapse_top(p: Permutation) -> Permutation:
    """Map p in S_n to S_{n-1}: keep p(i) unless p(i) = n, where p(n) is used instead."""
    n = p.n
    last = p.image[n - 1]
    return Permutation(tuple(v if v != n else last for v in p.image[:n - 1]))


@dataclass(frozen=True)
class Reduction:
    result: PermSet
    witness: tuple[int, int]
    relabeled: PermSet
    input_size: int
    distinct_size: int
    s: int


def reduce_nontransitive(S: PermSet, s: int) -> Reduction:
    """Shrink a non-transitive set to degree n-1 while keeping covering strength s.

    If ``crad(S) <= n - s`` then the returned set has covering radius at most
    ``n - 1 - s``.  Duplicates produced by the collapse are kept, so
    ``len(result) == len(S)``; ``distinct_size`` counts the distinct images.
    """
    if len(S) == 0:
        raise ValueError("cannot reduce an empty set")
    if S.n < 2:
        raise ValueError("reduction needs n >= 2")
    transitive, witness = is_transitive(S)
    if transitive:
        raise TransitiveSetError("set is transitive; no missing (x, y) pair")
    x, y = witness
    n = S.n
    relabeled = relabel(S, Permutation.transposition(n, x, n), Permutation.transposition(n, y, n))
    assert all(p(n) != n for p in relabeled)
    result = PermSet(n - 1, tuple(collapse_top(p) for p in relabeled))
    return Reduction(result, witness, relabeled, len(S), result.distinct_count(), s)
