"""Latin squares, (partial) transversals and the rows-as-permutations bridge."""
from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .perm_core import EnumerationCapExceeded, Permutation, PermSet, covering_radius, enum_cap


class LatinViolation(ValueError):
    def __init__(self, kind: str, index: int, symbol: int | None = None):
        where = "not a square array" if kind == "shape" else f"{kind} {index}"
        detail = f" repeats symbol {symbol}" if symbol is not None else ""
        super().__init__(f"not latin: {where}{detail}")
        self.kind = kind
        self.index = index
        self.symbol = symbol


@dataclass(frozen=True)
class LatinSquare:
    cells: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.cells)

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return self.cells[r][c]

    def to_text(self) -> str:
        return "".join(" ".join(map(str, row)) + "\n" for row in self.cells)


def _square(cells: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    rows = tuple(tuple(int(v) for v in row) for row in cells)
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise LatinViolation("shape", 0)
    for r, row in enumerate(rows, start=1):
        for v in row:
            if not 1 <= v <= n:
                raise LatinViolation("range", r, v)
    return rows


def _first_repeat(line: Sequence[int]) -> int | None:
    seen = set()
    for v in line:
        if v in seen:
            return v
        seen.add(v)
    return None


def validate(cells: Sequence[Sequence[int]]) -> LatinSquare:
    """Return the square, or raise LatinViolation naming the first bad row/column (1-based)."""
    rows = _square(cells)
    for r, row in enumerate(rows, start=1):
        rep = _first_repeat(row)
        if rep is not None:
            raise LatinViolation("row", r, rep)
    for c in range(len(rows)):
        rep = _first_repeat([row[c] for row in rows])
        if rep is not None:
            raise LatinViolation("column", c + 1, rep)
    return LatinSquare(rows)


def is_row_latin(cells: Sequence[Sequence[int]]) -> bool:
    n = len(cells)
    return all(sorted(row) == list(range(1, n + 1)) for row in cells)


def cayley_table(n: int) -> LatinSquare:
    """Addition table of Z_n on symbols 1..n."""
    if n < 1:
        raise ValueError("order must be positive")
    return LatinSquare(tuple(tuple((i + j) % n + 1 for j in range(n)) for i in range(n)))


def parse_square(text: str) -> LatinSquare:
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            rows.append([int(tok) for tok in line.split()])
    return validate(rows)


def load_square(path: str | Path) -> LatinSquare:
    return parse_square(Path(path).read_text())


def _check_cap(n: int, cap: int | None) -> None:
    cap = enum_cap() if cap is None else cap
    if n > cap:
        raise EnumerationCapExceeded(f"order {n} exceeds enumeration cap {cap}")


@dataclass(frozen=True)
class PartialTransversal:
    entries: tuple[tuple[int, int, int], ...]  # (row, column, symbol), 1-based

    def __post_init__(self):
        for k in range(3):
            values = [e[k] for e in self.entries]
            if len(values) != len(set(values)):
                raise ValueError(f"entries share a {('row', 'column', 'symbol')[k]}")

    def __len__(self) -> int:
        return len(self.entries)


def transversals(L: LatinSquare, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield transversals as column tuples (0-based column per row), lexicographically."""
    n = L.n
    _check_cap(n, cap)
    cells = [[v - 1 for v in row] for row in L.cells]
    cols: list[int] = []

    def rec(r: int, used_cols: int, used_syms: int):
        if r == n:
            yield tuple(cols)
            return
        row = cells[r]
        for c in range(n):
            sym = row[c]
            if used_cols >> c & 1 or used_syms >> sym & 1:
                continue
            cols.append(c)
            yield from rec(r + 1, used_cols | 1 << c, used_syms | 1 << sym)
            cols.pop()

    yield from rec(0, 0, 0)


def count_transversals(L: LatinSquare, limit: int | None = None, cap: int | None = None) -> int:
    count = 0
    for _ in transversals(L, cap):
        count += 1
        if limit is not None and count >= limit:
            break
    return count


def longest_partial_transversal(L: LatinSquare, cap: int | None = None) -> PartialTransversal:
    """A longest partial transversal, by branch-and-bound over rows."""
    n = L.n
    _check_cap(n, cap)
    cells = [[v - 1 for v in row] for row in L.cells]
    best: list[tuple[int, int]] = []
    cur: list[tuple[int, int]] = []

    def rec(r: int, used_cols: int, used_syms: int) -> bool:
        nonlocal best
        if len(cur) + (n - r) <= len(best):
            return False
        if r == n:
            best = list(cur)
            return len(best) == n
        row = cells[r]
        for c in range(n):
            sym = row[c]
            if used_cols >> c & 1 or used_syms >> sym & 1:
                continue
            cur.append((r, c))
            if rec(r + 1, used_cols | 1 << c, used_syms | 1 << sym):
                return True
            cur.pop()
        return rec(r + 1, used_cols, used_syms)  # leave row r out

    rec(0, 0, 0)
    return PartialTransversal(tuple((r + 1, c + 1, cells[r][c] + 1) for r, c in best))


def rows_as_permset(L: LatinSquare) -> PermSet:
    return PermSet(L.n, tuple(Permutation(row) for row in L.cells))


def rows_covering_radius(L: LatinSquare, cap: int | None = None) -> int:
    return covering_radius(rows_as_permset(L), cap)


def random_latin_square(n: int, rng: random.Random, steps: int | None = None) -> LatinSquare:
    """Jacobson-Matthews walk started from the cyclic table.

    ``steps`` proper moves are made (default n**3); the walk only stops on a
    proper square.
    """
    steps = n ** 3 if steps is None else steps
    cube = np.zeros((n, n, n), dtype=np.int8)
    for r, row in enumerate(cayley_table(n).cells):
        for c, v in enumerate(row):
            cube[r, c, v - 1] = 1
    improper = None
    done = 0
    while done < steps or improper is not None:
        if improper is None:
            while True:
                r, c, s = rng.randrange(n), rng.randrange(n), rng.randrange(n)
                if cube[r, c, s] == 0:
                    break
            r2 = int(np.flatnonzero(cube[:, c, s] == 1)[0])
            c2 = int(np.flatnonzero(cube[r, :, s] == 1)[0])
            s2 = int(np.flatnonzero(cube[r, c, :] == 1)[0])
        else:
            r, c, s = improper
            r2 = rng.choice([int(x) for x in np.flatnonzero(cube[:, c, s] == 1)])
            c2 = rng.choice([int(x) for x in np.flatnonzero(cube[r, :, s] == 1)])
            s2 = rng.choice([int(x) for x in np.flatnonzero(cube[r, c, :] == 1)])
        for (a, b, d), delta in (
            ((r, c, s), 1), ((r, c2, s2), 1), ((r2, c, s2), 1), ((r2, c2, s), 1),
            ((r, c, s2), -1), ((r, c2, s), -1), ((r2, c, s), -1), ((r2, c2, s2), -1),
        ):
            cube[a, b, d] += delta
        improper = (r2, c2, s2) if cube[r2, c2, s2] < 0 else None
        if improper is None:
            done += 1
    cells = [[int(np.flatnonzero(cube[r, c] == 1)[0]) + 1 for c in range(n)] for r in range(n)]
    return validate(cells)


def latin_corpus(max_order: int, per_order: int, seed: int) -> list[LatinSquare]:
    """Cyclic tables of every order up to ``max_order`` plus seeded random squares."""
    rng = random.Random(seed)
    squares = [cayley_table(n) for n in range(1, max_order + 1)]
    for n in range(2, max_order + 1):
        squares.extend(random_latin_square(n, rng) for _ in range(per_order))
    return squares
