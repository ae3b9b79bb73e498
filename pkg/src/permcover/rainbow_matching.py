"""Edge-coloured K_{n,n} induced by a permutation set, and light/rainbow matchings.

Every permutation p in S gets its own colour, placed on the edges v_i w_{p(i)}.
Vertices and colours are 0-based inside this module (``mate[i] = j`` means
v_{i+1} is matched to w_{j+1}); text output is 1-based.

The searches are local searches driven by alternating-path/cycle switching,
each backed by an exhaustive enumeration of perfect matchings so that any
returned matching is correct whether or not the guided phase succeeds.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

from .counting import alpha2
from .perm_core import Permutation, PermSet, hamming

V, W = "v", "w"


class NotFound(RuntimeError):
    pass


class NoPerfectMatching(RuntimeError):
    pass


class RegimeError(ValueError):
    """Input is outside the regime where a matching is guaranteed."""


class SwitchError(ValueError):
    pass


class TheoremViolation(RuntimeError):
    """An exhaustive search found no matching where a theorem promises one."""

    def __init__(self, theorem: str, graph: "ColoredGraph", transcript: list[str]):
        super().__init__(f"{theorem}: no matching exists for an in-regime instance (n={graph.n}, |S|={len(graph.colors)})")
        self.theorem = theorem
        self.graph = graph
        self.transcript = list(transcript)

    def report(self) -> str:
        head = [f"# theorem violation: {self.theorem}", f"# n={self.graph.n} colours={len(self.graph.colors)}"]
        tail = ["# transcript:"] + [f"#   {line}" for line in self.transcript]
        return "\n".join(head) + "\n" + self.graph.permset().to_text() + "\n".join(tail) + "\n"


@dataclass(frozen=True)
class ColoredGraph:
    n: int
    colors: tuple[Permutation, ...]
    edge_colors: tuple[tuple[tuple[int, ...], ...], ...] = field(repr=False)

    def count(self, i: int, j: int) -> int:
        return len(self.edge_colors[i][j])

    def is_blank(self, i: int, j: int) -> bool:
        return not self.edge_colors[i][j]

    def permset(self) -> PermSet:
        return PermSet(self.n, self.colors)

    def vertex_profile(self, side: str, index: int) -> tuple[int, int, int]:
        """(blank, polychromatic, monochromatic) edge counts at a vertex."""
        if side == V:
            counts = [self.count(index, j) for j in range(self.n)]
        else:
            counts = [self.count(i, index) for i in range(self.n)]
        blank = sum(c == 0 for c in counts)
        poly = sum(c >= 2 for c in counts)
        return blank, poly, self.n - blank - poly


def build_colored_graph(S: PermSet) -> ColoredGraph:
    n = S.n
    cells: list[list[list[int]]] = [[[] for _ in range(n)] for _ in range(n)]
    for c, p in enumerate(S):
        for i, j in enumerate(p.zero_based()):
            cells[i][j].append(c)
    edge_colors = tuple(tuple(tuple(cell) for cell in row) for row in cells)
    return ColoredGraph(n, S.members, edge_colors)


@dataclass(frozen=True)
class Matching:
    graph: ColoredGraph = field(repr=False)
    mate: tuple[int | None, ...]

    def __post_init__(self):
        used = [j for j in self.mate if j is not None]
        if len(used) != len(set(used)):
            raise ValueError("matching is not injective")
        if len(self.mate) != self.graph.n:
            raise ValueError("mate array has wrong length")

    @classmethod
    def empty(cls, graph: ColoredGraph) -> "Matching":
        return cls(graph, (None,) * graph.n)

    @classmethod
    def from_pairs(cls, graph: ColoredGraph, pairs) -> "Matching":
        mate: list[int | None] = [None] * graph.n
        for i, j in pairs:
            if mate[i] is not None:
                raise ValueError(f"v{i + 1} matched twice")
            mate[i] = j
        return cls(graph, tuple(mate))

    @cached_property
    def w_mate(self) -> tuple[int | None, ...]:
        inv: list[int | None] = [None] * self.graph.n
        for i, j in enumerate(self.mate):
            if j is not None:
                inv[j] = i
        return tuple(inv)

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.mate) if j is not None]

    def has_edge(self, i: int, j: int) -> bool:
        return self.mate[i] == j

    @property
    def size(self) -> int:
        return sum(j is not None for j in self.mate)

    @property
    def is_perfect(self) -> bool:
        return self.size == self.graph.n

    @cached_property
    def blank_edge_count(self) -> int:
        return sum(self.graph.is_blank(i, j) for i, j in self.pairs())

    @cached_property
    def max_colors_on_an_edge(self) -> int:
        return max((self.graph.count(i, j) for i, j in self.pairs()), default=0)

    @cached_property
    def color_counts(self) -> tuple[int, ...]:
        counts = [0] * len(self.graph.colors)
        for i, j in self.pairs():
            for c in self.graph.edge_colors[i][j]:
                counts[c] += 1
        return tuple(counts)

    @property
    def max_color_count(self) -> int:
        return max(self.color_counts, default=0)

    def is_light(self, k: int = 1) -> bool:
        return self.max_colors_on_an_edge <= k

    def is_rainbow(self, k: int = 1) -> bool:
        return self.max_color_count <= k

    def to_text(self) -> str:
        lines = []
        for i, j in self.pairs():
            cols = self.graph.edge_colors[i][j]
            tag = " ".join(str(c + 1) for c in cols) if cols else "-"
            lines.append(f"{i + 1} {j + 1} {tag}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, graph: ColoredGraph, text: str) -> "Matching":
        pairs = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            i, j = line.split()[:2]
            pairs.append((int(i) - 1, int(j) - 1))
        return cls.from_pairs(graph, pairs)


@dataclass(frozen=True)
class SwitchStep:
    """An alternating path or cycle, as a sequence of ("v", i) / ("w", j) vertices.

    For a cycle the closing edge back to the first vertex is implicit.
    """

    kind: str
    vertices: tuple[tuple[str, int], ...]

    def edges(self) -> list[tuple[int, int]]:
        seq = list(self.vertices)
        if self.kind == "cycle":
            seq.append(seq[0])
        out = []
        for a, b in zip(seq, seq[1:]):
            if a[0] == b[0]:
                raise SwitchError("consecutive vertices on the same side")
            out.append((a[1], b[1]) if a[0] == V else (b[1], a[1]))
        return out

    def entering(self, M: Matching) -> list[tuple[int, int]]:
        return [e for e in self.edges() if not M.has_edge(*e)]

    def leaving(self, M: Matching) -> list[tuple[int, int]]:
        return [e for e in self.edges() if M.has_edge(*e)]


def path(*vertices: tuple[str, int]) -> SwitchStep:
    return SwitchStep("path", tuple(vertices))


def cycle(*vertices: tuple[str, int]) -> SwitchStep:
    return SwitchStep("cycle", tuple(vertices))


def switch(M: Matching, step: SwitchStep) -> Matching:
    """Swap the matched and unmatched edges of an alternating path or cycle."""
    if step.kind not in ("path", "cycle"):
        raise SwitchError(f"unknown step kind {step.kind!r}")
    if len(set(step.vertices)) != len(step.vertices):
        raise SwitchError("step revisits a vertex")
    if step.kind == "cycle" and (len(step.vertices) < 4 or len(step.vertices) % 2):
        raise SwitchError("cycle needs an even number (>= 4) of vertices")
    edges = step.edges()
    flags = [M.has_edge(*e) for e in edges]
    ring = flags + flags[:1] if step.kind == "cycle" else flags
    if any(a == b for a, b in zip(ring, ring[1:])):
        raise SwitchError("step is not alternating")
    mate = list(M.mate)
    for (i, j), inside in zip(edges, flags):
        if inside:
            mate[i] = None
    w_taken = {j for j in mate if j is not None}
    for (i, j), inside in zip(edges, flags):
        if not inside:
            if mate[i] is not None or j in w_taken:
                raise SwitchError(f"endpoint of v{i + 1}w{j + 1} is matched outside the step")
            mate[i] = j
            w_taken.add(j)
    return Matching(M.graph, tuple(mate))


# ----------------------------------------------------------------------
# maximum matchings


def _augment(n: int, allowed, mate: list[int | None]) -> list[int | None]:
    """Kuhn's augmenting paths over ``allowed(i, j)``, rows and columns in index order."""
    w_mate: list[int | None] = [None] * n
    for i, j in enumerate(mate):
        if j is not None:
            w_mate[j] = i

    def try_row(i: int, seen: list[bool]) -> bool:
        for j in range(n):
            if allowed(i, j) and not seen[j]:
                seen[j] = True
                if w_mate[j] is None or try_row(w_mate[j], seen):
                    mate[i], w_mate[j] = j, i
                    return True
        return False

    for i in range(n):
        if mate[i] is None:
            try_row(i, [False] * n)
    return mate


def max_blank_matching(G: ColoredGraph) -> Matching:
    """Maximum matching using blank edges only."""
    mate = _augment(G.n, G.is_blank, [None] * G.n)
    return Matching(G, tuple(mate))


def hall_light_pm(G: ColoredGraph, max_colors: int) -> Matching:
    """Perfect matching avoiding every edge with ``max_colors`` or more colours.

    When ``|S| <= max_colors * n / 2`` the filtered graph has minimum degree at
    least n/2 and Hall's condition guarantees success; a failure there raises
    TheoremViolation, a failure outside raises NoPerfectMatching.
    """
    if max_colors < 1:
        raise ValueError("max_colors must be positive")
    mate = _augment(G.n, lambda i, j: G.count(i, j) < max_colors, [None] * G.n)
    M = Matching(G, tuple(mate))
    if not M.is_perfect:
        if 2 * len(G.colors) <= max_colors * G.n:
            raise TheoremViolation("Hall light matching", G, [f"max matching size {M.size} < n"])
        raise NoPerfectMatching(f"no perfect matching with fewer than {max_colors} colours per edge")
    return M


# ----------------------------------------------------------------------
# exhaustive fallback


def _exhaustive_pm(G: ColoredGraph, edge_limit: int, color_limit: int, min_blank: int) -> Matching | None:
    """First perfect matching (rows in order, columns ascending) with every edge
    carrying <= edge_limit colours, every colour used <= color_limit times and
    at least min_blank blank edges."""
    n = G.n
    counts = [0] * len(G.colors)
    mate: list[int] = []
    used = [False] * n

    def rec(i: int, blanks: int) -> bool:
        if blanks + (n - i) < min_blank:
            return False
        if i == n:
            return True
        for j in range(n):
            if used[j]:
                continue
            cols = G.edge_colors[i][j]
            if len(cols) > edge_limit or any(counts[c] >= color_limit for c in cols):
                continue
            used[j] = True
            for c in cols:
                counts[c] += 1
            mate.append(j)
            if rec(i + 1, blanks + (not cols)):
                return True
            mate.pop()
            for c in cols:
                counts[c] -= 1
            used[j] = False
        return False

    if rec(0, 0):
        return Matching(G, tuple(mate))
    return None


@dataclass
class SearchLog:
    transcript: list[str] = field(default_factory=list)
    moves: int = 0
    used_fallback: bool = False

    def note(self, line: str) -> None:
        self.transcript.append(line)


# ----------------------------------------------------------------------
# light rainbow perfect matchings (|S| <= 3n/4)


def _blank_tree(G: ColoredGraph, M: Matching, root: tuple[str, int]) -> dict[int, list[tuple[str, int]]]:
    """Vertices on the root's side reachable by even blank alternating paths, with the paths."""
    side, other = root[0], (W if root[0] == V else V)
    paths = {root[1]: [root]}
    queue = [root[1]]
    for u in queue:
        for x in range(G.n):
            i, j = (u, x) if side == V else (x, u)
            if not G.is_blank(i, j) or M.has_edge(i, j):
                continue
            back = M.w_mate[x] if side == V else M.mate[x]
            if back is None:
                continue
            bi, bj = (back, x) if side == V else (x, back)
            if G.is_blank(bi, bj) and back not in paths:
                paths[back] = paths[u] + [(other, x), (side, back)]
                queue.append(back)
    return paths


def frontier_sets(G: ColoredGraph, M: Matching) -> tuple[list[int], list[int]]:
    """The blank-reachable sets from the lowest unmatched v and w (diagnostic)."""
    free_v = [i for i, j in enumerate(M.mate) if j is None]
    free_w = [j for j, i in enumerate(M.w_mate) if i is None]
    if not free_v:
        return [], []
    return sorted(_blank_tree(G, M, (V, free_v[0]))), sorted(_blank_tree(G, M, (W, free_w[0])))


def _light_rainbow_ok(M: Matching, blank_floor: int) -> bool:
    return M.is_light(1) and M.is_rainbow(1) and M.blank_edge_count >= blank_floor


def _augmentations(G: ColoredGraph, M: Matching, rng: random.Random | None):
    free_v = [i for i, j in enumerate(M.mate) if j is None]
    free_w = [j for j, i in enumerate(M.w_mate) if i is None]
    if rng is not None:
        rng.shuffle(free_v)
        rng.shuffle(free_w)
    for v1 in free_v:
        tree_v = _blank_tree(G, M, (V, v1))
        for w1 in free_w:
            tree_w = _blank_tree(G, M, (W, w1))
            for v, p_v in tree_v.items():
                for w, q_w in tree_w.items():
                    tail = list(reversed(q_w))
                    # direct edge between the two frontiers
                    yield "direct", path(*p_v, *tail)
                    # one matched edge x-y in the middle: v - x = y - w
                    for x in range(G.n):
                        y = M.w_mate[x]
                        if y is None or M.mate[v] == x:
                            continue
                        yield "relevant", path(*p_v, (W, x), (V, y), *tail)


def find_light_rainbow_pm(
    G: ColoredGraph,
    best_effort: bool = False,
    log: SearchLog | None = None,
    seed: int | None = None,
) -> Matching:
    """Perfect matching that is light, rainbow and has a maximum blank sub-matching.

    Guaranteed to exist when ``4 |S| <= 3 n``.  Outside that regime pass
    ``best_effort=True``; a miss then raises NotFound instead of
    TheoremViolation.  ``seed`` shuffles the guided phase's vertex order.
    """
    log = log if log is not None else SearchLog()
    in_regime = 4 * len(G.colors) <= 3 * G.n
    if not in_regime and not best_effort:
        raise RegimeError(f"|S|={len(G.colors)} exceeds 3n/4 for n={G.n}")
    rng = random.Random(seed) if seed is not None else None
    M = max_blank_matching(G)
    target = M.size
    log.note(f"max blank matching size {target}")
    while not M.is_perfect:
        for label, step in _augmentations(G, M, rng):
            try:
                M2 = switch(M, step)
            except SwitchError:
                continue
            if M2.size > M.size and _light_rainbow_ok(M2, target):
                log.moves += 1
                log.note(f"{label} switch on {_fmt_step(step)} -> size {M2.size}")
                M = M2
                break
        else:
            break
    if M.is_perfect and _light_rainbow_ok(M, target):
        return M
    log.used_fallback = True
    log.note(f"guided search stalled at size {M.size}; exhaustive fallback")
    found = _exhaustive_pm(G, edge_limit=1, color_limit=1, min_blank=target)
    if found is not None:
        return found
    log.note("exhaustive search found no light rainbow perfect matching")
    if in_regime:
        raise TheoremViolation("light rainbow perfect matching (|S| <= 3n/4)", G, log.transcript)
    raise NotFound("no light rainbow perfect matching containing a maximum blank matching")


# ----------------------------------------------------------------------
# (2a-1)-light, (s-1)-rainbow perfect matchings (|S| <= a n)


def _potential(M: Matching, s: int) -> tuple[int, int]:
    heavy = {c for c, k in enumerate(M.color_counts) if k >= s}
    bad = sum(1 for i, j in M.pairs() if heavy.intersection(M.graph.edge_colors[i][j]))
    return bad, -M.blank_edge_count


def _cycles_through(G: ColoredGraph, M: Matching, v1: int, edge_ok):
    """Alternating cycles v1 -M- w1 - v2 -M- w2 - ... - v1, non-M edges passing edge_ok."""
    w1 = M.mate[v1]
    seq = [(V, v1), (W, w1)]
    seen_v = {v1}

    def extend(w: int):
        for v in range(G.n):
            if v in seen_v or not edge_ok(v, w):
                continue
            w_next = M.mate[v]
            seen_v.add(v)
            seq.extend([(V, v), (W, w_next)])
            if edge_ok(v1, w_next):
                yield cycle(*seq)
            yield from extend(w_next)
            del seq[-2:]
            seen_v.discard(v)

    yield from extend(w1)


def find_klight_srainbow_pm(
    G: ColoredGraph,
    s: int,
    best_effort: bool = False,
    log: SearchLog | None = None,
) -> Matching:
    """Perfect matching that is (alpha2(s)-1)-light and (s-1)-rainbow.

    Guaranteed when ``2 |S| <= alpha2(s) n``.  Starts from a Hall matching and
    switches on alternating cycles through edges carrying an over-used colour
    while (#such edges, -#blank edges) strictly decreases.
    """
    log = log if log is not None else SearchLog()
    ax2 = alpha2(s)
    in_regime = 2 * len(G.colors) <= ax2 * G.n
    if not in_regime and not best_effort:
        raise RegimeError(f"|S|={len(G.colors)} exceeds alpha*n for n={G.n}, s={s}")
    try:
        M = hall_light_pm(G, ax2)
    except NoPerfectMatching:
        raise NotFound(f"no {ax2 - 1}-light perfect matching") from None
    log.note(f"Hall matching, potential {_potential(M, s)}")

    def edge_ok(i, j):
        return G.count(i, j) < ax2

    while True:
        pot = _potential(M, s)
        if pot[0] == 0:
            return M
        heavy = {c for c, k in enumerate(M.color_counts) if k >= s}
        improved = None
        for v1, w1 in M.pairs():
            if not heavy.intersection(G.edge_colors[v1][w1]):
                continue
            for step in _cycles_through(G, M, v1, edge_ok):
                M2 = switch(M, step)
                if _potential(M2, s) < pot:
                    improved = (step, M2)
                    break
            if improved:
                break
        if improved is None:
            break
        step, M = improved
        log.moves += 1
        log.note(f"cycle switch on {_fmt_step(step)} -> potential {_potential(M, s)}")
    log.used_fallback = True
    log.note("guided search stalled; exhaustive fallback")
    found = _exhaustive_pm(G, edge_limit=ax2 - 1, color_limit=s - 1, min_blank=0)
    if found is not None:
        return found
    if in_regime:
        raise TheoremViolation(f"({ax2 - 1})-light ({s - 1})-rainbow perfect matching", G, log.transcript)
    raise NotFound(f"no {ax2 - 1}-light {s - 1}-rainbow perfect matching")


# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    perm: Permutation
    rainbow_level: int
    guaranteed: int
    distances: tuple[int, ...]

    @property
    def min_distance(self) -> int | None:
        return min(self.distances, default=None)

    def to_text(self) -> str:
        return (
            f"permutation {self.perm}\n"
            f"rainbow_level {self.rainbow_level}\n"
            f"guaranteed_min_distance {self.guaranteed}\n"
            f"min_distance {self.min_distance if self.distances else '-'}\n"
        )


def matching_to_perm(M: Matching) -> tuple[Permutation, Certificate]:
    """Read a perfect matching as a permutation and certify its distance to S.

    If no colour occurs on more than r edges of M, the permutation agrees with
    each member of S in at most r places.
    """
    if not M.is_perfect:
        raise ValueError("matching is not perfect")
    p = Permutation.from_zero_based(M.mate)
    r = M.max_color_count
    distances = tuple(hamming(p, q) for q in M.graph.colors)
    cert = Certificate(p, r, M.graph.n - r, distances)
    if distances and min(distances) < cert.guaranteed:
        raise RuntimeError("certificate failed direct distance check")
    return p, cert


def _fmt_step(step: SwitchStep) -> str:
    return " ".join(f"{side}{k + 1}" for side, k in step.vertices)
