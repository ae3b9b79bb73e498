"""Exact counts and bounds for f(n, s).

Counts are Python ints and ratios are ``Fraction``; only the harmonic number
and the ``3 s! (n-s) ln n`` bound are floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def derangements(i: int) -> int:
    if i < 0:
        raise ValueError("negative size")
    prev, cur = 1, 0  # d_0, d_1
    if i == 0:
        return 1
    for k in range(2, i + 1):
        prev, cur = cur, (k - 1) * (cur + prev)
    return cur


def ball_terms(n: int, k: int) -> list[int]:
    """The summands C(n, i) d_i for i = 0..k."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    return [math.comb(n, i) * derangements(i) for i in range(k + 1)]


def ball_size(n: int, k: int) -> int:
    """Number of permutations within Hamming distance k of a fixed one."""
    return sum(ball_terms(n, k))


def harmonic(b: int) -> float:
    if b < 1:
        raise ValueError("harmonic number needs b >= 1")
    return math.fsum(1.0 / i for i in range(1, b + 1))


EXACT_HARMONIC_LIMIT = 100_000


def harmonic_fraction(b: int) -> Fraction:
    if b < 1:
        raise ValueError("harmonic number needs b >= 1")
    return sum((Fraction(1, i) for i in range(1, b + 1)), Fraction(0))


def alpha2(s: int) -> int:
    """Twice the light-threshold constant: largest m >= 1 with (2m-2)^2 <= 2s-2."""
    if s < 3:
        raise ValueError("alpha2 is defined for s >= 3")
    return 1 + math.isqrt(2 * s - 2) // 2


@dataclass(frozen=True)
class Bound:
    name: str
    kind: str  # "lower" or "upper"
    value: Fraction | float | int
    strict: bool

    def implied(self) -> int:
        """Integer consequence for f: least admissible value for lower bounds, greatest for upper."""
        v = self.value
        if self.kind == "lower":
            if isinstance(v, float):
                return math.floor(v) + 1 if self.strict else math.ceil(v)
            v = Fraction(v)
            return math.floor(v) + 1 if self.strict else math.ceil(v)
        if isinstance(v, float):
            return math.ceil(v) - 1 if self.strict else math.floor(v)
        v = Fraction(v)
        return math.ceil(v) - 1 if self.strict else math.floor(v)

    def admits(self, f: int) -> bool:
        v = self.value
        if self.kind == "lower":
            return f > v if self.strict else f >= v
        return f < v if self.strict else f <= v


@dataclass(frozen=True)
class BoundsReport:
    n: int
    s: int
    b: int
    lower_ball: Fraction
    upper_harmonic: float
    lower_factorial: Fraction | None = None
    upper_factorial_log: float | None = None
    lower_sqrt: Fraction | None = None
    lower_3n4: Fraction | None = None
    exact_s1: int | None = None
    trivial_top: int | None = None
    bounds: tuple[Bound, ...] = field(default=(), repr=False)

    @property
    def lower_ball_ceil(self) -> int:
        return math.ceil(self.lower_ball)

    def lower_bounds(self) -> list[Bound]:
        return [bd for bd in self.bounds if bd.kind == "lower"]

    def upper_bounds(self) -> list[Bound]:
        return [bd for bd in self.bounds if bd.kind == "upper"]

    def best_lower(self) -> int:
        return max(bd.implied() for bd in self.lower_bounds())

    def best_upper(self) -> int:
        return min(bd.implied() for bd in self.upper_bounds())

    def admits(self, f: int) -> bool:
        return all(bd.admits(f) for bd in self.bounds)

    def records(self) -> list[tuple[str, str, bool]]:
        """One (name, value, strict) triple per populated bound, values as text."""
        return [(bd.name, _fmt(bd.value), bd.strict) for bd in self.bounds]

    def to_text(self) -> str:
        lines = [f"n = {self.n}", f"s = {self.s}", f"b = {self.b}"]
        for bd in self.bounds:
            rel = ("> " if bd.strict else ">= ") if bd.kind == "lower" else ("< " if bd.strict else "<= ")
            lines.append(f"{bd.name}: f {rel}{_fmt(bd.value)}  (implies f {'>=' if bd.kind == 'lower' else '<='} {bd.implied()})")
        lines.append(f"range: {self.best_lower()} <= f <= {self.best_upper()}")
        return "\n".join(lines) + "\n"

    def to_structured(self) -> str:
        out = [f"n={self.n}", f"s={self.s}", f"b={self.b}"]
        for bd in self.bounds:
            out.append(f"bound name={bd.name} kind={bd.kind} value={_fmt(bd.value)} strict={int(bd.strict)}")
        out.append(f"best_lower={self.best_lower()}")
        out.append(f"best_upper={self.best_upper()}")
        return "\n".join(out) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        if v.denominator > 10**6:
            return repr(float(v))
    return str(v)


def bounds_report(n: int, s: int) -> BoundsReport:
    if n < 1 or not 1 <= s <= n:
        raise ValueError(f"need 1 <= s <= n, got n={n}, s={s}")
    nfact = math.factorial(n)
    b = ball_size(n, n - s)
    lower_ball = Fraction(nfact, b)
    upper_harmonic = harmonic(b) * nfact / b
    # exact where cheap, so the integer consequence cannot be off by float rounding
    harmonic_bound = harmonic_fraction(b) * lower_ball if b <= EXACT_HARMONIC_LIMIT else upper_harmonic
    bounds = [
        Bound("lower_ball", "lower", lower_ball, False),
        Bound("upper_harmonic", "upper", harmonic_bound, False),
    ]
    extra: dict = {}
    if s <= n - 2:
        sf = math.factorial(s)
        extra["lower_factorial"] = Fraction(2 * s, s + 1) * sf
        extra["upper_factorial_log"] = 3 * sf * (n - s) * math.log(n)
        bounds.append(Bound("lower_factorial", "lower", extra["lower_factorial"], True))
        bounds.append(Bound("upper_factorial_log", "upper", extra["upper_factorial_log"], True))
    if s >= 3:
        extra["lower_sqrt"] = Fraction(alpha2(s) * n, 2)
        bounds.append(Bound("lower_sqrt", "lower", extra["lower_sqrt"], True))
    if s == 2:
        extra["lower_3n4"] = Fraction(3 * n, 4)
        bounds.append(Bound("lower_3n4", "lower", extra["lower_3n4"], True))
    if s == 1:
        extra["exact_s1"] = n // 2 + 1
        bounds.append(Bound("exact_s1", "lower", extra["exact_s1"], False))
        bounds.append(Bound("exact_s1", "upper", extra["exact_s1"], False))
    if s >= n - 1:
        extra["trivial_top"] = nfact
        bounds.append(Bound("trivial_top", "lower", nfact, False))
        bounds.append(Bound("trivial_top", "upper", nfact, False))
    return BoundsReport(n, s, b, lower_ball, upper_harmonic, bounds=tuple(bounds), **extra)


def blowbnd_check(n: int, s: int) -> bool:
    """Check ``B(n, n-s) / n! > 1 / (3 s!)`` exactly; requires n - s >= 2."""
    if not 1 <= s <= n - 2:
        raise ValueError(f"need 1 <= s <= n-2, got n={n}, s={s}")
    return Fraction(ball_size(n, n - s), math.factorial(n)) > Fraction(1, 3 * math.factorial(s))
