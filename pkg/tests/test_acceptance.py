"""One test per acceptance criterion; each prints a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (lines appear in the
terminal summary) or ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import io
import math
import os
import subprocess
import sys
import time
from contextlib import redirect_stdout
from fractions import Fraction
from functools import lru_cache

from permcover.cli import main as cli_main
from permcover.counting import ball_size, harmonic_fraction
from permcover.cover_solver import PROVEN, greedy_cover
from permcover.latin import (
    cayley_table,
    count_transversals,
    latin_corpus,
    longest_partial_transversal,
    rows_covering_radius,
)
from permcover.sweeps import SweepConfig, klight_sweep, light_rainbow_sweep, reduction_sweep

try:
    from . import oracles
    from .conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    sys.path.insert(0, os.path.dirname(__file__))
    import oracles  # type: ignore
    from conftest import ACCEPTANCE_LINES  # type: ignore

SEED = 20240607


def report(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def run_cli(*args: str) -> tuple[int, dict[str, str], str]:
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main(["--format", "structured", *args])
    text = buf.getvalue()
    fields = dict(line.split("=", 1) for line in text.splitlines() if "=" in line and " " not in line.split("=", 1)[0])
    return code, fields, text


@lru_cache(maxsize=None)
def fexact_cli(n: int, s: int) -> tuple[int, str, float]:
    t = time.perf_counter()
    code, fields, _ = run_cli("fexact", str(n), str(s))
    elapsed = time.perf_counter() - t
    assert code == 0, (n, s, code)
    return int(fields["size"]), fields["status"], elapsed


def test_criterion_01_small_exact_values():
    results = {(n, s): fexact_cli(n, s) for n, s in [(3, 2), (4, 2)]}
    ok = (
        results[3, 2][:2] == (6, PROVEN)
        and results[4, 2][:2] == (4, PROVEN)
        and all(r[2] < 5 for r in results.values())
    )
    detail = ", ".join(f"f{key}={r[0]} {r[1]} {r[2]:.2f}s" for key, r in results.items())
    report(1, ok, detail)


def test_criterion_02_s_equals_1():
    t = time.perf_counter()
    got = {n: fexact_cli(n, 1) for n in range(2, 7)}
    total = time.perf_counter() - t
    ok = all(size == n // 2 + 1 and status == PROVEN for n, (size, status, _) in got.items()) and total < 60
    report(2, ok, " ".join(f"f({n},1)={v[0]}" for n, v in got.items()) + f" total {total:.1f}s")


def test_criterion_03_top_values():
    cases = {(2, 2): 2, (3, 3): 6, (4, 4): 24, (4, 3): 24}
    got = {k: fexact_cli(*k) for k in cases}
    ok = all(got[k][:2] == (v, PROVEN) for k, v in cases.items())
    report(3, ok, " ".join(f"f{k}={got[k][0]}" for k in cases))


def test_criterion_04_bound_chain():
    failures = []
    for n in range(1, 6):
        for s in range(1, n + 1):
            b = ball_size(n, n - s)
            lower = math.ceil(Fraction(math.factorial(n), b))
            upper = math.ceil(harmonic_fraction(b) * Fraction(math.factorial(n), b))
            size, status, _ = fexact_cli(n, s)
            g = len(greedy_cover(n, s))
            if not (status == PROVEN and lower <= size <= g <= upper):
                failures.append(f"(n={n}, s={s}): {lower} <= {size} <= {g} <= {upper} [{status}]")
    size53, _, secs53 = fexact_cli(5, 3)
    detail = f"all n <= 5 (f(5,3)={size53} proven in {secs53:.0f}s)"
    report(4, not failures, detail if not failures else "; ".join(failures))


def test_criterion_05_strict_lower_bounds():
    bad = []
    for n in range(2, 6):
        if not Fraction(fexact_cli(n, 2)[0]) > Fraction(3 * n, 4):
            bad.append(f"f({n},2)")
    for n in range(3, 6):
        if not fexact_cli(n, 3)[0] > n:
            bad.append(f"f({n},3)")
    report(5, not bad, "f(n,2) > 3n/4 and f(n,3) > n" if not bad else "violated: " + ", ".join(bad))


def test_criterion_06_ball_sizes():
    t = time.perf_counter()
    bad = [
        (n, k)
        for n in range(1, 8)
        for k in range(n + 1)
        if ball_size(n, k) != oracles.ball_count(n, k)
    ]
    ends = all(ball_size(n, 1) == 1 and ball_size(n, n) == math.factorial(n) for n in range(1, 8))
    elapsed = time.perf_counter() - t
    report(6, not bad and ends and elapsed < 30, f"n <= 7 brute force in {elapsed:.1f}s")


def test_criterion_07_light_rainbow_sweep():
    t = time.perf_counter()
    res = light_rainbow_sweep(SweepConfig("light", (4, 5, 6), trials=500, seed=SEED, exhaustive_order=3))
    elapsed = time.perf_counter() - t
    ok = res.ok and res.instances >= 27 + 1500 and elapsed < 300
    report(7, ok, f"{res.instances} instances, {len(res.violations)} violations, {res.fallbacks} fallbacks, {elapsed:.1f}s")


def test_criterion_08_klight_sweep():
    t = time.perf_counter()
    a = klight_sweep(SweepConfig("klight", (4, 5, 6), trials=500, s=3, seed=SEED))
    b = klight_sweep(SweepConfig("klight", (6,), trials=500, s=9, seed=SEED))
    elapsed = time.perf_counter() - t
    ok = a.ok and b.ok and elapsed < 300
    report(8, ok, f"s=3: {a.instances} instances, s=9: {b.instances} instances, "
                  f"{len(a.violations) + len(b.violations)} violations, {elapsed:.1f}s")


def test_criterion_09_latin_bridge():
    t = time.perf_counter()
    expected = {2: 0, 3: 3, 4: 0, 5: 15, 6: 0}
    counts = {n: count_transversals(cayley_table(n)) for n in expected}
    z5_oracle = oracles.transversal_count(cayley_table(5).cells)
    radii = {n: rows_covering_radius(cayley_table(n)) for n in (4, 6)}
    short = [L for L in latin_corpus(7, 10, SEED) if len(longest_partial_transversal(L)) < L.n - 1]
    elapsed = time.perf_counter() - t
    ok = counts == expected and z5_oracle == 15 and radii == {4: 2, 6: 4} and not short and elapsed < 120
    report(9, ok, f"counts {counts}, radii {radii}, {len(short)} squares without near transversal, {elapsed:.1f}s")


def test_criterion_10_reduction():
    t = time.perf_counter()
    res = reduction_sweep(SweepConfig("reduce", (4, 5), trials=200, seed=SEED))
    elapsed = time.perf_counter() - t
    report(10, res.ok and elapsed < 120, f"{res.instances} sets, {len(res.violations)} failures, {elapsed:.1f}s")


def test_criterion_11_determinism():
    commands = [
        ["bounds", "7", "3"],
        ["fexact", "4", "2"],
        ["greedy", "5", "3"],
        ["latin", "--cayley", "5", "longest"],
        ["sweep", "light", "--orders", "4,5", "--trials", "40"],
        ["sweep", "reduce", "--orders", "4", "--trials", "20", "--jobs", "2"],
    ]
    mismatched = []
    for cmd in commands:
        outs = []
        for hashseed in ("1", "2"):
            env = dict(os.environ, PYTHONHASHSEED=hashseed)
            proc = subprocess.run(
                [sys.executable, "-m", "permcover", "--format", "structured", "--seed", "7", *cmd],
                capture_output=True, env=env, check=True,
            )
            outs.append(proc.stdout)
        if outs[0] != outs[1]:
            mismatched.append(" ".join(cmd))
    report(11, not mismatched, f"{len(commands)} commands byte-identical across processes"
           if not mismatched else "differs: " + "; ".join(mismatched))


def test_criterion_12_f52_budget():
    code, fields, _ = run_cli("--budget", str(10**9), "fexact", "5", "2")
    status, size = fields["status"], int(fields["size"])
    ok = (status == PROVEN and code == 0 and size >= 4) or (status == "budget-exhausted" and code == 2)
    report(12, ok, f"f(5,2) = {size} ({status}, {fields['nodes']} nodes)")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
