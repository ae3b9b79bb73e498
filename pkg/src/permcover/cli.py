"""Command-line front end: ``python3 -m permcover <command> ...``.

Exit codes: 0 success, 1 usage or parse error, 2 node budget exhausted,
3 theorem violation (the counterexample is written to a file whose path is
printed on stderr).
"""
from __future__ import annotations

import argparse
import hashlib
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from . import __version__
from . import rainbow_matching as rm
from .counting import bounds_report
from .cover_solver import EXHAUSTED, f_exact, greedy_cover, harmonic_cap
from .latin import (
    LatinViolation,
    cayley_table,
    count_transversals,
    load_square,
    longest_partial_transversal,
    rows_covering_radius,
)
from .perm_core import (
    EnumerationCapExceeded,
    PermSet,
    PermSetParseError,
    TransitiveSetError,
    farthest_point,
    reduce_nontransitive,
)
from .sweeps import SWEEPS, SweepConfig, SweepResult

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_VIOLATION = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    fmt: str = "human"
    seed: int = 0
    jobs: int = 1
    budget: int = 10**9
    cap: int | None = None
    dump_dir: Path = Path(".")


class Output:
    """Collects key/value records; human format pads keys, structured uses ``key=value``."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.lines: list[str] = []
        if config.fmt == "structured":
            self.kv("command", config.command)
            self.kv("seed", config.seed)
            self.kv("rng", "python-random")

    def kv(self, key: str, value) -> None:
        if self.config.fmt == "structured":
            self.lines.append(f"{key}={value}")
        else:
            self.lines.append(f"{key.replace('_', ' ')}: {value}")

    def block(self, text: str) -> None:
        self.lines.extend(text.rstrip("\n").split("\n") if text else [])

    def render(self) -> str:
        return "\n".join(self.lines) + "\n"


class CommandError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_permset(path: str) -> PermSet:
    try:
        return PermSet.load(path)
    except OSError as exc:
        raise CommandError(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from None


def _dump_violation(config: RunConfig, report: str) -> Path:
    digest = hashlib.sha256(report.encode()).hexdigest()[:12]
    config.dump_dir.mkdir(parents=True, exist_ok=True)
    path = config.dump_dir / f"violation-{digest}.txt"
    path.write_text(report)
    return path


# ----------------------------------------------------------------------
# commands


def cmd_crad(config: RunConfig, out: Output, args) -> int:
    S = _load_permset(args.file)
    radius, far = farthest_point(S, config.cap)
    out.kv("n", S.n)
    out.kv("size", len(S))
    out.kv("radius", radius)
    out.kv("farthest", far)
    return EXIT_OK


def cmd_fexact(config: RunConfig, out: Output, args) -> int:
    res = f_exact(args.n, args.s, budget=config.budget, cap=config.cap)
    out.kv("n", res.n)
    out.kv("s", res.s)
    out.kv("status", res.status)
    out.kv("size", res.size)
    out.kv("nodes", res.nodes_explored)
    out.kv("lower_bound", res.lower_bound)
    out.block(res.witness.to_text())
    return EXIT_BUDGET if res.status == EXHAUSTED else EXIT_OK


def cmd_greedy(config: RunConfig, out: Output, args) -> int:
    S = greedy_cover(args.n, args.s, config.cap)
    out.kv("n", args.n)
    out.kv("s", args.s)
    out.kv("size", len(S))
    out.kv("harmonic_cap", harmonic_cap(args.n, args.s))
    out.block(S.to_text())
    return EXIT_OK


def cmd_bounds(config: RunConfig, out: Output, args) -> int:
    rep = bounds_report(args.n, args.s)
    if config.fmt == "structured":
        out.block(rep.to_structured())
    else:
        out.block(rep.to_text())
    return EXIT_OK


def cmd_reduce(config: RunConfig, out: Output, args) -> int:
    S = _load_permset(args.file)
    red = reduce_nontransitive(S, args.s)
    out.kv("missing_pair", f"{red.witness[0]} {red.witness[1]}")
    out.kv("n", red.result.n)
    out.kv("size", red.input_size)
    out.kv("distinct", red.distinct_size)
    out.block(red.result.to_text())
    return EXIT_OK


def cmd_rainbow(config: RunConfig, out: Output, args) -> int:
    S = _load_permset(args.file)
    G = rm.build_colored_graph(S)
    log = rm.SearchLog()
    try:
        if args.mode == 2:
            M = rm.find_light_rainbow_pm(G, best_effort=args.best_effort, log=log, seed=config.seed)
        else:
            M = rm.find_klight_srainbow_pm(G, args.mode, best_effort=args.best_effort, log=log)
    except rm.RegimeError as exc:
        raise CommandError(EXIT_USAGE, f"{exc} (use --best-effort)") from None
    except rm.NotFound as exc:
        out.kv("status", "not-found")
        out.kv("reason", exc)
        return EXIT_OK
    _, cert = rm.matching_to_perm(M)
    out.kv("status", "found")
    out.kv("mode", args.mode)
    out.kv("switches", log.moves)
    out.kv("fallback", int(log.used_fallback))
    out.kv("permutation", cert.perm)
    out.kv("rainbow_level", cert.rainbow_level)
    out.kv("guaranteed_min_distance", cert.guaranteed)
    out.kv("min_distance", cert.min_distance if cert.distances else "-")
    out.block(M.to_text())
    return EXIT_OK


def cmd_latin(config: RunConfig, out: Output, args) -> int:
    if (args.cayley is None) == (args.file is None):
        raise CommandError(EXIT_USAGE, "give exactly one of FILE or --cayley N")
    try:
        L = cayley_table(args.cayley) if args.cayley is not None else load_square(args.file)
    except OSError as exc:
        raise CommandError(EXIT_USAGE, f"cannot read {args.file}: {exc.strerror}") from None
    out.kv("n", L.n)
    if args.action == "validate":
        out.kv("valid", 1)
        out.block(L.to_text())
    elif args.action == "transversals":
        out.kv("transversals", count_transversals(L, limit=args.limit, cap=config.cap))
    elif args.action == "longest":
        pt = longest_partial_transversal(L, cap=config.cap)
        out.kv("longest", len(pt))
        out.kv("cells", " ".join(f"{r},{c}" for r, c, _ in pt.entries))
    else:
        out.kv("radius", rows_covering_radius(L, config.cap))
    return EXIT_OK


def _run_sweep(config: SweepConfig) -> SweepResult:
    return SWEEPS[config.kind](config)


def cmd_sweep(config: RunConfig, out: Output, args) -> int:
    orders = tuple(int(tok) for tok in args.orders.split(","))
    # one sub-sweep per order, each seeded identically, so --jobs does not change results
    parts = [SweepConfig(args.kind, (n,), args.trials, args.s, config.seed) for n in orders]
    if args.kind == "light" and args.exhaustive:
        parts[0] = replace(parts[0], exhaustive_order=args.exhaustive)
    if args.kind == "latin":
        parts = [SweepConfig(args.kind, (max(orders),), args.trials, args.s, config.seed)]
    if config.jobs > 1 and len(parts) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_sweep, parts))
    else:
        results = [_run_sweep(p) for p in parts]
    violations = [v for r in results for v in r.violations]
    out.kv("kind", args.kind)
    out.kv("orders", ",".join(map(str, orders)))
    out.kv("trials", args.trials)
    out.kv("instances", sum(r.instances for r in results))
    out.kv("fallbacks", sum(r.fallbacks for r in results))
    out.kv("violations", len(violations))
    if violations:
        path = _dump_violation(config, "\n".join(violations))
        print(f"counterexample written to {path}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


COMMANDS = {
    "crad": cmd_crad,
    "fexact": cmd_fexact,
    "greedy": cmd_greedy,
    "bounds": cmd_bounds,
    "reduce": cmd_reduce,
    "rainbow": cmd_rainbow,
    "latin": cmd_latin,
    "sweep": cmd_sweep,
}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for budget exhaustion here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("human", "structured"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="unsigned seed for all randomness")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes for sweeps")
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS, help="search node budget")
    common.add_argument("--cap", type=int, default=argparse.SUPPRESS, help="enumeration cap override")
    common.add_argument("--dump-dir", default=argparse.SUPPRESS, help="where counterexamples are written")

    p = _Parser(prog="permcover", parents=[common], description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("crad", parents=[common], help="covering radius of a permutation set")
    c.add_argument("file")
    for name, text in (("fexact", "exact f(n,s)"), ("greedy", "greedy cover"), ("bounds", "bounds on f(n,s)")):
        c = sub.add_parser(name, parents=[common], help=text)
        c.add_argument("n", type=int)
        c.add_argument("s", type=int)
    c = sub.add_parser("reduce", parents=[common], help="reduce a non-transitive set to degree n-1")
    c.add_argument("file")
    c.add_argument("s", type=int)
    c = sub.add_parser("rainbow", parents=[common], help="light/rainbow perfect matching and certificate")
    c.add_argument("file")
    c.add_argument("mode", type=int, help="2 for the 3n/4 regime, s >= 3 for the alpha n regime")
    c.add_argument("--best-effort", action="store_true", help="allow inputs outside the guaranteed regime")
    c = sub.add_parser("latin", parents=[common], help="latin square operations")
    c.add_argument("file", nargs="?")
    c.add_argument("--cayley", type=int, metavar="N")
    c.add_argument("action", choices=("validate", "transversals", "longest", "crad"))
    c.add_argument("--limit", type=int)
    c = sub.add_parser("sweep", parents=[common], help="seeded random theorem sweep")
    c.add_argument("kind", choices=sorted(SWEEPS))
    c.add_argument("--orders", default="4,5,6")
    c.add_argument("--trials", type=int, default=500)
    c.add_argument("-s", type=int, default=3, dest="s")
    c.add_argument("--exhaustive", type=int, default=3, metavar="N",
                   help="light sweep: also try every multiset of degree N (0 to skip)")
    return p


def _config(args) -> RunConfig:
    g = vars(args)
    cfg = RunConfig(args.command)
    return replace(
        cfg,
        fmt=g.get("format", cfg.fmt),
        seed=g.get("seed", cfg.seed),
        jobs=g.get("jobs", cfg.jobs),
        budget=g.get("budget", cfg.budget),
        cap=g.get("cap", cfg.cap),
        dump_dir=Path(g.get("dump_dir", cfg.dump_dir)),
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config(args)
    if config.seed < 0 or config.jobs < 1:
        parser.error("--seed must be >= 0 and --jobs >= 1")
    if config.cap is not None:
        os.environ["PERMCOVER_ENUM_CAP"] = str(config.cap)
    out = Output(config)
    try:
        code = COMMANDS[args.command](config, out, args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except rm.TheoremViolation as exc:
        path = _dump_violation(config, exc.report())
        sys.stdout.write(out.render())
        print(f"theorem violation: {exc}; counterexample written to {path}", file=sys.stderr)
        return EXIT_VIOLATION
    except PermSetParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LatinViolation as exc:
        print(f"invalid square: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EnumerationCapExceeded, TransitiveSetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(out.render())
    return code


if __name__ == "__main__":
    sys.exit(main())
