"""Command line interface: ``fullgroup {trace,search,verify,chain}``.

Exit codes: 0 success, 1 a verify suite failed, 2 usage or parse error,
3 resource cap, 4 search degenerate (all candidates trivial), 130 interrupted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, _core, finite, suites
from .machine import (
    DEFAULT_BIT_CAP,
    DEFAULT_EXACT_CAP,
    ResourceLimitError,
    TraceEstimate,
    iter_trace,
)
from .search import (
    SearchConfig,
    SearchOutcome,
    conjugator_family,
    fraction_str,
    greedy_search,
    replay_paper_sequence,
)
from .words import Bracket, WordSyntaxError, parse_macro_defs, parse_word, u_count

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE, EXIT_DEGENERATE, EXIT_INTERRUPT = 0, 1, 2, 3, 4, 130

BOOLEAN_FLAGS = {"replay-paper", "no-timing", "no-elitism", "quiet", "z-tower", "fixed-ratio"}
SUBCOMMANDS = ("trace", "search", "verify", "chain")


class UsageError(Exception):
    pass


def dec4(x: Fraction) -> str:
    return f"{float(x):.4f}"


def emit(rows: list[dict], fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(rows if len(rows) != 1 else rows[0], indent=2) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        out.write(buf.getvalue())
    else:
        for row in rows:
            out.write("  ".join(f"{k}={v}" for k, v in row.items()) + "\n")


def parse_range(text: str) -> list[int]:
    """``"3"``, ``"1..4"`` or ``"-2..2"``."""
    m = re.fullmatch(r"\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?", text)
    if not m:
        raise UsageError(f"bad range {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else lo
    if hi < lo:
        raise UsageError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def parse_int_expr(text: str) -> int:
    """Integers like ``8`` or ``2^3``."""
    m = re.fullmatch(r"\s*(-?\d+)\s*(?:\^\s*(\d+)\s*)?", text)
    if not m:
        raise UsageError(f"bad integer expression {text!r}")
    base = int(m.group(1))
    return base ** int(m.group(2)) if m.group(2) else base


def read_config(path: str) -> list[tuple[str, str]]:
    items = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        items.append((key.strip().replace("_", "-"), value.strip()))
    return items


def expand_config(argv: list[str]) -> list[str]:
    """Splice ``--config FILE`` entries in as flags right after the subcommand,
    so explicit flags given later still win."""
    argv = list(argv)
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
            del argv[i : i + 2]
            break
        if tok.startswith("--config="):
            path = tok.split("=", 1)[1]
            del argv[i]
            break
    if path is None:
        return argv
    tokens = []
    for key, value in read_config(path):
        if key in BOOLEAN_FLAGS:
            if value.lower() in ("1", "true", "yes", "on"):
                tokens.append(f"--{key}")
        else:
            tokens.append(f"--{key}={value}")
    for i, tok in enumerate(argv):
        if tok in SUBCOMMANDS:
            return argv[: i + 1] + tokens + argv[i + 1 :]
    return argv + tokens


def _bracket(value: str | None, default: Bracket) -> Bracket:
    return Bracket(value) if value else default


def _progress(quiet: bool):
    if quiet:
        return None

    def report(done, total, fixed, discarded):
        sys.stderr.write(
            f"progress = {done / total:.4f}, fixed >= {fixed / total:.4f}, "
            f"badness = {discarded / total:.4f}\n"
        )

    return report


# -- trace ----------------------------------------------------------------------


def trace_row(text: str, w, est: TraceEstimate, done: int | None = None) -> dict:
    lo, hi = est.support_bounds
    complete = done is None or done == est.total
    if not complete:
        # unvisited configurations are undetermined
        lo = 1 - Fraction(est.fixed_count + est.discarded_count + est.total - done, est.total)
    return {
        "word": text,
        "u_count": u_count(w),
        "ell": est.ell,
        "fixed_mass": fraction_str(est.fixed_mass),
        "fixed_decimal": dec4(est.fixed_mass),
        "discarded_mass": fraction_str(est.discarded_mass),
        "discarded_decimal": dec4(est.discarded_mass),
        "support_lo": fraction_str(lo),
        "support_hi": fraction_str(hi),
        "is_exact": complete and est.is_exact,
        "status": "complete" if complete else "incomplete",
    }


def cmd_trace(args) -> int:
    conv = _bracket(args.bracket, Bracket.PAPER)
    macros = parse_macro_defs(args.macro or [], conv)
    w = parse_word(args.word, macros, conv)
    if args.ell is None:
        n = u_count(w)
        if n > args.exact_cap:
            raise ResourceLimitError(
                f"|w|_u = {n} exceeds the exact-trace cap {args.exact_cap}; pass --ell"
            )
        ell, bit_cap = n, 2 * args.exact_cap + 2
    else:
        ell, bit_cap = args.ell, args.bit_cap
    if ell < 0:
        raise UsageError("--ell must be nonnegative")
    report = _progress(args.quiet)
    total = 1 << (2 * ell + 2)
    done = fixed = discarded = 0
    try:
        for done, fixed, discarded in iter_trace(w, ell, workers=args.workers, bit_cap=bit_cap):
            if report:
                report(done, total, fixed, discarded)
    except KeyboardInterrupt:
        emit([trace_row(args.word, w, TraceEstimate(ell, fixed, discarded), done)], args.format)
        return EXIT_INTERRUPT
    emit([trace_row(args.word, w, TraceEstimate(ell, fixed, discarded))], args.format)
    return EXIT_OK


# -- search ---------------------------------------------------------------------


def parse_family(text: str, macros) -> list:
    spec = []
    for part in text.split(","):
        name, sep, rng = part.partition(":")
        name = name.strip()
        if not sep or not name:
            raise UsageError(f"bad family entry {part!r}; expected NAME:LO..HI")
        base = parse_word(name, macros)
        spec.append((name, base, parse_range(rng)))
    return conjugator_family(spec)


def search_document(outcome: SearchOutcome, bracket: Bracket, timing: bool) -> dict:
    return {
        "status": outcome.status,
        "bracket": bracket.value,
        "history": [fraction_str(x) for x in outcome.history],
        "results": [r.to_dict(timing) for r in outcome.results],
    }


def cmd_search(args) -> int:
    if args.depth < 1:
        raise UsageError("--depth must be >= 1")
    if args.beam < 1:
        raise UsageError("--beam must be >= 1")
    timing = not args.no_timing
    if args.replay_paper:
        conv = _bracket(args.bracket, Bracket.COMPAT)
        try:
            results = replay_paper_sequence(args.ell, conv, workers=args.workers)
            outcome = SearchOutcome("replay", results)
        except KeyboardInterrupt:
            outcome = SearchOutcome("incomplete", [])
    else:
        conv = _bracket(args.bracket, Bracket.PAPER)
        macros = parse_macro_defs(args.macro or [], conv)
        seed = parse_word(args.seed_word, macros, conv)
        try:
            target = Fraction(args.target)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad --target {args.target!r}") from exc
        try:
            cfg = SearchConfig(
                ell=args.ell,
                family=parse_family(args.family, macros),
                depth=args.depth,
                bracket=conv,
                target_trace=target,
                beam_width=args.beam,
                elitism=not args.no_elitism,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        log = None if args.quiet else (lambda msg: sys.stderr.write(msg + "\n"))
        outcome = greedy_search(seed, cfg, workers=args.workers, log=log)

    doc = search_document(outcome, conv, timing)
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
    if args.format == "json":
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        rows = [
            {
                "rank": i,
                "depth": r.depth,
                "lineage": "/".join(r.lineage),
                "letters": len(r.word),
                "u_count": u_count(r.word),
                "fixed_mass": fraction_str(r.fixed_mass),
                "fixed_decimal": dec4(r.fixed_mass),
                "discarded_decimal": dec4(r.estimate.discarded_mass),
            }
            for i, r in enumerate(outcome.results, 1)
        ]
        sys.stdout.write(f"status={outcome.status}\n")
        if rows:
            emit(rows, args.format)
    if outcome.status == "trivialized":
        return EXIT_DEGENERATE
    if outcome.status == "incomplete":
        return EXIT_INTERRUPT
    return EXIT_OK


# -- verify ---------------------------------------------------------------------


def cmd_verify(args) -> int:
    if args.suite not in suites.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(suites.SUITES)}")
    kwargs = {"seed": args.seed, "workers": args.workers}
    if args.count is not None:
        kwargs["count"] = args.count
    rep = suites.SUITES[args.suite](**kwargs)
    rows = [
        {"suite": rep.suite, "check": c.name, "result": "PASS" if c.passed else "FAIL", "detail": c.detail}
        for c in rep.checks
    ]
    emit(rows, args.format)
    return EXIT_OK if rep.passed else EXIT_FAIL


# -- chain ----------------------------------------------------------------------


def cmd_chain(args) -> int:
    if args.z_tower == args.fixed_ratio:
        raise UsageError("choose exactly one of --z-tower or --fixed-ratio")
    rows = []
    if args.z_tower:
        ns = parse_range(args.n)
        ms = parse_range(args.m)
        for m in ms:
            for n in ns:
                if not 0 <= n < m:
                    raise UsageError(f"need 0 <= n < m, got n={n}, m={m}")
                s = finite.z_tower_support(n, m)
                rows.append({"n": n, "m": m, "k": 1 << n, "support": fraction_str(s), "decimal": dec4(s)})
    else:
        g = parse_int_expr(args.element)
        ms = parse_range(args.m or "1..8")
        if min(ms) < 0:
            raise UsageError("levels must be nonnegative")
        ratios = finite.fixed_ratio_chain(finite.z_tower_levels(g, ms))
        for m, r in zip(ms, ratios):
            rows.append({"m": m, "index": 1 << m, "fixed_ratio": fraction_str(r), "decimal": dec4(r)})
    emit(rows, args.format)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=positive_int, default=1)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--quiet", action="store_true", help="no progress on stderr")

    p = argparse.ArgumentParser(prog="fullgroup", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="key=value file mirroring the flags")
    p.add_argument("--version", action="version",
                   version=f"%(prog)s {__version__} (kernel backend: {_core.BACKEND})")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("trace", parents=[common], help="fixed-point measure of a word")
    t.add_argument("--word", required=True)
    t.add_argument("--ell", type=int, help="window radius (default: exact, ell = |w|_u)")
    t.add_argument("--bracket", choices=["paper", "compat"])
    t.add_argument("--macro", action="append", metavar="NAME=EXPR")
    t.add_argument("--bit-cap", type=int, default=DEFAULT_BIT_CAP)
    t.add_argument("--exact-cap", type=int, default=DEFAULT_EXACT_CAP)
    t.add_argument("--format", choices=["json", "csv", "text"], default="text")
    t.set_defaults(func=cmd_trace)

    s = sub.add_parser("search", parents=[common], help="iterated-commutator beam search")
    s.add_argument("--replay-paper", action="store_true", help="rebuild g1, g2, g3")
    s.add_argument("--seed-word", default="v")
    s.add_argument("--family", default="a:1..14,b:1..4")
    s.add_argument("--depth", type=int, default=3)
    s.add_argument("--ell", type=int, default=7)
    s.add_argument("--beam", type=int, default=8)
    s.add_argument("--target", default="1")
    s.add_argument("--bracket", choices=["paper", "compat"])
    s.add_argument("--macro", action="append", metavar="NAME=EXPR")
    s.add_argument("--no-elitism", action="store_true")
    s.add_argument("--no-timing", action="store_true", help="omit wall_ms for byte-stable output")
    s.add_argument("--out", help="write the JSON result document here")
    s.add_argument("--format", choices=["json", "csv", "text"], default="text")
    s.set_defaults(func=cmd_search)

    v = sub.add_parser("verify", parents=[common], help="run a property suite")
    v.add_argument("suite")
    v.add_argument("--count", type=int)
    v.add_argument("--format", choices=["json", "csv", "text"], default="text")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("chain", parents=[common], help="profinite tower supports and fixed ratios")
    c.add_argument("--z-tower", action="store_true")
    c.add_argument("--fixed-ratio", action="store_true")
    c.add_argument("--n", default="1..4")
    c.add_argument("--m", default=None)
    c.add_argument("--element", default="1")
    c.add_argument("--format", choices=["json", "csv", "text"], default="csv")
    c.set_defaults(func=cmd_chain)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        argv = expand_config(argv)
    except (OSError, UsageError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "chain" and args.z_tower and args.m is None:
        args.m = "10"
    try:
        return args.func(args)
    except (WordSyntaxError, UsageError, KeyError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ResourceLimitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
