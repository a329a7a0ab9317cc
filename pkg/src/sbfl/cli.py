"""Command-line front door: batch ranking, explanations, Elo voting, service.

Exit codes: 0 success, 2 usage or input error, 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import elo as elo_mod
from .errors import SbflError, TooFewItems, UnknownElement
from .formulas import resolve_formula
from .ingestion import (
    ParsedDocument,
    parse_canonical,
    parse_junit,
    parse_lcov,
    parse_manifest,
    spectrum_from_lcov,
)
from .ranking import (
    Tiebreak,
    explain,
    rank_at_granularity,
    report_to_dict,
)
from .spectrum import ElementKind, Spectrum

DATA_DIR_ENV = "SBFL_DATA_DIR"
DEFAULT_DATA_DIR = ".sbfl-data"

_GRANULARITIES = {k.name.lower(): k for k in ElementKind}
_TIEBREAKS = {
    "input": Tiebreak.INPUT_ORDER,
    "name": Tiebreak.NAME_ASC,
    "line": Tiebreak.LINE_ASC,
    "avg": Tiebreak.AVERAGE_RANK,
}


def _load_spectrum(args, parser: argparse.ArgumentParser) -> ParsedDocument:
    has_files = args.coverage is not None or args.tests is not None
    if args.spectrum is not None and has_files:
        parser.error("use either --spectrum or --coverage/--tests, not both")
    if args.spectrum is not None:
        return parse_canonical(Path(args.spectrum).read_text())
    if args.coverage is None or args.tests is None:
        parser.error("need --spectrum, or both --coverage and --tests")
    tests = parse_junit(Path(args.tests).read_text())
    manifest_path = Path(args.coverage)
    streams = []
    for test_name, lcov_path in parse_manifest(manifest_path.read_text()):
        resolved = Path(lcov_path)
        if not resolved.is_absolute():
            resolved = manifest_path.parent / resolved
        stream = parse_lcov(resolved.read_text())
        for warning in stream.warnings:
            print(f"warning: {lcov_path}: {warning}", file=sys.stderr)
        streams.append((test_name, stream))
    spectrum = spectrum_from_lcov(tests, streams)
    return ParsedDocument(spectrum=spectrum, call_graph=None, warnings=())


def _location(path: str, start: int, end: int) -> str:
    if not path:
        return "-"
    return f"{path}:{start}" if start == end else f"{path}:{start}-{end}"


def _format_rank(rank) -> str:
    return str(int(rank)) if float(rank).is_integer() else f"{rank:g}"


def _print_table(spectrum: Spectrum, body: dict, out) -> None:
    rows = [
        (
            _format_rank(entry["rank"]),
            f"{entry['score']:.4f}",
            entry["name"],
            _location(entry["path"], entry["start_line"], entry["end_line"]),
        )
        for entry in body["entries"]
    ]
    widths = [
        max([len(header)] + [len(r[i]) for r in rows])
        for i, header in enumerate(("RANK", "SCORE", "ELEMENT", "LOCATION"))
    ]
    header = ("RANK", "SCORE", "ELEMENT", "LOCATION")
    print(
        f"{header[0]:>{widths[0]}}  {header[1]:>{widths[1]}}  "
        f"{header[2]:<{widths[2]}}  {header[3]}",
        file=out,
    )
    for r in rows:
        print(
            f"{r[0]:>{widths[0]}}  {r[1]:>{widths[1]}}  {r[2]:<{widths[2]}}  {r[3]}".rstrip(),
            file=out,
        )


def _cmd_rank(args, parser) -> int:
    parsed = _load_spectrum(args, parser)
    for warning in parsed.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    formula = resolve_formula(args.formula)
    report = rank_at_granularity(
        parsed.spectrum,
        formula,
        _GRANULARITIES[args.granularity],
        _TIEBREAKS[args.tiebreak],
    )
    if report.no_failing_tests:
        print(
            "warning: spectrum has no failing tests; all suspiciousness scores are 0",
            file=sys.stderr,
        )
    body = report_to_dict(parsed.spectrum, report, args.top)
    if args.format == "canonical":
        print(json.dumps(body, indent=2))
    else:
        _print_table(parsed.spectrum, body, sys.stdout)
    return 0


def _cmd_explain(args, parser) -> int:
    parsed = _load_spectrum(args, parser)
    spectrum = parsed.spectrum
    formula = resolve_formula(args.formula)
    matches = [e for e in spectrum.elements.values() if e.name == args.element]
    if not matches and args.element.lstrip("-").isdigit():
        eid = int(args.element)
        if eid in spectrum.elements:
            matches = [spectrum.elements[eid]]
    if not matches:
        raise UnknownElement(f"no element named {args.element!r}")
    element = matches[0]
    exp = explain(spectrum, formula, element.id)
    print(f"element: {element.name} ({_location(element.path, element.start_line, element.end_line)})")
    print(f"formula: {args.formula.strip()} = {exp.formula_text}" if exp.formula_text != args.formula.strip() else f"formula: {exp.formula_text}")
    m = exp.metrics
    f, p = spectrum.totals
    print(f"metrics: ef={m.ef} ep={m.ep} nf={m.nf} np={m.np}  (F={f}, P={p})")
    print(f"trace: {exp.trace} = {exp.score!r}")
    if exp.failing_tests:
        names = ", ".join(
            f"{spectrum.tests[tid].name} (id {tid})" for tid in exp.failing_tests
        )
        print(f"covering failing tests: {names}")
    else:
        print("covering failing tests: none")
    print(f"covering passing tests: {exp.passing_count}")
    return 0


def _cmd_serve(args, parser) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.data_dir, seed=args.seed, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _read_items(path: str) -> list[str]:
    labels = [line.strip() for line in Path(path).read_text().splitlines()]
    return [label for label in labels if label]


def _cmd_elo(args, parser) -> int:
    pool_path = Path(args.pool)
    if args.elo_cmd == "init":
        labels = _read_items(args.items)
        pool = elo_mod.EloPool.from_labels(labels, k=args.k, c=args.c, seed=args.seed)
        pool_path.write_text(elo_mod.dump_pool(pool))
        print(f"initialized pool with {len(labels)} items at {pool_path}")
        return 0

    pool = elo_mod.load_pool(pool_path.read_text())
    if args.elo_cmd == "standings":
        rows = elo_mod.standings(pool)
        width = max([len("LABEL")] + [len(pool.items[i].label) for i, _, _ in rows]) if rows else 5
        print(f"{'POS':>3}  {'ID':>4}  {'LABEL':<{width}}  {'RATING':>8}  {'PLAYED':>6}")
        for pos, (item_id, rating, played) in enumerate(rows, start=1):
            label = pool.items[item_id].label
            print(f"{pos:>3}  {item_id:>4}  {label:<{width}}  {rating:>8.1f}  {played:>6}")
        return 0

    # vote
    if args.seed is not None:
        pool.seed = args.seed
        pool._rng.seed(args.seed)
    if len(pool.items) < 2:
        raise TooFewItems("need at least two items to vote on")
    votes = 0
    while args.max_votes is None or votes < args.max_votes:
        a, b = elo_mod.next_pair(pool)
        print(f"[a] {pool.items[a].label}   vs   [b] {pool.items[b].label}")
        print("winner? [a/b/d=draw/q=quit] ", end="", flush=True)
        line = sys.stdin.readline()
        if not line:
            print()
            break
        choice = line.strip().lower()
        if choice == "q":
            break
        if choice not in ("a", "b", "d"):
            print(f"unrecognized vote {choice!r}; expected a, b, d or q", file=sys.stderr)
            continue
        winner = {"a": "a", "b": "b", "d": "draw"}[choice]
        elo_mod.record_match(pool, a, b, winner)
        pool_path.write_text(elo_mod.dump_pool(pool))
        votes += 1
    print(f"recorded {votes} vote(s); pool saved to {pool_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sbfl", description="Spectrum-based fault localization toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_spectrum_inputs(p):
        p.add_argument("--spectrum", help="canonical spectrum document (JSON)")
        p.add_argument("--coverage", help="manifest of <test name>\\t<lcov path> lines")
        p.add_argument("--tests", help="JUnit XML results file")
        p.add_argument("--formula", required=True, help="builtin name (TARANTULA/OCHIAI/BARINEL) or expression")

    p_rank = sub.add_parser("rank", help="rank code elements by suspiciousness")
    add_spectrum_inputs(p_rank)
    p_rank.add_argument("--granularity", choices=sorted(_GRANULARITIES), default="statement")
    p_rank.add_argument("--tiebreak", choices=sorted(_TIEBREAKS), default="line")
    p_rank.add_argument("--top", type=int, default=None, help="limit output to the top N entries")
    p_rank.add_argument("--format", choices=("table", "canonical"), default="table")

    p_explain = sub.add_parser("explain", help="explain one element's score")
    add_spectrum_inputs(p_explain)
    p_explain.add_argument("--element", required=True, help="element name (or id)")

    p_serve = sub.add_parser("serve", help="run the local session service")
    p_serve.add_argument(
        "--data-dir",
        default=os.environ.get(DATA_DIR_ENV, DEFAULT_DATA_DIR),
        help=f"session storage directory (default ${DATA_DIR_ENV} or {DEFAULT_DATA_DIR})",
    )
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--seed", type=int, default=0, help="seed for session id generation")
    p_serve.add_argument("--ui-dir", default=None, help="serve a built UI from /ui")

    p_elo = sub.add_parser("elo", help="pairwise preference voting with Elo ratings")
    p_elo.add_argument("--pool", required=True, help="pool file (plain text)")
    elo_sub = p_elo.add_subparsers(dest="elo_cmd", required=True)
    p_init = elo_sub.add_parser("init", help="create a pool from an items file (one label per line)")
    p_init.add_argument("--items", required=True)
    p_init.add_argument("--k", type=float, default=elo_mod.DEFAULT_K)
    p_init.add_argument("--c", type=float, default=elo_mod.DEFAULT_C)
    p_init.add_argument("--seed", type=int, default=0)
    p_vote = elo_sub.add_parser("vote", help="interactive pairwise voting")
    p_vote.add_argument("--seed", type=int, default=None, help="override the stored matchmaking seed")
    p_vote.add_argument("--max-votes", type=int, default=None)
    elo_sub.add_parser("standings", help="print the pool sorted by rating")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "rank": _cmd_rank,
        "explain": _cmd_explain,
        "serve": _cmd_serve,
        "elo": _cmd_elo,
    }
    try:
        return handlers[args.command](args, parser)
    except SbflError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - internal failures
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
