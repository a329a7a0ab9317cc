"""Ranked suspiciousness reports: sorting, tie-breaking, aggregation, explanations."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import formulas
from .errors import NoSuchGranularity, NotCoarser
from .formulas import Formula, evaluate
from .spectrum import (
    BasicMetrics,
    ElementKind,
    Spectrum,
    all_metrics,
    basic_metrics,
    descendants,
)


class Tiebreak(Enum):
    INPUT_ORDER = "INPUT_ORDER"
    NAME_ASC = "NAME_ASC"
    LINE_ASC = "LINE_ASC"
    AVERAGE_RANK = "AVERAGE_RANK"


class Aggregator(Enum):
    MAX = "MAX"
    MEAN = "MEAN"
    SUM = "SUM"


DEFAULT_TIEBREAK = Tiebreak.LINE_ASC
DEFAULT_AGGREGATOR = Aggregator.MAX


@dataclass(frozen=True)
class RankedEntry:
    element: int
    score: float
    rank: int | float
    metrics: BasicMetrics
    tie_group: int


@dataclass(frozen=True)
class RankedReport:
    entries: tuple[RankedEntry, ...]
    formula: Formula
    granularity: ElementKind
    tiebreak: Tiebreak
    no_failing_tests: bool = False
    pinned: int | None = None

    def scores(self) -> dict[int, float]:
        return {e.element: e.score for e in self.entries}

    def entry(self, element_id: int) -> RankedEntry:
        for e in self.entries:
            if e.element == element_id:
                return e
        raise KeyError(element_id)


@dataclass(frozen=True)
class Explanation:
    element: int
    metrics: BasicMetrics
    formula_text: str
    trace: str
    score: float
    failing_tests: tuple[int, ...]
    passing_count: int


def _tiebreak_key(spectrum: Spectrum, tiebreak: Tiebreak):
    if tiebreak is Tiebreak.INPUT_ORDER:
        return lambda eid: spectrum.input_order(eid)
    if tiebreak is Tiebreak.NAME_ASC:
        return lambda eid: (spectrum.elements[eid].name, eid)
    if tiebreak is Tiebreak.LINE_ASC:
        return lambda eid: (
            spectrum.elements[eid].path,
            spectrum.elements[eid].start_line,
            spectrum.elements[eid].end_line,
            eid,
        )
    # AVERAGE_RANK shares ranks inside a tie group, so within-group order
    # only needs to be deterministic; ascending id is used.
    return lambda eid: eid


def assemble_report(
    spectrum: Spectrum,
    scores: dict[int, float],
    metrics: dict[int, BasicMetrics],
    formula: Formula,
    granularity: ElementKind,
    tiebreak: Tiebreak,
    no_failing_tests: bool = False,
    pinned: int | None = None,
) -> RankedReport:
    """Sort scored elements into a report.

    Entries are ordered by non-increasing score with ties resolved by the
    named strategy; a pinned element is forced to the top in its own tie
    group with rank 1.
    """
    key = _tiebreak_key(spectrum, tiebreak)
    order = sorted(
        scores,
        key=lambda eid: (0 if eid == pinned else 1, -scores[eid], key(eid)),
    )

    # tie groups are runs of equal score; a pinned head is always its own group
    groups: list[list[int]] = []
    for pos, eid in enumerate(order):
        starts_new = (
            pos == 0
            or scores[eid] != scores[order[pos - 1]]
            or (pinned is not None and pos == 1)
        )
        if starts_new:
            groups.append([])
        groups[-1].append(eid)

    entries = []
    position = 0
    for group_idx, group in enumerate(groups):
        positions = range(position + 1, position + 1 + len(group))
        if tiebreak is Tiebreak.AVERAGE_RANK:
            shared = sum(positions) / len(group)
            ranks = [shared] * len(group)
        else:
            ranks = list(positions)
        for eid, rank_value in zip(group, ranks):
            entries.append(
                RankedEntry(
                    element=eid,
                    score=scores[eid],
                    rank=rank_value,
                    metrics=metrics[eid],
                    tie_group=group_idx,
                )
            )
        position += len(group)

    return RankedReport(
        entries=tuple(entries),
        formula=formula,
        granularity=granularity,
        tiebreak=tiebreak,
        no_failing_tests=no_failing_tests,
        pinned=pinned,
    )


def rank(
    spectrum: Spectrum,
    formula: Formula,
    granularity: ElementKind = ElementKind.STATEMENT,
    tiebreak: Tiebreak = DEFAULT_TIEBREAK,
) -> RankedReport:
    """Score every element of the given kind from its own coverage row.

    With no failing tests the report carries a warning flag; the catalog
    formulas all evaluate to 0 in that case.
    """
    chosen = [e.id for e in spectrum.elements_of_kind(granularity)]
    if not chosen:
        raise NoSuchGranularity(f"spectrum has no {granularity.name} elements")
    metrics = all_metrics(spectrum)
    totals = spectrum.totals
    scores = {eid: evaluate(formula, metrics[eid], totals) for eid in chosen}
    return assemble_report(
        spectrum,
        scores,
        {eid: metrics[eid] for eid in chosen},
        formula,
        granularity,
        tiebreak,
        no_failing_tests=spectrum.failing == 0,
    )


def aggregate(
    report: RankedReport,
    spectrum: Spectrum,
    target: ElementKind,
    aggregator: Aggregator = DEFAULT_AGGREGATOR,
) -> RankedReport:
    """Lift a report to a coarser granularity by combining descendant scores."""
    if target <= report.granularity:
        raise NotCoarser(
            f"{target.name} is not coarser than {report.granularity.name}"
        )
    targets = [e.id for e in spectrum.elements_of_kind(target)]
    if not targets:
        raise NoSuchGranularity(f"spectrum has no {target.name} elements")

    fine_scores = report.scores()
    scores: dict[int, float] = {}
    metrics: dict[int, BasicMetrics] = {}
    for tid in targets:
        below = [
            fine_scores[d]
            for d in descendants(spectrum, tid, report.granularity)
            if d in fine_scores
        ]
        if not below:
            scores[tid] = 0.0
        elif aggregator is Aggregator.MAX:
            scores[tid] = max(below)
        elif aggregator is Aggregator.SUM:
            scores[tid] = sum(below)
        else:
            scores[tid] = sum(below) / len(below)
        metrics[tid] = basic_metrics(spectrum, tid)

    return assemble_report(
        spectrum,
        scores,
        metrics,
        report.formula,
        target,
        report.tiebreak,
        no_failing_tests=report.no_failing_tests,
    )


def rank_at_granularity(
    spectrum: Spectrum,
    formula: Formula,
    granularity: ElementKind,
    tiebreak: Tiebreak = DEFAULT_TIEBREAK,
    aggregator: Aggregator = DEFAULT_AGGREGATOR,
) -> RankedReport:
    """Rank at any granularity: direct at the finest kind present, aggregated above.

    Coverage is normally recorded at the finest kind (statements); scores for
    coarser kinds are defined as aggregations of the fine scores rather than
    re-derived coverage.
    """
    kinds = spectrum.kinds_present()
    if granularity not in kinds:
        raise NoSuchGranularity(f"spectrum has no {granularity.name} elements")
    finest = kinds[0]
    if granularity == finest:
        return rank(spectrum, formula, granularity, tiebreak)
    base = rank(spectrum, formula, finest, tiebreak)
    return aggregate(base, spectrum, granularity, aggregator)


def explain(spectrum: Spectrum, formula: Formula, element_id: int) -> Explanation:
    """Why an element got its score: metrics, a substituted trace, covering tests.

    The trace is the formula text with terminals replaced by their values;
    evaluating it reproduces the reported score bit for bit.
    """
    element = spectrum.element(element_id)
    m = basic_metrics(spectrum, element_id)
    f, p = spectrum.totals
    score = evaluate(formula, m, (f, p))
    substitution = {
        "ef": float(m.ef),
        "ep": float(m.ep),
        "nf": float(m.nf),
        "np": float(m.np),
        "F": float(f),
        "P": float(p),
    }
    trace = formulas.render(formula.root, substitution)
    bits = spectrum.covering_bits(element.id)
    failing = tuple(
        tid
        for tid in sorted(spectrum.tests)
        if spectrum.tests[tid].outcome.name == "FAIL"
        and bits >> spectrum._test_slot[tid] & 1
    )
    return Explanation(
        element=element_id,
        metrics=m,
        formula_text=formula.text,
        trace=trace,
        score=score,
        failing_tests=failing,
        passing_count=m.ep,
    )


def color_scale(score: float) -> tuple[int, int, int]:
    """Linear green-to-red ramp: (0,200,0) at 0 up to (220,0,0) at 1."""
    t = min(1.0, max(0.0, score))
    return (int(round(220 * t)), int(round(200 * (1 - t))), 0)


def formula_label(formula: Formula) -> str:
    return formula.builtin if formula.builtin is not None else formula.text


def report_to_dict(spectrum: Spectrum, report: RankedReport, limit: int | None = None):
    """Serialize a report for the wire / canonical report documents."""
    entries = report.entries if limit is None else report.entries[:limit]
    rows = []
    for e in entries:
        el = spectrum.elements[e.element]
        rows.append(
            {
                "element": e.element,
                "name": el.name,
                "kind": el.kind.name,
                "path": el.path,
                "start_line": el.start_line,
                "end_line": el.end_line,
                "parent": el.parent,
                "score": e.score,
                "rank": e.rank,
                "tie_group": e.tie_group,
                "metrics": {
                    "ef": e.metrics.ef,
                    "ep": e.metrics.ep,
                    "nf": e.metrics.nf,
                    "np": e.metrics.np,
                },
                "color": list(color_scale(e.score)),
            }
        )
    return {
        "version": "sbfl-report/1",
        "formula": formula_label(report.formula),
        "granularity": report.granularity.name,
        "tiebreak": report.tiebreak.value,
        "no_failing_tests": report.no_failing_tests,
        "total_entries": len(report.entries),
        "entries": rows,
    }
