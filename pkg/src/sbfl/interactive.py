"""Interactive fault localization: developer verdicts reorder the ranking.

Verdicts adjust per-element score multipliers (base scores never change) and
propagate along the call graph, treated as undirected, with 0.5-per-hop decay
up to two hops.  The whole session state is replayable from the feedback log,
which is what makes undo and on-demand reanalysis cheap and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import EmptyLog, SbflError, SessionConcluded, UnknownElement
from .formulas import Formula
from .ranking import (
    DEFAULT_AGGREGATOR,
    DEFAULT_TIEBREAK,
    Aggregator,
    RankedReport,
    Tiebreak,
    assemble_report,
    rank_at_granularity,
)
from .spectrum import ElementKind, Spectrum

PROPAGATION_RADIUS = 2


class Verdict(Enum):
    NOT_FAULTY = "NOT_FAULTY"
    SUSPICIOUS_CONTEXT = "SUSPICIOUS_CONTEXT"
    FAULT_FOUND = "FAULT_FOUND"


@dataclass(frozen=True)
class FeedbackAction:
    element: int
    verdict: Verdict
    seq: int


@dataclass(frozen=True)
class CallGraph:
    """Directed caller -> callee edges between METHOD elements."""

    edges: tuple[tuple[int, int], ...]

    def neighbors_within(self, start: int, radius: int) -> dict[int, int]:
        """Shortest undirected hop distance to every node within radius."""
        adjacency: dict[int, set[int]] = {}
        for a, b in self.edges:
            adjacency.setdefault(a, set()).add(b)
            adjacency.setdefault(b, set()).add(a)
        dist = {start: 0}
        frontier = [start]
        for hop in range(1, radius + 1):
            nxt = []
            for node in frontier:
                for nb in adjacency.get(node, ()):
                    if nb not in dist:
                        dist[nb] = hop
                        nxt.append(nb)
            frontier = nxt
        dist.pop(start)
        return dist


def _validated_graph(spectrum: Spectrum, graph: CallGraph | None) -> CallGraph | None:
    if graph is None:
        return None
    for a, b in graph.edges:
        for endpoint in (a, b):
            element = spectrum.element(endpoint)
            if element.kind is not ElementKind.METHOD:
                raise SbflError(
                    f"call graph endpoint {endpoint} is {element.kind.name}, not METHOD"
                )
    return graph


def _pruned_graph(spectrum: Spectrum, graph: CallGraph | None) -> CallGraph | None:
    """Drop edges whose endpoints are gone or no longer methods."""
    if graph is None:
        return None

    def valid(eid: int) -> bool:
        el = spectrum.elements.get(eid)
        return el is not None and el.kind is ElementKind.METHOD

    return CallGraph(tuple((a, b) for a, b in graph.edges if valid(a) and valid(b)))


@dataclass(frozen=True)
class ReanalyzeResult:
    report: RankedReport
    skipped: tuple[FeedbackAction, ...]


class Session:
    """Single-writer iFL state: spectrum + formula + feedback log + multipliers."""

    def __init__(
        self,
        spectrum: Spectrum,
        formula: Formula,
        granularity: ElementKind = ElementKind.STATEMENT,
        tiebreak: Tiebreak = DEFAULT_TIEBREAK,
        call_graph: CallGraph | None = None,
        aggregator: Aggregator = DEFAULT_AGGREGATOR,
    ):
        self.spectrum = spectrum
        self.formula = formula
        self.granularity = granularity
        self.tiebreak = tiebreak
        self.aggregator = aggregator
        self.call_graph = _validated_graph(spectrum, call_graph)
        self.log: list[FeedbackAction] = []
        self.dirty = False
        self.concluded = False
        self.pinned: int | None = None
        self._rebase()
        self._reset_multipliers()

    def _rebase(self) -> None:
        self._base = rank_at_granularity(
            self.spectrum, self.formula, self.granularity, self.tiebreak, self.aggregator
        )

    def _reset_multipliers(self) -> None:
        self.multipliers = {e.element: 1.0 for e in self._base.entries}
        self.concluded = False
        self.pinned = None

    @property
    def base_report(self) -> RankedReport:
        return self._base

    def current_report(self) -> RankedReport:
        scores = {e.element: e.score * self.multipliers[e.element] for e in self._base.entries}
        metrics = {e.element: e.metrics for e in self._base.entries}
        return assemble_report(
            self.spectrum,
            scores,
            metrics,
            self.formula,
            self.granularity,
            self.tiebreak,
            no_failing_tests=self._base.no_failing_tests,
            pinned=self.pinned,
        )

    def next_seq(self) -> int:
        return self.log[-1].seq + 1 if self.log else 1

    def _apply_effect(self, action: FeedbackAction) -> None:
        element = action.element
        hops = {}
        if self.call_graph is not None:
            hops = self.call_graph.neighbors_within(element, PROPAGATION_RADIUS)
        if action.verdict is Verdict.NOT_FAULTY:
            self.multipliers[element] = 0.0
            for nb, hop in hops.items():
                if nb in self.multipliers:
                    self.multipliers[nb] *= 0.5**hop
        elif action.verdict is Verdict.SUSPICIOUS_CONTEXT:
            self.multipliers[element] *= 2.0
            for nb, hop in hops.items():
                if nb in self.multipliers:
                    self.multipliers[nb] *= 1.0 + 0.5**hop
        else:
            self.concluded = True
            self.pinned = element

    def apply_feedback(self, action: FeedbackAction) -> RankedReport:
        """Record a verdict and return the re-sorted ranking."""
        if self.concluded:
            raise SessionConcluded("session already concluded by FAULT_FOUND")
        if action.element not in self.multipliers:
            raise UnknownElement(
                f"element {action.element} does not exist at {self.granularity.name} granularity"
            )
        if self.log and action.seq <= self.log[-1].seq:
            raise SbflError(
                f"feedback sequence {action.seq} is not greater than {self.log[-1].seq}"
            )
        self._apply_effect(action)
        self.log.append(action)
        return self.current_report()

    def feedback(self, element: int, verdict: Verdict) -> RankedReport:
        return self.apply_feedback(FeedbackAction(element, verdict, self.next_seq()))

    def _replay(self) -> tuple[FeedbackAction, ...]:
        self._reset_multipliers()
        skipped = []
        for action in self.log:
            if action.element in self.multipliers:
                self._apply_effect(action)
            else:
                skipped.append(action)
        return tuple(skipped)

    def load_log(self, actions: list[FeedbackAction]) -> tuple[FeedbackAction, ...]:
        """Replace the log wholesale and rebuild state by replay; returns skipped."""
        for prev, nxt in zip(actions, actions[1:]):
            if nxt.seq <= prev.seq:
                raise SbflError(
                    f"feedback sequence {nxt.seq} is not greater than {prev.seq}"
                )
        self.log = list(actions)
        return self._replay()

    def undo(self) -> RankedReport:
        """Drop the last verdict and rebuild state by replaying the log."""
        if not self.log:
            raise EmptyLog("no feedback to undo")
        self.log.pop()
        self._replay()
        return self.current_report()

    def mark_dirty(self) -> None:
        self.dirty = True

    def reanalyze(
        self, new_spectrum: Spectrum, call_graph: CallGraph | None = None
    ) -> ReanalyzeResult:
        """Swap in a fresh spectrum and replay the log against it.

        Verdicts on elements that no longer exist are skipped and reported,
        never fatal; they stay in the log so they re-apply if the element
        returns in a later spectrum.
        """
        self.spectrum = new_spectrum
        if call_graph is not None:
            self.call_graph = _validated_graph(new_spectrum, call_graph)
        else:
            self.call_graph = _pruned_graph(new_spectrum, self.call_graph)
        self._rebase()
        skipped = self._replay()
        self.dirty = False
        return ReanalyzeResult(report=self.current_report(), skipped=skipped)
