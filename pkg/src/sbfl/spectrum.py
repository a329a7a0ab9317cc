"""Program spectrum: coverage matrix, test outcomes, code-element hierarchy.

The coverage relation is stored in both directions: per-test sorted element
id tuples, and a per-element inverted index realized as bitsets over dense
test slots (one arbitrary-precision int per element).  Quadrant counts for
an element are then popcounts of bitset intersections, so no operation ever
walks the full test list per element.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from .errors import DanglingReference, DuplicateId, InvalidHierarchy, UnknownElement


class ElementKind(IntEnum):
    """Granularity levels, finest first. Parent links must go strictly coarser."""

    STATEMENT = 0
    METHOD = 1
    CLASS = 2
    FILE = 3
    PACKAGE = 4


class Outcome(IntEnum):
    PASS = 0
    FAIL = 1


@dataclass(frozen=True)
class CodeElement:
    id: int
    name: str
    kind: ElementKind
    path: str = ""
    start_line: int = 0
    end_line: int = 0
    parent: int | None = None


@dataclass(frozen=True)
class TestCase:
    __test__ = False  # keep pytest from collecting this as a test class

    id: int
    name: str
    outcome: Outcome


@dataclass(frozen=True)
class BasicMetrics:
    """The four quadrant counts for one element: (executed?, failed?)."""

    ef: int
    ep: int
    nf: int
    np: int

    @property
    def covered(self) -> int:
        return self.ef + self.ep


@dataclass(frozen=True)
class TestSelection:
    """Result of select_tests: chosen test ids plus targets no test can cover."""

    tests: tuple[int, ...]
    uncoverable: tuple[int, ...]


class Spectrum:
    """Immutable once built; safe to share across threads for reads."""

    def __init__(
        self,
        elements: dict[int, CodeElement],
        tests: dict[int, TestCase],
        covered_by_test: dict[int, tuple[int, ...]],
        element_bits: dict[int, int],
        test_slot: dict[int, int],
        children: dict[int, tuple[int, ...]],
    ):
        self.elements = elements
        self.tests = tests
        self.covered_by_test = covered_by_test
        self._element_bits = element_bits
        self._test_slot = test_slot
        self._children = children
        self._input_order = {eid: i for i, eid in enumerate(elements)}
        fail_bits = 0
        for tid, t in tests.items():
            if t.outcome is Outcome.FAIL:
                fail_bits |= 1 << test_slot[tid]
        self._fail_bits = fail_bits
        self.failing = sum(1 for t in tests.values() if t.outcome is Outcome.FAIL)
        self.passing = len(tests) - self.failing

    @property
    def totals(self) -> tuple[int, int]:
        return self.failing, self.passing

    def element(self, element_id: int) -> CodeElement:
        try:
            return self.elements[element_id]
        except KeyError:
            raise UnknownElement(f"no element with id {element_id}") from None

    def input_order(self, element_id: int) -> int:
        return self._input_order[element_id]

    def covering_bits(self, element_id: int) -> int:
        self.element(element_id)
        return self._element_bits.get(element_id, 0)

    def kinds_present(self) -> list[ElementKind]:
        return sorted({e.kind for e in self.elements.values()})

    def elements_of_kind(self, kind: ElementKind) -> list[CodeElement]:
        return [e for e in self.elements.values() if e.kind == kind]


def build_spectrum(
    elements: list[CodeElement],
    tests: list[TestCase],
    coverage: list[tuple[int, int]],
) -> Spectrum:
    """Validate ids and hierarchy, then index the coverage relation both ways.

    Raises DuplicateId, DanglingReference (naming the offending pair), or
    InvalidHierarchy (parent cycle or kind-order violation).
    """
    element_map: dict[int, CodeElement] = {}
    for e in elements:
        if e.id in element_map:
            raise DuplicateId(f"duplicate element id {e.id}")
        element_map[e.id] = e
    test_map: dict[int, TestCase] = {}
    for t in tests:
        if t.id in test_map:
            raise DuplicateId(f"duplicate test id {t.id}")
        test_map[t.id] = t

    _validate_hierarchy(element_map)

    # dense bit slots per test, in ascending test id order
    test_slot = {tid: i for i, tid in enumerate(sorted(test_map))}

    per_test: dict[int, set[int]] = {tid: set() for tid in test_map}
    element_bits: dict[int, int] = {}
    for tid, eid in coverage:
        if tid not in test_map:
            raise DanglingReference(f"coverage pair ({tid}, {eid}) references unknown test id {tid}")
        if eid not in element_map:
            raise DanglingReference(f"coverage pair ({tid}, {eid}) references unknown element id {eid}")
        per_test[tid].add(eid)
        element_bits[eid] = element_bits.get(eid, 0) | (1 << test_slot[tid])

    covered_by_test = {tid: tuple(sorted(eids)) for tid, eids in per_test.items()}

    children: dict[int, list[int]] = {}
    for e in element_map.values():
        if e.parent is not None:
            children.setdefault(e.parent, []).append(e.id)
    children_t = {pid: tuple(sorted(cids)) for pid, cids in children.items()}

    return Spectrum(element_map, test_map, covered_by_test, element_bits, test_slot, children_t)


def _validate_hierarchy(element_map: dict[int, CodeElement]) -> None:
    for e in element_map.values():
        if e.parent is None:
            continue
        parent = element_map.get(e.parent)
        if parent is None:
            raise DanglingReference(f"element {e.id} names unknown parent id {e.parent}")
        if parent.kind <= e.kind:
            raise InvalidHierarchy(
                f"element {e.id} ({e.kind.name}) has parent {parent.id} "
                f"of non-coarser kind {parent.kind.name}"
            )
    # kind-order violations already exclude cycles within one chain, but a
    # malformed map could still loop; walk up defensively.
    for e in element_map.values():
        seen = {e.id}
        cur = e.parent
        while cur is not None:
            if cur in seen:
                raise InvalidHierarchy(f"parent cycle through element {cur}")
            seen.add(cur)
            cur = element_map[cur].parent


def basic_metrics(spectrum: Spectrum, element_id: int) -> BasicMetrics:
    """Quadrant counts for one element, from the inverted index."""
    bits = spectrum.covering_bits(element_id)
    ef = (bits & spectrum._fail_bits).bit_count()
    ep = bits.bit_count() - ef
    return BasicMetrics(ef=ef, ep=ep, nf=spectrum.failing - ef, np=spectrum.passing - ep)


def all_metrics(spectrum: Spectrum) -> dict[int, BasicMetrics]:
    """Quadrant counts for every element, in one pass over the coverage relation."""
    ef: dict[int, int] = {}
    ep: dict[int, int] = {}
    for tid, eids in spectrum.covered_by_test.items():
        bucket = ef if spectrum.tests[tid].outcome is Outcome.FAIL else ep
        for eid in eids:
            bucket[eid] = bucket.get(eid, 0) + 1
    f, p = spectrum.totals
    out = {}
    for eid in spectrum.elements:
        e_f = ef.get(eid, 0)
        e_p = ep.get(eid, 0)
        out[eid] = BasicMetrics(ef=e_f, ep=e_p, nf=f - e_f, np=p - e_p)
    return out


def select_tests(spectrum: Spectrum, targets: set[int] | None = None) -> TestSelection:
    """Pick a test subset worth re-running for the given target elements.

    All failing tests come first (ascending id).  Passing tests are then
    added greedily, each step taking the test covering the most still
    uncovered targets (ties broken by ascending test id) until every
    coverable target is covered.  Targets no passing test covers are
    returned separately.  ``targets=None`` means every element.
    """
    if targets is None:
        target_set = set(spectrum.elements)
    else:
        for eid in targets:
            spectrum.element(eid)
        target_set = set(targets)

    failing = sorted(
        tid for tid, t in spectrum.tests.items() if t.outcome is Outcome.FAIL
    )
    selected = list(failing)

    passing = sorted(
        tid for tid, t in spectrum.tests.items() if t.outcome is Outcome.PASS
    )
    covered_at_all: set[int] = set()
    for eids in spectrum.covered_by_test.values():
        covered_at_all.update(eids)
    uncoverable = tuple(sorted(target_set - covered_at_all))

    # The greedy pass seeks passing-test coverage for each target; coverage
    # by failing tests alone does not count, since those run regardless.
    remaining: set[int] = set()
    for tid in passing:
        remaining.update(set(spectrum.covered_by_test[tid]) & target_set)
    while remaining:
        best_tid = None
        best_gain = 0
        for tid in passing:
            gain = len(set(spectrum.covered_by_test[tid]) & remaining)
            if gain > best_gain:
                best_gain, best_tid = gain, tid
        selected.append(best_tid)
        remaining -= set(spectrum.covered_by_test[best_tid])
        passing.remove(best_tid)

    return TestSelection(tests=tuple(selected), uncoverable=uncoverable)


def descendants(spectrum: Spectrum, element_id: int, kind: ElementKind) -> list[int]:
    """All elements of ``kind`` in the subtree rooted at ``element_id``.

    Reflexive: the root itself is included when its kind matches.
    """
    root = spectrum.element(element_id)
    out = []
    stack = [root.id]
    while stack:
        eid = stack.pop()
        if spectrum.elements[eid].kind == kind:
            out.append(eid)
        stack.extend(spectrum._children.get(eid, ()))
    return sorted(out)
