"""Coverage and test-result ingestion, plus the canonical spectrum document.

Formats:
  - canonical spectrum document: JSON, version tag "sbfl-spectrum/1", the
    round-trippable source of truth (elements, tests, coverage pairs and an
    optional call graph);
  - LCOV subset: SF / DA / end_of_record records, one stream per test;
  - JUnit XML subset: testcase elements with failure/error/skipped children;
  - manifest: one line per test, `<test name><TAB><lcov file path>`, which is
    the explicit join between JUnit outcomes and LCOV streams.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .errors import (
    DanglingReference,
    DuplicateId,
    InvalidHierarchy,
    MalformedDocument,
    MalformedRecord,
    SchemaError,
    VersionMismatch,
)
from .interactive import CallGraph
from .spectrum import (
    CodeElement,
    ElementKind,
    Outcome,
    Spectrum,
    TestCase,
    build_spectrum,
)

SPECTRUM_VERSION = "sbfl-spectrum/1"

_KNOWN_TOP_LEVEL = ("version", "elements", "tests", "coverage", "call_graph")

# LCOV record types we knowingly skip (branch/function/summary data).
_IGNORED_LCOV = {"TN", "VER", "FN", "FNDA", "FNF", "FNH", "BRDA", "BRF", "BRH", "LF", "LH"}


@dataclass(frozen=True)
class ParsedDocument:
    spectrum: Spectrum
    call_graph: CallGraph | None
    warnings: tuple[str, ...]


# -- canonical spectrum document ----------------------------------------------

def _require(obj: dict, key: str, path: str):
    if key not in obj:
        raise SchemaError(f"{path}{key}" if not path else f"{path}.{key}", "missing required field")
    return obj[key]


def _as_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, f"expected an integer, got {value!r}")
    return value


def _as_str(value, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(path, f"expected a string, got {value!r}")
    return value


def _as_list(value, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(path, f"expected an array, got {value!r}")
    return value


def _parse_element(obj, path: str) -> CodeElement:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    kind_name = _as_str(_require(obj, "kind", path), f"{path}.kind")
    try:
        kind = ElementKind[kind_name]
    except KeyError:
        raise SchemaError(f"{path}.kind", f"unknown kind {kind_name!r}") from None
    parent = obj.get("parent")
    if parent is not None:
        parent = _as_int(parent, f"{path}.parent")
    return CodeElement(
        id=_as_int(_require(obj, "id", path), f"{path}.id"),
        name=_as_str(_require(obj, "name", path), f"{path}.name"),
        kind=kind,
        path=_as_str(obj.get("path", ""), f"{path}.path"),
        start_line=_as_int(obj.get("start_line", 0), f"{path}.start_line"),
        end_line=_as_int(obj.get("end_line", 0), f"{path}.end_line"),
        parent=parent,
    )


def _parse_test(obj, path: str) -> TestCase:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    outcome_name = _as_str(_require(obj, "outcome", path), f"{path}.outcome")
    try:
        outcome = Outcome[outcome_name]
    except KeyError:
        raise SchemaError(f"{path}.outcome", f"expected PASS or FAIL, got {outcome_name!r}") from None
    return TestCase(
        id=_as_int(_require(obj, "id", path), f"{path}.id"),
        name=_as_str(_require(obj, "name", path), f"{path}.name"),
        outcome=outcome,
    )


def _parse_pair(obj, path: str) -> tuple[int, int]:
    pair = _as_list(obj, path)
    if len(pair) != 2:
        raise SchemaError(path, f"expected a two-element array, got {obj!r}")
    return _as_int(pair[0], f"{path}[0]"), _as_int(pair[1], f"{path}[1]")


def parse_canonical_obj(doc) -> ParsedDocument:
    """Validate an already-decoded canonical document and build the spectrum."""
    if not isinstance(doc, dict):
        raise SchemaError("", "document root must be an object")
    version = doc.get("version")
    if version is None:
        raise SchemaError("version", "missing required field")
    if version != SPECTRUM_VERSION:
        raise VersionMismatch(f"expected {SPECTRUM_VERSION!r}, got {version!r}")

    warnings = tuple(
        f"ignoring unknown field {key!r}" for key in doc if key not in _KNOWN_TOP_LEVEL
    )

    for section in ("elements", "tests", "coverage"):
        if section not in doc:
            raise SchemaError(section, "missing required section")

    elements = [
        _parse_element(item, f"elements[{i}]")
        for i, item in enumerate(_as_list(doc["elements"], "elements"))
    ]
    tests = [
        _parse_test(item, f"tests[{i}]")
        for i, item in enumerate(_as_list(doc["tests"], "tests"))
    ]
    coverage = [
        _parse_pair(item, f"coverage[{i}]")
        for i, item in enumerate(_as_list(doc["coverage"], "coverage"))
    ]
    try:
        spectrum = build_spectrum(elements, tests, coverage)
    except (DuplicateId, DanglingReference, InvalidHierarchy) as exc:
        raise SchemaError("", str(exc)) from exc

    call_graph = None
    if doc.get("call_graph") is not None:
        edges = []
        for i, item in enumerate(_as_list(doc["call_graph"], "call_graph")):
            a, b = _parse_pair(item, f"call_graph[{i}]")
            for endpoint in (a, b):
                if endpoint not in spectrum.elements:
                    raise SchemaError(
                        f"call_graph[{i}]", f"unknown element id {endpoint}"
                    )
            edges.append((a, b))
        call_graph = CallGraph(tuple(edges))

    return ParsedDocument(spectrum=spectrum, call_graph=call_graph, warnings=warnings)


def parse_canonical(text: str) -> ParsedDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"not valid JSON: {exc}") from exc
    return parse_canonical_obj(doc)


def export_canonical_obj(spectrum: Spectrum, call_graph: CallGraph | None = None) -> dict:
    """Canonical document as a dict; key and array order are deterministic."""
    doc = {
        "version": SPECTRUM_VERSION,
        "elements": [
            {
                "id": e.id,
                "name": e.name,
                "kind": e.kind.name,
                "path": e.path,
                "start_line": e.start_line,
                "end_line": e.end_line,
                "parent": e.parent,
            }
            for e in sorted(spectrum.elements.values(), key=lambda e: e.id)
        ],
        "tests": [
            {"id": t.id, "name": t.name, "outcome": t.outcome.name}
            for t in sorted(spectrum.tests.values(), key=lambda t: t.id)
        ],
        "coverage": sorted(
            [tid, eid]
            for tid, eids in spectrum.covered_by_test.items()
            for eid in eids
        ),
    }
    if call_graph is not None:
        doc["call_graph"] = sorted(list(edge) for edge in call_graph.edges)
    return doc


def export_canonical(spectrum: Spectrum, call_graph: CallGraph | None = None) -> str:
    return json.dumps(export_canonical_obj(spectrum, call_graph), indent=2) + "\n"


# -- LCOV ------------------------------------------------------------------------

@dataclass(frozen=True)
class LcovStream:
    """One test's coverage: hits per (path, line); 0 means known but unexecuted."""

    lines: dict[tuple[str, int], int]
    warnings: tuple[str, ...]

    def covered(self) -> set[tuple[str, int]]:
        return {key for key, hits in self.lines.items() if hits > 0}


def parse_lcov(text: str, merge_policy: str = "sum") -> LcovStream:
    """Parse one LCOV stream (= one test's coverage).

    ``merge_policy`` resolves duplicate DA records for the same (path, line):
    "sum" adds hit counts, "max" keeps the largest, "last" keeps the latest.
    """
    if merge_policy not in ("sum", "max", "last"):
        raise ValueError(f"merge_policy must be sum, max or last, got {merge_policy!r}")
    lines: dict[tuple[str, int], int] = {}
    ignored: dict[str, int] = {}
    warnings: list[str] = []
    current_file: str | None = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "end_of_record":
            if current_file is None:
                raise MalformedRecord(line_no, raw, "end_of_record outside a file block")
            current_file = None
            continue
        record, sep, payload = line.partition(":")
        if not sep:
            raise MalformedRecord(line_no, raw, "not an LCOV record")
        if record == "SF":
            if not payload:
                raise MalformedRecord(line_no, raw, "SF record with empty path")
            current_file = payload
        elif record == "DA":
            if current_file is None:
                raise MalformedRecord(line_no, raw, "DA record outside a file block")
            fields = payload.split(",")
            if len(fields) not in (2, 3):
                raise MalformedRecord(line_no, raw, "DA expects <line>,<hits>")
            try:
                lineno, hits = int(fields[0]), int(fields[1])
            except ValueError:
                raise MalformedRecord(line_no, raw, "DA expects integer <line>,<hits>") from None
            if lineno <= 0 or hits < 0:
                raise MalformedRecord(line_no, raw, "DA line must be positive and hits non-negative")
            key = (current_file, lineno)
            if key not in lines:
                lines[key] = hits
            elif merge_policy == "sum":
                lines[key] += hits
            elif merge_policy == "max":
                lines[key] = max(lines[key], hits)
            else:
                lines[key] = hits
        elif record in _IGNORED_LCOV:
            ignored[record] = ignored.get(record, 0) + 1
        else:
            raise MalformedRecord(line_no, raw, f"unsupported record type {record!r}")
    if current_file is not None:
        warnings.append(f"unterminated file block for {current_file!r} (missing end_of_record)")
    warnings.extend(
        f"ignored {count} {record} record(s)" for record, count in sorted(ignored.items())
    )
    return LcovStream(lines=lines, warnings=tuple(warnings))


def spectrum_from_lcov(
    tests: list[TestCase], streams: list[tuple[str, LcovStream]]
) -> Spectrum:
    """Join per-test LCOV streams with test outcomes into one spectrum.

    Statements get one element per (path, line) seen in any stream; every
    path gets a FILE parent.  Stream test names must match test names exactly.
    """
    by_name: dict[str, TestCase] = {}
    for t in tests:
        if t.name in by_name:
            raise DuplicateId(f"duplicate test name {t.name!r}")
        by_name[t.name] = t
    seen_streams: set[str] = set()
    for name, _ in streams:
        if name not in by_name:
            raise DanglingReference(f"manifest names unknown test {name!r}")
        if name in seen_streams:
            raise DuplicateId(f"multiple coverage streams for test {name!r}")
        seen_streams.add(name)

    all_lines: set[tuple[str, int]] = set()
    for _, stream in streams:
        all_lines.update(stream.lines)
    paths = sorted({path for path, _ in all_lines})

    elements: list[CodeElement] = []
    file_ids: dict[str, int] = {}
    next_id = 1
    for path in paths:
        known = sorted(line for p, line in all_lines if p == path)
        elements.append(
            CodeElement(
                id=next_id,
                name=path,
                kind=ElementKind.FILE,
                path=path,
                start_line=known[0] if known else 0,
                end_line=known[-1] if known else 0,
            )
        )
        file_ids[path] = next_id
        next_id += 1
    statement_ids: dict[tuple[str, int], int] = {}
    for path, line in sorted(all_lines):
        elements.append(
            CodeElement(
                id=next_id,
                name=f"{path}:{line}",
                kind=ElementKind.STATEMENT,
                path=path,
                start_line=line,
                end_line=line,
                parent=file_ids[path],
            )
        )
        statement_ids[(path, line)] = next_id
        next_id += 1

    coverage = []
    for name, stream in streams:
        tid = by_name[name].id
        for key in sorted(stream.covered()):
            coverage.append((tid, statement_ids[key]))

    return build_spectrum(elements, tests, coverage)


# -- JUnit XML ---------------------------------------------------------------------

def parse_junit(text: str) -> list[TestCase]:
    """Extract test outcomes: failure/error children mean FAIL, skipped cases drop."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise MalformedDocument(f"not well-formed XML: {exc}") from exc
    if root.tag not in ("testsuite", "testsuites"):
        raise MalformedDocument(f"root element must be testsuite(s), got <{root.tag}>")
    cases = []
    next_id = 1
    for case in root.iter("testcase"):
        if case.find("skipped") is not None:
            continue
        failed = case.find("failure") is not None or case.find("error") is not None
        classname = case.get("classname", "")
        name = case.get("name", "")
        full_name = f"{classname}.{name}" if classname else name
        cases.append(
            TestCase(
                id=next_id,
                name=full_name,
                outcome=Outcome.FAIL if failed else Outcome.PASS,
            )
        )
        next_id += 1
    return cases


# -- manifest ------------------------------------------------------------------------

def parse_manifest(text: str) -> list[tuple[str, str]]:
    """One `<test name><TAB><lcov path>` pair per non-empty line."""
    entries = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        name, sep, path = line.partition("\t")
        if not sep or not name or not path.strip():
            raise MalformedRecord(line_no, raw, "expected <test name><TAB><lcov path>")
        entries.append((name, path.strip()))
    return entries
