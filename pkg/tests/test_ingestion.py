import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_flat_inputs
from sbfl.errors import (
    DanglingReference,
    DuplicateId,
    MalformedDocument,
    MalformedRecord,
    SchemaError,
    VersionMismatch,
)
from sbfl.ingestion import (
    export_canonical,
    parse_canonical,
    parse_junit,
    parse_lcov,
    parse_manifest,
    spectrum_from_lcov,
)
from sbfl.spectrum import (
    ElementKind,
    Outcome,
    all_metrics,
    basic_metrics,
    build_spectrum,
)

FIXTURES = Path(__file__).parent / "fixtures"

MINIMAL = json.dumps(
    {
        "version": "sbfl-spectrum/1",
        "elements": [{"id": 1, "name": "s1", "kind": "STATEMENT"}],
        "tests": [{"id": 1, "name": "t1", "outcome": "FAIL"}],
        "coverage": [[1, 1]],
    }
)


def test_minimal_document():
    parsed = parse_canonical(MINIMAL)
    assert parsed.spectrum.totals == (1, 0)
    assert parsed.call_graph is None
    assert parsed.warnings == ()


def test_worked_fixture_matches_hand_counts():
    parsed = parse_canonical((FIXTURES / "spectrum_worked.json").read_text())
    s = parsed.spectrum
    assert s.totals == (1, 2)
    m1 = basic_metrics(s, 1)
    assert (m1.ef, m1.ep, m1.nf, m1.np) == (1, 1, 0, 1)
    m3 = basic_metrics(s, 3)
    assert (m3.ef, m3.ep, m3.nf, m3.np) == (0, 2, 1, 0)


def test_missing_tests_section():
    doc = json.loads(MINIMAL)
    del doc["tests"]
    with pytest.raises(SchemaError) as err:
        parse_canonical(json.dumps(doc))
    assert err.value.path == "tests"


def test_version_mismatch():
    doc = json.loads(MINIMAL)
    doc["version"] = "sbfl-spectrum/2"
    with pytest.raises(VersionMismatch):
        parse_canonical(json.dumps(doc))


def test_missing_version_is_schema_error():
    doc = json.loads(MINIMAL)
    del doc["version"]
    with pytest.raises(SchemaError) as err:
        parse_canonical(json.dumps(doc))
    assert err.value.path == "version"


def test_unknown_top_level_field_warns():
    doc = json.loads(MINIMAL)
    doc["futuristic"] = True
    parsed = parse_canonical(json.dumps(doc))
    assert any("futuristic" in w for w in parsed.warnings)


def test_schema_error_names_field_path():
    doc = json.loads(MINIMAL)
    doc["elements"][0]["kind"] = "PARAGRAPH"
    with pytest.raises(SchemaError) as err:
        parse_canonical(json.dumps(doc))
    assert err.value.path == "elements[0].kind"


def test_dangling_coverage_is_schema_error():
    doc = json.loads(MINIMAL)
    doc["coverage"] = [[1, 99]]
    with pytest.raises(SchemaError):
        parse_canonical(json.dumps(doc))


def test_not_json():
    with pytest.raises(SchemaError):
        parse_canonical("SF:oops")


def test_call_graph_round_trip():
    doc = {
        "version": "sbfl-spectrum/1",
        "elements": [
            {"id": 1, "name": "m1", "kind": "METHOD"},
            {"id": 2, "name": "m2", "kind": "METHOD"},
        ],
        "tests": [{"id": 1, "name": "t1", "outcome": "FAIL"}],
        "coverage": [[1, 1]],
        "call_graph": [[1, 2]],
    }
    parsed = parse_canonical(json.dumps(doc))
    assert parsed.call_graph.edges == ((1, 2),)
    text = export_canonical(parsed.spectrum, parsed.call_graph)
    assert parse_canonical(text).call_graph.edges == ((1, 2),)


def test_call_graph_unknown_endpoint():
    doc = json.loads(MINIMAL)
    doc["call_graph"] = [[1, 404]]
    with pytest.raises(SchemaError) as err:
        parse_canonical(json.dumps(doc))
    assert "call_graph" in err.value.path


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_round_trip_preserves_metrics(seed):
    rng = random.Random(seed)
    elements, tests, coverage = random_flat_inputs(rng)
    spectrum = build_spectrum(elements, tests, coverage)
    reparsed = parse_canonical(export_canonical(spectrum)).spectrum
    assert all_metrics(reparsed) == all_metrics(spectrum)


def test_export_is_deterministic(worked_spectrum):
    assert export_canonical(worked_spectrum) == export_canonical(worked_spectrum)


def test_export_empty_spectrum():
    empty = build_spectrum([], [], [])
    parsed = parse_canonical(export_canonical(empty))
    assert parsed.spectrum.totals == (0, 0)
    assert parsed.spectrum.elements == {}


# -- LCOV ----------------------------------------------------------------------


def test_lcov_record_semantics():
    stream = parse_lcov("SF:a.c\nDA:3,1\nDA:4,0\nend_of_record\n")
    assert stream.lines == {("a.c", 3): 1, ("a.c", 4): 0}
    assert stream.covered() == {("a.c", 3)}


def test_lcov_malformed_da():
    with pytest.raises(MalformedRecord) as err:
        parse_lcov("SF:a.c\nDA:x,1\nend_of_record\n")
    assert err.value.line_no == 2


def test_lcov_da_outside_block():
    with pytest.raises(MalformedRecord):
        parse_lcov("DA:3,1\n")


def test_lcov_unsupported_records_warn():
    stream = parse_lcov(
        "TN:test\nSF:a.c\nFN:1,main\nBRDA:3,0,0,1\nDA:3,1\nend_of_record\n"
    )
    assert stream.covered() == {("a.c", 3)}
    assert any("FN" in w for w in stream.warnings)
    assert any("BRDA" in w for w in stream.warnings)


def test_lcov_garbage_line_is_malformed():
    with pytest.raises(MalformedRecord):
        parse_lcov("SF:a.c\nnot a record\nend_of_record\n")


def test_lcov_unterminated_block_warns():
    stream = parse_lcov("SF:a.c\nDA:3,1\n")
    assert stream.covered() == {("a.c", 3)}
    assert any("unterminated" in w for w in stream.warnings)


def test_lcov_order_insensitive_with_sum_policy():
    records = ["DA:3,1", "DA:4,0", "DA:3,2", "DA:9,1"]
    rng = random.Random(5)
    baseline = None
    for _ in range(6):
        rng.shuffle(records)
        text = "SF:a.c\n" + "\n".join(records) + "\nend_of_record\n"
        stream = parse_lcov(text)
        if baseline is None:
            baseline = stream.lines
        assert stream.lines == baseline
    assert baseline[("a.c", 3)] == 3


def test_lcov_merge_policies():
    text = "SF:a.c\nDA:3,2\nDA:3,1\nend_of_record\n"
    assert parse_lcov(text, "sum").lines[("a.c", 3)] == 3
    assert parse_lcov(text, "max").lines[("a.c", 3)] == 2
    assert parse_lcov(text, "last").lines[("a.c", 3)] == 1


def test_two_streams_share_elements():
    tests = parse_junit((FIXTURES / "results.xml").read_text())
    streams = [
        (name, parse_lcov((FIXTURES / path).read_text()))
        for name, path in parse_manifest((FIXTURES / "manifest.tsv").read_text())
    ]
    spectrum = spectrum_from_lcov(tests, streams)

    statements = {
        e.name: e.id
        for e in spectrum.elements.values()
        if e.kind is ElementKind.STATEMENT
    }
    assert set(statements) == {"src/calc.c:3", "src/calc.c:4", "src/calc.c:7"}
    files = [e for e in spectrum.elements.values() if e.kind is ElementKind.FILE]
    assert [f.name for f in files] == ["src/calc.c"]
    assert all(
        spectrum.elements[sid].parent == files[0].id for sid in statements.values()
    )

    # hand-counted matrix: t1 FAIL covers lines 3,4; t2 covers 4,7; t3 covers 3,7
    m3 = basic_metrics(spectrum, statements["src/calc.c:3"])
    assert (m3.ef, m3.ep, m3.nf, m3.np) == (1, 1, 0, 1)
    m4 = basic_metrics(spectrum, statements["src/calc.c:4"])
    assert (m4.ef, m4.ep, m4.nf, m4.np) == (1, 1, 0, 1)
    m7 = basic_metrics(spectrum, statements["src/calc.c:7"])
    assert (m7.ef, m7.ep, m7.nf, m7.np) == (0, 2, 1, 0)


def test_stream_for_unknown_test_rejected():
    tests = parse_junit((FIXTURES / "results.xml").read_text())
    stream = parse_lcov("SF:a.c\nDA:1,1\nend_of_record\n")
    with pytest.raises(DanglingReference):
        spectrum_from_lcov(tests, [("calc.nope", stream)])


def test_duplicate_stream_rejected():
    tests = parse_junit((FIXTURES / "results.xml").read_text())
    stream = parse_lcov("SF:a.c\nDA:1,1\nend_of_record\n")
    with pytest.raises(DuplicateId):
        spectrum_from_lcov(tests, [("calc.t1", stream), ("calc.t1", stream)])


# -- JUnit ----------------------------------------------------------------------


def test_junit_outcomes():
    cases = parse_junit(
        "<testsuite>"
        '<testcase classname="a" name="ok"/>'
        '<testcase classname="a" name="bad"><failure message="x"/></testcase>'
        "</testsuite>"
    )
    assert [(c.name, c.outcome) for c in cases] == [
        ("a.ok", Outcome.PASS),
        ("a.bad", Outcome.FAIL),
    ]


def test_junit_skipped_excluded():
    cases = parse_junit(
        "<testsuite>"
        '<testcase name="only"><skipped/></testcase>'
        "</testsuite>"
    )
    assert cases == []


def test_junit_error_counts_as_fail():
    cases = parse_junit(
        '<testsuite><testcase name="boom"><error message="x"/></testcase></testsuite>'
    )
    assert cases[0].outcome is Outcome.FAIL
    assert cases[0].name == "boom"


def test_junit_golden_fifty_case_fixture():
    cases = parse_junit((FIXTURES / "junit_50.xml").read_text())
    # hand count: of 50 cases, 5 are skipped; 11 of the rest fail (7 failure
    # tags via %7, 4 error tags via %11), leaving 34 passes
    assert len(cases) == 45
    assert sum(1 for c in cases if c.outcome is Outcome.FAIL) == 11
    assert sum(1 for c in cases if c.outcome is Outcome.PASS) == 34


def test_junit_malformed_xml():
    with pytest.raises(MalformedDocument):
        parse_junit("<testsuite><testcase></testsuite>")


def test_junit_wrong_root():
    with pytest.raises(MalformedDocument):
        parse_junit("<html><testcase name='x'/></html>")


def test_junit_testsuites_root():
    cases = parse_junit(
        "<testsuites><testsuite>"
        '<testcase classname="p.C" name="m"/>'
        "</testsuite></testsuites>"
    )
    assert [c.name for c in cases] == ["p.C.m"]


# -- manifest ----------------------------------------------------------------------


def test_manifest_parses_pairs():
    entries = parse_manifest("calc.t1\trun_t1.lcov\n\ncalc.t2\trun_t2.lcov\n")
    assert entries == [("calc.t1", "run_t1.lcov"), ("calc.t2", "run_t2.lcov")]


def test_manifest_requires_tab():
    with pytest.raises(MalformedRecord):
        parse_manifest("calc.t1 run_t1.lcov\n")
