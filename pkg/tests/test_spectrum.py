import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbfl.errors import DanglingReference, DuplicateId, InvalidHierarchy, UnknownElement
from sbfl.spectrum import (
    CodeElement,
    ElementKind,
    Outcome,
    TestCase,
    all_metrics,
    basic_metrics,
    build_spectrum,
    descendants,
    select_tests,
)

from conftest import dense_quadrants, random_flat_inputs

K = ElementKind


def test_worked_spectrum_totals(worked_spectrum):
    assert worked_spectrum.totals == (1, 2)


def test_worked_spectrum_metrics(worked_spectrum):
    m1 = basic_metrics(worked_spectrum, 1)
    assert (m1.ef, m1.ep, m1.nf, m1.np) == (1, 1, 0, 1)
    m3 = basic_metrics(worked_spectrum, 3)
    assert (m3.ef, m3.ep, m3.nf, m3.np) == (0, 2, 1, 0)


def test_empty_coverage_two_passing_tests():
    s = build_spectrum(
        [CodeElement(1, "s1", K.STATEMENT)],
        [TestCase(1, "t1", Outcome.PASS), TestCase(2, "t2", Outcome.PASS)],
        [],
    )
    assert s.totals == (0, 2)
    m = basic_metrics(s, 1)
    assert (m.ef, m.ep, m.nf, m.np) == (0, 0, 0, 2)


def test_uncovered_element_metrics(worked_spectrum):
    s = build_spectrum(
        [CodeElement(1, "s1", K.STATEMENT), CodeElement(2, "dead", K.STATEMENT)],
        [TestCase(1, "t1", Outcome.FAIL), TestCase(2, "t2", Outcome.PASS)],
        [(1, 1), (2, 1)],
    )
    m = basic_metrics(s, 2)
    assert (m.ef, m.ep, m.nf, m.np) == (0, 0, 1, 1)


def test_dangling_coverage_reference():
    with pytest.raises(DanglingReference, match=r"\(1, 99\)"):
        build_spectrum(
            [CodeElement(1, "s1", K.STATEMENT)],
            [TestCase(1, "t1", Outcome.FAIL)],
            [(1, 99)],
        )


def test_dangling_test_reference():
    with pytest.raises(DanglingReference, match=r"\(99, 1\)"):
        build_spectrum(
            [CodeElement(1, "s1", K.STATEMENT)],
            [TestCase(1, "t1", Outcome.FAIL)],
            [(99, 1)],
        )


def test_duplicate_ids_rejected():
    with pytest.raises(DuplicateId):
        build_spectrum(
            [CodeElement(1, "a", K.STATEMENT), CodeElement(1, "b", K.STATEMENT)],
            [],
            [],
        )
    with pytest.raises(DuplicateId):
        build_spectrum(
            [],
            [TestCase(1, "t", Outcome.PASS), TestCase(1, "t2", Outcome.PASS)],
            [],
        )


def test_parent_must_be_strictly_coarser():
    with pytest.raises(InvalidHierarchy):
        build_spectrum(
            [
                CodeElement(1, "m", K.METHOD),
                CodeElement(2, "s", K.STATEMENT, parent=1),
                CodeElement(3, "m2", K.METHOD, parent=1),
            ],
            [],
            [],
        )


def test_self_parent_rejected():
    with pytest.raises(InvalidHierarchy):
        build_spectrum([CodeElement(1, "m", K.METHOD, parent=1)], [], [])


def test_unknown_parent_is_dangling():
    with pytest.raises(DanglingReference):
        build_spectrum([CodeElement(1, "s", K.STATEMENT, parent=7)], [], [])


def test_unknown_element_lookup(worked_spectrum):
    with pytest.raises(UnknownElement):
        basic_metrics(worked_spectrum, 42)


def test_coverage_duplicates_collapse():
    s = build_spectrum(
        [CodeElement(1, "s1", K.STATEMENT)],
        [TestCase(1, "t1", Outcome.FAIL)],
        [(1, 1), (1, 1), (1, 1)],
    )
    assert basic_metrics(s, 1).ef == 1


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_all_metrics_matches_dense_oracle(seed):
    rng = random.Random(seed)
    elements, tests, coverage = random_flat_inputs(rng)
    spectrum = build_spectrum(elements, tests, coverage)
    expected = dense_quadrants(elements, tests, coverage)
    got = all_metrics(spectrum)
    assert set(got) == set(expected)
    for eid, m in got.items():
        assert (m.ef, m.ep, m.nf, m.np) == expected[eid]
        # every element partitions the full test set
        assert m.ef + m.ep + m.nf + m.np == len(tests)
        assert basic_metrics(spectrum, eid) == m


def test_all_metrics_empty_spectrum():
    s = build_spectrum([], [], [])
    assert all_metrics(s) == {}


def test_select_tests_worked_example(worked_spectrum):
    sel = select_tests(worked_spectrum, {1})
    assert sel.tests == (1, 3)
    assert sel.uncoverable == ()


def test_select_tests_empty_targets(worked_spectrum):
    sel = select_tests(worked_spectrum, set())
    assert sel.tests == (1,)


def test_select_tests_uncoverable_target():
    s = build_spectrum(
        [CodeElement(1, "s1", K.STATEMENT), CodeElement(2, "dead", K.STATEMENT)],
        [TestCase(1, "t1", Outcome.FAIL), TestCase(2, "t2", Outcome.PASS)],
        [(2, 1)],
    )
    sel = select_tests(s, {1, 2})
    assert sel.tests == (1, 2)
    assert sel.uncoverable == (2,)


def test_select_tests_greedy_tiebreak_by_id():
    # t1 and t2 both cover exactly one remaining target; lower id wins
    s = build_spectrum(
        [CodeElement(1, "a", K.STATEMENT), CodeElement(2, "b", K.STATEMENT)],
        [
            TestCase(1, "t1", Outcome.PASS),
            TestCase(2, "t2", Outcome.PASS),
            TestCase(3, "t3", Outcome.PASS),
        ],
        [(1, 1), (2, 1), (3, 2)],
    )
    sel = select_tests(s, {1, 2})
    assert sel.tests == (1, 3)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_select_tests_properties(seed):
    rng = random.Random(seed)
    elements, tests, coverage = random_flat_inputs(rng)
    spectrum = build_spectrum(elements, tests, coverage)
    targets = {e.id for e in elements if rng.random() < 0.5}
    sel = select_tests(spectrum, targets)

    failing = tuple(sorted(t.id for t in tests if t.outcome is Outcome.FAIL))
    assert sel.tests[: len(failing)] == failing

    covered_by_passing = set()
    for t in tests:
        if t.outcome is Outcome.PASS and t.id in sel.tests:
            covered_by_passing.update(spectrum.covered_by_test[t.id])
    for target in targets:
        coverable = any(
            target in spectrum.covered_by_test[t.id]
            for t in tests
            if t.outcome is Outcome.PASS
        )
        if coverable:
            assert target in covered_by_passing
    # deterministic
    assert select_tests(spectrum, targets) == sel


def hierarchy_fixture():
    return build_spectrum(
        [
            CodeElement(1, "pkg", K.PACKAGE),
            CodeElement(2, "a.py", K.FILE, parent=1),
            CodeElement(3, "A", K.CLASS, parent=2),
            CodeElement(4, "B", K.CLASS, parent=2),
            CodeElement(5, "A.m1", K.METHOD, parent=3),
            CodeElement(6, "B.m2", K.METHOD, parent=4),
            CodeElement(7, "s1", K.STATEMENT, parent=5),
            CodeElement(8, "s2", K.STATEMENT, parent=5),
        ],
        [TestCase(1, "t1", Outcome.FAIL)],
        [(1, 7)],
    )


def test_descendants_direct_children():
    s = hierarchy_fixture()
    assert descendants(s, 5, K.STATEMENT) == [7, 8]


def test_descendants_reflexive():
    s = hierarchy_fixture()
    assert descendants(s, 7, K.STATEMENT) == [7]


def test_descendants_across_levels():
    s = hierarchy_fixture()
    assert descendants(s, 1, K.METHOD) == [5, 6]
    assert descendants(s, 1, K.STATEMENT) == [7, 8]
    assert descendants(s, 6, K.STATEMENT) == []


def test_descendants_unknown_element():
    s = hierarchy_fixture()
    with pytest.raises(UnknownElement):
        descendants(s, 99, K.STATEMENT)
