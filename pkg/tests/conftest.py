"""Shared fixtures: the worked 3-test spectrum, random generators, dense oracle."""

import random

import pytest

from sbfl.spectrum import (
    CodeElement,
    ElementKind,
    Outcome,
    TestCase,
    build_spectrum,
)

K = ElementKind


def worked_inputs():
    """3 statements, 1 failing + 2 passing tests; hand-counted in the docs."""
    elements = [
        CodeElement(1, "s1", K.STATEMENT, "demo.py", 1, 1),
        CodeElement(2, "s2", K.STATEMENT, "demo.py", 2, 2),
        CodeElement(3, "s3", K.STATEMENT, "demo.py", 3, 3),
    ]
    tests = [
        TestCase(1, "t1", Outcome.FAIL),
        TestCase(2, "t2", Outcome.PASS),
        TestCase(3, "t3", Outcome.PASS),
    ]
    coverage = [(1, 1), (1, 2), (2, 2), (2, 3), (3, 1), (3, 3)]
    return elements, tests, coverage


@pytest.fixture
def worked_spectrum():
    return build_spectrum(*worked_inputs())


def dense_quadrants(elements, tests, coverage):
    """Brute-force oracle: quadrant counts from an explicit 0/1 matrix."""
    row = {t.id: i for i, t in enumerate(tests)}
    col = {e.id: j for j, e in enumerate(elements)}
    matrix = [[0] * len(elements) for _ in tests]
    for tid, eid in coverage:
        matrix[row[tid]][col[eid]] = 1
    result = {}
    for e in elements:
        ef = ep = nf = np = 0
        for t in tests:
            executed = matrix[row[t.id]][col[e.id]] == 1
            failed = t.outcome is Outcome.FAIL
            if executed and failed:
                ef += 1
            elif executed:
                ep += 1
            elif failed:
                nf += 1
            else:
                np += 1
        result[e.id] = (ef, ep, nf, np)
    return result


def random_flat_inputs(rng: random.Random, max_tests=8, max_elements=10):
    """Random statement-only spectrum inputs (elements, tests, coverage)."""
    n = rng.randint(1, max_elements)
    m = rng.randint(1, max_tests)
    elements = [
        CodeElement(i + 1, f"s{i + 1}", K.STATEMENT, "mod.py", i + 1, i + 1)
        for i in range(n)
    ]
    tests = [
        TestCase(
            n + j + 1,
            f"t{j + 1}",
            Outcome.FAIL if rng.random() < 0.35 else Outcome.PASS,
        )
        for j in range(m)
    ]
    coverage = [
        (t.id, e.id) for t in tests for e in elements if rng.random() < 0.45
    ]
    return elements, tests, coverage


def random_tree_inputs(rng: random.Random):
    """Random full five-level hierarchy with coverage at statements."""
    elements = []
    statements = []
    next_id = 1

    def add(name, kind, parent, line):
        nonlocal next_id
        elements.append(
            CodeElement(next_id, name, kind, "tree.py", line, line, parent=parent)
        )
        next_id += 1
        return next_id - 1

    line = 0
    for pi in range(rng.randint(1, 2)):
        pkg = add(f"pkg{pi}", K.PACKAGE, None, 0)
        for fi in range(rng.randint(1, 2)):
            file_id = add(f"pkg{pi}/f{fi}.py", K.FILE, pkg, 0)
            for ci in range(rng.randint(1, 2)):
                cls = add(f"C{pi}{fi}{ci}", K.CLASS, file_id, 0)
                for mi in range(rng.randint(1, 3)):
                    meth = add(f"C{pi}{fi}{ci}.m{mi}", K.METHOD, cls, 0)
                    for si in range(rng.randint(1, 3)):
                        line += 1
                        sid = add(f"stmt{line}", K.STATEMENT, meth, line)
                        statements.append(sid)

    m = rng.randint(2, 6)
    tests = [
        TestCase(
            1000 + j,
            f"t{j}",
            Outcome.FAIL if rng.random() < 0.4 else Outcome.PASS,
        )
        for j in range(m)
    ]
    coverage = [
        (t.id, sid) for t in tests for sid in statements if rng.random() < 0.4
    ]
    return elements, tests, coverage
