#!/usr/bin/env python3
"""End-to-end engine walkthrough on a small synthetic buggy program.

Builds a two-file spectrum with one seeded fault, ranks it under all three
catalog formulas, then applies interactive verdicts and shows the reordering.

Run: python3 scripts/demo_localization.py
"""

import random

from sbfl.formulas import builtin, list_builtins
from sbfl.interactive import CallGraph, Session, Verdict
from sbfl.ranking import Tiebreak, rank_at_granularity
from sbfl.spectrum import CodeElement, ElementKind, Outcome, TestCase, build_spectrum

K = ElementKind


def demo_spectrum():
    elements = [
        CodeElement(1, "mathlib.py", K.FILE, "mathlib.py", 1, 40),
        CodeElement(2, "mean", K.METHOD, "mathlib.py", 1, 12, parent=1),
        CodeElement(3, "variance", K.METHOD, "mathlib.py", 14, 27, parent=1),
        CodeElement(4, "stddev", K.METHOD, "mathlib.py", 29, 40, parent=1),
    ]
    # variance (id 3) carries the fault: every failing test runs it
    tests, coverage = [], []
    rng = random.Random(1)
    for j in range(1, 13):
        runs_variance = rng.random() < 0.6
        fails = runs_variance and rng.random() < 0.7
        tid = 100 + j
        tests.append(TestCase(tid, f"test_{j:02d}", Outcome.FAIL if fails else Outcome.PASS))
        coverage.append((tid, 2))
        if runs_variance:
            coverage.append((tid, 3))
        if rng.random() < 0.5:
            coverage.append((tid, 4))
    return build_spectrum(elements, tests, coverage)


def show(report, spectrum, title):
    print(f"\n== {title}")
    for entry in report.entries:
        name = spectrum.elements[entry.element].name
        print(f"  {entry.rank:>4}  {entry.score:8.4f}  {name}")


def main():
    spectrum = demo_spectrum()
    print(f"spectrum: {len(spectrum.elements)} elements, F={spectrum.failing}, P={spectrum.passing}")

    for name, definition in list_builtins():
        report = rank_at_granularity(spectrum, builtin(name), K.METHOD, Tiebreak.LINE_ASC)
        show(report, spectrum, f"{name}  ({definition})")

    graph = CallGraph(((4, 3), (3, 2)))  # stddev -> variance -> mean
    session = Session(spectrum, builtin("OCHIAI"), granularity=K.METHOD, call_graph=graph)
    show(session.current_report(), spectrum, "session start (OCHIAI)")

    report = session.feedback(2, Verdict.NOT_FAULTY)
    show(report, spectrum, "after NOT_FAULTY on mean (neighbors decay)")

    report = session.feedback(3, Verdict.FAULT_FOUND)
    show(report, spectrum, "after FAULT_FOUND on variance (pinned)")


if __name__ == "__main__":
    main()
