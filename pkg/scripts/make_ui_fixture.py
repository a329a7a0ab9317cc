#!/usr/bin/env python3
"""Regenerate the frontend test fixture from real service responses.

Drives a scripted session through the HTTP app in-process and records the
response bodies the UI tests replay, so the frontend is exercised against
genuine engine output rather than hand-written JSON.

Run: python3 scripts/make_ui_fixture.py
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from sbfl.ingestion import export_canonical_obj
from sbfl.service import create_app
from sbfl.spectrum import CodeElement, ElementKind, Outcome, TestCase, build_spectrum

K = ElementKind

OUT = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures" / "session.json"


def fixture_spectrum():
    elements = [
        CodeElement(1, "pkg", K.PACKAGE),
        CodeElement(2, "calc.py", K.FILE, "calc.py", 1, 30, parent=1),
        CodeElement(3, "Calc", K.CLASS, "calc.py", 1, 30, parent=2),
        CodeElement(4, "Calc.add", K.METHOD, "calc.py", 2, 8, parent=3),
        CodeElement(5, "Calc.div", K.METHOD, "calc.py", 10, 16, parent=3),
        CodeElement(10, "calc.py:3", K.STATEMENT, "calc.py", 3, 3, parent=4),
        CodeElement(11, "calc.py:4", K.STATEMENT, "calc.py", 4, 4, parent=4),
        CodeElement(12, "calc.py:12", K.STATEMENT, "calc.py", 12, 12, parent=5),
        CodeElement(13, "calc.py:13", K.STATEMENT, "calc.py", 13, 13, parent=5),
    ]
    tests = [
        TestCase(1, "test_add", Outcome.PASS),
        TestCase(2, "test_add_neg", Outcome.PASS),
        TestCase(3, "test_div", Outcome.FAIL),
        TestCase(4, "test_div_zero", Outcome.FAIL),
    ]
    coverage = [
        (1, 10), (1, 11),
        (2, 10), (2, 11),
        (3, 10), (3, 12), (3, 13),
        (4, 12), (4, 13),
    ]
    return build_spectrum(elements, tests, coverage)


def main():
    doc = export_canonical_obj(fixture_spectrum())
    with tempfile.TemporaryDirectory() as tmp:
        app = create_app(Path(tmp) / "data", seed=0)
        with TestClient(app) as client:
            sid = client.post(
                "/sessions", json={"spectrum": doc, "formula": "OCHIAI"}
            ).json()["session_id"]
            ranking = client.get(f"/sessions/{sid}/ranking").json()
            kinds = ranking["available_granularities"]
            by_granularity = {
                kind: client.get(
                    f"/sessions/{sid}/ranking", params={"granularity": kind}
                ).json()
                for kind in kinds
            }
            top = ranking["entries"][0]["element"]
            explanation = client.get(
                f"/sessions/{sid}/explanation", params={"element": top}
            ).json()
            after_feedback = client.post(
                f"/sessions/{sid}/feedback",
                json={"element": top, "verdict": "NOT_FAULTY"},
            ).json()

    fixture = {
        "session_id": sid,
        "create_request": {"spectrum": doc, "formula": "OCHIAI"},
        "ranking": ranking,
        "ranking_by_granularity": by_granularity,
        "explanation_element": top,
        "explanation": explanation,
        "feedback_request": {"element": top, "verdict": "NOT_FAULTY"},
        "ranking_after_feedback": after_feedback,
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(fixture, indent=2) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
