"""Spectrum-based fault localization engine.

Turns per-test coverage and test outcomes into ranked, explainable,
interactively refinable suspiciousness reports, with an Elo-based pairwise
preference ranker on the side.
"""

from .elo import EloPool, expected_score, next_pair, record_match, standings
from .errors import SbflError
from .formulas import Formula, evaluate, list_builtins, parse_formula, resolve_formula
from .ingestion import (
    export_canonical,
    parse_canonical,
    parse_junit,
    parse_lcov,
    parse_manifest,
    spectrum_from_lcov,
)
from .interactive import CallGraph, FeedbackAction, Session, Verdict
from .ranking import (
    Aggregator,
    RankedEntry,
    RankedReport,
    Tiebreak,
    aggregate,
    color_scale,
    explain,
    rank,
    rank_at_granularity,
)
from .spectrum import (
    BasicMetrics,
    CodeElement,
    ElementKind,
    Outcome,
    Spectrum,
    TestCase,
    all_metrics,
    basic_metrics,
    build_spectrum,
    descendants,
    select_tests,
)

__version__ = "0.1.0"

__all__ = [
    "Aggregator",
    "BasicMetrics",
    "CallGraph",
    "CodeElement",
    "ElementKind",
    "EloPool",
    "FeedbackAction",
    "Formula",
    "Outcome",
    "RankedEntry",
    "RankedReport",
    "SbflError",
    "Session",
    "Spectrum",
    "TestCase",
    "Tiebreak",
    "Verdict",
    "aggregate",
    "all_metrics",
    "basic_metrics",
    "build_spectrum",
    "color_scale",
    "descendants",
    "evaluate",
    "expected_score",
    "explain",
    "export_canonical",
    "list_builtins",
    "next_pair",
    "parse_canonical",
    "parse_formula",
    "parse_junit",
    "parse_lcov",
    "parse_manifest",
    "rank",
    "rank_at_granularity",
    "record_match",
    "resolve_formula",
    "select_tests",
    "spectrum_from_lcov",
    "standings",
]
