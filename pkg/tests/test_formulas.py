import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbfl.errors import ParseError, UnknownIdentifier
from sbfl.formulas import (
    BARINEL,
    OCHIAI,
    TARANTULA,
    builtin,
    evaluate,
    list_builtins,
    parse_formula,
    render,
    resolve_formula,
)
from sbfl.spectrum import BasicMetrics


def metrics(ef, ep, nf, np):
    return BasicMetrics(ef=ef, ep=ep, nf=nf, np=np)


# a valid metric tuple: ef+nf = F, ep+np = P
metric_tuples = st.tuples(
    st.integers(0, 8), st.integers(0, 8), st.integers(0, 8), st.integers(0, 8)
)


def as_case(tup):
    ef, ep, nf, np = tup
    return metrics(ef, ep, nf, np), (ef + nf, ep + np)


WORKED = metrics(1, 1, 0, 1)
WORKED_TOTALS = (1, 2)


def test_worked_values():
    assert evaluate(builtin(TARANTULA), WORKED, WORKED_TOTALS) == pytest.approx(2 / 3, abs=1e-9)
    assert evaluate(builtin(OCHIAI), WORKED, WORKED_TOTALS) == pytest.approx(1 / math.sqrt(2), abs=1e-9)
    assert evaluate(builtin(BARINEL), WORKED, WORKED_TOTALS) == pytest.approx(0.5, abs=1e-9)


def test_tarantula_all_failing_no_passing():
    assert evaluate(builtin(TARANTULA), metrics(3, 0, 0, 5), (3, 5)) == 1.0


def test_never_executed_by_failing_test():
    m = metrics(0, 2, 4, 1)
    totals = (4, 3)
    assert evaluate(builtin(OCHIAI), m, totals) == 0.0
    assert evaluate(builtin(TARANTULA), m, totals) == 0.0
    assert evaluate(builtin(BARINEL), m, totals) == 0.0


def test_zero_denominator_convention():
    # completely empty spectrum row: no test ran at all
    m = metrics(0, 0, 0, 0)
    assert evaluate(builtin(TARANTULA), m, (0, 0)) == 0.0
    assert evaluate(builtin(OCHIAI), m, (0, 0)) == 0.0
    # Barinel's 0/0 -> 0 leaves 1 - 0; dead code scores 1 under Barinel
    assert evaluate(builtin(BARINEL), m, (0, 0)) == 1.0


@given(metric_tuples)
@settings(max_examples=300)
def test_builtins_bounded_and_finite(tup):
    m, totals = as_case(tup)
    for name, _ in list_builtins():
        score = evaluate(builtin(name), m, totals)
        assert math.isfinite(score)
        assert 0.0 <= score <= 1.0


@given(st.integers(1, 8), st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
@settings(max_examples=200)
def test_ochiai_monotone_in_ef(f, ep, np, extra):
    # fixed ep and F>0: growing ef never lowers the score
    scores = [
        evaluate(builtin(OCHIAI), metrics(ef, ep, f - ef, np), (f, ep + np))
        for ef in range(f + 1)
    ]
    assert all(a <= b + 1e-15 for a, b in zip(scores, scores[1:]))


@given(metric_tuples)
@settings(max_examples=500)
def test_catalog_definitions_match_builtins(tup):
    m, totals = as_case(tup)
    for name, definition in list_builtins():
        direct = evaluate(builtin(name), m, totals)
        via_dsl = evaluate(parse_formula(definition), m, totals)
        assert abs(direct - via_dsl) <= 1e-12


def test_list_builtins_catalog():
    entries = list_builtins()
    assert len(entries) == 3
    assert ("TARANTULA", "(ef/F)/((ef/F)+(ep/P))") in entries


def test_identity_formula():
    f = parse_formula("ef")
    assert evaluate(f, metrics(3, 0, 1, 0), (4, 0)) == 3.0


def test_parse_error_offset():
    with pytest.raises(ParseError) as err:
        parse_formula("ef + ")
    assert err.value.offset == 6


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifier) as err:
        parse_formula("ef + foo")
    assert err.value.name == "foo"
    assert err.value.offset == 6


def test_identifiers_case_sensitive():
    with pytest.raises(UnknownIdentifier):
        parse_formula("EF")
    with pytest.raises(UnknownIdentifier):
        parse_formula("f")


@pytest.mark.parametrize(
    "text",
    ["ef +", "(ef", "ef)", "min(ef)", "max(ef, ep, nf)", "sqrt(ef, ep)", "ef $ ep", "", "1..2"],
)
def test_malformed_inputs(text):
    with pytest.raises(ParseError):
        parse_formula(text)


def test_precedence_and_associativity():
    env_m, env_t = metrics(0, 0, 0, 0), (0, 0)
    assert evaluate(parse_formula("2+3*4"), env_m, env_t) == 14.0
    assert evaluate(parse_formula("10-2-3"), env_m, env_t) == 5.0
    assert evaluate(parse_formula("8/4/2"), env_m, env_t) == 1.0
    assert evaluate(parse_formula("(2+3)*4"), env_m, env_t) == 20.0
    assert evaluate(parse_formula("min(2, 3) + max(4, 5)"), env_m, env_t) == 7.0
    assert evaluate(parse_formula("sqrt(16)"), env_m, env_t) == 4.0


def test_whitespace_insignificant():
    a = parse_formula("ef/sqrt(F*(ef+ep))")
    b = parse_formula("  ef / sqrt( F * ( ef + ep ) )  ")
    m, totals = metrics(2, 1, 1, 3), (3, 4)
    assert evaluate(a, m, totals) == evaluate(b, m, totals)


def test_division_by_zero_yields_zero():
    assert evaluate(parse_formula("ef/np"), metrics(5, 0, 0, 0), (5, 0)) == 0.0
    assert evaluate(parse_formula("1/(ef-ef)"), metrics(2, 0, 0, 0), (2, 0)) == 0.0


def test_sqrt_of_negative_yields_zero():
    assert evaluate(parse_formula("sqrt(0-4)"), metrics(0, 0, 0, 0), (0, 0)) == 0.0


@given(metric_tuples)
@settings(max_examples=200)
def test_custom_formulas_never_nan_or_inf(tup):
    m, totals = as_case(tup)
    for text in ("ef/ep", "nf/(ef-ef)", "sqrt(ef-np)", "(ef+nf)/(ep+np)"):
        assert math.isfinite(evaluate(parse_formula(text), m, totals))


def test_render_round_trips():
    m, totals = metrics(3, 2, 1, 4), (4, 6)
    for text in (
        "(ef/F)/((ef/F)+(ep/P))",
        "ef/sqrt(F*(ef+ep))",
        "1-ep/(ep+ef)",
        "min(ef, max(ep, nf)) - 2.5*np",
        "1-(2-3)",
        "8/(4/2)",
    ):
        tree = parse_formula(text)
        rendered = parse_formula(render(tree.root))
        assert evaluate(rendered, m, totals) == evaluate(tree, m, totals)


def test_resolve_formula_accepts_names_and_expressions():
    assert resolve_formula("ochiai").builtin == OCHIAI
    assert resolve_formula(" TARANTULA ").builtin == TARANTULA
    assert resolve_formula("ef+1").builtin is None
