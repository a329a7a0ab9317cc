"""Suspiciousness formulas: three built-ins plus a small expression language.

Grammar (whitespace insignificant, identifiers case-sensitive):

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := number | ident | '(' expr ')' | func '(' expr (',' expr)? ')'
    func   := 'sqrt' | 'min' | 'max'
    ident  := 'ef' | 'ep' | 'nf' | 'np' | 'F' | 'P'

Evaluation is total: any division whose denominator is zero (including 0/0)
yields 0, and sqrt of a negative yields 0, so no input produces an infinity
or NaN.  Built-in scores always lie in [0, 1]; custom formulas are reported
unclamped, exactly as written.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import ParseError, UnknownIdentifier
from .spectrum import BasicMetrics

IDENTIFIERS = ("ef", "ep", "nf", "np", "F", "P")
FUNCTIONS = ("sqrt", "min", "max")

TARANTULA = "TARANTULA"
OCHIAI = "OCHIAI"
BARINEL = "BARINEL"

_BUILTIN_DEFS = {
    TARANTULA: "(ef/F)/((ef/F)+(ep/P))",
    OCHIAI: "ef/sqrt(F*(ef+ep))",
    BARINEL: "1-ep/(ep+ef)",
}


# -- expression tree ---------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple


@dataclass(frozen=True)
class Formula:
    """A parsed scoring expression; ``builtin`` is set for the catalog three."""

    text: str
    root: object
    builtin: str | None = None


def _div(a: float, b: float) -> float:
    return 0.0 if b == 0.0 else a / b


def _sqrt(x: float) -> float:
    return math.sqrt(x) if x > 0.0 else 0.0


def _eval_node(node, env: dict[str, float]) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Ref):
        return env[node.name]
    if isinstance(node, BinOp):
        a = _eval_node(node.left, env)
        b = _eval_node(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return _div(a, b)
    assert isinstance(node, Call)
    args = [_eval_node(a, env) for a in node.args]
    if node.func == "sqrt":
        return _sqrt(args[0])
    if node.func == "min":
        return min(args)
    return max(args)


# -- built-in evaluation (independent of the parser/AST route) ---------------

def _tarantula(ef: float, ep: float, f: float, p: float) -> float:
    failed_part = _div(ef, f)
    return _div(failed_part, failed_part + _div(ep, p))


def _ochiai(ef: float, ep: float, f: float, p: float) -> float:
    return _div(ef, _sqrt(f * (ef + ep)))


def _barinel(ef: float, ep: float, f: float, p: float) -> float:
    return 1.0 - _div(ep, ep + ef)


_BUILTIN_FNS = {TARANTULA: _tarantula, OCHIAI: _ochiai, BARINEL: _barinel}


def evaluate(formula: Formula, metrics: BasicMetrics, totals: tuple[int, int]) -> float:
    """Score one element from its quadrant counts and the (F, P) totals."""
    f, p = totals
    if formula.builtin is not None:
        return _BUILTIN_FNS[formula.builtin](
            float(metrics.ef), float(metrics.ep), float(f), float(p)
        )
    env = {
        "ef": float(metrics.ef),
        "ep": float(metrics.ep),
        "nf": float(metrics.nf),
        "np": float(metrics.np),
        "F": float(f),
        "P": float(p),
    }
    return _eval_node(formula.root, env)


def list_builtins() -> list[tuple[str, str]]:
    """The catalog: (name, definition text), parseable by parse_formula."""
    return [(name, _BUILTIN_DEFS[name]) for name in (TARANTULA, OCHIAI, BARINEL)]


def builtin(name: str) -> Formula:
    definition = _BUILTIN_DEFS[name]
    return Formula(text=definition, root=_parse_text(definition), builtin=name)


def resolve_formula(text: str) -> Formula:
    """Accept a built-in name (case-insensitive) or a DSL expression."""
    key = text.strip().upper()
    if key in _BUILTIN_DEFS:
        return builtin(key)
    return parse_formula(text)


# -- parser -------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)"
    r"|(?P<word>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<punct>[+\-*/(),]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            offset = len(text) - len(stripped) + 1
            raise ParseError(offset, f"unexpected character {stripped[0]!r}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    tokens.append(("eof", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_punct(self, value: str):
        kind, val, off = self.peek()
        if kind != "punct" or val != value:
            raise ParseError(off, f"expected {value!r}")
        return self.advance()

    def parse(self):
        node = self.expr()
        kind, _, off = self.peek()
        if kind != "eof":
            raise ParseError(off, "expected end of input")
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "punct" and val in "+-":
                self.advance()
                node = BinOp(val, node, self.term())
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "punct" and val in "*/":
                self.advance()
                node = BinOp(val, node, self.factor())
            else:
                return node

    def factor(self):
        kind, val, off = self.advance()
        if kind == "num":
            return Num(float(val))
        if kind == "word":
            if val in FUNCTIONS:
                return self.call(val, off)
            if val in IDENTIFIERS:
                return Ref(val)
            raise UnknownIdentifier(off, val)
        if kind == "punct" and val == "(":
            node = self.expr()
            self.expect_punct(")")
            return node
        raise ParseError(off, "expected a number, identifier, function or '('")

    def call(self, func: str, func_off: int):
        self.expect_punct("(")
        args = [self.expr()]
        kind, val, off = self.peek()
        if kind == "punct" and val == ",":
            self.advance()
            args.append(self.expr())
        self.expect_punct(")")
        if func == "sqrt" and len(args) != 1:
            raise ParseError(func_off, "sqrt takes exactly one argument")
        if func in ("min", "max") and len(args) != 2:
            raise ParseError(func_off, f"{func} takes exactly two arguments")
        return Call(func, tuple(args))


def _parse_text(text: str):
    return _Parser(text).parse()


def parse_formula(text: str) -> Formula:
    """Parse DSL text into a Formula; raises ParseError / UnknownIdentifier."""
    return Formula(text=text, root=_parse_text(text))


# -- rendering (used for explanation substitution traces) --------------------

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def render(node, substitution: dict[str, float] | None = None) -> str:
    """Render a tree back to parseable text, optionally replacing identifiers.

    The output re-parses to the same tree shape, so evaluating it reproduces
    the original value bit for bit.
    """
    text, _ = _render(node, substitution or {})
    return text


def _format_number(value: float) -> str:
    return str(int(value)) if value.is_integer() else repr(value)


def _render(node, sub: dict[str, float]) -> tuple[str, int]:
    if isinstance(node, Num):
        return _format_number(node.value), 3
    if isinstance(node, Ref):
        if node.name in sub:
            return _format_number(float(sub[node.name])), 3
        return node.name, 3
    if isinstance(node, Call):
        inner = ", ".join(_render(a, sub)[0] for a in node.args)
        return f"{node.func}({inner})", 3
    assert isinstance(node, BinOp)
    prec = _PRECEDENCE[node.op]
    left, lp = _render(node.left, sub)
    right, rp = _render(node.right, sub)
    if lp < prec:
        left = f"({left})"
    if rp < prec or (rp == prec and node.op in "-/"):
        right = f"({right})"
    return f"{left}{node.op}{right}", prec
