"""Parsers for the formal query syntax and the MATCH surface syntax.

Formal syntax, by precedence (loosest first)::

    union  := concat ('+' concat)*
    concat := or ('/' or)*
    or     := and ('|' and)*
    and    := not ('&' not)*
    not    := '!' not | postfix
    postfix:= primary ('[' nat ',' (nat | '_') ']' | '*')*
    primary:= 'F' | 'B' | 'N' | 'P'
            | 'Node' | 'Edge' | 'exists'
            | 'label' '(' name ')' | name
            | 'prop' '(' name '=' "'" value "'" ')'
            | '<' nat
            | '?(' union ')'
            | '(' union ')'

``&``, ``|``, ``!`` and ``<`` build tests and demand test operands.
``path*`` abbreviates ``path[0,_]``.  Repetition bounds must satisfy
``n <= m`` and fit in an unsigned 63-bit value.

The MATCH surface form supports a single linear pattern::

    MATCH (x[:Label][{p='v', ...}]) -/seg/.../- (y[:Label][{...}])

with segments FWD, BWD, NEXT, PREV (optionally suffixed ``*``, ``[n,m]``
or ``[n,_]``) and label filters ``:Label``.  Anything else raises
UnsupportedFeature.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional

from .errors import QuerySyntaxError, UnsupportedFeature
from .expr import (
    And,
    Axis,
    AxisKind,
    Concat,
    Exists,
    HasLabel,
    IsEdge,
    IsNode,
    Not,
    Or,
    PathCondition,
    PathExpr,
    PropEquals,
    Repeat,
    RepeatUnbounded,
    Test,
    TimeLess,
    Union,
    concat_all,
)

MAX_NAT = 2 ** 63 - 1

RESERVED = frozenset(
    {"F", "B", "N", "P", "Node", "Edge", "exists", "label", "prop",
     "MATCH", "FWD", "BWD", "NEXT", "PREV"}
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<qcond>\?\()
  | (?P<sym>[()\[\],/+|&!<=*'{}:.\-_])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str  # num | ident | sym | qcond | end
    text: str
    pos: int


def _tokenize(text: str) -> List[Token]:
    out: List[Token] = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise QuerySyntaxError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), i))
        i = m.end()
    out.append(Token("end", "", len(text)))
    return out


class _Cursor:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, text: str) -> Optional[Token]:
        tok = self.peek()
        if tok.text == text and tok.kind != "end":
            return self.next()
        return None

    def expect(self, text: str, what: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "end":
            raise QuerySyntaxError(
                f"expected {what or text!r}, found {tok.text or 'end of input'!r}",
                tok.pos,
                expected={text},
            )
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise QuerySyntaxError(
                f"expected {what}, found {tok.text or 'end of input'!r}",
                tok.pos,
                expected={kind},
            )
        return self.next()


def _nat(cur: _Cursor) -> int:
    tok = cur.expect_kind("num", "a natural number")
    n = int(tok.text)
    if n > MAX_NAT:
        raise QuerySyntaxError(f"number {n} out of range", tok.pos)
    return n


_AXES = {k.value: k for k in AxisKind}


def _parse_union(cur: _Cursor) -> PathExpr:
    left = _parse_concat(cur)
    while cur.accept("+"):
        left = Union(left, _parse_concat(cur))
    return left


def _parse_concat(cur: _Cursor) -> PathExpr:
    left = _parse_or(cur)
    while cur.accept("/"):
        left = Concat(left, _parse_or(cur))
    return left


def _require_test(e: PathExpr, pos: int, op: str):
    if not isinstance(e, Test):
        raise QuerySyntaxError(f"operand of {op!r} must be a test", pos)
    return e.test


def _parse_or(cur: _Cursor) -> PathExpr:
    left = _parse_and(cur)
    while True:
        tok = cur.peek()
        if not cur.accept("|"):
            return left
        right = _parse_and(cur)
        left = Test(Or(_require_test(left, tok.pos, "|"),
                       _require_test(right, tok.pos, "|")))


def _parse_and(cur: _Cursor) -> PathExpr:
    left = _parse_not(cur)
    while True:
        tok = cur.peek()
        if not cur.accept("&"):
            return left
        right = _parse_not(cur)
        left = Test(And(_require_test(left, tok.pos, "&"),
                        _require_test(right, tok.pos, "&")))


def _parse_not(cur: _Cursor) -> PathExpr:
    tok = cur.peek()
    if cur.accept("!"):
        operand = _parse_not(cur)
        return Test(Not(_require_test(operand, tok.pos, "!")))
    return _parse_postfix(cur)


def _parse_postfix(cur: _Cursor) -> PathExpr:
    e = _parse_primary(cur)
    while True:
        tok = cur.peek()
        if cur.accept("*"):
            e = RepeatUnbounded(e, 0)
            continue
        if tok.text == "[" and tok.kind == "sym":
            cur.next()
            low = _nat(cur)
            cur.expect(",")
            if cur.accept("_"):
                cur.expect("]")
                e = RepeatUnbounded(e, low)
            else:
                high_tok = cur.peek()
                high = _nat(cur)
                cur.expect("]")
                if high < low:
                    raise QuerySyntaxError(
                        f"repetition bounds [{low},{high}] require n <= m",
                        high_tok.pos,
                    )
                e = Repeat(e, low, high)
            continue
        return e


def _parse_primary(cur: _Cursor) -> PathExpr:
    tok = cur.peek()
    if tok.kind == "qcond":
        cur.next()
        inner = _parse_union(cur)
        cur.expect(")")
        return Test(PathCondition(inner))
    if tok.text == "(" and tok.kind == "sym":
        cur.next()
        inner = _parse_union(cur)
        cur.expect(")")
        return inner
    if tok.text == "<" and tok.kind == "sym":
        cur.next()
        return Test(TimeLess(_nat(cur)))
    if tok.kind == "ident":
        cur.next()
        name = tok.text
        if name in _AXES:
            return Axis(_AXES[name])
        if name == "Node":
            return Test(IsNode())
        if name == "Edge":
            return Test(IsEdge())
        if name == "exists":
            return Test(Exists())
        if name == "label":
            cur.expect("(")
            label = cur.expect_kind("ident", "a label name").text
            cur.expect(")")
            return Test(HasLabel(label))
        if name == "prop":
            cur.expect("(")
            prop = cur.expect_kind("ident", "a property name").text
            cur.expect("=")
            cur.expect("'")
            value = _quoted_value(cur)
            cur.expect(")")
            return Test(PropEquals(prop, value))
        if name in RESERVED:
            raise QuerySyntaxError(f"{name!r} not allowed here", tok.pos)
        return Test(HasLabel(name))
    raise QuerySyntaxError(
        f"expected a path expression, found {tok.text or 'end of input'!r}",
        tok.pos,
        expected={"axis", "test", "(", "?("},
    )


def _quoted_value(cur: _Cursor) -> str:
    # values are runs of idents/numbers/dots/dashes up to the closing quote
    parts = []
    while True:
        tok = cur.peek()
        if tok.kind == "end":
            raise QuerySyntaxError("unterminated quoted value", tok.pos)
        if tok.text == "'":
            cur.next()
            return "".join(parts)
        if tok.kind in ("ident", "num") or tok.text in (".", "-", "_"):
            parts.append(cur.next().text)
            continue
        raise QuerySyntaxError(
            f"bad character {tok.text!r} in quoted value", tok.pos
        )


def parse_trpq(text: str) -> PathExpr:
    """Parse the formal syntax into a path expression."""
    cur = _Cursor(_tokenize(text))
    e = _parse_union(cur)
    tok = cur.peek()
    if tok.kind != "end":
        raise QuerySyntaxError(f"unexpected trailing input {tok.text!r}", tok.pos)
    return e


# ---------------------------------------------------------------- MATCH

_AXIS_WORDS = {
    "FWD": AxisKind.FORWARD,
    "BWD": AxisKind.BACKWARD,
    "NEXT": AxisKind.NEXT,
    "PREV": AxisKind.PREV,
}


def _match_node_pattern(cur: _Cursor) -> Test:
    cur.expect("(")
    cur.expect_kind("ident", "a variable name")
    label = None
    props = []
    if cur.accept(":"):
        label = cur.expect_kind("ident", "a label").text
    if cur.accept("{"):
        while True:
            prop = cur.expect_kind("ident", "a property name").text
            cur.expect("=")
            cur.expect("'")
            value = _quoted_value(cur)
            props.append(PropEquals(prop, value))
            if not cur.accept(","):
                break
        cur.expect("}")
    cur.expect(")")
    test = IsNode()
    if label is not None:
        test = And(test, HasLabel(label))
    for p in props:
        test = And(test, p)
    if not props:
        test = And(test, Exists())
    return Test(test)


def _match_suffix(cur: _Cursor):
    """Returns (low, high) with high None for unbounded, or no suffix."""
    if cur.accept("*"):
        return (0, None)
    if cur.peek().text == "[":
        cur.next()
        low = _nat(cur)
        cur.expect(",")
        if cur.accept("_"):
            cur.expect("]")
            return (low, None)
        high_tok = cur.peek()
        high = _nat(cur)
        cur.expect("]")
        if high < low:
            raise QuerySyntaxError(
                f"repetition bounds [{low},{high}] require n <= m", high_tok.pos
            )
        return (low, high)
    return None


def _match_segment(cur: _Cursor) -> PathExpr:
    tok = cur.peek()
    if cur.accept(":"):
        label = cur.expect_kind("ident", "a label").text
        if _match_suffix(cur) is not None:
            raise UnsupportedFeature("repetition on a label filter segment")
        return Test(And(HasLabel(label), Exists()))
    if tok.kind == "ident":
        cur.next()
        if tok.text in _AXIS_WORDS:
            axis = Axis(_AXIS_WORDS[tok.text])
            suffix = _match_suffix(cur)
            if suffix is None:
                return axis
            low, high = suffix
            stepped = Concat(axis, Test(Exists()))
            if high is None:
                return RepeatUnbounded(stepped, low)
            return Repeat(stepped, low, high)
        if tok.text in RESERVED:
            raise UnsupportedFeature(f"segment {tok.text!r} not supported")
        if _match_suffix(cur) is not None:
            raise UnsupportedFeature("repetition on a label filter segment")
        return Test(And(HasLabel(tok.text), Exists()))
    raise QuerySyntaxError(
        f"expected a path segment, found {tok.text or 'end of input'!r}",
        tok.pos,
        expected={"FWD", "BWD", "NEXT", "PREV", ":"},
    )


def parse_match(text: str) -> PathExpr:
    """Parse a MATCH pattern and desugar it to the formal syntax."""
    cur = _Cursor(_tokenize(text))
    kw = cur.peek()
    if kw.text != "MATCH":
        raise QuerySyntaxError("query must start with MATCH", kw.pos, {"MATCH"})
    cur.next()
    start = _match_node_pattern(cur)
    cur.expect("-")
    cur.expect("/")
    segments = [_match_segment(cur)]
    while cur.accept("/"):
        if cur.peek().text == "-":
            break
        segments.append(_match_segment(cur))
    cur.expect("-")
    end = _match_node_pattern(cur)
    tok = cur.peek()
    if tok.kind != "end":
        raise QuerySyntaxError(f"unexpected trailing input {tok.text!r}", tok.pos)
    return concat_all([start, *segments, end])
