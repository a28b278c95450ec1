"""Query abstract syntax, fragment classification, and printing.

A path expression is one of: a test used as a filter, an axis step, a
concatenation, a union, or a (possibly unbounded) repetition.  Tests are
boolean combinations of atomic checks plus the reachability check
``?(path)``.

Fragments carve out sub-languages with different evaluation complexity:

* PC_ONLY   no repetition anywhere (reachability tests allowed)
* ANOI      no reachability tests; every repetition wraps a bare axis
* NOI_ONLY  no reachability tests, repetition unrestricted
* PC_ANOI   reachability tests allowed; every repetition wraps a bare axis
* FULL      everything
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union as TyUnion

from .errors import FragmentError


class AxisKind(enum.Enum):
    FORWARD = "F"    # node to outgoing edge / edge to its target
    BACKWARD = "B"   # reverse of FORWARD
    NEXT = "N"       # same object, one time step later
    PREV = "P"       # same object, one time step earlier

    @property
    def temporal(self) -> bool:
        return self in (AxisKind.NEXT, AxisKind.PREV)


class Fragment(enum.Enum):
    PC_ONLY = "pc"
    ANOI = "anoi"
    NOI_ONLY = "noi"
    PC_ANOI = "pc_anoi"
    FULL = "full"


# ---------------------------------------------------------------- tests

@dataclass(frozen=True)
class IsNode:
    pass


@dataclass(frozen=True)
class IsEdge:
    pass


@dataclass(frozen=True)
class Exists:
    pass


@dataclass(frozen=True)
class HasLabel:
    label: str


@dataclass(frozen=True)
class PropEquals:
    prop: str
    value: str


@dataclass(frozen=True)
class TimeLess:
    bound: int


@dataclass(frozen=True)
class PathCondition:
    path: "PathExpr"


@dataclass(frozen=True)
class And:
    left: "TestExpr"
    right: "TestExpr"


@dataclass(frozen=True)
class Or:
    left: "TestExpr"
    right: "TestExpr"


@dataclass(frozen=True)
class Not:
    operand: "TestExpr"


TestExpr = TyUnion[
    IsNode, IsEdge, Exists, HasLabel, PropEquals, TimeLess, PathCondition, And, Or, Not
]


# ---------------------------------------------------------------- paths

@dataclass(frozen=True)
class Test:
    test: TestExpr

    __test__ = False  # not a unit-test class despite the name


@dataclass(frozen=True)
class Axis:
    kind: AxisKind


@dataclass(frozen=True)
class Concat:
    left: "PathExpr"
    right: "PathExpr"


@dataclass(frozen=True)
class Union:
    left: "PathExpr"
    right: "PathExpr"


@dataclass(frozen=True)
class Repeat:
    path: "PathExpr"
    low: int
    high: int

    def __post_init__(self):
        if self.low < 0 or self.high < self.low:
            raise ValueError(f"bad repetition bounds [{self.low},{self.high}]")


@dataclass(frozen=True)
class RepeatUnbounded:
    path: "PathExpr"
    low: int

    def __post_init__(self):
        if self.low < 0:
            raise ValueError(f"bad repetition bound [{self.low},_]")


PathExpr = TyUnion[Test, Axis, Concat, Union, Repeat, RepeatUnbounded]


IDENTITY = Test(Or(IsNode(), Not(IsNode())))  # tautology filter, e^0


def concat_all(parts) -> PathExpr:
    """Left-associative concatenation of one or more paths."""
    parts = list(parts)
    if not parts:
        raise ValueError("empty concatenation")
    out = parts[0]
    for p in parts[1:]:
        out = Concat(out, p)
    return out


# ---------------------------------------------------------------- walks

def _walk_paths(e: PathExpr):
    yield e
    if isinstance(e, (Concat, Union)):
        yield from _walk_paths(e.left)
        yield from _walk_paths(e.right)
    elif isinstance(e, (Repeat, RepeatUnbounded)):
        yield from _walk_paths(e.path)
    elif isinstance(e, Test):
        yield from _walk_tests_paths(e.test)


def _walk_tests_paths(t: TestExpr):
    if isinstance(t, (And, Or)):
        yield from _walk_tests_paths(t.left)
        yield from _walk_tests_paths(t.right)
    elif isinstance(t, Not):
        yield from _walk_tests_paths(t.operand)
    elif isinstance(t, PathCondition):
        yield from _walk_paths(t.path)


def _test_nodes(t: TestExpr):
    yield t
    if isinstance(t, (And, Or)):
        yield from _test_nodes(t.left)
        yield from _test_nodes(t.right)
    elif isinstance(t, Not):
        yield from _test_nodes(t.operand)


def expr_size(e: PathExpr) -> int:
    """Number of syntax nodes; a test leaf counts its boolean structure."""
    total = 0
    for node in _walk_paths(e):
        if isinstance(node, Test):
            for tn in _test_nodes(node.test):
                total += 1
                if isinstance(tn, PathCondition):
                    total += expr_size(tn.path)
        else:
            total += 1
    return total


def has_path_condition(e: PathExpr) -> bool:
    for node in _walk_paths(e):
        if isinstance(node, Test):
            for tn in _test_nodes(node.test):
                if isinstance(tn, PathCondition):
                    return True
    return False


def has_repeat(e: PathExpr) -> bool:
    return any(isinstance(n, (Repeat, RepeatUnbounded)) for n in _walk_paths(e))


def repeats_on_axes_only(e: PathExpr) -> bool:
    return all(
        isinstance(n.path, Axis)
        for n in _walk_paths(e)
        if isinstance(n, (Repeat, RepeatUnbounded))
    )


def classify_fragment(e: PathExpr) -> Fragment:
    pc = has_path_condition(e)
    rep = has_repeat(e)
    axes_only = repeats_on_axes_only(e)
    if not rep:
        return Fragment.PC_ONLY
    if not pc:
        return Fragment.ANOI if axes_only else Fragment.NOI_ONLY
    return Fragment.PC_ANOI if axes_only else Fragment.FULL


def temporal_radius(e: PathExpr) -> int:
    """Count of temporal axis steps; undefined when repetitions are present."""
    if has_repeat(e):
        raise FragmentError("temporal radius is defined only without repetition")
    return sum(
        1
        for n in _walk_paths(e)
        if isinstance(n, Axis) and n.kind.temporal
    )


# ---------------------------------------------------------------- printing

_IDENT_OK = None


def _ident_ok(s: str) -> bool:
    global _IDENT_OK
    if _IDENT_OK is None:
        import re

        _IDENT_OK = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
    from .parser import RESERVED

    return bool(_IDENT_OK.match(s)) and s not in RESERVED


def _print_test(t: TestExpr) -> str:
    if isinstance(t, IsNode):
        return "Node"
    if isinstance(t, IsEdge):
        return "Edge"
    if isinstance(t, Exists):
        return "exists"
    if isinstance(t, HasLabel):
        return t.label if _ident_ok(t.label) else f"label({t.label})"
    if isinstance(t, PropEquals):
        return f"prop({t.prop}='{t.value}')"
    if isinstance(t, TimeLess):
        return f"< {t.bound}"
    if isinstance(t, PathCondition):
        return f"?({pretty_print(t.path)})"
    if isinstance(t, And):
        return f"({_print_test(t.left)} & {_print_test(t.right)})"
    if isinstance(t, Or):
        return f"({_print_test(t.left)} | {_print_test(t.right)})"
    if isinstance(t, Not):
        inner = _print_test(t.operand)
        return f"!{inner}"
    raise TypeError(f"not a test: {t!r}")


def pretty_print(e: PathExpr) -> str:
    """Canonical text form; parsing it back yields an equal syntax tree."""
    if isinstance(e, Test):
        return _print_test(e.test)
    if isinstance(e, Axis):
        return e.kind.value
    if isinstance(e, Concat):
        return f"({pretty_print(e.left)} / {pretty_print(e.right)})"
    if isinstance(e, Union):
        return f"({pretty_print(e.left)} + {pretty_print(e.right)})"
    if isinstance(e, Repeat):
        return f"{_print_repeat_operand(e.path)}[{e.low},{e.high}]"
    if isinstance(e, RepeatUnbounded):
        return f"{_print_repeat_operand(e.path)}[{e.low},_]"
    raise TypeError(f"not a path expression: {e!r}")


def _print_repeat_operand(e: PathExpr) -> str:
    s = pretty_print(e)
    # suffix binds tightest, so anything that is not already atomic or
    # parenthesized needs parens
    if isinstance(e, (Axis,)) or s.startswith("("):
        return s
    if isinstance(e, Test) and not isinstance(e.test, (And, Or)):
        # "< 5" and "!x" would re-parse with wrong suffix attachment
        if isinstance(e.test, (TimeLess, Not)):
            return f"({s})"
        return s
    return f"({s})"
