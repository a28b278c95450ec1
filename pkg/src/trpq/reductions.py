"""Reductions from classic hard problems to query evaluation.

Each generator builds a tiny graph, an expression, and a binding tuple so
that the tuple is in the expression's relation exactly when the source
instance is a yes-instance.  Brute-force deciders provide the expected
answers independently of any evaluator.

* SUBSET-SUM: is some subset of A summing to exactly S?  Encoded over a
  single always-alive node with time domain [0, S]; each element may add
  its value to the clock or be skipped.
* G-SUBSET-SUM (two-round game): does some 0/1 vector x make
  x . u + y . w != S for every 0/1 vector y?  The adversary's choices are
  forced through an exact-repetition gadget.
* QBF: truth of a closed quantified boolean formula with a CNF matrix,
  encoding valuations in the bits of a single time point.  Two encodings of
  the bit predicate are provided: one with repetition inside a reachability
  test, and one whose repetitions sit directly on axes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import InvalidInstance, SizeLimit
from .expr import (
    And,
    Axis,
    AxisKind,
    Concat,
    Not,
    Or,
    PathCondition,
    PathExpr,
    Repeat,
    RepeatUnbounded,
    Test,
    TestExpr,
    TimeLess,
    Union,
    concat_all,
)
from .graph import BindingTuple, Itpg
from .intervals import Interval, IntervalFamily

NODE_ID = "v0"


@dataclass(frozen=True)
class QbfFormula:
    """Prenex CNF formula; quantifiers[i] is 'e' or 'a' for variable i+1."""

    quantifiers: Tuple[str, ...]
    clauses: Tuple[Tuple[int, ...], ...]  # literals: +i / -i, 1-based

    def __post_init__(self):
        n = len(self.quantifiers)
        if n == 0:
            raise InvalidInstance("formula needs at least one variable")
        for q in self.quantifiers:
            if q not in ("e", "a"):
                raise InvalidInstance(f"bad quantifier {q!r}")
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > n:
                    raise InvalidInstance(f"bad literal {lit}")


@dataclass(frozen=True)
class ReductionInstance:
    graph: Itpg
    expr: PathExpr
    tuple: BindingTuple
    expected: bool


def _single_node_graph(horizon: int) -> Itpg:
    return Itpg(
        omega=Interval(0, horizon),
        nodes={NODE_ID},
        edges=set(),
        rho={},
        labels={NODE_ID: "cell"},
        xi={NODE_ID: IntervalFamily([Interval(0, horizon)])},
        sigma={},
    )


def _n(k: int) -> PathExpr:
    return Repeat(Axis(AxisKind.NEXT), k, k)


def _p(k: int) -> PathExpr:
    return Repeat(Axis(AxisKind.PREV), k, k)


# ---------------------------------------------------------------- SUBSET-SUM


def solve_subset_sum_brute(a: Sequence[int], s: int) -> bool:
    if len(a) > 24:
        raise SizeLimit(f"{len(a)} elements is beyond the brute-force cutoff")
    sums = {0}
    for x in a:
        sums |= {y + x for y in sums}
    return s in sums


def gen_subset_sum(a: Sequence[int], s: int) -> ReductionInstance:
    """Yes-instance iff the binding tuple is in the relation."""
    if s < 1:
        raise InvalidInstance("target must be at least 1")
    if not a:
        raise InvalidInstance("element list must be nonempty")
    if any(x < 1 for x in a):
        raise InvalidInstance("elements must be positive")
    steps = [Union(_n(x), _n(0)) for x in a]
    expr = concat_all(steps)
    return ReductionInstance(
        graph=_single_node_graph(s),
        expr=expr,
        tuple=BindingTuple(NODE_ID, 0, NODE_ID, s),
        expected=solve_subset_sum_brute(a, s),
    )


# ------------------------------------------------------------ G-SUBSET-SUM


def solve_gsubset_sum_brute(u: Sequence[int], w: Sequence[int], s: int) -> bool:
    """Exists x in {0,1}^|u| such that for all y in {0,1}^|w|:
    x . u + y . w != s."""
    if len(u) + len(w) > 20:
        raise SizeLimit("instance beyond the brute-force cutoff")
    for x in itertools.product((0, 1), repeat=len(u)):
        base = sum(xi * ui for xi, ui in zip(x, u))
        if all(
            base + sum(yi * wi for yi, wi in zip(y, w)) != s
            for y in itertools.product((0, 1), repeat=len(w))
        ):
            return True
    return False


def gen_gsubset_sum(u: Sequence[int], w: Sequence[int], s: int) -> ReductionInstance:
    if len(u) + len(w) < 1:
        raise InvalidInstance("instance needs at least one entry")
    if any(x < 0 for x in (*u, *w)) or s < 0:
        raise InvalidInstance("entries and target must be naturals")
    m = 2 * (sum(u) + sum(w))
    # the adversary's sum is checked against S shifted by the slack M
    r: PathExpr = Test(Or(TimeLess(s + m), Not(TimeLess(s + m + 1))))
    for wj in w:
        r = Concat(
            Repeat(concat_all([_n(wj), r, _p(2 * wj)]), 2, 2),
            _n(2 * wj),
        )
    parts: List[PathExpr] = [Union(_n(ui), _n(0)) for ui in u]
    parts.append(r)
    parts.append(RepeatUnbounded(Axis(AxisKind.NEXT), 0))
    parts.append(Test(Not(TimeLess(2 * m))))
    expr = concat_all(parts)
    return ReductionInstance(
        graph=_single_node_graph(2 * m),
        expr=expr,
        tuple=BindingTuple(NODE_ID, m, NODE_ID, 2 * m),
        expected=solve_gsubset_sum_brute(u, w, s),
    )


# ---------------------------------------------------------------- QBF


def solve_qbf_brute(f: QbfFormula) -> bool:
    n = len(f.quantifiers)
    if n > 20:
        raise SizeLimit("formula beyond the brute-force cutoff")

    def matrix(assign: List[bool]) -> bool:
        return all(
            any((lit > 0) == assign[abs(lit) - 1] for lit in clause)
            for clause in f.clauses
        )

    def rec(i: int, assign: List[bool]) -> bool:
        if i == n:
            return matrix(assign)
        results = (rec(i + 1, assign + [val]) for val in (False, True))
        return any(results) if f.quantifiers[i] == "e" else all(results)

    return rec(0, [])


def _bit_window(i: int) -> TestExpr:
    # time strictly below 2^i but not below 2^(i-1): exactly bit i set
    return And(TimeLess(2 ** i), Not(TimeLess(2 ** (i - 1))))


def bit_test(i: int) -> TestExpr:
    """Holds at (v, t) iff bit i of t is set (1-based bits).

    Strips the high bits by walking back in multiples of 2^i, then checks
    the window [2^(i-1), 2^i).
    """
    walk = RepeatUnbounded(_p(2 ** i), 0)
    return PathCondition(Concat(walk, Test(_bit_window(i))))


def bit_test_axis_only(i: int, n: int) -> TestExpr:
    """Same predicate with every repetition directly on an axis.

    Clears bits n+1 down to i+1 one at a time, each step optional.
    """
    factors = [
        Union(_p(0), _p(2 ** k)) for k in range(n, i - 1, -1)
    ]
    return PathCondition(Concat(concat_all(factors), Test(_bit_window(i))))


def _literal(lit: int, bits) -> TestExpr:
    t = bits(abs(lit))
    return t if lit > 0 else Not(t)


def _qbf_expr(f: QbfFormula, bits) -> PathExpr:
    n = len(f.quantifiers)
    if f.clauses:
        clause_tests = []
        for clause in f.clauses:
            ct = _literal(clause[0], bits)
            for lit in clause[1:]:
                ct = Or(ct, _literal(lit, bits))
            clause_tests.append(ct)
        body: TestExpr = clause_tests[0]
        for ct in clause_tests[1:]:
            body = And(body, ct)
    else:
        body = Or(TimeLess(1), Not(TimeLess(1)))  # empty matrix: true
    for i in range(n, 0, -1):
        step = Union(_n(2 ** (i - 1)), _n(0))
        if f.quantifiers[i - 1] == "e":
            body = PathCondition(Concat(step, Test(body)))
        else:
            body = Not(PathCondition(Concat(step, Test(Not(body)))))
    return Test(body)


def gen_qbf(f: QbfFormula) -> ReductionInstance:
    n = len(f.quantifiers)
    if n > 20:
        raise SizeLimit("formula too large to encode")
    expr = _qbf_expr(f, bit_test)
    return ReductionInstance(
        graph=_single_node_graph(2 ** n - 1),
        expr=expr,
        tuple=BindingTuple(NODE_ID, 0, NODE_ID, 0),
        expected=solve_qbf_brute(f),
    )


def gen_qbf_anoi(f: QbfFormula) -> ReductionInstance:
    """QBF encoding whose repetitions all sit directly on axes."""
    n = len(f.quantifiers)
    if n > 20:
        raise SizeLimit("formula too large to encode")
    expr = _qbf_expr(f, lambda i: bit_test_axis_only(i, n))
    return ReductionInstance(
        graph=_single_node_graph(2 ** n - 1),
        expr=expr,
        tuple=BindingTuple(NODE_ID, 0, NODE_ID, 0),
        expected=solve_qbf_brute(f),
    )
