"""Shared randomized instance generators."""

import random

import pytest

from trpq.expr import (
    And, Axis, AxisKind, Concat, Exists, HasLabel, IsEdge, IsNode, Not, Or,
    PathCondition, PropEquals, Repeat, RepeatUnbounded, Test, TimeLess, Union,
)
from trpq.graph import BindingTuple, Itpg
from trpq.intervals import Interval, ValuedInterval, coalesce, coalesce_valued

LABELS = ["Person", "Room", "meets", "visits"]
PROPS = ["risk", "test"]
VALUES = ["low", "high", "pos"]


def random_family(rng, points):
    chosen = sorted(t for t in points if rng.random() < 0.6)
    return coalesce(Interval(t, t) for t in chosen)


def random_itpg(rng, max_objects=6, max_points=10):
    start = rng.randint(0, 2)
    end = start + rng.randint(0, max_points - 1)
    omega = Interval(start, end)
    points = range(start, end + 1)
    n_nodes = rng.randint(1, max(1, max_objects - 2))
    nodes = [f"n{i}" for i in range(n_nodes)]
    n_edges = rng.randint(0, max_objects - n_nodes)
    edges = [f"e{i}" for i in range(n_edges)]
    rho = {}
    labels = {}
    xi = {}
    sigma = {}
    for n in nodes:
        labels[n] = rng.choice(LABELS)
        xi[n] = random_family(rng, points)
    for e in edges:
        src, tgt = rng.choice(nodes), rng.choice(nodes)
        rho[e] = (src, tgt)
        labels[e] = rng.choice(LABELS)
        common = [t for t in points if xi[src].covers(t) and xi[tgt].covers(t)]
        xi[e] = coalesce(Interval(t, t) for t in common if rng.random() < 0.7)
    for obj in nodes + edges:
        if rng.random() < 0.5:
            prop = rng.choice(PROPS)
            alive = [t for t in points if xi[obj].covers(t)]
            chosen = [(t, rng.choice(VALUES)) for t in alive if rng.random() < 0.6]
            if chosen:
                sigma[(obj, prop)] = coalesce_valued(
                    ValuedInterval(t, t, v) for t, v in chosen
                )
    return Itpg(
        omega=omega, nodes=set(nodes), edges=set(edges), rho=rho,
        labels=labels, xi=xi, sigma=sigma,
    )


def random_test(rng, depth, allow_pc, expr_maker):
    atoms = ["node", "edge", "exists", "label", "prop", "time"]
    if depth <= 0:
        kind = rng.choice(atoms)
    else:
        kind = rng.choice(atoms + ["and", "or", "not"] + (["pc"] if allow_pc else []))
    if kind == "node":
        return IsNode()
    if kind == "edge":
        return IsEdge()
    if kind == "exists":
        return Exists()
    if kind == "label":
        return HasLabel(rng.choice(LABELS))
    if kind == "prop":
        return PropEquals(rng.choice(PROPS), rng.choice(VALUES))
    if kind == "time":
        return TimeLess(rng.randint(0, 12))
    if kind == "and":
        return And(random_test(rng, depth - 1, allow_pc, expr_maker),
                   random_test(rng, depth - 1, allow_pc, expr_maker))
    if kind == "or":
        return Or(random_test(rng, depth - 1, allow_pc, expr_maker),
                  random_test(rng, depth - 1, allow_pc, expr_maker))
    if kind == "not":
        return Not(random_test(rng, depth - 1, allow_pc, expr_maker))
    return PathCondition(expr_maker(rng, depth - 1))


def random_expr(rng, depth, fragment):
    """fragment: 'pc' (no repetition), 'anoi' (repetition on axes, no ?path),
    'full' (anything)."""
    allow_pc = fragment in ("pc", "full")

    def maker(r, d):
        return random_expr(r, d, fragment)

    choices = ["test", "axis"]
    if depth > 0:
        choices += ["concat", "concat", "union"]
        if fragment in ("anoi", "full"):
            choices.append("axis_repeat")
        if fragment == "full":
            choices.append("repeat")
    kind = rng.choice(choices)
    if kind == "test":
        return Test(random_test(rng, depth, allow_pc, maker))
    if kind == "axis":
        return Axis(rng.choice(list(AxisKind)))
    if kind == "concat":
        return Concat(random_expr(rng, depth - 1, fragment),
                      random_expr(rng, depth - 1, fragment))
    if kind == "union":
        return Union(random_expr(rng, depth - 1, fragment),
                     random_expr(rng, depth - 1, fragment))
    inner = (Axis(rng.choice(list(AxisKind))) if kind == "axis_repeat"
             else random_expr(rng, depth - 1, fragment))
    low = rng.randint(0, 3)
    if rng.random() < 0.3:
        return RepeatUnbounded(inner, low)
    return Repeat(inner, low, low + rng.randint(0, 3))


def random_tuples(rng, g, count):
    objs = g.object_ids()
    times = list(g.time_points())
    return [
        BindingTuple(rng.choice(objs), rng.choice(times),
                     rng.choice(objs), rng.choice(times))
        for _ in range(count)
    ]


@pytest.fixture
def rng():
    return random.Random(20260826)
