"""Reference evaluator over point-timestamped graphs.

Evaluates a path expression to its full binding relation over the set of
(object, time) pairs, following the denotational semantics directly.  This
is the ground truth the interval-based evaluators are tested against, so it
is written for clarity over speed.

Relations are materialized as dense boolean matrices while the domain is
small and as sorted pair sets above that; the two representations must give
identical results.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .errors import FragmentError
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
    TestExpr,
    TimeLess,
    Union,
)
from .graph import BindingTuple, Tpg

MATRIX_PTO_CAP = 2 ** 14  # switch to pair sets above this many (object, time) pairs
SQUARING_THRESHOLD = 8    # use repeated squaring for powers beyond this


class Domain:
    """Index of the temporal objects (object, time) of a point graph."""

    def __init__(self, g: Tpg):
        self.g = g
        self.objects = g.object_ids()
        self.times = list(g.omega)
        self.obj_index = {o: i for i, o in enumerate(self.objects)}
        self.time_index = {t: i for i, t in enumerate(self.times)}
        self.size = len(self.objects) * len(self.times)

    def index(self, obj: str, t: int) -> Optional[int]:
        oi = self.obj_index.get(obj)
        ti = self.time_index.get(t)
        if oi is None or ti is None:
            return None
        return oi * len(self.times) + ti

    def unindex(self, i: int) -> Tuple[str, int]:
        n = len(self.times)
        return self.objects[i // n], self.times[i % n]

    def pairs(self) -> Iterable[Tuple[str, int]]:
        for o in self.objects:
            for t in self.times:
                yield o, t


class Relation:
    """Binding relation over a domain, matrix- or set-backed."""

    def __init__(self, dom: Domain, matrix=None, pairs=None):
        self.dom = dom
        self.matrix = matrix  # np.ndarray of bool, or None
        self.pairs = pairs    # set of (int, int) index pairs, or None

    # -------------------------------------------------- constructors

    @staticmethod
    def empty(dom: Domain) -> "Relation":
        if dom.size <= MATRIX_PTO_CAP:
            return Relation(dom, matrix=np.zeros((dom.size, dom.size), dtype=bool))
        return Relation(dom, pairs=set())

    @staticmethod
    def identity(dom: Domain) -> "Relation":
        if dom.size <= MATRIX_PTO_CAP:
            return Relation(dom, matrix=np.eye(dom.size, dtype=bool))
        return Relation(dom, pairs={(i, i) for i in range(dom.size)})

    @staticmethod
    def from_index_pairs(dom: Domain, idx_pairs) -> "Relation":
        if dom.size <= MATRIX_PTO_CAP:
            m = np.zeros((dom.size, dom.size), dtype=bool)
            for i, j in idx_pairs:
                m[i, j] = True
            return Relation(dom, matrix=m)
        return Relation(dom, pairs=set(idx_pairs))

    # -------------------------------------------------- algebra

    def compose(self, other: "Relation") -> "Relation":
        if self.matrix is not None:
            return Relation(
                self.dom,
                matrix=(self.matrix.astype(np.float32) @ other.matrix.astype(np.float32)) > 0,
            )
        by_left: Dict[int, List[int]] = {}
        for i, j in other.pairs:
            by_left.setdefault(i, []).append(j)
        out = set()
        for i, j in self.pairs:
            for k in by_left.get(j, ()):
                out.add((i, k))
        return Relation(self.dom, pairs=out)

    def union(self, other: "Relation") -> "Relation":
        if self.matrix is not None:
            return Relation(self.dom, matrix=self.matrix | other.matrix)
        return Relation(self.dom, pairs=self.pairs | other.pairs)

    def equals(self, other: "Relation") -> bool:
        return set(self.index_pairs()) == set(other.index_pairs())

    def power(self, n: int) -> "Relation":
        if n == 0:
            return Relation.identity(self.dom)
        if n <= SQUARING_THRESHOLD:
            out = self
            for _ in range(n - 1):
                out = out.compose(self)
            return out
        acc = None
        base = self
        while n:
            if n & 1:
                acc = base if acc is None else acc.compose(base)
            n >>= 1
            if n:
                base = base.compose(base)
        return acc

    def bounded_closure(self, k: int) -> "Relation":
        """Union of powers 0..k, computed by squaring (I | R)."""
        step = self.union(Relation.identity(self.dom))
        out = Relation.identity(self.dom)
        while k:
            if k & 1:
                out = out.compose(step)
            k >>= 1
            if k:
                step = step.compose(step)
        return out

    def reflexive_transitive_closure(self) -> "Relation":
        step = self.union(Relation.identity(self.dom))
        while True:
            nxt = step.compose(step)
            if nxt.count() == step.count() and nxt.equals(step):
                return step
            step = nxt

    def count(self) -> int:
        if self.matrix is not None:
            return int(self.matrix.sum())
        return len(self.pairs)

    # -------------------------------------------------- queries

    def contains(self, t: BindingTuple) -> bool:
        i = self.dom.index(t.from_object, t.from_time)
        j = self.dom.index(t.to_object, t.to_time)
        if i is None or j is None:
            return False
        if self.matrix is not None:
            return bool(self.matrix[i, j])
        return (i, j) in self.pairs

    def index_pairs(self) -> Iterable[Tuple[int, int]]:
        if self.matrix is not None:
            ii, jj = np.nonzero(self.matrix)
            return zip(ii.tolist(), jj.tolist())
        return iter(self.pairs)

    def row_nonempty(self, i: int) -> bool:
        if self.matrix is not None:
            return bool(self.matrix[i].any())
        return any(a == i for a, _ in self.pairs)

    def members(self) -> List[BindingTuple]:
        out = []
        for i, j in self.index_pairs():
            o1, t1 = self.dom.unindex(i)
            o2, t2 = self.dom.unindex(j)
            out.append(BindingTuple(o1, t1, o2, t2))
        out.sort()
        return out


# -------------------------------------------------------------- tests


def test_holds(g: Tpg, test: TestExpr, obj: str, t: int, _cache=None) -> bool:
    """Does (obj, t) satisfy the test?"""
    if isinstance(test, IsNode):
        return obj in g.nodes
    if isinstance(test, IsEdge):
        return obj in g.edges
    if isinstance(test, Exists):
        return g.exists_at(obj, t)
    if isinstance(test, HasLabel):
        return g.label(obj) == test.label
    if isinstance(test, PropEquals):
        return g.property_at(obj, test.prop, t) == test.value
    if isinstance(test, TimeLess):
        return t < test.bound
    if isinstance(test, And):
        return test_holds(g, test.left, obj, t, _cache) and test_holds(
            g, test.right, obj, t, _cache
        )
    if isinstance(test, Or):
        return test_holds(g, test.left, obj, t, _cache) or test_holds(
            g, test.right, obj, t, _cache
        )
    if isinstance(test, Not):
        return not test_holds(g, test.operand, obj, t, _cache)
    if isinstance(test, PathCondition):
        rel = _eval(g, test.path, _cache if _cache is not None else {})
        i = rel.dom.index(obj, t)
        return i is not None and rel.row_nonempty(i)
    raise TypeError(f"not a test: {test!r}")


# -------------------------------------------------------------- relations


def axis_relation(g: Tpg, kind: AxisKind, dom: Optional[Domain] = None) -> Relation:
    dom = dom or Domain(g)
    pairs = []
    if kind in (AxisKind.FORWARD, AxisKind.BACKWARD):
        for e, (src, tgt) in g.rho.items():
            for t in g.omega:
                hops = [(src, e), (e, tgt)]
                if kind is AxisKind.BACKWARD:
                    hops = [(tgt, e), (e, src)]
                for a, b in hops:
                    i, j = dom.index(a, t), dom.index(b, t)
                    pairs.append((i, j))
    else:
        delta = 1 if kind is AxisKind.NEXT else -1
        for o in dom.objects:
            for t in g.omega:
                if t + delta in dom.time_index:
                    pairs.append((dom.index(o, t), dom.index(o, t + delta)))
    return Relation.from_index_pairs(dom, pairs)


def _saturation_bound(dom: Domain) -> int:
    return dom.size * dom.size


def _eval(g: Tpg, e: PathExpr, cache: Dict[int, Relation]) -> Relation:
    key = e
    hit = cache.get(key)
    if hit is not None:
        return hit
    dom: Domain = cache.get("dom")  # type: ignore[assignment]
    if dom is None:
        dom = Domain(g)
        cache["dom"] = dom  # type: ignore[index]
    if isinstance(e, Test):
        pairs = [
            (dom.index(o, t), dom.index(o, t))
            for o, t in dom.pairs()
            if test_holds(g, e.test, o, t, cache)
        ]
        rel = Relation.from_index_pairs(dom, pairs)
    elif isinstance(e, Axis):
        rel = axis_relation(g, e.kind, dom)
    elif isinstance(e, Concat):
        rel = _eval(g, e.left, cache).compose(_eval(g, e.right, cache))
    elif isinstance(e, Union):
        rel = _eval(g, e.left, cache).union(_eval(g, e.right, cache))
    elif isinstance(e, Repeat):
        base = _eval(g, e.path, cache)
        spread = min(e.high - e.low, _saturation_bound(dom))
        rel = base.power(e.low).compose(base.bounded_closure(spread))
    elif isinstance(e, RepeatUnbounded):
        base = _eval(g, e.path, cache)
        rel = base.power(e.low).compose(base.reflexive_transitive_closure())
    else:
        raise TypeError(f"not a path expression: {e!r}")
    cache[key] = rel
    return rel


def eval_relation(g: Tpg, e: PathExpr) -> Relation:
    """Full binding relation of e over g's (object, time) domain."""
    return _eval(g, e, {})


def check_membership(g: Tpg, e: PathExpr, t: BindingTuple) -> bool:
    return eval_relation(g, e).contains(t)


def snapshot_relation(g: Tpg, e: PathExpr, t: int):
    """Evaluate a time-free expression on the snapshot at time t.

    Returns the set of (object, object) pairs bound at that instant.
    Expressions that mention time (temporal axes, time comparisons, or any
    repetition over them) must be time-free here.
    """
    if not _time_free(e):
        raise FragmentError("snapshot evaluation requires a time-free expression")
    snap = Tpg(
        omega=range(t, t + 1),
        nodes=g.nodes,
        edges=g.edges,
        rho=g.rho,
        labels=g.labels,
        xi={(o, tt) for (o, tt) in g.xi if tt == t},
        sigma={k: v for k, v in g.sigma.items() if k[2] == t},
    )
    rel = eval_relation(snap, e)
    return {(bt.from_object, bt.to_object) for bt in rel.members()}


def _time_free(e: PathExpr) -> bool:
    from .expr import _test_nodes, _walk_paths

    for node in _walk_paths(e):
        if isinstance(node, Axis) and node.kind.temporal:
            return False
        if isinstance(node, Test):
            for tn in _test_nodes(node.test):
                if isinstance(tn, TimeLess):
                    return False
    return True
