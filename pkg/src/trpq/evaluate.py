"""Tuple evaluation over interval graphs.

Three algorithms, picked by fragment:

* ``eval_only_pc``: memoized recursion for repetition-free expressions.
  Concatenation midpoints are pruned to time points within the temporal
  radius of each side, which bounds the memo table polynomially.
* ``eval_anoi``: for expressions without reachability tests whose
  repetitions wrap bare axes.  Temporal repetitions collapse to offset
  arithmetic, spatial ones to powers of the incidence step graph, and
  concatenation midpoints are restricted to offset-reachable times.
* ``eval_full``: general evaluation through the point-level relation
  engine, with repetition resolved by repeated squaring.

``eval_bindings`` materializes the full, sorted binding table and
``eval_dispatch`` routes a single tuple check to the right algorithm.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import FragmentError, ResourceLimit
from .expr import (
    And,
    Axis,
    AxisKind,
    Concat,
    Exists,
    Fragment,
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
    classify_fragment,
    has_path_condition,
    repeats_on_axes_only,
    temporal_radius,
)
from .graph import BindingTuple, Itpg, canonical_translation
from .pointrel import DEFAULT_BUDGET, POINT_CAP, PointEngine


class Algorithm(enum.Enum):
    AUTO = "auto"
    PC = "pc"
    ANOI = "anoi"
    FULL = "full"
    ORACLE = "oracle"


@dataclass
class EvalStats:
    algorithm: str = ""
    fragment: str = ""
    memo_entries: int = 0
    memo_hits: int = 0
    candidates: int = 0
    wall_ms: float = 0.0

    def format(self) -> str:
        return "\n".join(
            [
                f"algorithm={self.algorithm}",
                f"fragment={self.fragment}",
                f"memo_entries={self.memo_entries}",
                f"memo_hits={self.memo_hits}",
                f"candidates={self.candidates}",
                f"wall_ms={self.wall_ms:.3f}",
            ]
        )


class MemoTable:
    """Result table keyed by (subexpression, tuple)."""

    def __init__(self):
        self.table: Dict[Tuple, Optional[bool]] = {}
        self.hits = 0

    def get(self, key):
        v = self.table.get(key, _MISSING)
        if v is not _MISSING:
            self.hits += 1
        return v

    def put(self, key, value: bool):
        self.table[key] = value

    def __len__(self):
        return len(self.table)


_MISSING = object()


# ---------------------------------------------------------------- tests


def itpg_test_holds(g: Itpg, test: TestExpr, obj: str, t: int, pc=None) -> bool:
    """Test satisfaction straight off the interval representation.

    ``pc`` handles reachability tests; None forbids them.
    """
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
        return itpg_test_holds(g, test.left, obj, t, pc) and itpg_test_holds(
            g, test.right, obj, t, pc
        )
    if isinstance(test, Or):
        return itpg_test_holds(g, test.left, obj, t, pc) or itpg_test_holds(
            g, test.right, obj, t, pc
        )
    if isinstance(test, Not):
        return not itpg_test_holds(g, test.operand, obj, t, pc)
    if isinstance(test, PathCondition):
        if pc is None:
            raise FragmentError("reachability test not allowed here")
        return pc(obj, t, test.path)
    raise TypeError(f"not a test: {test!r}")


# ---------------------------------------------------------------- PC


class _PcEvaluator:
    def __init__(self, g: Itpg, prune: bool = True, budget: int = 10_000_000):
        self.g = g
        self.objects = g.object_ids()
        self.memo = MemoTable()
        self.prune = prune
        self.budget = budget
        self.candidates = 0
        self._radius: Dict[int, int] = {}

    def radius(self, e: PathExpr) -> int:
        r = self._radius.get(e)
        if r is None:
            r = temporal_radius(e)
            self._radius[e] = r
        return r

    def _times(self, centers_radii) -> range:
        """Intersection of |t - c| <= r windows, clamped to the domain."""
        lo = self.g.omega.start
        hi = self.g.omega.end
        for c, r in centers_radii:
            lo = max(lo, c - r)
            hi = min(hi, c + r)
        return range(lo, hi + 1)

    def _bump(self, n: int = 1):
        self.candidates += n
        if self.candidates > self.budget:
            raise ResourceLimit("candidate budget exceeded")

    def eval(self, o1: str, t1: int, o2: str, t2: int, e: PathExpr) -> bool:
        key = (e, o1, t1, o2, t2)
        hit = self.memo.get(key)
        if hit is not _MISSING:
            return hit
        result = self._eval(o1, t1, o2, t2, e)
        self.memo.put(key, result)
        return result

    def _eval(self, o1, t1, o2, t2, e) -> bool:
        omega = self.g.omega
        if t1 not in omega or t2 not in omega:
            return False
        if isinstance(e, Test):
            return (
                o1 == o2
                and t1 == t2
                and itpg_test_holds(self.g, e.test, o1, t1, self._pc)
            )
        if isinstance(e, Axis):
            return self._axis(o1, t1, o2, t2, e.kind)
        if isinstance(e, Union):
            return self.eval(o1, t1, o2, t2, e.left) or self.eval(
                o1, t1, o2, t2, e.right
            )
        if isinstance(e, Concat):
            if not self.prune:
                times = range(omega.start, omega.end + 1)
            else:
                times = self._times(
                    [(t1, self.radius(e.left)), (t2, self.radius(e.right))]
                )
            for t_mid in times:
                for o_mid in self.objects:
                    self._bump()
                    if self.eval(o1, t1, o_mid, t_mid, e.left) and self.eval(
                        o_mid, t_mid, o2, t2, e.right
                    ):
                        return True
            return False
        raise FragmentError(f"repetition not allowed in this fragment: {e!r}")

    def _axis(self, o1, t1, o2, t2, kind: AxisKind) -> bool:
        if kind is AxisKind.NEXT:
            return o1 == o2 and t2 == t1 + 1
        if kind is AxisKind.PREV:
            return o1 == o2 and t2 == t1 - 1
        if t1 != t2:
            return False
        if kind is AxisKind.FORWARD:
            return self._fwd_step(o1, o2)
        return self._fwd_step(o2, o1)

    def _fwd_step(self, a: str, b: str) -> bool:
        # a -> b is a forward incidence hop: node to outgoing edge, or edge
        # to its target node
        if b in self.g.rho and self.g.rho[b][0] == a:
            return True
        if a in self.g.rho and self.g.rho[a][1] == b:
            return True
        return False

    def _pc(self, obj: str, t: int, path: PathExpr) -> bool:
        omega = self.g.omega
        if self.prune:
            times = self._times([(t, self.radius(path))])
        else:
            times = range(omega.start, omega.end + 1)
        for t_dst in times:
            for o_dst in self.objects:
                self._bump()
                if self.eval(obj, t, o_dst, t_dst, path):
                    return True
        return False


def eval_only_pc(
    g: Itpg,
    e: PathExpr,
    t: BindingTuple,
    prune: bool = True,
    evaluator: Optional[_PcEvaluator] = None,
) -> bool:
    """Membership check for repetition-free expressions.

    A shared evaluator may be passed to reuse the memo across tuples of the
    same (graph, expression) pair.
    """
    ev = evaluator or _PcEvaluator(g, prune=prune)
    if ev.g is not g:
        raise ValueError("evaluator bound to a different graph")
    return ev.eval(t.from_object, t.from_time, t.to_object, t.to_time, e)


def pc_evaluator(g: Itpg, prune: bool = True) -> _PcEvaluator:
    return _PcEvaluator(g, prune=prune)


# ---------------------------------------------------------------- ANOI


class StepGraph:
    """Incidence graph: node -> outgoing edge -> target node."""

    def __init__(self, g: Itpg):
        self.objects = g.object_ids()
        self.index = {o: i for i, o in enumerate(self.objects)}
        n = len(self.objects)
        self.forward = np.zeros((n, n), dtype=bool)
        for e, (src, tgt) in g.rho.items():
            self.forward[self.index[src], self.index[e]] = True
            self.forward[self.index[e], self.index[tgt]] = True
        self.backward = self.forward.T.copy()
        self._pow_cache: Dict[Tuple[bool, int, int], np.ndarray] = {}

    def reach(self, a: str, b: str, low: int, high: Optional[int], back: bool) -> bool:
        """Is b reachable from a in k hops for some low <= k <= high?"""
        n = len(self.objects)
        m = self.backward if back else self.forward
        spread = n if high is None else min(high - low, n)
        key = (back, low, spread)
        mat = self._pow_cache.get(key)
        if mat is None:
            mat = _bool_power(m, low)
            mat = _bool_mul(mat, _bool_bounded_closure(m, spread))
            self._pow_cache[key] = mat
        return bool(mat[self.index[a], self.index[b]])


def _bool_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.float32) @ b.astype(np.float32)) > 0


def _bool_power(m: np.ndarray, n: int) -> np.ndarray:
    acc = np.eye(len(m), dtype=bool)
    base = m
    while n:
        if n & 1:
            acc = _bool_mul(acc, base)
        n >>= 1
        if n:
            base = _bool_mul(base, base)
    return acc


def _bool_bounded_closure(m: np.ndarray, k: int) -> np.ndarray:
    base = m | np.eye(len(m), dtype=bool)
    out = np.eye(len(m), dtype=bool)
    n = k
    while n:
        if n & 1:
            out = _bool_mul(out, base)
        n >>= 1
        if n:
            nxt = _bool_mul(base, base)
            if (nxt == base).all():
                return _bool_mul(out, base)
            base = nxt
    return out


IntervalSet = List[Tuple[int, int]]


def _iset_union(sets: List[IntervalSet]) -> IntervalSet:
    ivs = sorted(iv for s in sets for iv in s)
    out: IntervalSet = []
    for a, b in ivs:
        if out and a <= out[-1][1] + 1:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return out


def _iset_intersect(s1: IntervalSet, s2: IntervalSet) -> IntervalSet:
    out: IntervalSet = []
    i = j = 0
    while i < len(s1) and j < len(s2):
        a = max(s1[i][0], s2[j][0])
        b = min(s1[i][1], s2[j][1])
        if a <= b:
            out.append((a, b))
        if s1[i][1] < s2[j][1]:
            i += 1
        else:
            j += 1
    return out


def _iset_size(s: IntervalSet) -> int:
    return sum(b - a + 1 for a, b in s)


class _AnoiEvaluator:
    def __init__(self, g: Itpg, budget: int = 10_000_000):
        self.g = g
        self.objects = g.object_ids()
        self.steps = StepGraph(g)
        self.memo = MemoTable()
        self.budget = budget
        self.candidates = 0
        self._fwd_cache: Dict[Tuple[int, int, int], IntervalSet] = {}
        self._bwd_cache: Dict[Tuple[int, int, int], IntervalSet] = {}

    def _clamp(self, s: IntervalSet) -> IntervalSet:
        lo, hi = self.g.omega.start, self.g.omega.end
        return [(max(a, lo), min(b, hi)) for a, b in s if max(a, lo) <= min(b, hi)]

    def _shift(self, s: IntervalSet, low: int, high: Optional[int], sign: int):
        """Times reachable by adding sign * k for low <= k <= high."""
        out = []
        for a, b in s:
            if sign > 0:
                hi = self.g.omega.end if high is None else b + high
                out.append((a + low, hi))
            else:
                lo = self.g.omega.start if high is None else a - high
                out.append((lo, b - low))
        return self._clamp(_iset_union([out]))

    def _offsets(self, e: PathExpr) -> Tuple[int, Optional[int], int]:
        """(low, high, sign) for a temporal step; high None when unbounded."""
        if isinstance(e, Axis):
            return 1, 1, 1 if e.kind is AxisKind.NEXT else -1
        if isinstance(e, Repeat):
            sign = 1 if e.path.kind is AxisKind.NEXT else -1
            return e.low, e.high, sign
        sign = 1 if e.path.kind is AxisKind.NEXT else -1
        return e.low, None, sign

    def _step_times(self, e: PathExpr, s: IntervalSet, forward: bool) -> IntervalSet:
        if isinstance(e, Test):
            return s
        if isinstance(e, Axis):
            if not e.kind.temporal:
                return s
            low, high, sign = self._offsets(e)
            return self._shift(s, low, high, sign if forward else -sign)
        if isinstance(e, (Repeat, RepeatUnbounded)):
            if not e.path.kind.temporal:
                return s
            low, high, sign = self._offsets(e)
            return self._shift(s, low, high, sign if forward else -sign)
        if isinstance(e, Union):
            return _iset_union(
                [
                    self._step_times(e.left, s, forward),
                    self._step_times(e.right, s, forward),
                ]
            )
        if isinstance(e, Concat):
            first, second = (e.left, e.right) if forward else (e.right, e.left)
            return self._step_times(second, self._step_times(first, s, forward), forward)
        raise TypeError(f"not a path expression: {e!r}")

    def fwd_times(self, e: PathExpr, t: int) -> IntervalSet:
        key = (e, t, 1)
        out = self._fwd_cache.get(key)
        if out is None:
            out = self._step_times(e, [(t, t)], True)
            self._fwd_cache[key] = out
        return out

    def bwd_times(self, e: PathExpr, t: int) -> IntervalSet:
        key = (e, t, 0)
        out = self._bwd_cache.get(key)
        if out is None:
            out = self._step_times(e, [(t, t)], False)
            self._bwd_cache[key] = out
        return out

    def _bump(self, n: int = 1):
        self.candidates += n
        if self.candidates > self.budget:
            raise ResourceLimit("candidate budget exceeded")

    def eval(self, o1, t1, o2, t2, e) -> bool:
        key = (e, o1, t1, o2, t2)
        hit = self.memo.get(key)
        if hit is not _MISSING:
            return hit
        result = self._eval(o1, t1, o2, t2, e)
        self.memo.put(key, result)
        return result

    def _eval(self, o1, t1, o2, t2, e) -> bool:
        omega = self.g.omega
        if t1 not in omega or t2 not in omega:
            return False
        if isinstance(e, Test):
            return (
                o1 == o2 and t1 == t2 and itpg_test_holds(self.g, e.test, o1, t1)
            )
        if isinstance(e, Axis):
            if e.kind is AxisKind.NEXT:
                return o1 == o2 and t2 == t1 + 1
            if e.kind is AxisKind.PREV:
                return o1 == o2 and t2 == t1 - 1
            if t1 != t2:
                return False
            return self.steps.reach(
                o1, o2, 1, 1, back=e.kind is AxisKind.BACKWARD
            )
        if isinstance(e, (Repeat, RepeatUnbounded)):
            kind = e.path.kind
            low = e.low
            high = e.high if isinstance(e, Repeat) else None
            if kind.temporal:
                if o1 != o2:
                    return False
                delta = t2 - t1 if kind is AxisKind.NEXT else t1 - t2
                return delta >= low and (high is None or delta <= high)
            if t1 != t2:
                return False
            return self.steps.reach(
                o1, o2, low, high, back=kind is AxisKind.BACKWARD
            )
        if isinstance(e, Union):
            return self.eval(o1, t1, o2, t2, e.left) or self.eval(
                o1, t1, o2, t2, e.right
            )
        if isinstance(e, Concat):
            times = _iset_intersect(
                self.fwd_times(e.left, t1), self.bwd_times(e.right, t2)
            )
            if _iset_size(times) > max(len(self.g.omega), 4096):
                raise ResourceLimit("midpoint candidate set too large")
            for a, b in times:
                for t_mid in range(a, b + 1):
                    for o_mid in self.objects:
                        self._bump()
                        if self.eval(o1, t1, o_mid, t_mid, e.left) and self.eval(
                            o_mid, t_mid, o2, t2, e.right
                        ):
                            return True
            return False
        raise TypeError(f"not a path expression: {e!r}")


def eval_anoi(
    g: Itpg,
    e: PathExpr,
    t: BindingTuple,
    evaluator: Optional[_AnoiEvaluator] = None,
) -> bool:
    """Membership check for expressions without reachability tests whose
    repetitions wrap bare axes."""
    if has_path_condition(e):
        raise FragmentError("reachability tests not supported by this algorithm")
    if not repeats_on_axes_only(e):
        raise FragmentError("repetition over a compound path not supported")
    ev = evaluator or _AnoiEvaluator(g)
    return ev.eval(t.from_object, t.from_time, t.to_object, t.to_time, e)


def anoi_evaluator(g: Itpg) -> _AnoiEvaluator:
    return _AnoiEvaluator(g)


# ---------------------------------------------------------------- FULL


class FullSession:
    """Reusable evaluation context caching per-subexpression relations."""

    def __init__(self, g: Itpg, cap: int = POINT_CAP, budget: int = DEFAULT_BUDGET):
        self.g = g
        self.engine = PointEngine(g, cap=cap, budget=budget)

    def check(self, e: PathExpr, t: BindingTuple) -> bool:
        return self.engine.contains(e, t)


def eval_full(
    g: Itpg,
    e: PathExpr,
    t: BindingTuple,
    session: Optional[FullSession] = None,
    cap: int = POINT_CAP,
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """General membership check; handles every fragment."""
    s = session or FullSession(g, cap=cap, budget=budget)
    return s.check(e, t)


# ---------------------------------------------------------------- dispatch


def eval_dispatch(
    g: Itpg,
    e: PathExpr,
    t: BindingTuple,
    algorithm: Algorithm = Algorithm.AUTO,
) -> Tuple[bool, EvalStats]:
    """Route a single membership check to an evaluation algorithm."""
    fragment = classify_fragment(e)
    stats = EvalStats(fragment=fragment.value)
    start = time.perf_counter()
    algo = algorithm
    if algo is Algorithm.AUTO:
        if fragment is Fragment.PC_ONLY:
            algo = Algorithm.PC
        elif fragment is Fragment.ANOI:
            algo = Algorithm.ANOI
        else:
            algo = Algorithm.FULL
    stats.algorithm = algo.value
    if algo is Algorithm.PC:
        if fragment is not Fragment.PC_ONLY:
            raise FragmentError(
                f"algorithm pc requires a repetition-free expression, got {fragment.value}"
            )
        ev = _PcEvaluator(g)
        result = eval_only_pc(g, e, t, evaluator=ev)
        stats.memo_entries = len(ev.memo)
        stats.memo_hits = ev.memo.hits
        stats.candidates = ev.candidates
    elif algo is Algorithm.ANOI:
        if has_path_condition(e) or not repeats_on_axes_only(e):
            raise FragmentError(
                f"algorithm anoi requires the axis-repetition fragment, got {fragment.value}"
            )
        ev = _AnoiEvaluator(g)
        result = eval_anoi(g, e, t, evaluator=ev)
        stats.memo_entries = len(ev.memo)
        stats.memo_hits = ev.memo.hits
        stats.candidates = ev.candidates
    elif algo is Algorithm.FULL:
        session = FullSession(g)
        result = session.check(e, t)
        stats.memo_entries = len(session.engine._cache)
        stats.candidates = session.engine.work
    elif algo is Algorithm.ORACLE:
        from .oracle import check_membership

        result = check_membership(canonical_translation(g), e, t)
    else:
        raise ValueError(f"unknown algorithm {algorithm}")
    stats.wall_ms = (time.perf_counter() - start) * 1000.0
    return result, stats


# ---------------------------------------------------------------- bindings


def eval_bindings(
    g: Itpg,
    e: PathExpr,
    threads: int = 1,
    cap: int = POINT_CAP,
    budget: int = DEFAULT_BUDGET,
) -> List[BindingTuple]:
    """Full binding table, sorted ascending.

    ``threads`` bounds worker parallelism for independent top-level union
    branches; results are identical for any thread count.
    """
    if threads > 1 and isinstance(e, Union):
        from concurrent.futures import ThreadPoolExecutor

        branches = _union_branches(e)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(
                pool.map(lambda b: eval_bindings(g, b, 1, cap, budget), branches)
            )
        return sorted(set().union(*[set(p) for p in parts]))
    engine = PointEngine(g, cap=cap, budget=budget)
    return engine.members_left_deep(e)


def _union_branches(e: PathExpr) -> List[PathExpr]:
    if isinstance(e, Union):
        return _union_branches(e.left) + _union_branches(e.right)
    return [e]
