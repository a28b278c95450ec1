"""Point-level relation engine over interval graphs.

Backs the general evaluator and full-relation binding queries.  Relations
over (object, time point) pairs are kept as scipy sparse boolean matrices;
time points are read straight off the interval families, so no intermediate
point graph is built.  Repetition is resolved by repeated squaring, with
closure iterations cut off as soon as the relation stops growing (sound:
boolean closures saturate within the domain size).

A work budget bounds the total number of nonzeros produced by matrix
products; exceeding it raises ResourceLimit.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import sparse

from .errors import DomainTooLarge, ResourceLimit
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
from .graph import BindingTuple, Itpg

DEFAULT_BUDGET = 200_000_000  # total nonzeros produced by products
POINT_CAP = 2 ** 20           # |objects| * |time points|


def _bin(m: sparse.csr_matrix) -> sparse.csr_matrix:
    if m.nnz:
        m.data.fill(1.0)
    return m


class PointEngine:
    """Relation algebra over the expanded point domain of one graph."""

    def __init__(self, g: Itpg, cap: int = POINT_CAP, budget: int = DEFAULT_BUDGET):
        self.g = g
        n_points = len(g.omega)
        self.objects = g.object_ids()
        if len(self.objects) * n_points > cap:
            raise DomainTooLarge(
                f"{len(self.objects)} objects x {n_points} time points "
                f"exceeds cap {cap}"
            )
        self.t0 = g.omega.start
        self.n_times = n_points
        self.obj_index = {o: i for i, o in enumerate(self.objects)}
        self.size = len(self.objects) * n_points
        self.budget = budget
        self.work = 0
        self._cache: Dict[int, sparse.csr_matrix] = {}
        self._axis_cache: Dict[AxisKind, sparse.csr_matrix] = {}

    # ------------------------------------------------------------ indexing

    def index(self, obj: str, t: int) -> Optional[int]:
        oi = self.obj_index.get(obj)
        if oi is None or not (self.t0 <= t < self.t0 + self.n_times):
            return None
        return oi * self.n_times + (t - self.t0)

    def unindex(self, i: int) -> Tuple[str, int]:
        return self.objects[i // self.n_times], self.t0 + i % self.n_times

    # ------------------------------------------------------------ algebra

    def _charge(self, nnz: int) -> None:
        self.work += nnz
        if self.work > self.budget:
            raise ResourceLimit(f"evaluation work budget exceeded ({self.work})")

    def mul(self, a: sparse.csr_matrix, b: sparse.csr_matrix) -> sparse.csr_matrix:
        c = _bin((a @ b).tocsr())
        self._charge(c.nnz)
        return c

    def add(self, a: sparse.csr_matrix, b: sparse.csr_matrix) -> sparse.csr_matrix:
        return _bin((a + b).tocsr())

    def eye(self) -> sparse.csr_matrix:
        return sparse.eye(self.size, dtype=np.float32, format="csr")

    def empty(self) -> sparse.csr_matrix:
        return sparse.csr_matrix((self.size, self.size), dtype=np.float32)

    def power(self, r: sparse.csr_matrix, n: int) -> sparse.csr_matrix:
        if n == 0:
            return self.eye()
        acc = None
        base = r
        while n:
            if n & 1:
                acc = base if acc is None else self.mul(acc, base)
            n >>= 1
            if n:
                if acc is not None and acc.nnz == 0:
                    return acc
                base = self.mul(base, base)
        return acc

    def bounded_closure(self, r: sparse.csr_matrix, k: int) -> sparse.csr_matrix:
        """Union of powers 0..k via squaring of (I | R), with saturation cutoff."""
        k = min(k, self.size)
        if k == 0:
            return self.eye()
        base = self.add(r, self.eye())
        out = None
        n = k
        while n:
            if n & 1:
                out = base if out is None else self.mul(out, base)
            n >>= 1
            if n:
                sq = self.mul(base, base)
                if sq.nnz == base.nnz and (sq != base).nnz == 0:
                    # saturated: every remaining power equals base
                    out = base if out is None else self.mul(out, base)
                    break
                base = sq
        return out if out is not None else self.eye()

    def closure(self, r: sparse.csr_matrix) -> sparse.csr_matrix:
        step = self.add(r, self.eye())
        while True:
            nxt = self.mul(step, step)
            if nxt.nnz == step.nnz and (nxt != step).nnz == 0:
                return step
            step = nxt

    # ------------------------------------------------------------ tests

    def test_vector(self, test: TestExpr) -> np.ndarray:
        """Boolean vector over the point domain of the (object, time) pairs
        satisfying the test."""
        T = self.n_times
        out = np.zeros(self.size, dtype=bool)
        if isinstance(test, IsNode):
            for o in self.g.nodes:
                i = self.obj_index[o] * T
                out[i : i + T] = True
        elif isinstance(test, IsEdge):
            for o in self.g.edges:
                i = self.obj_index[o] * T
                out[i : i + T] = True
        elif isinstance(test, Exists):
            for o, fam in self.g.xi.items():
                base = self.obj_index[o] * T
                for iv in fam:
                    out[base + iv.start - self.t0 : base + iv.end - self.t0 + 1] = True
        elif isinstance(test, HasLabel):
            for o, lab in self.g.labels.items():
                if lab == test.label:
                    i = self.obj_index[o] * T
                    out[i : i + T] = True
        elif isinstance(test, PropEquals):
            for (o, prop), fam in self.g.sigma.items():
                if prop != test.prop:
                    continue
                base = self.obj_index[o] * T
                for iv in fam:
                    if iv.value == test.value:
                        out[
                            base + iv.start - self.t0 : base + iv.end - self.t0 + 1
                        ] = True
        elif isinstance(test, TimeLess):
            upto = min(max(test.bound - self.t0, 0), T)
            if upto > 0:
                view = out.reshape(len(self.objects), T)
                view[:, :upto] = True
        elif isinstance(test, And):
            out = self.test_vector(test.left) & self.test_vector(test.right)
        elif isinstance(test, Or):
            out = self.test_vector(test.left) | self.test_vector(test.right)
        elif isinstance(test, Not):
            out = ~self.test_vector(test.operand)
        elif isinstance(test, PathCondition):
            rel = self.relation(test.path)
            out = np.asarray(rel.sum(axis=1)).ravel() > 0
        else:
            raise TypeError(f"not a test: {test!r}")
        return out

    def _diag(self, vec: np.ndarray) -> sparse.csr_matrix:
        return sparse.diags(vec.astype(np.float32), format="csr")

    # ------------------------------------------------------------ axes

    def axis(self, kind: AxisKind) -> sparse.csr_matrix:
        cached = self._axis_cache.get(kind)
        if cached is not None:
            return cached
        T = self.n_times
        if kind in (AxisKind.NEXT, AxisKind.PREV):
            idx = np.arange(self.size)
            if kind is AxisKind.NEXT:
                rows_a = idx[idx % T != T - 1]
                cols_a = rows_a + 1
            else:
                rows_a = idx[idx % T != 0]
                cols_a = rows_a - 1
            m = sparse.csr_matrix(
                (np.ones(len(rows_a), dtype=np.float32), (rows_a, cols_a)),
                shape=(self.size, self.size),
            )
        else:
            rows: List[int] = []
            cols: List[int] = []
            for e, (src, tgt) in self.g.rho.items():
                hops = (
                    [(src, e), (e, tgt)]
                    if kind is AxisKind.FORWARD
                    else [(tgt, e), (e, src)]
                )
                for a, b in hops:
                    ia = self.obj_index[a] * T
                    ib = self.obj_index[b] * T
                    rows.extend(range(ia, ia + T))
                    cols.extend(range(ib, ib + T))
            m = sparse.csr_matrix(
                (np.ones(len(rows), dtype=np.float32), (rows, cols)),
                shape=(self.size, self.size),
            )
        self._axis_cache[kind] = m
        return m

    # ------------------------------------------------------------ relations

    def relation(self, e: PathExpr) -> sparse.csr_matrix:
        key = e
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if isinstance(e, Test):
            rel = self._diag(self.test_vector(e.test))
        elif isinstance(e, Axis):
            rel = self.axis(e.kind)
        elif isinstance(e, Concat):
            rel = self.mul(self.relation(e.left), self.relation(e.right))
        elif isinstance(e, Union):
            rel = self.add(self.relation(e.left), self.relation(e.right))
        elif isinstance(e, Repeat):
            base = self.relation(e.path)
            rel = self.mul(
                self.power(base, e.low), self.bounded_closure(base, e.high - e.low)
            )
        elif isinstance(e, RepeatUnbounded):
            base = self.relation(e.path)
            rel = self.mul(self.power(base, e.low), self.closure(base))
        else:
            raise TypeError(f"not a path expression: {e!r}")
        self._cache[key] = rel
        return rel

    def contains(self, e: PathExpr, t: BindingTuple) -> Optional[bool]:
        i = self.index(t.from_object, t.from_time)
        j = self.index(t.to_object, t.to_time)
        if i is None or j is None:
            return False
        return bool(self.relation(e)[i, j])

    def members(self, e: PathExpr) -> List[BindingTuple]:
        rel = self.relation(e).tocoo()
        out = []
        for i, j in zip(rel.row.tolist(), rel.col.tolist()):
            o1, t1 = self.unindex(i)
            o2, t2 = self.unindex(j)
            out.append(BindingTuple(o1, t1, o2, t2))
        out.sort()
        return out

    # ---------------------------------------------- left-deep evaluation

    def members_left_deep(self, e: PathExpr) -> List[BindingTuple]:
        """Full relation, folding top-level concatenations left to right.

        Starting from the leftmost factor (usually a selective test) keeps
        intermediate relations small; repetitions along the spine are
        expanded by frontier iteration instead of closing the whole step
        relation.
        """
        factors = _spine(e)
        acc = self.relation(factors[0])
        for f in factors[1:]:
            if isinstance(f, (Repeat, RepeatUnbounded)):
                base = self.relation(f.path)
                acc = self.mul(acc, self.power(base, f.low))
                spread = (
                    f.high - f.low if isinstance(f, Repeat) else self.size
                )
                acc = self._frontier_closure(acc, base, spread)
            else:
                acc = self.mul(acc, self.relation(f))
        out = []
        coo = acc.tocoo()
        for i, j in zip(coo.row.tolist(), coo.col.tolist()):
            o1, t1 = self.unindex(i)
            o2, t2 = self.unindex(j)
            out.append(BindingTuple(o1, t1, o2, t2))
        out.sort()
        return out

    def _frontier_closure(self, acc, base, spread):
        result = acc
        frontier = acc
        steps = 0
        while steps < spread:
            frontier = self.mul(frontier, base)
            combined = self.add(result, frontier)
            if combined.nnz == result.nnz:
                break
            result = combined
            steps += 1
        return result


def _spine(e: PathExpr) -> List[PathExpr]:
    if isinstance(e, Concat):
        return _spine(e.left) + _spine(e.right)
    return [e]
