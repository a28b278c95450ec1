"""Temporal property graphs.

Two representations:

* ``Itpg``: interval-timestamped.  Existence and property values are
  coalesced interval families over a global time domain (a single closed
  interval of naturals).
* ``Tpg``: point-timestamped.  Existence is a set of (object, time) pairs
  and property values a map keyed by (object, property, time).

``canonical_translation`` expands an Itpg into the equivalent Tpg, guarded
by a size cap since the time domain may be astronomically large.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Tuple

from .errors import DomainTooLarge, ValidationError
from .intervals import (
    Interval,
    IntervalFamily,
    ValuedIntervalFamily,
    family_contained,
    occurs_during,
)

# default cap on |objects| * |time points| for point expansion
EXPANSION_CAP = 2 ** 20

NODE = "node"
EDGE = "edge"


class BindingTuple(NamedTuple):
    from_object: str
    from_time: int
    to_object: str
    to_time: int


@dataclass(frozen=True)
class Violation:
    code: str
    objects: Tuple[str, ...]
    message: str

    def __str__(self) -> str:
        return f"{self.code}({','.join(self.objects)}): {self.message}"


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, objects: Tuple[str, ...], message: str) -> None:
        self.violations.append(Violation(code, objects, message))


@dataclass
class Itpg:
    """Interval-timestamped temporal property graph."""

    omega: Interval
    nodes: FrozenSet[str]
    edges: FrozenSet[str]
    rho: Dict[str, Tuple[str, str]]          # edge id -> (source node, target node)
    labels: Dict[str, str]                   # object id -> label
    xi: Dict[str, IntervalFamily]            # object id -> existence
    sigma: Dict[Tuple[str, str], ValuedIntervalFamily]  # (object, property) -> values

    def __init__(self, omega, nodes, edges, rho, labels, xi, sigma):
        self.omega = omega
        self.nodes = frozenset(nodes)
        self.edges = frozenset(edges)
        self.rho = dict(rho)
        self.labels = dict(labels)
        self.xi = dict(xi)
        self.sigma = dict(sigma)

    @property
    def objects(self) -> FrozenSet[str]:
        return self.nodes | self.edges

    def object_ids(self) -> List[str]:
        return sorted(self.objects)

    def existence(self, obj: str) -> IntervalFamily:
        return self.xi.get(obj, IntervalFamily())

    def exists_at(self, obj: str, t: int) -> bool:
        return self.existence(obj).covers(t)

    def property_at(self, obj: str, prop: str, t: int) -> Optional[str]:
        fam = self.sigma.get((obj, prop))
        return fam.value_at(t) if fam is not None else None

    def label(self, obj: str) -> Optional[str]:
        return self.labels.get(obj)

    def time_points(self) -> range:
        return range(self.omega.start, self.omega.end + 1)


@dataclass
class Tpg:
    """Point-timestamped temporal property graph."""

    omega: range
    nodes: FrozenSet[str]
    edges: FrozenSet[str]
    rho: Dict[str, Tuple[str, str]]
    labels: Dict[str, str]
    xi: FrozenSet[Tuple[str, int]]                 # (object, time) existence points
    sigma: Dict[Tuple[str, str, int], str]         # (object, property, time) -> value

    def __init__(self, omega, nodes, edges, rho, labels, xi, sigma):
        self.omega = omega
        self.nodes = frozenset(nodes)
        self.edges = frozenset(edges)
        self.rho = dict(rho)
        self.labels = dict(labels)
        self.xi = frozenset(xi)
        self.sigma = dict(sigma)

    @property
    def objects(self) -> FrozenSet[str]:
        return self.nodes | self.edges

    def object_ids(self) -> List[str]:
        return sorted(self.objects)

    def exists_at(self, obj: str, t: int) -> bool:
        return (obj, t) in self.xi

    def property_at(self, obj: str, prop: str, t: int) -> Optional[str]:
        return self.sigma.get((obj, prop, t))

    def label(self, obj: str) -> Optional[str]:
        return self.labels.get(obj)


def _check_family_in_omega(report, code, obj, fam_intervals, omega):
    for iv in fam_intervals:
        if not occurs_during(Interval(iv.start, iv.end), omega):
            report.add(code, (obj,), f"interval {iv} outside time domain {omega}")


def validate_itpg(g: Itpg) -> ValidationReport:
    """Structural validation of an interval graph.

    Checks: node/edge id disjointness, endpoint references, time-domain
    containment, coalescing of every family, edge lifespans inside endpoint
    lifespans, and property support inside the owner's lifespan.
    """
    report = ValidationReport()
    overlap = g.nodes & g.edges
    for obj in sorted(overlap):
        report.add("id_clash", (obj,), "id used as both node and edge")
    for e in sorted(g.edges):
        if e not in g.rho:
            report.add("missing_endpoints", (e,), "edge has no endpoint map entry")
            continue
        src, tgt = g.rho[e]
        for n in (src, tgt):
            if n not in g.nodes:
                report.add("dangling_endpoint", (e, n), "endpoint is not a node")
    for e in sorted(set(g.rho) - g.edges):
        report.add("orphan_rho", (e,), "endpoint map entry for unknown edge")
    for obj, fam in sorted(g.xi.items()):
        if obj not in g.objects:
            report.add("unknown_object", (obj,), "existence for unknown object")
            continue
        _check_family_in_omega(report, "existence_outside_domain", obj, fam, g.omega)
        if not fam.is_coalesced():
            report.add("uncoalesced_existence", (obj,), f"family {fam} not coalesced")
    for e in sorted(g.edges):
        if e not in g.rho:
            continue
        src, tgt = g.rho[e]
        fe = g.existence(e)
        for n in (src, tgt):
            if not family_contained(fe, g.existence(n)):
                report.add(
                    "edge_outside_endpoint",
                    (e, n),
                    "edge alive at a time its endpoint is not",
                )
    for (obj, prop), fam in sorted(g.sigma.items()):
        if obj not in g.objects:
            report.add("unknown_object", (obj,), f"property {prop} on unknown object")
            continue
        _check_family_in_omega(
            report, "property_outside_domain", f"{obj}.{prop}", fam, g.omega
        )
        if not fam.is_coalesced():
            report.add(
                "uncoalesced_property",
                (obj, prop),
                f"valued family {fam} not coalesced",
            )
        if not family_contained(fam.support(), g.existence(obj)):
            report.add(
                "property_outside_existence",
                (obj, prop),
                "property defined at a time the object does not exist",
            )
    return report


def validate_tpg(g: Tpg) -> ValidationReport:
    """Structural validation of a point graph."""
    report = ValidationReport()
    overlap = g.nodes & g.edges
    for obj in sorted(overlap):
        report.add("id_clash", (obj,), "id used as both node and edge")
    for e in sorted(g.edges):
        if e not in g.rho:
            report.add("missing_endpoints", (e,), "edge has no endpoint map entry")
            continue
        for n in g.rho[e]:
            if n not in g.nodes:
                report.add("dangling_endpoint", (e, n), "endpoint is not a node")
    domain = set(g.omega)
    for obj, t in sorted(g.xi):
        if obj not in g.objects:
            report.add("unknown_object", (obj,), "existence for unknown object")
        if t not in domain:
            report.add("existence_outside_domain", (obj,), f"time {t} outside domain")
    for e in sorted(g.edges):
        if e not in g.rho:
            continue
        src, tgt = g.rho[e]
        for t in g.omega:
            if g.exists_at(e, t) and not (g.exists_at(src, t) and g.exists_at(tgt, t)):
                report.add(
                    "edge_outside_endpoint",
                    (e,),
                    f"edge alive at {t} but an endpoint is not",
                )
                break
    for (obj, prop, t), _v in sorted(g.sigma.items()):
        if t not in domain:
            report.add(
                "property_outside_domain", (obj, prop), f"time {t} outside domain"
            )
        if not g.exists_at(obj, t):
            report.add(
                "property_outside_existence",
                (obj, prop),
                f"value at {t} but object does not exist",
            )
    return report


def require_valid(g: Itpg) -> Itpg:
    report = validate_itpg(g)
    if not report.ok():
        raise ValidationError(report)
    return g


def canonical_translation(g: Itpg, cap: int = EXPANSION_CAP) -> Tpg:
    """Expand an interval graph to the equivalent point graph.

    Raises DomainTooLarge when |objects| * |time points| exceeds ``cap``.
    """
    n_points = len(g.omega)
    n_objects = len(g.objects)
    if n_objects * n_points > cap:
        raise DomainTooLarge(
            f"{n_objects} objects x {n_points} time points exceeds cap {cap}"
        )
    xi = set()
    for obj, fam in g.xi.items():
        for iv in fam:
            for t in iv.points():
                xi.add((obj, t))
    sigma = {}
    for (obj, prop), fam in g.sigma.items():
        for iv in fam:
            for t in range(iv.start, iv.end + 1):
                sigma[(obj, prop, t)] = iv.value
    return Tpg(
        omega=range(g.omega.start, g.omega.end + 1),
        nodes=g.nodes,
        edges=g.edges,
        rho=g.rho,
        labels=g.labels,
        xi=xi,
        sigma=sigma,
    )


def recompress(g: Tpg) -> Itpg:
    """Fold a point graph back into coalesced interval form."""
    from .intervals import ValuedInterval, coalesce, coalesce_valued

    by_obj: Dict[str, List[int]] = {obj: [] for obj in (*g.nodes, *g.edges)}
    for obj, t in g.xi:
        by_obj.setdefault(obj, []).append(t)
    xi = {
        obj: coalesce(_runs(sorted(ts)))
        for obj, ts in by_obj.items()
    }
    by_prop: Dict[Tuple[str, str], List[Tuple[int, str]]] = {}
    for (obj, prop, t), v in g.sigma.items():
        by_prop.setdefault((obj, prop), []).append((t, v))
    sigma = {}
    for key, pairs in by_prop.items():
        pairs.sort()
        sigma[key] = coalesce_valued(
            ValuedInterval(t, t, v) for t, v in pairs
        )
    return Itpg(
        omega=Interval(g.omega.start, g.omega[-1] if len(g.omega) else g.omega.start),
        nodes=g.nodes,
        edges=g.edges,
        rho=g.rho,
        labels=g.labels,
        xi=xi,
        sigma=sigma,
    )


def _runs(ts: List[int]):
    if not ts:
        return
    start = prev = ts[0]
    for t in ts[1:]:
        if t == prev + 1:
            prev = t
            continue
        yield Interval(start, prev)
        start = prev = t
    yield Interval(start, prev)
