"""Hand-built contact-tracing example graph.

A small social graph over the time domain [1, 11]: five persons, two
rooms, visit edges, and bidirectional meeting edges.  Bob's risk rises
from low to high at time 5; Eve tests positive at time 9.  The query

    MATCH (x:Person {risk='high'}) -/FWD/:meets/FWD/NEXT*/- (y:Person {test='pos'})

binds exactly three rows on this graph:
(n7, 5, n6, 9), (n7, 6, n6, 9), (n3, 4, n6, 9).
"""

from __future__ import annotations

from .graph import Itpg
from .intervals import Interval, ValuedInterval, coalesce, coalesce_valued

CONTACT_QUERY = (
    "MATCH (x:Person {risk='high'}) -/FWD/:meets/FWD/NEXT*/- "
    "(y:Person {test='pos'})"
)


def _fam(*spans):
    return coalesce(Interval(a, b) for a, b in spans)


def _vfam(*spans):
    return coalesce_valued(ValuedInterval(a, b, v) for a, b, v in spans)


def contact_example() -> Itpg:
    nodes = {
        "n1": "Person",  # Ann
        "n2": "Person",  # Bob
        "n3": "Person",
        "n4": "Room",    # park
        "n5": "Room",    # gym
        "n6": "Person",  # Eve
        "n7": "Person",
    }
    edges = {
        # meets between Bob and n3, both directions, while both are young
        "e2": ("meets", "n2", "n3", _fam((1, 2))),
        "e5": ("meets", "n3", "n2", _fam((1, 2))),
        # meets between n3 and Eve at time 4
        "e36": ("meets", "n3", "n6", _fam((4, 4))),
        "e63": ("meets", "n6", "n3", _fam((4, 4))),
        # meets between n7 and Eve over [5, 6]
        "e76": ("meets", "n7", "n6", _fam((5, 6))),
        "e67": ("meets", "n6", "n7", _fam((5, 6))),
        # a few room visits
        "e11": ("visits", "n1", "n4", _fam((2, 3))),
        "e21": ("visits", "n2", "n4", _fam((1, 2))),
        "e31": ("visits", "n3", "n5", _fam((5, 6))),
    }
    xi = {
        "n1": _fam((1, 9)),
        "n2": _fam((1, 9)),
        "n3": _fam((1, 7)),
        "n4": _fam((1, 11)),
        "n5": _fam((1, 11)),
        "n6": _fam((1, 9)),
        "n7": _fam((5, 9)),
    }
    sigma = {
        ("n1", "name"): _vfam((1, 9, "Ann")),
        ("n2", "name"): _vfam((1, 9, "Bob")),
        ("n6", "name"): _vfam((1, 9, "Eve")),
        ("n1", "risk"): _vfam((1, 9, "low")),
        ("n2", "risk"): _vfam((1, 4, "low"), (5, 9, "high")),
        ("n3", "risk"): _vfam((1, 7, "high")),
        ("n6", "risk"): _vfam((1, 9, "low")),
        ("n7", "risk"): _vfam((5, 9, "high")),
        ("n6", "test"): _vfam((4, 8, "neg"), (9, 9, "pos")),
        ("e2", "loc"): _vfam((1, 2, "park")),
        ("n4", "name"): _vfam((1, 11, "park")),
        ("n5", "name"): _vfam((1, 11, "gym")),
    }
    for eid, (_label, _src, _dst, fam) in edges.items():
        xi[eid] = fam
    return Itpg(
        omega=Interval(1, 11),
        nodes=set(nodes),
        edges=set(edges),
        rho={eid: (src, dst) for eid, (_l, src, dst, _f) in edges.items()},
        labels={**nodes, **{eid: lab for eid, (lab, _s, _d, _f) in edges.items()}},
        xi=xi,
        sigma=sigma,
    )
