"""Seeded synthetic contact-tracing graph generator.

Shape: Person and Room nodes; a ``visits`` edge per room visit; a pair of
directed ``meets`` edges for every sampled meeting between two persons
co-located in a room.  A high-risk fraction of persons carries
``risk=high`` over their whole lifespan (the rest ``risk=low``); a
positivity fraction carries ``test=pos`` from a uniformly random onset
until the end of their lifespan.

Randomness comes from splitmix64 streams derived per entity id, so output
is a pure function of the seed, platform-independent, and stable under
growing the population: person ``p17`` rolls the same visits whether 100 or
10000 persons are generated.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Itpg
from .intervals import Interval, ValuedInterval, coalesce, coalesce_valued

MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def _fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h = ((h ^ b) * 0x100000001B3) & MASK64
    return h


class Stream:
    """Per-entity deterministic random stream."""

    def __init__(self, seed: int, key: str):
        self.state = (seed ^ _fnv1a64(key.encode("utf-8"))) & MASK64

    def next_u64(self) -> int:
        self.state, out = splitmix64(self.state)
        return out

    def randint(self, lo: int, hi: int) -> int:
        """Uniform in [lo, hi] (inclusive), hi - lo + 1 well below 2^64."""
        return lo + self.next_u64() % (hi - lo + 1)

    def fraction(self) -> float:
        return self.next_u64() / 2 ** 64


@dataclass(frozen=True)
class GenParams:
    persons: int = 100
    rooms: int = 5
    timepoints: int = 48
    positivity_rate: float = 0.05
    highrisk_rate: float = 0.18
    meet_locations: int = 5
    seed: int = 0

    def __post_init__(self):
        if min(self.persons, self.rooms, self.timepoints, self.meet_locations) < 1:
            raise ValueError("counts must be at least 1")
        for rate in (self.positivity_rate, self.highrisk_rate):
            if not 0.0 <= rate <= 1.0:
                raise ValueError("rates must be within [0, 1]")


def gen_contact_graph(p: GenParams) -> Itpg:
    horizon = p.timepoints - 1
    nodes = {}
    edges = {}
    rho = {}
    xi = {}
    sigma = {}

    for r in range(p.rooms):
        rid = f"r{r}"
        nodes[rid] = "Room"
        xi[rid] = coalesce([Interval(0, horizon)])

    # visits[room][time] -> list of (person, visit interval)
    occupancy: dict[str, dict[int, list]] = {f"r{r}": {} for r in range(p.rooms)}

    for i in range(p.persons):
        pid = f"p{i}"
        nodes[pid] = "Person"
        st = Stream(p.seed, pid)
        n_visits = st.randint(1, 4)
        visits = []
        for v in range(n_visits):
            length = st.randint(1, 6)
            start = st.randint(0, max(horizon - length + 1, 0))
            end = min(start + length - 1, horizon)
            room = f"r{st.randint(0, min(p.rooms, p.meet_locations) - 1)}"
            visits.append((start, end, room))
        visits.sort()
        life = coalesce([Interval(0, horizon)])
        xi[pid] = life
        for v, (start, end, room) in enumerate(visits):
            eid = f"v_{pid}_{v}"
            edges[eid] = "visits"
            rho[eid] = (pid, room)
            xi[eid] = coalesce([Interval(start, end)])
            iv = Interval(start, end)
            for t in range(start, end + 1):
                occupancy[room].setdefault(t, []).append((pid, iv))

        prop = Stream(p.seed, pid + "/props")
        risk = "high" if prop.fraction() < p.highrisk_rate else "low"
        sigma[(pid, "risk")] = coalesce_valued([ValuedInterval(0, horizon, risk)])
        if prop.fraction() < p.positivity_rate:
            onset = prop.randint(0, horizon)
            sigma[(pid, "test")] = coalesce_valued(
                [ValuedInterval(onset, horizon, "pos")]
            )

    # meetings: per room and co-located pair, sampled with probability
    # growing in the overlap length; keyed by the pair so outcomes do not
    # depend on population size
    meet_pairs = {}
    for room, by_time in occupancy.items():
        for t in sorted(by_time):
            present = by_time[t]
            if len(present) < 2:
                continue
            present = sorted(present)
            for ai in range(len(present)):
                for bi in range(ai + 1, len(present)):
                    a, ia = present[ai]
                    b, ib = present[bi]
                    if a == b:
                        continue
                    lo = max(ia.start, ib.start)
                    hi = min(ia.end, ib.end)
                    if t != lo:
                        continue  # handle each overlap once, at its start
                    key = (a, b, room, lo, hi)
                    if key in meet_pairs:
                        continue
                    st = Stream(p.seed, f"meet/{a}/{b}/{room}/{lo}")
                    overlap = hi - lo + 1
                    if st.fraction() < overlap / (overlap + 2):
                        meet_pairs[key] = True

    for a, b, room, lo, hi in sorted(meet_pairs):
        fam = coalesce([Interval(lo, hi)])
        for src, dst, tag in ((a, b, "f"), (b, a, "b")):
            eid = f"m_{a}_{b}_{room}_{lo}_{hi}_{tag}"
            edges[eid] = "meets"
            rho[eid] = (src, dst)
            xi[eid] = fam

    return Itpg(
        omega=Interval(0, horizon),
        nodes=set(nodes),
        edges=set(edges),
        rho=rho,
        labels={**nodes, **edges},
        xi=xi,
        sigma=sigma,
    )
