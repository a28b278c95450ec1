"""Closed integer intervals and coalesced interval families.

Time points are naturals.  An interval [a, b] with a <= b denotes the set
{a, a+1, ..., b}.  A family is an ascending sequence of intervals; a family
is *coalesced* when consecutive members are separated by at least one gap
point, so no two of them could be merged.  Valued families attach a value to
each interval and additionally allow adjacent intervals when their values
differ.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Tuple

from .errors import ConflictingValue


@dataclass(frozen=True, order=True)
class Interval:
    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"bad interval [{self.start},{self.end}]")

    def __contains__(self, t: int) -> bool:
        return self.start <= t <= self.end

    def __len__(self) -> int:
        return self.end - self.start + 1

    def points(self) -> Iterator[int]:
        return iter(range(self.start, self.end + 1))

    def __str__(self) -> str:
        return f"[{self.start},{self.end}]"


@dataclass(frozen=True, order=True)
class ValuedInterval:
    start: int
    end: int
    value: str

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"bad interval [{self.start},{self.end}]")

    def interval(self) -> Interval:
        return Interval(self.start, self.end)

    def __str__(self) -> str:
        return f"({self.value},[{self.start},{self.end}])"


def occurs_during(i1: Interval, i2: Interval) -> bool:
    """i1 is contained in i2."""
    return i2.start <= i1.start and i1.end <= i2.end


def meets(i1: Interval, i2: Interval) -> bool:
    """i1 ends exactly one point before i2 starts."""
    return i1.end + 1 == i2.start


def before(i1: Interval, i2: Interval) -> bool:
    """i1 ends with a gap of at least one point before i2 starts."""
    return i1.end + 1 < i2.start


class IntervalFamily:
    """Ascending sequence of intervals, not necessarily coalesced."""

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[Interval] = ()):
        self.intervals: Tuple[Interval, ...] = tuple(sorted(intervals))

    def is_coalesced(self) -> bool:
        return all(
            before(a, b) for a, b in zip(self.intervals, self.intervals[1:])
        )

    def covers(self, t: int) -> bool:
        # binary search would be overkill for the family sizes we see
        return any(t in iv for iv in self.intervals)

    def is_empty(self) -> bool:
        return not self.intervals

    def min_start(self) -> Optional[int]:
        return self.intervals[0].start if self.intervals else None

    def max_end(self) -> Optional[int]:
        return max(iv.end for iv in self.intervals) if self.intervals else None

    def points(self) -> Iterator[int]:
        for iv in self.intervals:
            yield from iv.points()

    def __eq__(self, other) -> bool:
        return isinstance(other, IntervalFamily) and self.intervals == other.intervals

    def __hash__(self) -> int:
        return hash(self.intervals)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __repr__(self) -> str:
        return "{" + ", ".join(str(iv) for iv in self.intervals) + "}"


class ValuedIntervalFamily:
    """Ascending sequence of valued intervals, not necessarily coalesced."""

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[ValuedInterval] = ()):
        self.intervals: Tuple[ValuedInterval, ...] = tuple(sorted(intervals))

    def is_coalesced(self) -> bool:
        for a, b in zip(self.intervals, self.intervals[1:]):
            ia, ib = a.interval(), b.interval()
            if before(ia, ib):
                continue
            if meets(ia, ib) and a.value != b.value:
                continue
            return False
        return True

    def value_at(self, t: int) -> Optional[str]:
        for iv in self.intervals:
            if iv.start <= t <= iv.end:
                return iv.value
        return None

    def support(self) -> IntervalFamily:
        return coalesce(Interval(iv.start, iv.end) for iv in self.intervals)

    def is_empty(self) -> bool:
        return not self.intervals

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ValuedIntervalFamily)
            and self.intervals == other.intervals
        )

    def __hash__(self) -> int:
        return hash(self.intervals)

    def __iter__(self) -> Iterator[ValuedInterval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __repr__(self) -> str:
        return "{" + ", ".join(str(iv) for iv in self.intervals) + "}"


def coalesce(intervals: Iterable[Interval]) -> IntervalFamily:
    """Merge overlapping or adjacent intervals into a coalesced family."""
    out: list[Interval] = []
    for iv in sorted(intervals):
        if out and iv.start <= out[-1].end + 1:
            if iv.end > out[-1].end:
                out[-1] = Interval(out[-1].start, iv.end)
        else:
            out.append(iv)
    return IntervalFamily(out)


def coalesce_valued(intervals: Iterable[ValuedInterval]) -> ValuedIntervalFamily:
    """Coalesce valued intervals; overlaps must agree on the value.

    Overlapping intervals with different values raise ConflictingValue.
    Adjacent intervals merge only when the values match.
    """
    pending = sorted(intervals, key=lambda iv: (iv.start, iv.end, iv.value))
    out: list[ValuedInterval] = []
    for iv in pending:
        if out:
            prev = out[-1]
            if iv.start <= prev.end:
                if iv.value != prev.value:
                    raise ConflictingValue(
                        f"{prev} overlaps {iv} with a different value"
                    )
                if iv.end > prev.end:
                    out[-1] = ValuedInterval(prev.start, iv.end, prev.value)
                continue
            if iv.start == prev.end + 1 and iv.value == prev.value:
                out[-1] = ValuedInterval(prev.start, max(prev.end, iv.end), prev.value)
                continue
        out.append(iv)
    return ValuedIntervalFamily(out)


def family_contained(f1: IntervalFamily, f2: IntervalFamily) -> bool:
    """Every point covered by f1 is covered by f2."""
    c2 = coalesce(f2.intervals).intervals
    for iv in coalesce(f1.intervals).intervals:
        if not any(occurs_during(iv, big) for big in c2):
            return False
    return True
