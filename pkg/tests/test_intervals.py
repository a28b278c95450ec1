import pytest
from hypothesis import given, strategies as st

from trpq.errors import ConflictingValue
from trpq.intervals import (
    Interval,
    IntervalFamily,
    ValuedInterval,
    before,
    coalesce,
    coalesce_valued,
    family_contained,
    meets,
    occurs_during,
)

intervals = st.tuples(st.integers(0, 30), st.integers(0, 30)).map(
    lambda p: Interval(min(p), max(p))
)


def test_interval_validation():
    with pytest.raises(ValueError):
        Interval(3, 2)
    with pytest.raises(ValueError):
        Interval(-1, 2)


def test_allen_relations():
    assert occurs_during(Interval(2, 3), Interval(1, 5))
    assert occurs_during(Interval(1, 5), Interval(1, 5))
    assert not occurs_during(Interval(1, 5), Interval(2, 5))
    assert meets(Interval(1, 2), Interval(3, 4))
    assert not meets(Interval(1, 2), Interval(4, 5))
    assert before(Interval(1, 2), Interval(4, 5))
    assert not before(Interval(1, 2), Interval(3, 4))


@given(st.lists(intervals, max_size=8))
def test_coalesce_point_fidelity(ivs):
    fam = coalesce(ivs)
    assert fam.is_coalesced()
    raw_points = {t for iv in ivs for t in iv.points()}
    assert set(fam.points()) == raw_points


@given(st.lists(intervals, max_size=8))
def test_coalesce_idempotent(ivs):
    once = coalesce(ivs)
    twice = coalesce(once.intervals)
    assert once == twice


@given(st.lists(intervals, max_size=6), st.lists(intervals, max_size=6))
def test_containment_matches_point_sets(a, b):
    fa, fb = IntervalFamily(a), IntervalFamily(b)
    points_a = {t for iv in a for t in iv.points()}
    points_b = {t for iv in b for t in iv.points()}
    assert family_contained(fa, fb) == points_a.issubset(points_b)


def test_uncoalesced_family_detected():
    fam = IntervalFamily([Interval(1, 2), Interval(3, 4)])
    assert not fam.is_coalesced()
    assert coalesce(fam.intervals).intervals == (Interval(1, 4),)


def test_valued_coalesce_merges_equal_adjacent():
    fam = coalesce_valued([ValuedInterval(1, 2, "v"), ValuedInterval(3, 4, "v")])
    assert fam.intervals == (ValuedInterval(1, 4, "v"),)


def test_valued_coalesce_keeps_differing_adjacent():
    fam = coalesce_valued([ValuedInterval(1, 4, "low"), ValuedInterval(5, 9, "high")])
    assert len(fam) == 2
    assert fam.is_coalesced()
    assert fam.value_at(4) == "low"
    assert fam.value_at(5) == "high"
    assert fam.value_at(10) is None


def test_valued_overlap_conflict():
    with pytest.raises(ConflictingValue):
        coalesce_valued([ValuedInterval(1, 5, "a"), ValuedInterval(3, 7, "b")])


def test_valued_overlap_same_value_merges():
    fam = coalesce_valued([ValuedInterval(1, 5, "a"), ValuedInterval(3, 7, "a")])
    assert fam.intervals == (ValuedInterval(1, 7, "a"),)
