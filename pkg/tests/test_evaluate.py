import random

import pytest

from conftest import random_expr, random_itpg, random_tuples
from trpq.errors import FragmentError
from trpq.evaluate import (
    Algorithm,
    FullSession,
    anoi_evaluator,
    eval_anoi,
    eval_bindings,
    eval_dispatch,
    eval_full,
    eval_only_pc,
    pc_evaluator,
)
from trpq.expr import expr_size
from trpq.graph import BindingTuple, canonical_translation
from trpq.oracle import eval_relation
from trpq.parser import parse_match, parse_trpq


def oracle_rel(g, e):
    return eval_relation(canonical_translation(g), e)


def test_pc_matches_oracle():
    rng = random.Random(31)
    for _ in range(120):
        g = random_itpg(rng)
        e = random_expr(rng, rng.randint(1, 4), "pc")
        rel = oracle_rel(g, e)
        ev = pc_evaluator(g)
        for t in random_tuples(rng, g, 12):
            assert eval_only_pc(g, e, t, evaluator=ev) == rel.contains(t)


def test_pc_pruning_equals_unpruned():
    rng = random.Random(37)
    for _ in range(60):
        g = random_itpg(rng, max_objects=4, max_points=6)
        e = random_expr(rng, 3, "pc")
        pruned = pc_evaluator(g, prune=True)
        unpruned = pc_evaluator(g, prune=False)
        for t in random_tuples(rng, g, 8):
            assert (
                eval_only_pc(g, e, t, evaluator=pruned)
                == eval_only_pc(g, e, t, evaluator=unpruned)
            )


def test_pc_memo_bound():
    rng = random.Random(41)
    for _ in range(100):
        g = random_itpg(rng)
        e = random_expr(rng, rng.randint(1, 4), "pc")
        ev = pc_evaluator(g)
        for t in random_tuples(rng, g, 1):
            eval_only_pc(g, e, t, evaluator=ev)
        n_objects = len(g.objects)
        assert len(ev.memo) <= expr_size(e) ** 3 * n_objects ** 2


def test_pc_rejects_repetition():
    g = random_itpg(random.Random(43))
    with pytest.raises(FragmentError):
        eval_only_pc(g, parse_trpq("N[0,2]"), BindingTuple("n0", 0, "n0", 0))


def test_anoi_matches_oracle():
    rng = random.Random(47)
    for _ in range(120):
        g = random_itpg(rng)
        e = random_expr(rng, rng.randint(1, 4), "anoi")
        rel = oracle_rel(g, e)
        ev = anoi_evaluator(g)
        for t in random_tuples(rng, g, 12):
            assert eval_anoi(g, e, t, evaluator=ev) == rel.contains(t)


def test_anoi_handles_huge_bounds():
    g = random_itpg(random.Random(53))
    o = g.object_ids()[0]
    t0 = g.omega.start
    e = parse_trpq("N[0,9223372036854775807]")
    assert eval_anoi(g, e, BindingTuple(o, t0, o, g.omega.end)) == (
        oracle_rel(g, parse_trpq(f"N[0,{len(g.omega)}]")).contains(
            BindingTuple(o, t0, o, g.omega.end)
        )
    )


def test_anoi_rejects_path_conditions():
    g = random_itpg(random.Random(59))
    with pytest.raises(FragmentError):
        eval_anoi(g, parse_trpq("?(N)"), BindingTuple("n0", 0, "n0", 0))
    with pytest.raises(FragmentError):
        eval_anoi(g, parse_trpq("(N/P)[0,2]"), BindingTuple("n0", 0, "n0", 0))


def test_full_matches_oracle():
    rng = random.Random(61)
    for _ in range(120):
        g = random_itpg(rng)
        e = random_expr(rng, rng.randint(1, 4), "full")
        rel = oracle_rel(g, e)
        session = FullSession(g)
        for t in random_tuples(rng, g, 12):
            assert session.check(e, t) == rel.contains(t)


def test_full_session_reuse_consistent():
    rng = random.Random(67)
    g = random_itpg(rng)
    e = random_expr(rng, 4, "full")
    session = FullSession(g)
    tuples = random_tuples(rng, g, 20)
    shared = [session.check(e, t) for t in tuples]
    fresh = [eval_full(g, e, t) for t in tuples]
    assert shared == fresh


def test_dispatch_routes_by_fragment():
    g = random_itpg(random.Random(71))
    t = BindingTuple("n0", g.omega.start, "n0", g.omega.start)
    _, stats = eval_dispatch(g, parse_trpq("?(N)"), t)
    assert stats.algorithm == "pc" and stats.fragment == "pc"
    _, stats = eval_dispatch(g, parse_trpq("N[0,2]"), t)
    assert stats.algorithm == "anoi"
    _, stats = eval_dispatch(g, parse_trpq("(N/P)[0,2]"), t)
    assert stats.algorithm == "full"


def test_dispatch_fragment_mismatch():
    g = random_itpg(random.Random(73))
    t = BindingTuple("n0", g.omega.start, "n0", g.omega.start)
    with pytest.raises(FragmentError):
        eval_dispatch(g, parse_trpq("(N/P)[0,2]"), t, Algorithm.PC)
    with pytest.raises(FragmentError):
        eval_dispatch(g, parse_trpq("?(N)[0,1]" ), t, Algorithm.ANOI)


def test_dispatch_agrees_across_algorithms():
    rng = random.Random(79)
    for _ in range(40):
        g = random_itpg(rng, max_objects=4, max_points=6)
        e = random_expr(rng, 3, "anoi")
        for t in random_tuples(rng, g, 6):
            results = {
                eval_dispatch(g, e, t, algo)[0]
                for algo in (Algorithm.ANOI, Algorithm.FULL, Algorithm.ORACLE)
            }
            assert len(results) == 1


def test_bindings_match_oracle():
    rng = random.Random(83)
    for _ in range(60):
        g = random_itpg(rng)
        e = random_expr(rng, rng.randint(1, 4), rng.choice(["pc", "anoi", "full"]))
        assert eval_bindings(g, e) == oracle_rel(g, e).members()


def test_bindings_thread_counts_identical():
    rng = random.Random(89)
    g = random_itpg(rng)
    e = parse_trpq("(N/exists) + (P/exists) + F")
    rows1 = eval_bindings(g, e, threads=1)
    rows2 = eval_bindings(g, e, threads=2)
    rows4 = eval_bindings(g, e, threads=4)
    assert rows1 == rows2 == rows4


def test_fixture_query_bindings():
    from trpq.fixtures import CONTACT_QUERY, contact_example

    rows = eval_bindings(contact_example(), parse_match(CONTACT_QUERY))
    assert rows == [
        BindingTuple("n3", 4, "n6", 9),
        BindingTuple("n7", 5, "n6", 9),
        BindingTuple("n7", 6, "n6", 9),
    ]
