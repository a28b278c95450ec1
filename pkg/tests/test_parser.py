import random

import pytest

from conftest import random_expr
from trpq.errors import FragmentError, QuerySyntaxError, UnsupportedFeature
from trpq.expr import (
    And,
    Axis,
    AxisKind,
    Concat,
    Exists,
    Fragment,
    HasLabel,
    IsNode,
    PathCondition,
    PropEquals,
    Repeat,
    RepeatUnbounded,
    Test,
    Union,
    classify_fragment,
    concat_all,
    expr_size,
    pretty_print,
    temporal_radius,
)
from trpq.parser import parse_match, parse_trpq


def test_axis_atom():
    assert parse_trpq("N") == Axis(AxisKind.NEXT)


def test_prev_translation_example():
    got = parse_trpq(
        "(Node & label(Person) & prop(test='pos')) / P / (Node & exists)"
    )
    want = concat_all(
        [
            Test(And(And(IsNode(), HasLabel("Person")), PropEquals("test", "pos"))),
            Axis(AxisKind.PREV),
            Test(And(IsNode(), Exists())),
        ]
    )
    assert got == want


def test_bad_bounds_rejected():
    with pytest.raises(QuerySyntaxError) as err:
        parse_trpq("N[2,1]")
    assert err.value.position >= 0


def test_syntax_error_reports_position_and_expected():
    with pytest.raises(QuerySyntaxError) as err:
        parse_trpq("N / ")
    assert err.value.position == 4
    assert err.value.expected


def test_star_is_unbounded_repeat():
    assert parse_trpq("N*") == RepeatUnbounded(Axis(AxisKind.NEXT), 0)
    assert parse_trpq("N[0,_]") == RepeatUnbounded(Axis(AxisKind.NEXT), 0)


def test_precedence():
    assert parse_trpq("N/P+F") == Union(
        Concat(Axis(AxisKind.NEXT), Axis(AxisKind.PREV)), Axis(AxisKind.FORWARD)
    )
    # suffix binds tightest
    assert parse_trpq("N/P[1,2]") == Concat(
        Axis(AxisKind.NEXT), Repeat(Axis(AxisKind.PREV), 1, 2)
    )


def test_test_operand_enforcement():
    with pytest.raises(QuerySyntaxError):
        parse_trpq("N & exists")
    with pytest.raises(QuerySyntaxError):
        parse_trpq("!N")


def test_match_prev_example():
    got = parse_match("MATCH (x:Person {test='pos'})-/PREV/-(y)")
    want = concat_all(
        [
            Test(And(And(IsNode(), HasLabel("Person")), PropEquals("test", "pos"))),
            Axis(AxisKind.PREV),
            Test(And(IsNode(), Exists())),
        ]
    )
    assert got == want


def test_match_q8_example():
    got = parse_match(
        "MATCH (x:Person {test='pos'})-/PREV*/FWD/:visits/FWD/-(y:Room)"
    )
    want = concat_all(
        [
            Test(And(And(IsNode(), HasLabel("Person")), PropEquals("test", "pos"))),
            RepeatUnbounded(Concat(Axis(AxisKind.PREV), Test(Exists())), 0),
            Axis(AxisKind.FORWARD),
            Test(And(HasLabel("visits"), Exists())),
            Axis(AxisKind.FORWARD),
            Test(And(And(IsNode(), HasLabel("Room")), Exists())),
        ]
    )
    assert got == want


def test_match_needs_two_endpoints():
    with pytest.raises(QuerySyntaxError):
        parse_match("MATCH (x)")


def test_match_unsupported_feature():
    with pytest.raises(UnsupportedFeature):
        parse_match("MATCH (x)-/:meets[1,2]/-(y)")


def test_match_bounded_axis_repeat():
    got = parse_match("MATCH (x)-/NEXT[0,12]/-(y)")
    want = concat_all(
        [
            Test(And(IsNode(), Exists())),
            Repeat(Concat(Axis(AxisKind.NEXT), Test(Exists())), 0, 12),
            Test(And(IsNode(), Exists())),
        ]
    )
    assert got == want


def test_classify_examples():
    assert classify_fragment(parse_trpq("?(N / exists)")) is Fragment.PC_ONLY
    assert classify_fragment(parse_trpq("F / N[1,2]")) is Fragment.ANOI
    assert classify_fragment(parse_trpq("(?(N))[0,3]")) is Fragment.FULL
    assert classify_fragment(parse_trpq("(N/P)[0,3]")) is Fragment.NOI_ONLY
    assert classify_fragment(parse_trpq("?(N[1,2])")) is Fragment.PC_ANOI


def test_classification_independent_predicates():
    # re-derive the expected fragment from first principles on random trees
    from trpq.expr import has_path_condition, has_repeat, repeats_on_axes_only

    rng = random.Random(99)
    for _ in range(2000):
        e = random_expr(rng, rng.randint(0, 5), rng.choice(["pc", "anoi", "full"]))
        frag = classify_fragment(e)
        pc, rep, ax = has_path_condition(e), has_repeat(e), repeats_on_axes_only(e)
        if not rep:
            assert frag is Fragment.PC_ONLY
        elif not pc:
            assert frag is (Fragment.ANOI if ax else Fragment.NOI_ONLY)
        else:
            assert frag is (Fragment.PC_ANOI if ax else Fragment.FULL)


def test_size_and_radius():
    assert expr_size(parse_trpq("N")) == 1
    assert expr_size(parse_trpq("(N/P)")) == 3
    assert expr_size(parse_trpq("N[0,3]")) == 2
    assert temporal_radius(parse_trpq("(N/P)")) == 2
    assert temporal_radius(parse_trpq("F/B")) == 0
    with pytest.raises(FragmentError):
        temporal_radius(parse_trpq("N[0,3]"))


def test_pretty_print_round_trip_random():
    rng = random.Random(12345)
    for _ in range(10_000):
        e = random_expr(rng, rng.randint(0, 5), rng.choice(["pc", "anoi", "full"]))
        assert parse_trpq(pretty_print(e)) == e


def test_pretty_print_examples():
    assert pretty_print(Union(Axis(AxisKind.FORWARD), Axis(AxisKind.BACKWARD))) == "(F + B)"
    assert pretty_print(parse_trpq("(N/P)")) == "(N / P)"
