import json

import pytest
from hypothesis import given, settings, strategies as st

from polyverify import domains as D
from polyverify.errors import DomainError, ParseError
from polyverify.values import (
    UNIT, Bool, ConjBoth, ConjLeft, ConjRight, Inl, Inr, List, Nat, Pair, Tag,
    dumps, from_json, from_py, loads, parse_literal, show, to_json, to_py, tup, untup,
)

leaves = st.one_of(
    st.just(UNIT),
    st.integers(min_value=0, max_value=10**30).map(Nat),
    st.booleans().map(Bool),
)


def _extend(children):
    return st.one_of(
        st.tuples(children, children).map(lambda p: Pair(*p)),
        st.lists(children, max_size=4).map(lambda xs: List(tuple(xs))),
        st.tuples(st.text(min_size=1, max_size=5), children).map(lambda p: Tag(*p)),
        children.map(Inl),
        children.map(Inr),
        children.map(ConjLeft),
        children.map(ConjRight),
        st.tuples(children, children).map(lambda p: ConjBoth(*p)),
    )


values = st.recursive(leaves, _extend, max_leaves=12)


@given(values)
def test_json_round_trip(v):
    assert from_json(to_json(v)) == v
    assert loads(dumps(v)) == v


@given(values)
def test_canonical_text_is_stable(v):
    text = dumps(v)
    # re-serialising the parsed JSON with sorted keys reproduces the same bytes
    assert json.dumps(json.loads(text), sort_keys=True, separators=(",", ":"), ensure_ascii=False) == text
    assert dumps(loads(text)) == text


@given(values)
def test_canonical_literal_accepted_on_command_line(v):
    assert parse_literal(dumps(v)) == v


@given(values, values)
def test_equal_values_have_equal_encodings(a, b):
    assert (a == b) == (dumps(a) == dumps(b))


def test_big_naturals_survive_as_strings():
    n = 2**100 + 7
    assert to_json(Nat(n)) == {"t": "nat", "v": str(n)}
    assert loads(dumps(Nat(n))) == Nat(n)


@pytest.mark.parametrize("text, expected", [
    ("unit", UNIT),
    ("nat:5", Nat(5)),
    ("7", Nat(7)),
    ("bool:true", Bool(True)),
    ("list:[1,2]", List((Nat(1), Nat(2)))),
    ("pair:[1,[2]]", Pair(Nat(1), List((Nat(2),)))),
    ("tag:get", Tag("get", UNIT)),
    ("tag:put:nat:3", Tag("put", Nat(3))),
    ('{"t":"nat","v":"4"}', Nat(4)),
])
def test_shorthand_literals(text, expected):
    assert parse_literal(text) == expected


@pytest.mark.parametrize("text", ["bogus", "nat:-1", "nat:x", "bool:yes", "list:{}", "pair:[1]", "foo:1", '{"t":"nat","v":"01"}'])
def test_bad_literals(text):
    with pytest.raises(ParseError):
        parse_literal(text)


@pytest.mark.parametrize("obj", [
    {"t": "nat", "v": 3},
    {"t": "nat", "v": "3", "extra": 1},
    {"t": "mystery"},
    {"t": "list", "items": {}},
    {"t": "bool", "v": "true"},
    [1, 2],
])
def test_from_json_rejects_malformed(obj):
    with pytest.raises(ParseError):
        from_json(obj)


def test_parse_error_carries_path():
    with pytest.raises(ParseError) as exc:
        from_json({"t": "pair", "fst": {"t": "unit"}, "snd": {"t": "nat", "v": "x"}})
    assert exc.value.path == "$.snd.v"


def test_tuples_nest_to_the_right():
    v = tup(Nat(1), Nat(2), Nat(3))
    assert v == Pair(Nat(1), Pair(Nat(2), Nat(3)))
    assert untup(v, 3) == (Nat(1), Nat(2), Nat(3))


def test_python_conversion():
    v = from_py([1, (2, True), None])
    assert v == List((Nat(1), Pair(Nat(2), Bool(True)), UNIT))
    assert to_py(v) == [1, (2, True), None]
    assert show(v) == "[1, (2, true), ()]"


# -- domains ------------------------------------------------------------------------


def test_nat_below_is_complete():
    d = D.nat_below(4)
    assert d.values() == tuple(Nat(i) for i in range(4))
    assert d.complete
    assert Nat(4) not in d and Nat(3) in d


def test_truncated_enumeration_is_flagged():
    d = D.nats(enum_bound=3)
    assert Nat(50) in d  # membership is not truncated
    assert d.values() == (Nat(0), Nat(1), Nat(2))
    assert not d.complete


def test_bounded_lists_enumerate_by_length():
    d = D.lists(D.nat_below(2), max_len=2)
    assert d.complete
    assert d.values()[:3] == (List(()), List((Nat(0),)), List((Nat(1),)))
    assert len(d.values()) == 1 + 2 + 4
    assert List((Nat(0),) * 3) not in d


def test_empty_domain_and_require():
    assert D.EMPTY.is_empty()
    with pytest.raises(DomainError):
        D.BOOLS.require(Nat(0))


@settings(max_examples=50)
@given(st.integers(min_value=0, max_value=2**32))
def test_sampling_is_seeded(seed):
    import random

    d = D.lists(D.nats(), enum_len=2)
    a = d.draw(random.Random(seed), 5)
    b = d.draw(random.Random(seed), 5)
    assert a == b
    assert all(x in d for x in a)


def test_conjunctive_sum_membership():
    d = D.conjunctive_sum(D.nat_below(2), D.BOOLS)
    assert ConjLeft(Nat(1)) in d
    assert ConjRight(Bool(False)) in d
    assert ConjBoth(Nat(0), Bool(True)) in d
    assert ConjBoth(Nat(2), Bool(True)) not in d
    assert len(d.values()) == 2 + 2 + 4
