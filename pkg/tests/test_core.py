import pytest
from hypothesis import given, settings, strategies as st

from polyverify import domains as D
from polyverify.core import (
    TRUNCATED, Call, Implementation, Interface, Leaf, Node, Return, ZERO, closed, count_calls, forwarder,
    impl_oplus, implementations_equal, injection, kleisli_compose, lens, materialize, mk_oplus,
    mk_sum_interface, multi_compose, path_call_counts, programs_equal, relabel, run_closed, sequence,
    simple_interface, substitute, tree_to_json,
)
from polyverify.errors import CompositionError, DomainError, NotClosedError
from polyverify.laws import P, Q, R, RESULTS, random_continuation, random_impl, random_program
from polyverify.values import UNIT, Inl, Inr, Nat, Pair, Tag

from oracles import explicit_tree

seeds = st.integers(min_value=0, max_value=10**6)

COUNTER = simple_interface("Counter", D.UNITS, D.nat_below(3))


def ask_twice():
    return Call(UNIT, lambda x: Call(UNIT, lambda y: Return(Nat(x.n + y.n))))


def test_sequence_grafts_onto_leaves():
    prog = sequence(Call(UNIT, Return), lambda b: Return(Nat(b.n * 10)))
    assert explicit_tree(prog, COUNTER) == ("call", UNIT, [(Nat(i), ("ret", Nat(10 * i))) for i in range(3)])


def test_materialize_and_count():
    t = materialize(ask_twice(), COUNTER)
    assert count_calls(t) == 1 + 3
    assert path_call_counts(t) == [2] * 9
    assert Leaf(Nat(4)) in [sub for _, n in t.branches for _, sub in n.branches]


def test_materialize_truncates_at_budget():
    t = materialize(ask_twice(), COUNTER, depth_budget=1)
    assert isinstance(t, Node)
    assert all(sub is TRUNCATED for _, sub in t.branches)
    assert tree_to_json(t)["branches"][0]["then"] == {"truncated": True}


def test_programs_equal_distinguishes():
    a = ask_twice()
    b = Call(UNIT, lambda x: Call(UNIT, lambda y: Return(Nat(x.n + 2 * y.n))))
    assert programs_equal(a, a, COUNTER)
    assert not programs_equal(a, b, COUNTER)
    assert not programs_equal(a, Return(Nat(0)), COUNTER)


@given(seeds)
def test_monad_laws_on_random_trees(seed):
    m = random_program(Q, RESULTS, seed)
    k = random_continuation(Q, RESULTS, f"{seed}/k")
    h = random_continuation(Q, RESULTS, f"{seed}/h")
    assert programs_equal(sequence(Return(Nat(2)), k), k(Nat(2)), Q)
    assert programs_equal(sequence(m, Return), m, Q)
    assert programs_equal(sequence(sequence(m, k), h), sequence(m, lambda x: sequence(k(x), h)), Q)


@settings(max_examples=40)
@given(seeds)
def test_kleisli_identity_and_associativity(seed):
    f, g, h = random_impl(P, Q, f"{seed}/f", 2), random_impl(Q, R, f"{seed}/g", 2), random_impl(R, P, f"{seed}/h", 2)
    assert implementations_equal(kleisli_compose(forwarder(P), f), f)
    assert implementations_equal(kleisli_compose(f, forwarder(Q)), f)
    assert implementations_equal(kleisli_compose(kleisli_compose(f, g), h), kleisli_compose(f, kleisli_compose(g, h)))


def test_kleisli_compose_checks_interfaces():
    f = random_impl(P, Q, 0)
    with pytest.raises(CompositionError):
        kleisli_compose(f, f)


def test_substitute_replaces_each_call():
    double = lens(COUNTER, COUNTER, lambda a: UNIT, lambda a, d: Nat(2 * d.n), "double")
    prog = substitute(ask_twice(), double)
    t = materialize(prog, COUNTER)
    leaves = sorted({sub.value.n for _, n in t.branches for _, sub in n.branches})
    assert leaves == [0, 2, 4, 6, 8]


def test_closed_modules_run_directly():
    inc = closed(simple_interface("Inc", D.nats(), D.nats()), lambda a: Nat(a.n + 1), "inc")
    assert run_closed(inc, Nat(41)) == Nat(42)
    with pytest.raises(DomainError):
        inc(Tag("x", UNIT))
    with pytest.raises(NotClosedError):
        run_closed(forwarder(COUNTER), UNIT)


def test_sum_interface_and_injections():
    index = D.finite("{a,b}", (Tag("a", UNIT), Tag("b", UNIT)))
    family = {Tag("a", UNIT): P, Tag("b", UNIT): Q}
    s = mk_sum_interface(index, family)
    assert Pair(Tag("a", UNIT), Nat(2)) in s.positions
    assert Pair(Tag("b", UNIT), Nat(2)) not in s.positions
    false = D.BOOLS.values()[0]
    assert s.response(Pair(Tag("b", UNIT), false)).values() == Q.response(false).values()
    assert mk_sum_interface(D.EMPTY, {}).name == ZERO.name
    iota = injection(index, family, Tag("a", UNIT))
    e = iota(Nat(1))
    assert isinstance(e, Call) and e.position == Pair(Tag("a", UNIT), Nat(1))


def test_multi_compose_routes_each_summand():
    leaf = simple_interface("Leaf", D.UNITS, D.nat_below(10))
    index = D.finite("{l,r}", (Tag("l", UNIT), Tag("r", UNIT)))
    deps = mk_sum_interface(index, {Tag("l", UNIT): leaf, Tag("r", UNIT): leaf})
    top = simple_interface("Top", D.UNITS, D.nat_below(100))
    f = Implementation(top, deps, lambda a: Call(Pair(Tag("l", UNIT), UNIT), lambda x: Call(
        Pair(Tag("r", UNIT), UNIT), lambda y: Return(Nat(10 * x.n + y.n)))), "pairUp")
    three = closed(leaf, lambda a: Nat(3), "three")
    seven = closed(leaf, lambda a: Nat(7), "seven")
    g = multi_compose(index, f, {Tag("l", UNIT): three, Tag("r", UNIT): seven})
    assert run_closed(g, UNIT) == Nat(37)
    with pytest.raises(CompositionError):
        multi_compose(index, f, {Tag("l", UNIT): three, Tag("r", UNIT): forwarder(leaf)})


def test_impl_oplus_acts_per_side():
    f = random_impl(P, Q, 1)
    g = random_impl(Q, R, 2)
    fg = impl_oplus(f, g)
    assert fg.source == mk_oplus(P, Q) and fg.target == mk_oplus(Q, R)
    assert programs_equal(fg(Inl(Nat(1))), relabel(f(Nat(1)), Inl), fg.target)
    assert programs_equal(fg(Inr(D.BOOLS.values()[1])), relabel(g(D.BOOLS.values()[1]), Inr), fg.target)


def test_interfaces_compare_by_name():
    assert Interface("X", D.UNITS, lambda a: D.UNITS) == Interface("X", D.BOOLS, lambda a: D.BOOLS)
    assert Interface("X", D.UNITS, lambda a: D.UNITS) != Interface("Y", D.UNITS, lambda a: D.UNITS)
