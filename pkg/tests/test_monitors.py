import json

import pytest

from polyverify import catalog
from polyverify.errors import ContractViolation, DomainError
from polyverify.machines import GET, put, replay
from polyverify.monitors import (
    invariant_monitor, monitor_oplus, monitor_zero, prog_to_mealy_monitored, run_monitored_trace,
)
from polyverify.values import UNIT, Inl, Inr, Nat, Pair

from oracles import fib_sequence


def test_fib_monitor_threads_fibonacci_indices():
    t = run_monitored_trace(catalog.get("fibSpec"), [UNIT] * 50)
    assert t.violation is None
    assert [y.n for y in t.outputs] == fib_sequence(50)
    assert [e.n for e in t.evidence] == list(range(50))


def test_monitor_output_matches_the_machine():
    mon = catalog.get("fibSpec")
    assert run_monitored_trace(mon, [UNIT] * 20).outputs == replay(mon.machine, [UNIT] * 20)
    assert replay(mon.machine, [UNIT] * 20) == replay(catalog.get("fib"), [UNIT] * 20)


def test_off_by_one_update_is_caught_where_it_happens():
    t = run_monitored_trace(catalog.get("fibSpec", mutation="off-by-one"), [UNIT] * 50)
    k, v = t.violation
    assert k == 3
    assert len(t.steps) == 4  # the run stops at the violation
    assert v.path == (1,)  # the put is the second call of the update
    assert "put (3, 6)" in v.detail


def test_even_invariant_monitor():
    mon = catalog.get("evenState")
    t = run_monitored_trace(mon, [GET, put(Nat(4)), GET])
    assert t.violation is None and t.outputs == (Nat(0), UNIT, Nat(4))
    bad = run_monitored_trace(mon, [put(Nat(2)), put(Nat(3)), GET])
    assert bad.violation[0] == 1


def test_initial_state_must_satisfy_the_invariant():
    with pytest.raises(DomainError):
        invariant_monitor(Nat(1), UNIT, catalog.even_invariant())
    with pytest.raises(DomainError):
        invariant_monitor(Pair(Nat(0), Nat(1)), Nat(3), catalog.fib_invariant())


def test_lifting_requires_matching_contract():
    with pytest.raises(ContractViolation):
        prog_to_mealy_monitored(catalog.get("fibUpdateSpec"), catalog.get("evenState"))


def test_oplus_monitor_keeps_sides_apart():
    mon = monitor_oplus(catalog.get("fibSpec"), catalog.get("evenState"))
    t = run_monitored_trace(mon, [Inl(UNIT), Inr(GET), Inl(UNIT), Inr(put(Nat(6))), Inr(GET), Inl(UNIT)])
    assert t.violation is None
    assert t.outputs == (Nat(0), Nat(0), Nat(1), UNIT, Nat(6), Nat(1))
    bad = run_monitored_trace(mon, [Inl(UNIT), Inr(put(Nat(5)))])
    assert bad.violation[0] == 1
    assert run_monitored_trace(monitor_zero(), [UNIT]).violation[0] == 0


def test_monitored_trace_json():
    t = run_monitored_trace(catalog.get("fibSpec", mutation="off-by-one"), [UNIT] * 5)
    obj = json.loads(json.dumps(t.to_json()))
    assert [set(s) for s in obj["steps"]] == [{"in", "out", "witness", "evidence", "violation"}] * 4
    assert obj["steps"][2]["evidence"] == {"t": "nat", "v": "2"}
    assert obj["steps"][3]["violation"]["path"] == [1]
    assert obj["steps"][3]["out"] is None


def test_explicit_witnesses_are_checked():
    mon = catalog.get("evenState")
    ok = run_monitored_trace(mon, [put(Nat(2))], witnesses=[UNIT])
    assert ok.violation is None
    bad = run_monitored_trace(mon, [GET], witnesses=[Nat(1)])
    assert bad.violation[0] == 0
