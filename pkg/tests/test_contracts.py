import pytest
from hypothesis import given, settings, strategies as st

from polyverify import catalog
from polyverify import domains as D
from polyverify.contracts import (
    CallC, CheckReport, Contract, ReturnC, VerifiedImplementation, check_verified, contracts_agree,
    decidable_contract, erase, erasure_coherent, trivial_contract, verified_forwarder, verified_kleisli_compose,
    verified_oplus,
)
from polyverify.core import Call, Implementation, Return, closed, simple_interface
from polyverify.errors import CompositionError, ModeError
from polyverify.values import UNIT, Inl, Inr, Nat

from oracles import brute_force_freedep, nat_list, native_append, py_list

ASK = simple_interface("Ask", D.UNITS, D.nat_below(5))
DBL = simple_interface("Dbl", D.UNITS, D.nat_below(10))


def below(bound, over=ASK):
    return decidable_contract(f"<{bound}", over, lambda a, c, b: b.n < bound)


def doubler(assume: int, guarantee: int, offset: int = 0, verified_offset: int = 0) -> VerifiedImplementation:
    """Ask once and double the answer; relies on answers below ``assume``, promises results below ``guarantee``."""
    base = Implementation(DBL, ASK, lambda a: Call(UNIT, lambda b: Return(Nat(2 * b.n + offset))), "doubler")
    return VerifiedImplementation(
        base, below(guarantee, DBL), below(assume),
        lambda a, c: CallC(UNIT, UNIT, lambda b, e: ReturnC(Nat(2 * b.n + verified_offset), UNIT)),
        "doublerSpec",
    )


def test_assumption_makes_the_guarantee_hold():
    assert check_verified(doubler(3, 6)).passed
    report = check_verified(doubler(4, 6))
    assert report.verdict == "fail"
    (v,) = report.violations
    assert v.kind == "final-post-failed" and v.path == (0, 3)  # case 0, fourth response (b = 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10))
def test_checker_agrees_with_oracle_and_closed_form(assume, guarantee):
    vf = doubler(assume, guarantee)
    expected = "pass" if 2 * (assume - 1) < guarantee else "fail"
    assert check_verified(vf).verdict == expected
    assert brute_force_freedep(vf)[0] == expected


def test_erasure_mismatch_is_reported():
    vf = doubler(3, 10, offset=1)
    report = check_verified(vf)
    assert {v.kind for v in report.violations} == {"erasure-mismatch"}
    assert not erasure_coherent(vf)
    assert erasure_coherent(doubler(3, 10))
    assert brute_force_freedep(vf)[0] == "fail"


def test_call_outside_precondition():
    picky = Contract("picky", ASK, lambda a: D.EMPTY, lambda a, c, b, e: True, lambda a, c, b: D.UNITS)
    vf = VerifiedImplementation(doubler(3, 6).base, below(6, DBL), picky,
                                lambda a, c: CallC(UNIT, UNIT, lambda b, e: ReturnC(Nat(2 * b.n), UNIT)), "bad")
    (v,) = check_verified(vf).violations
    assert v.kind == "pre-empty"


def test_runaway_and_crashing_trees_do_not_reach_the_postcondition():
    loop_base = Implementation(DBL, ASK, lambda a: loop(), "loop")

    def loop():
        return Call(UNIT, lambda b: loop())

    def loop_c():
        return CallC(UNIT, UNIT, lambda b, e: loop_c())

    vf = VerifiedImplementation(loop_base, below(10, DBL), below(1), lambda a, c: loop_c(), "loopSpec")
    (v,) = check_verified(vf, depth_budget=10).violations
    assert v.kind == "post-unreached"

    def crash(b, e):
        raise ZeroDivisionError("boom")

    vf2 = VerifiedImplementation(doubler(3, 6).base, below(6, DBL), below(3), lambda a, c: CallC(UNIT, UNIT, crash), "crash")
    kinds = {v.kind for v in check_verified(vf2).violations}
    assert kinds == {"post-unreached"}


def test_sampled_mode_for_unbounded_domains():
    src = simple_interface("Inc", D.nats(), D.nats())
    inc = closed(src, lambda a: Nat(a.n + 1), "inc")
    spec = decidable_contract("bigger", src, lambda a, c, b: b.n > a.n)
    vf = VerifiedImplementation(inc, spec, trivial_contract(inc.target), lambda a, c: ReturnC(Nat(a.n + 1), UNIT), "incSpec")
    with pytest.raises(ModeError):
        check_verified(vf, mode="exhaustive")
    r1 = check_verified(vf, mode="sampled", seed=5, samples=20)
    r2 = check_verified(vf, mode="sampled", seed=5, samples=20)
    assert r1.passed and r1.to_json() == r2.to_json()
    assert r1.coverage["complete"] is False and r1.coverage["seed"] == 5


def test_report_json_round_trip():
    report = check_verified(doubler(5, 3))
    obj = report.to_json()
    assert set(obj) == {"verdict", "coverage", "violations"}
    assert all(v["path"] for v in obj["violations"])
    assert CheckReport.from_json(obj).to_json() == obj


def test_forwarder_and_composition():
    idd = verified_forwarder(below(3))
    assert check_verified(idd).passed
    # a callee that answers 2, which satisfies "< 3"
    two_impl = closed(ASK, lambda a: Nat(2), "two")
    two = VerifiedImplementation(two_impl, below(3), trivial_contract(two_impl.target), lambda a, c: ReturnC(Nat(2), UNIT), "twoSpec")
    assert check_verified(two).passed
    composite = verified_kleisli_compose(doubler(3, 6), two)
    assert check_verified(composite).passed
    assert check_verified(verified_kleisli_compose(doubler(3, 6), idd)).passed
    with pytest.raises(CompositionError):
        verified_kleisli_compose(doubler(4, 6), two)


def test_oplus_checks_each_side():
    both = verified_oplus(doubler(3, 6), doubler(3, 6))
    assert check_verified(both).passed
    broken = verified_oplus(doubler(3, 6), doubler(4, 6))
    bad = check_verified(broken)
    assert not bad.passed
    assert brute_force_freedep(broken)[0] == "fail"
    assert broken.base.source.positions.values() == (Inl(UNIT), Inr(UNIT))


def test_append_contract_means_list_append():
    fam = catalog.append_family()
    src = fam.append_spec.source_contract
    for a in fam.append_spec.base.source.positions.values():
        ys, xs = py_list(a.fst), py_list(a.snd)
        good = nat_list(native_append(xs, ys))
        bad = nat_list(native_append(xs, ys) + [0])
        for w in src.pre(a).values():
            assert any(src.post(a, w, good, e) for e in src.evidence(a, w, good).values())
            assert not any(src.post(a, w, bad, e) for e in src.evidence(a, w, bad).values())


def test_append_instance_and_mutants_against_oracle():
    assert check_verified(catalog.get("appendSpec")).passed
    for m in ("drop-cons", "skip-first"):
        vf = catalog.get("appendSpec", mutation=m)
        assert check_verified(vf).verdict == brute_force_freedep(vf)[0] == "fail"


def test_contract_comparison():
    assert contracts_agree(below(3), below(3))
    assert not contracts_agree(below(3), below(4))
    assert erase(doubler(3, 6)).name == "doubler"


@pytest.mark.parametrize("family", [catalog.append_family, catalog.concat_family])
def test_response_hook_keeps_every_response_with_evidence(family):
    specs = family(2, 2).specs
    for k in (specs.base, specs.step):
        for x in k.over.positions.values():
            for w in k.pre(x).values():
                narrowed = set(k.responses(x, w).values())
                full = {c for c in k.over.response(x).values() if k.evidence(x, w, c).values()}
                assert full <= narrowed
                # the solver may reach past the enumeration bound, but only to genuine responses
                assert all(c in k.over.response(x) and k.evidence(x, w, c).values() for c in narrowed)


def test_fold_ind_agrees_with_unhooked_oracle():
    # the oracle enumerates every response, so it would see branches the hook dropped
    for fam in (catalog.append_family(2, 2), catalog.concat_family(2, 2)):
        assert brute_force_freedep(fam.fold_ind)[0] == check_verified(fam.fold_ind).verdict == "pass"
    for m in catalog.entry("foldInd").mutations:
        vf = catalog.get("foldInd", mutation=m, alphabet=2, max_len=2)
        assert brute_force_freedep(vf)[0] == check_verified(vf).verdict
