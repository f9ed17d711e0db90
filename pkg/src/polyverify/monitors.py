"""Runtime verification: monitors that shadow Mealy machines.

A monitor for a contract over some machine ``m`` steps on a position and a
precondition witness, returning ``(output, evidence, successor)`` where the
output is exactly what ``m`` answers and the evidence satisfies the
postcondition for that actual output. Unlike :func:`~polyverify.contracts.check_verified`,
which quantifies over every response, a monitor only ever sees the one branch
the machine takes. Violations are raised as :class:`ContractViolation`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from . import domains as D
from .contracts import (
    CallC, CheckedProgram, Contract, ReturnC, VerifiedImplementation, contract_oplus, CONTRACT_ZERO,
)
from .domains import Domain
from .errors import ContractViolation, DomainError
from .machines import GET, LiftedMealy, Mealy, OplusMealy, StateRunner, MEALY_ZERO, state_interface
from .values import UNIT, Inl, Inr, Tag, Value, show, to_json


class Monitor:
    contract: Contract
    machine: Mealy

    def step_checked(self, x: Value, w: Value) -> tuple:
        raise NotImplementedError


def run_program_monitored(cp: CheckedProgram, mon: Monitor) -> tuple:
    """Run a checked program against a monitor: ``(result, final_evidence, successor)``.

    Violations carry the index of the offending call in their path.
    """
    k = 0
    while isinstance(cp, CallC):
        x, w = cp.position, cp.witness
        try:
            b, e, mon = mon.step_checked(x, w)
        except ContractViolation as v:
            raise v.within(k) from None
        except DomainError as exc:
            raise ContractViolation(str(exc), (k,)) from exc
        if not mon.contract.post(x, w, b, e):
            raise ContractViolation(f"monitor evidence {show(e)} does not establish the postcondition of {show(x)}", (k,))
        cp = cp.cont(b, e)
        k += 1
    if not isinstance(cp, ReturnC):
        raise ContractViolation(f"not a checked program: {cp!r}", (k,))
    return cp.result, cp.evidence, mon


@dataclass(frozen=True, slots=True)
class LiftedMonitor(Monitor):
    vf: VerifiedImplementation
    inner: Monitor

    @property
    def contract(self):
        return self.vf.source_contract

    @property
    def machine(self):
        return LiftedMealy(self.vf.base, self.inner.machine)

    def step_checked(self, a, c):
        src = self.vf.source_contract
        if c not in src.pre(a):
            raise ContractViolation(f"witness {show(c)} not in the precondition of {show(a)}")
        result, ev, inner = run_program_monitored(self.vf(a, c), self.inner)
        if not src.post(a, c, result, ev):
            raise ContractViolation(f"{self.vf.name} returned {show(result)} with evidence {show(ev)}, which fails its postcondition")
        return result, ev, LiftedMonitor(self.vf, inner)


def prog_to_mealy_monitored(vf: VerifiedImplementation, mon: Monitor) -> Monitor:
    """A monitor for ``vf.source_contract`` over ``prog_to_mealy(erase(vf), mon.machine)``."""
    if mon.contract != vf.target_contract:
        raise ContractViolation(f"{vf.name} relies on {vf.target_contract.name}, the monitor checks {mon.contract.name}")
    return LiftedMonitor(vf, mon)


@dataclass(frozen=True, slots=True)
class OplusMonitor(Monitor):
    left: Monitor
    right: Monitor

    @property
    def contract(self):
        return contract_oplus(self.left.contract, self.right.contract)

    @property
    def machine(self):
        return OplusMealy(self.left.machine, self.right.machine)

    def step_checked(self, x, w):
        if isinstance(x, Inl):
            b, e, m = self.left.step_checked(x.v, w)
            return b, e, OplusMonitor(m, self.right)
        if isinstance(x, Inr):
            b, e, m = self.right.step_checked(x.v, w)
            return b, e, OplusMonitor(self.left, m)
        raise DomainError(f"{show(x)} is not an inl/inr input")


def monitor_oplus(mon1: Monitor, mon2: Monitor) -> Monitor:
    return OplusMonitor(mon1, mon2)


@dataclass(frozen=True, slots=True)
class ZeroMonitor(Monitor):
    @property
    def contract(self):
        return CONTRACT_ZERO

    @property
    def machine(self):
        return MEALY_ZERO

    def step_checked(self, x, w):
        raise DomainError("the empty interface has no positions")


MONITOR_ZERO = ZeroMonitor()


def monitor_zero() -> Monitor:
    return MONITOR_ZERO


# -- state invariants ---------------------------------------------------------------


def mk_invariant_contract(
    state_domain: Domain,
    predicate: Callable,
    witnesses: Optional[Callable[[Value], Domain]] = None,
    name: Optional[str] = None,
) -> Contract:
    """Contract on ``State S``: written states must satisfy ``T``, read states then do.

    Without ``witnesses``, ``predicate(s)`` decides ``T`` and the witness is
    unit. With ``witnesses``, ``T`` is proof-relevant: ``witnesses(s)`` is the
    domain of proofs of ``T(s)`` (membership decided by ``predicate(s, w)``).
    """
    if witnesses is None:
        def proofs(s):
            return D.decided(bool(predicate(s)))
    else:
        def proofs(s):
            return witnesses(s)

    def pre(x):
        return D.UNITS if x.label == "get" else proofs(x.payload)

    def post(x, c, b, e):
        if x.label == "get":
            return e in proofs(b)
        return e == UNIT

    def evidence(x, c, b):
        return proofs(b) if x.label == "get" else D.UNITS

    return Contract(name or f"Invariant({state_domain.name})", state_interface(state_domain), pre, post, evidence)


@dataclass(frozen=True, slots=True)
class InvariantMonitor(Monitor):
    """Monitor over ``state_runner(state)``; ``evidence`` proves the invariant of ``state``."""

    state: Value
    evidence: Value
    contract: Contract = field(compare=False)

    @property
    def machine(self):
        return StateRunner(self.state)

    def step_checked(self, x, w):
        if x == GET:
            if w != UNIT:
                raise ContractViolation(f"get takes a unit witness, got {show(w)}")
            return self.state, self.evidence, self
        if isinstance(x, Tag) and x.label == "put":
            s = x.payload
            if w not in self.contract.pre(x):
                raise ContractViolation(f"put {show(s)}: witness {show(w)} does not establish the invariant")
            return UNIT, UNIT, InvariantMonitor(s, w, self.contract)
        raise DomainError(f"{show(x)} is not a State operation")


def invariant_monitor(s0: Value, ev0: Value, contract: Contract) -> InvariantMonitor:
    if ev0 not in contract.evidence(GET, UNIT, s0):
        raise DomainError(f"{show(ev0)} does not witness the invariant for the initial state {show(s0)}")
    return InvariantMonitor(s0, ev0, contract)


# -- monitored traces -----------------------------------------------------------------


@dataclass(frozen=True)
class MonitoredStep:
    input: Value
    witness: Value
    output: Optional[Value] = None
    evidence: Optional[Value] = None
    violation: Optional[ContractViolation] = None

    def to_json(self) -> dict:
        return {
            "in": to_json(self.input),
            "out": None if self.output is None else to_json(self.output),
            "witness": to_json(self.witness),
            "evidence": None if self.evidence is None else to_json(self.evidence),
            "violation": None if self.violation is None else self.violation.to_json(),
        }


@dataclass(frozen=True)
class MonitoredTrace:
    steps: tuple
    final: Optional[Monitor] = field(default=None, compare=False, repr=False)

    @property
    def violation(self) -> Optional[tuple]:
        """``(step index, violation)`` of the first violation, if any."""
        for k, s in enumerate(self.steps):
            if s.violation is not None:
                return k, s.violation
        return None

    @property
    def outputs(self) -> tuple:
        return tuple(s.output for s in self.steps if s.violation is None)

    @property
    def evidence(self) -> tuple:
        return tuple(s.evidence for s in self.steps if s.violation is None)

    def to_json(self) -> dict:
        return {"steps": [s.to_json() for s in self.steps]}


def default_witness(contract: Contract, x: Value) -> Value:
    pre = contract.pre(x)
    if not pre.enumerable or not pre.values():
        raise ContractViolation(f"no witness available for the precondition of {show(x)}")
    return pre.values()[0]


def run_monitored_trace(mon: Monitor, inputs: Iterable[Value], witnesses: Optional[Iterable[Value]] = None) -> MonitoredTrace:
    """Step ``mon`` through ``inputs``; stops at (and records) the first violation."""
    ws = iter(witnesses) if witnesses is not None else None
    steps = []
    for x in inputs:
        w = next(ws) if ws is not None else None
        try:
            if w is None:
                w = default_witness(mon.contract, x)
            b, e, mon = mon.step_checked(x, w)
        except (ContractViolation, DomainError) as exc:
            v = exc if isinstance(exc, ContractViolation) else ContractViolation(str(exc))
            steps.append(MonitoredStep(x, UNIT if w is None else w, violation=v))
            break
        steps.append(MonitoredStep(x, w, b, e))
    return MonitoredTrace(tuple(steps), mon)
