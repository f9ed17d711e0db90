"""Parallel sum of interfaces: call the left side, the right side, or both at once.

Positions of ``p ∣∣ q`` are ``ConjLeft(a)``, ``ConjRight(c)`` or
``ConjBoth(a, c)``; the last is answered by a pair. Programs, verified
programs, machines and monitors all lift to this product. The product is
affine: nothing here merges two uses of one component into a single one, so
a component machine is stepped at most once per composite step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from . import domains as D
from .contracts import (
    CallC, CheckedProgram, Contract, ReturnC, VerifiedImplementation, checked_relabel,
)
from .core import Call, Implementation, Interface, Program, Return, relabel
from .errors import DomainError, ContractViolation
from .machines import Mealy
from .monitors import Monitor
from .values import UNIT, ConjBoth, ConjLeft, ConjRight, Pair, Value, show


def parallel_interface(p: Interface, q: Interface) -> Interface:
    def response(v):
        if isinstance(v, ConjLeft):
            return p.response(v.v)
        if isinstance(v, ConjRight):
            return q.response(v.v)
        return D.product(p.response(v.l), q.response(v.r))

    return Interface(f"({p.name} ∣∣ {q.name})", D.conjunctive_sum(p.positions, q.positions), response)


def tensor_interface(p: Interface, q: Interface) -> Interface:
    """``p ⊗ q``: positions and responses are both pairs."""
    return Interface(
        f"({p.name} ⊗ {q.name})",
        D.product(p.positions, q.positions),
        lambda v: D.product(p.response(v.fst), q.response(v.snd)),
    )


# -- programs ----------------------------------------------------------------


def left_prog(e: Program) -> Program:
    return relabel(e, ConjLeft)


def right_prog(e: Program) -> Program:
    return relabel(e, ConjRight)


def both_prog(e1: Program, e2: Program) -> Program:
    """Run two programs in lockstep; simultaneous calls become one ``both`` call."""
    if isinstance(e1, Return) and isinstance(e2, Return):
        return Return(Pair(e1.result, e2.result))
    if isinstance(e1, Call) and isinstance(e2, Return):
        k = e1.cont
        return Call(ConjLeft(e1.position), lambda b: both_prog(k(b), e2))
    if isinstance(e1, Return):
        h = e2.cont
        return Call(ConjRight(e2.position), lambda d: both_prog(e1, h(d)))
    k, h = e1.cont, e2.cont
    return Call(ConjBoth(e1.position, e2.position), lambda bd: both_prog(k(bd.fst), h(bd.snd)))


def parallel_impl(f: Implementation, g: Implementation) -> Implementation:
    def body(v):
        if isinstance(v, ConjLeft):
            return left_prog(f(v.v))
        if isinstance(v, ConjRight):
            return right_prog(g(v.v))
        if isinstance(v, ConjBoth):
            return both_prog(f(v.l), g(v.r))
        raise DomainError(f"{show(v)} is not a left/right/both position")

    return Implementation(
        parallel_interface(f.source, g.source), parallel_interface(f.target, g.target), body, f"({f.name} ∣∣ {g.name})"
    )


# -- contracts and verified programs --------------------------------------------------


def parallel_contract(r: Contract, s: Contract) -> Contract:
    def pre(v):
        if isinstance(v, ConjLeft):
            return r.pre(v.v)
        if isinstance(v, ConjRight):
            return s.pre(v.v)
        return D.product(r.pre(v.l), s.pre(v.r))

    def post(v, w, b, e):
        if isinstance(v, ConjLeft):
            return r.post(v.v, w, b, e)
        if isinstance(v, ConjRight):
            return s.post(v.v, w, b, e)
        if not (isinstance(w, Pair) and isinstance(b, Pair) and isinstance(e, Pair)):
            return False
        return r.post(v.l, w.fst, b.fst, e.fst) and s.post(v.r, w.snd, b.snd, e.snd)

    def evidence(v, w, b):
        if isinstance(v, ConjLeft):
            return r.evidence(v.v, w, b)
        if isinstance(v, ConjRight):
            return s.evidence(v.v, w, b)
        if not (isinstance(w, Pair) and isinstance(b, Pair)):
            raise DomainError(f"malformed witness/response pair at {show(v)}")
        return D.product(r.evidence(v.l, w.fst, b.fst), s.evidence(v.r, w.snd, b.snd))

    def responses(v, w):
        if isinstance(v, ConjLeft):
            return r.responses(v.v, w)
        if isinstance(v, ConjRight):
            return s.responses(v.v, w)
        if not isinstance(w, Pair):
            return parallel_interface(r.over, s.over).response(v)
        return D.product(r.responses(v.l, w.fst), s.responses(v.r, w.snd))

    return Contract(f"({r.name} ∣∣Dep {s.name})", parallel_interface(r.over, s.over), pre, post, evidence, responses)


def left_dep(cp: CheckedProgram) -> CheckedProgram:
    return checked_relabel(cp, ConjLeft)


def right_dep(cp: CheckedProgram) -> CheckedProgram:
    return checked_relabel(cp, ConjRight)


def both_dep(cp1: CheckedProgram, cp2: CheckedProgram) -> CheckedProgram:
    """Checked counterpart of :func:`both_prog`; witnesses and evidence are paired."""
    if isinstance(cp1, ReturnC) and isinstance(cp2, ReturnC):
        return ReturnC(Pair(cp1.result, cp2.result), Pair(cp1.evidence, cp2.evidence))
    if isinstance(cp1, CallC) and isinstance(cp2, ReturnC):
        h = cp1.cont
        return CallC(ConjLeft(cp1.position), cp1.witness, lambda b, x: both_dep(h(b, x), cp2))
    if isinstance(cp1, ReturnC):
        k = cp2.cont
        return CallC(ConjRight(cp2.position), cp2.witness, lambda d, y: both_dep(cp1, k(d, y)))
    h, k = cp1.cont, cp2.cont
    return CallC(
        ConjBoth(cp1.position, cp2.position),
        Pair(cp1.witness, cp2.witness),
        lambda bd, xy: both_dep(h(bd.fst, xy.fst), k(bd.snd, xy.snd)),
    )


def parallel_verified(vf: VerifiedImplementation, vg: VerifiedImplementation) -> VerifiedImplementation:
    def verify(v, w):
        if isinstance(v, ConjLeft):
            return left_dep(vf(v.v, w))
        if isinstance(v, ConjRight):
            return right_dep(vg(v.v, w))
        return both_dep(vf(v.l, w.fst), vg(v.r, w.snd))

    return VerifiedImplementation(
        parallel_impl(vf.base, vg.base),
        parallel_contract(vf.source_contract, vg.source_contract),
        parallel_contract(vf.target_contract, vg.target_contract),
        verify,
        f"({vf.name} ∣∣DepProg {vg.name})",
    )


# -- machines and monitors ---------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ParallelMealy(Mealy):
    left: Mealy
    right: Mealy

    def step(self, x):
        if isinstance(x, ConjLeft):
            b, m = self.left.step(x.v)
            return b, ParallelMealy(m, self.right)
        if isinstance(x, ConjRight):
            d, m = self.right.step(x.v)
            return d, ParallelMealy(self.left, m)
        if isinstance(x, ConjBoth):
            b, m1 = self.left.step(x.l)
            d, m2 = self.right.step(x.r)
            return Pair(b, d), ParallelMealy(m1, m2)
        raise DomainError(f"{show(x)} is not a left/right/both input")


def mealy_parallel(m1: Mealy, m2: Mealy) -> Mealy:
    return ParallelMealy(m1, m2)


@dataclass(frozen=True, slots=True)
class ParallelMonitor(Monitor):
    left: Monitor
    right: Monitor

    @property
    def contract(self):
        return parallel_contract(self.left.contract, self.right.contract)

    @property
    def machine(self):
        return ParallelMealy(self.left.machine, self.right.machine)

    def step_checked(self, x, w):
        if isinstance(x, ConjLeft):
            b, e, m = _tagged(self.left, x.v, w, "left")
            return b, e, ParallelMonitor(m, self.right)
        if isinstance(x, ConjRight):
            d, e, m = _tagged(self.right, x.v, w, "right")
            return d, e, ParallelMonitor(self.left, m)
        if isinstance(x, ConjBoth):
            if not isinstance(w, Pair):
                raise ContractViolation(f"both-step needs a paired witness, got {show(w)}")
            b, e1, m1 = _tagged(self.left, x.l, w.fst, "left")
            d, e2, m2 = _tagged(self.right, x.r, w.snd, "right")
            return Pair(b, d), Pair(e1, e2), ParallelMonitor(m1, m2)
        raise DomainError(f"{show(x)} is not a left/right/both input")


def _tagged(mon: Monitor, x, w, side: str):
    try:
        return mon.step_checked(x, w)
    except ContractViolation as v:
        raise v.tagged(side) from None


def monitor_parallel(mon1: Monitor, mon2: Monitor) -> Monitor:
    return ParallelMonitor(mon1, mon2)


# -- relational contracts ---------------------------------------------------------------


def split_parallel_contract(k: Contract, p: Interface, q: Interface) -> tuple:
    """Decompose a contract over ``p ∣∣ q`` into its left, right and relational parts."""
    if k.over != parallel_interface(p, q):
        raise DomainError(f"{k.name} is not over {p.name} ∣∣ {q.name}")
    left = Contract(
        f"{k.name}.left", p,
        lambda a: k.pre(ConjLeft(a)),
        lambda a, c, b, e: k.post(ConjLeft(a), c, b, e),
        lambda a, c, b: k.evidence(ConjLeft(a), c, b),
    )
    right = Contract(
        f"{k.name}.right", q,
        lambda a: k.pre(ConjRight(a)),
        lambda a, c, b, e: k.post(ConjRight(a), c, b, e),
        lambda a, c, b: k.evidence(ConjRight(a), c, b),
    )
    rel = Contract(
        f"{k.name}.rel", tensor_interface(p, q),
        lambda ac: k.pre(ConjBoth(ac.fst, ac.snd)),
        lambda ac, w, bd, e: k.post(ConjBoth(ac.fst, ac.snd), w, bd, e),
        lambda ac, w, bd: k.evidence(ConjBoth(ac.fst, ac.snd), w, bd),
    )
    return left, right, rel


def recombine_parallel_contract(left: Contract, right: Contract, rel: Contract, name: Optional[str] = None) -> Contract:
    """Inverse of :func:`split_parallel_contract`."""
    if rel.over != tensor_interface(left.over, right.over):
        raise DomainError(f"{rel.name} is not over {left.over.name} ⊗ {right.over.name}")

    def pick(v):
        if isinstance(v, ConjLeft):
            return left, v.v
        if isinstance(v, ConjRight):
            return right, v.v
        return rel, Pair(v.l, v.r)

    def pre(v):
        c, a = pick(v)
        return c.pre(a)

    def post(v, w, b, e):
        c, a = pick(v)
        return c.post(a, w, b, e)

    def evidence(v, w, b):
        c, a = pick(v)
        return c.evidence(a, w, b)

    return Contract(name or f"⟨{left.name}, {right.name}, {rel.name}⟩",
                    parallel_interface(left.over, right.over), pre, post, evidence)


def relational_contract(
    p: Interface,
    q: Interface,
    pre_rel: Callable[[Value, Value], bool],
    post_rel: Callable[[Value, Value, Value, Value], bool],
    name: str,
) -> Contract:
    """Relational contract over ``p ⊗ q`` with decidable pre/post relations.

    ``pre_rel(a, c)`` relates the paired inputs; ``post_rel(a, c, b, d)`` the
    paired outputs. Witness and evidence are unit.
    """
    return Contract(
        name,
        tensor_interface(p, q),
        lambda ac: D.decided(pre_rel(ac.fst, ac.snd)),
        lambda ac, w, bd, e: e == UNIT and post_rel(ac.fst, ac.snd, bd.fst, bd.snd),
        lambda ac, w, bd: D.decided(post_rel(ac.fst, ac.snd, bd.fst, bd.snd)),
    )
