"""Contracts over interfaces and the assume-guarantee checker.

A :class:`Contract` attaches to each position a domain of precondition
witnesses and, to each (position, witness, response), a domain of
postcondition evidence. A :class:`CheckedProgram` is a program tree
annotated with the witnesses supplied at each call and the evidence received
back; a :class:`VerifiedImplementation` pairs an implementation with such
trees for every (position, witness).

:func:`check_verified` walks those trees, assuming every call's response and
evidence satisfy the callee's postcondition (quantifying over all of them)
and demanding that each leaf satisfies the caller's postcondition.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Union

from . import domains as D
from .core import (
    ZERO, Call, Implementation, Interface, Return, forwarder, impl_oplus, kleisli_compose,
    mk_oplus, mk_sum_interface, multi_compose,
)
from .domains import Domain
from .errors import CompositionError, DomainError, ModeError
from .values import UNIT, Inl, Inr, Value, show

EvidenceFn = Callable[[Value, Value, Value], Domain]
PostFn = Callable[[Value, Value, Value, Value], bool]


class Contract:
    """Pre/postconditions over ``over``; equality is by name and interface."""

    __slots__ = ("name", "over", "_pre", "_post", "_evidence", "_responses")

    def __init__(
        self,
        name: str,
        over: Interface,
        pre: Callable[[Value], Domain],
        post: PostFn,
        evidence: EvidenceFn,
        responses: Optional[Callable[[Value, Value], Domain]] = None,
    ):
        self.name = name
        self.over = over
        self._pre = pre
        self._post = post
        self._evidence = evidence
        self._responses = responses

    def pre(self, a: Value) -> Domain:
        if a not in self.over.positions:
            raise DomainError(f"{show(a)} is not a position of {self.over.name}")
        return self._pre(a)

    def post(self, a: Value, c: Value, b: Value, e: Value) -> bool:
        return bool(self._post(a, c, b, e))

    def evidence(self, a: Value, c: Value, b: Value) -> Domain:
        return self._evidence(a, c, b)

    def responses(self, a: Value, c: Value) -> Domain:
        """Responses at ``a`` (with witness ``c``) whose evidence domain can be nonempty.

        Defaults to every response. A contract may narrow this when it can
        solve its postcondition; the narrowed domain must still contain every
        response that has evidence, or the checker will skip real branches.
        """
        if self._responses is None:
            return self.over.response(a)
        return self._responses(a, c)

    def __eq__(self, other):
        return isinstance(other, Contract) and other.name == self.name and other.over == self.over

    def __hash__(self):
        return hash((self.name, self.over.name))

    def __repr__(self):
        return f"Contract({self.name} over {self.over.name})"


def decidable_contract(
    name: str,
    over: Interface,
    holds: Callable[[Value, Value, Value], bool],
    pre: Optional[Callable[[Value], Domain]] = None,
) -> Contract:
    """Contract whose postcondition is a decidable predicate with unit evidence."""
    return Contract(
        name,
        over,
        pre or (lambda a: D.UNITS),
        lambda a, c, b, e: e == UNIT and holds(a, c, b),
        lambda a, c, b: D.decided(holds(a, c, b)),
    )


def trivial_contract(over: Interface) -> Contract:
    return decidable_contract(f"⊤[{over.name}]", over, lambda a, c, b: True)


def _family_fn(family):
    if isinstance(family, Mapping):
        return family.__getitem__
    return family


def mk_sum_contract(index: Domain, family, name: Optional[str] = None) -> Contract:
    """Sum of contracts over :func:`mk_sum_interface` of their interfaces."""
    fam = _family_fn(family)
    over = mk_sum_interface(index, lambda u: fam(u).over,
                            name=None if index.enumerable and index.complete else f"Σ({index.name})")
    if name is None:
        if index.enumerable and index.complete:
            name = "ΣDep{" + ", ".join(f"{show(u)}: {fam(u).name}" for u in index.values()) + "}"
        else:
            name = f"ΣDep({index.name})"

    if isinstance(family, Mapping):
        def member(u):
            try:
                return family[u]
            except KeyError:
                raise DomainError(f"{show(u)} is not in the index domain {index.name}") from None
    else:
        def member(u):
            if u not in index:
                raise DomainError(f"{show(u)} is not in the index domain {index.name}")
            return fam(u)

    return Contract(
        name,
        over,
        lambda p: member(p.fst).pre(p.snd),
        lambda p, c, b, e: member(p.fst).post(p.snd, c, b, e),
        lambda p, c, b: member(p.fst).evidence(p.snd, c, b),
        lambda p, c: member(p.fst).responses(p.snd, c),
    )


def contract_oplus(r: Contract, s: Contract) -> Contract:
    def pick(v):
        if isinstance(v, Inl):
            return r, v.v
        if isinstance(v, Inr):
            return s, v.v
        raise DomainError(f"{show(v)} is not an inl/inr position")

    def pre(v):
        k, a = pick(v)
        return k.pre(a)

    def post(v, c, b, e):
        k, a = pick(v)
        return k.post(a, c, b, e)

    def evidence(v, c, b):
        k, a = pick(v)
        return k.evidence(a, c, b)

    def responses(v, c):
        k, a = pick(v)
        return k.responses(a, c)

    return Contract(f"({r.name} ⊕ {s.name})", mk_oplus(r.over, s.over), pre, post, evidence, responses)


CONTRACT_ZERO = Contract("0Dep", ZERO, lambda a: D.EMPTY, lambda a, c, b, e: False, lambda a, c, b: D.EMPTY)


def contract_zero() -> Contract:
    return CONTRACT_ZERO


# -- checked programs -------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ReturnC:
    result: Value
    evidence: Value


@dataclass(frozen=True, slots=True, eq=False)
class CallC:
    position: Value
    witness: Value
    cont: Callable[[Value, Value], "CheckedProgram"]

    def __repr__(self):
        return f"CallC({show(self.position)}, {show(self.witness)}, …)"


CheckedProgram = Union[ReturnC, CallC]


def checked_sequence(m: CheckedProgram, k: Callable[[Value, Value], CheckedProgram]) -> CheckedProgram:
    """Bind for checked programs: graft ``k(result, evidence)`` at every leaf."""
    if isinstance(m, ReturnC):
        return k(m.result, m.evidence)
    inner = m.cont
    return CallC(m.position, m.witness, lambda b, e: checked_sequence(inner(b, e), k))


def checked_relabel(cp: CheckedProgram, inject: Callable[[Value], Value]) -> CheckedProgram:
    if isinstance(cp, ReturnC):
        return cp
    inner = cp.cont
    return CallC(inject(cp.position), cp.witness, lambda b, e: checked_relabel(inner(b, e), inject))


class VerifiedImplementation:
    """An implementation together with its evidence-annotated call trees."""

    __slots__ = ("base", "source_contract", "target_contract", "verify", "name")

    def __init__(
        self,
        base: Implementation,
        source_contract: Contract,
        target_contract: Contract,
        verify: Callable[[Value, Value], CheckedProgram],
        name: str = "verified",
    ):
        if base.source != source_contract.over:
            raise CompositionError(f"{name}: source contract is over {source_contract.over.name}, not {base.source.name}")
        if base.target != target_contract.over:
            raise CompositionError(f"{name}: target contract is over {target_contract.over.name}, not {base.target.name}")
        self.base = base
        self.source_contract = source_contract
        self.target_contract = target_contract
        self.verify = verify
        self.name = name

    def __call__(self, a: Value, c: Value) -> CheckedProgram:
        if a not in self.base.source.positions:
            raise DomainError(f"{show(a)} is not a position of {self.base.source.name} (in {self.name})")
        return self.verify(a, c)

    def __repr__(self):
        return f"VerifiedImplementation({self.name}: {self.source_contract.name} ⇒ {self.target_contract.name})"


def erase(vf: VerifiedImplementation) -> Implementation:
    """Forget the verification, keeping the underlying implementation."""
    return vf.base


def verified_forwarder(r: Contract) -> VerifiedImplementation:
    """Identity on ``r``: pass the witness through, return the callee's evidence."""
    return VerifiedImplementation(
        forwarder(r.over), r, r, lambda a, c: CallC(a, c, ReturnC), f"idDep[{r.name}]"
    )


def checked_substitute(cp: CheckedProgram, vg: VerifiedImplementation) -> CheckedProgram:
    if isinstance(cp, ReturnC):
        return cp
    inner = cp.cont
    return checked_sequence(vg(cp.position, cp.witness), lambda b, e: checked_substitute(inner(b, e), vg))


def verified_kleisli_compose(vf: VerifiedImplementation, vg: VerifiedImplementation) -> VerifiedImplementation:
    if vf.target_contract != vg.source_contract:
        raise CompositionError(
            f"cannot compose {vf.name} (guarantees from {vf.target_contract.name}) "
            f"with {vg.name} (provides {vg.source_contract.name})"
        )
    return VerifiedImplementation(
        kleisli_compose(vf.base, vg.base),
        vf.source_contract,
        vg.target_contract,
        lambda a, c: checked_substitute(vf.verify(a, c), vg),
        f"({vf.name} ∘Dep {vg.name})",
    )


def verified_multi_compose(
    index: Domain, vf: VerifiedImplementation, family, target_contract: Optional[Contract] = None
) -> VerifiedImplementation:
    """Indexed analogue of :func:`verified_kleisli_compose` over a sum contract."""
    fam = _family_fn(family)
    expected = mk_sum_contract(index, lambda u: fam(u).source_contract,
                               name=None if index.enumerable and index.complete else vf.target_contract.name)
    if vf.target_contract != expected:
        raise CompositionError(f"{vf.name} relies on {vf.target_contract.name}, but the family provides {expected.name}")
    if index.enumerable:
        targets = {fam(u).target_contract for u in index.values()}
        if len(targets) > 1:
            raise CompositionError("family members rely on different contracts: " + ", ".join(sorted(t.name for t in targets)))
        if targets:
            (common,) = targets
            if target_contract is not None and target_contract != common:
                raise CompositionError(f"family relies on {common.name}, not {target_contract.name}")
            target_contract = common
    if target_contract is None:
        raise CompositionError("cannot infer the composite target contract; pass target_contract=")
    base = multi_compose(index, vf.base, lambda u: fam(u).base, target=target_contract.over)
    summed = VerifiedImplementation(
        Implementation(expected.over, target_contract.over, lambda p: fam(p.fst).base(p.snd), "summed"),
        expected,
        target_contract,
        lambda p, c: fam(p.fst)(p.snd, c),
        "summed",
    )
    return VerifiedImplementation(
        base,
        vf.source_contract,
        target_contract,
        lambda a, c: checked_substitute(vf.verify(a, c), summed),
        f"compDep({vf.name}, …)",
    )


def verified_oplus(vf: VerifiedImplementation, vg: VerifiedImplementation) -> VerifiedImplementation:
    """``vf ⊕ vg``: each side verified independently over the summed contracts."""
    def verify(v, c):
        if isinstance(v, Inl):
            return checked_relabel(vf(v.v, c), Inl)
        return checked_relabel(vg(v.v, c), Inr)

    return VerifiedImplementation(
        impl_oplus(vf.base, vg.base),
        contract_oplus(vf.source_contract, vg.source_contract),
        contract_oplus(vf.target_contract, vg.target_contract),
        verify,
        f"({vf.name} ⊕Dep {vg.name})",
    )


# -- the checker -------------------------------------------------------------------

KINDS = ("pre-empty", "post-unreached", "final-post-failed", "erasure-mismatch")


@dataclass(frozen=True)
class Violation:
    path: tuple
    kind: str
    detail: str

    def to_json(self) -> dict:
        return {"path": list(self.path), "kind": self.kind, "detail": self.detail}


@dataclass
class CheckReport:
    violations: list
    coverage: dict
    stats: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "fail" if self.violations else "pass"

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "coverage": dict(self.coverage),
            "violations": [v.to_json() for v in self.violations],
        }

    @classmethod
    def from_json(cls, obj) -> "CheckReport":
        report = cls([Violation(tuple(v["path"]), v["kind"], v["detail"]) for v in obj["violations"]], dict(obj["coverage"]))
        if report.verdict != obj["verdict"]:
            raise ValueError("verdict inconsistent with violations")
        return report


class _Stop(Exception):
    pass


def check_verified(
    vf: VerifiedImplementation,
    mode: str = "exhaustive",
    seed: int = 0,
    samples: int = 32,
    depth_budget: int = 64,
    positions=None,
    max_violations: int = 20,
    kinds=KINDS,
) -> CheckReport:
    """Assume-guarantee check of ``vf``.

    For every source position ``a`` and witness ``c`` the tree
    ``vf.verify(a, c)`` is walked alongside ``vf.base(a)``. At each call the
    supplied witness must lie in the callee's precondition; then every
    response and every piece of evidence the callee's contract allows is
    explored. Each leaf must satisfy the caller's postcondition, and the tree
    must erase to the base program along the way.

    ``mode="exhaustive"`` enumerates every domain (raising :class:`ModeError`
    if one cannot be enumerated). ``mode="sampled"`` draws ``samples``
    positions and witnesses with ``seed`` and samples any response or
    evidence domain that has no enumeration; it can miss violations.
    ``kinds`` restricts which violation kinds are reported.
    """
    if mode not in ("exhaustive", "sampled"):
        raise ModeError(f"unknown mode {mode!r}")
    exhaustive = mode == "exhaustive"
    src, tgt = vf.source_contract, vf.target_contract
    violations: list = []
    stats = {"positions": 0, "leaves": 0, "branches": 0}
    complete = [True]

    def domain_values(dom: Domain, what: str, rng_key, all_if_enumerable: bool) -> tuple:
        if dom.enumerable and (exhaustive or all_if_enumerable):
            if not dom.complete:
                complete[0] = False
            return dom.values()
        if exhaustive:
            raise ModeError(f"{what} domain {dom.name} cannot be enumerated; use sampled mode")
        complete[0] = False
        if not dom.samplable:
            raise ModeError(f"{what} domain {dom.name} can be neither enumerated nor sampled")
        key = rng_key() if callable(rng_key) else rng_key
        return dom.draw(random.Random(f"{seed}/{key}"), samples)

    def report(path, kind, detail):
        if kind in kinds:
            violations.append(Violation(tuple(path), kind, detail))
            if len(violations) >= max_violations:
                raise _Stop

    def walk(a, c, cp, prog, path, depth):
        while True:
            if isinstance(cp, ReturnC):
                stats["leaves"] += 1
                if not isinstance(prog, Return) or prog.result != cp.result:
                    got = show(prog.result) if isinstance(prog, Return) else f"call {show(prog.position)}"
                    report(path, "erasure-mismatch", f"verified tree returns {show(cp.result)}, implementation has {got}")
                if not src.post(a, c, cp.result, cp.evidence):
                    report(path, "final-post-failed",
                           f"at {show(a)} with witness {show(c)}: result {show(cp.result)}, evidence {show(cp.evidence)}")
                return
            if not isinstance(cp, CallC):
                report(path, "post-unreached", f"not a checked program: {cp!r}")
                return
            if not isinstance(prog, Call) or prog.position != cp.position:
                got = f"call {show(prog.position)}" if isinstance(prog, Call) else f"return {show(prog.result)}"
                report(path, "erasure-mismatch", f"verified tree calls {show(cp.position)}, implementation has {got}")
                return
            if depth >= depth_budget:
                report(path, "post-unreached", f"depth budget {depth_budget} exhausted before a return")
                return
            x, w = cp.position, cp.witness
            if x not in tgt.over.positions:
                report(path, "pre-empty", f"call {show(x)} is not a position of {tgt.over.name}")
                return
            if w not in tgt.pre(x):
                report(path, "pre-empty", f"witness {show(w)} not in the precondition of {show(x)}")
                return
            key = ".".join(map(str, path))
            branches = []
            for b in domain_values(tgt.responses(x, w), "response", f"{key}/r", True):
                for e in domain_values(tgt.evidence(x, w, b), "evidence", lambda: f"{key}/e/{show(b)}", True):
                    branches.append((b, e))
            stats["branches"] += len(branches)
            if not branches:
                return
            # descend iteratively into the last branch, recursively into the others
            for i, (b, e) in enumerate(branches[:-1]):
                guarded(a, c, lambda b=b, e=e: cp.cont(b, e), lambda b=b: prog.cont(b), path + (i,), depth + 1)
            b, e = branches[-1]
            try:
                cp, prog = cp.cont(b, e), prog.cont(b)
            except (_Stop, KeyboardInterrupt):
                raise
            except Exception as exc:  # a module raising is a failure to reach its postcondition
                report(path + (len(branches) - 1,), "post-unreached", f"{type(exc).__name__}: {exc}")
                return
            path = path + (len(branches) - 1,)
            depth += 1

    def guarded(a, c, make_cp, make_prog, path, depth):
        try:
            cp, prog = make_cp(), make_prog()
        except (_Stop, KeyboardInterrupt):
            raise
        except Exception as exc:
            report(path, "post-unreached", f"{type(exc).__name__}: {exc}")
            return
        walk(a, c, cp, prog, path, depth)

    base_positions = positions
    if base_positions is None:
        base_positions = domain_values(src.over.positions, "position", "positions", False)
    ordinal = 0
    try:
        for a in base_positions:
            for c in domain_values(src.pre(a), "witness", lambda: f"w/{show(a)}", False):
                stats["positions"] += 1
                guarded(a, c, lambda: vf(a, c), lambda: vf.base(a), (ordinal,), 0)
                ordinal += 1
    except _Stop:
        pass
    coverage = {"mode": mode, "depth": depth_budget, "complete": complete[0] and exhaustive}
    if not exhaustive:
        coverage.update(seed=seed, samples=samples)
    coverage["cases"] = stats["positions"]
    return CheckReport(violations, coverage, stats)


def erasure_coherent(vf: VerifiedImplementation, mode: str = "exhaustive", **kw) -> bool:
    """True when every verified tree erases to the base implementation's tree."""
    return check_verified(vf, mode, kinds=("erasure-mismatch",), **kw).passed


def contracts_agree(r: Contract, s: Contract, positions=None, max_responses: Optional[int] = None) -> bool:
    """Extensional comparison of two contracts over enumerable domains."""
    if r.over != s.over:
        return False
    for a in (r.over.positions.values() if positions is None else positions):
        pr, ps = r.pre(a), s.pre(a)
        if pr.values() != ps.values():
            return False
        resp = r.over.response(a).values()
        if max_responses is not None:
            resp = resp[:max_responses]
        for c in pr.values():
            for b in resp:
                er, es = r.evidence(a, c, b), s.evidence(a, c, b)
                if er.values() != es.values():
                    return False
                if any(r.post(a, c, b, e) != s.post(a, c, b, e) for e in er.values()):
                    return False
    return True

