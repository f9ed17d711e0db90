"""Worked examples: fold, append and concat with their verifications, the
Fibonacci machine and its monitor, a state runner, and two relational demos.

Every fixture is rebuilt from its parameters (alphabet size, list-length
bound, ...), so tests and the CLI can ask for small or large instances.
List domains accept lists of any length over all naturals; the parameters
only bound what gets *enumerated* when checking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from types import SimpleNamespace
from typing import Callable, Optional

from . import domains as D
from .contracts import (
    CONTRACT_ZERO, CallC, Contract, ReturnC, VerifiedImplementation, checked_sequence,
    mk_sum_contract, trivial_contract, verified_kleisli_compose, verified_multi_compose,
)
from .core import (
    ZERO, Call, Implementation, Interface, Return, closed, kleisli_compose, mk_sum_interface, multi_compose,
    relabel, run_closed, sequence, simple_interface,
)
from .domains import Domain
from .errors import DomainError
from .machines import GET, Mealy, prog_to_mealy, put, state_interface, state_runner
from .monitors import Monitor, invariant_monitor, mk_invariant_contract, prog_to_mealy_monitored
from .parallel import parallel_contract, parallel_impl, parallel_verified, recombine_parallel_contract, relational_contract
from .values import NIL, UNIT, List, Nat, Pair, Tag, Value, cons, tup, untup
from .wiring import Box, BoxSignature, Registry

BASE = Tag("base", UNIT)
STEP = Tag("step", UNIT)
FOLD = Tag("fold", UNIT)
FOLD_LABELS = D.finite("foldlabels", (BASE, STEP))


def _named(d: Domain, name: str) -> Domain:
    d.name = name
    return d


def flatten(xss: List) -> List:
    return List(tuple(x for xs in xss.items for x in xs.items))


# -- fold -------------------------------------------------------------------------


@dataclass(frozen=True)
class FoldTypes:
    """Carrier domains for ``Fold A B C``; ``names`` label the interfaces."""

    names: tuple  # (A, B, C) as shown in interface names
    A: Domain
    B: Domain
    Bs: Domain  # List B
    C: Domain

    @property
    def fold(self) -> Interface:
        a, b, c = self.names
        return Interface(f"Fold({a}, {b}, {c})", D.product(self.A, self.Bs), lambda _: self.C)

    @property
    def base(self) -> Interface:
        a, _, c = self.names
        return Interface(f"Base({a}, {c})", self.A, lambda _: self.C)

    @property
    def step(self) -> Interface:
        a, b, c = self.names
        return Interface(f"Step({a}, {b}, {c})", D.product(self.A, D.product(self.B, self.C)), lambda _: self.C)

    @property
    def deps(self) -> Interface:
        return mk_sum_interface(FOLD_LABELS, {BASE: self.base, STEP: self.step})


def _fold_order(bs: tuple, order: Optional[Callable], skip_first: bool) -> tuple:
    if order is not None:
        bs = tuple(order(bs))
    if skip_first and bs:
        bs = bs[1:]
    return bs


def fold_impl(t: FoldTypes, name: str = "fold", order=None, skip_first: bool = False) -> Implementation:
    """Structural recursion: base call on nil; fold the tail, then one step call.

    ``order`` and ``skip_first`` exist only to build faulty variants.
    """

    def go(a, bs):
        if not bs:
            return Call(Pair(BASE, a), Return)
        b = bs[0]
        return sequence(go(a, bs[1:]), lambda c: Call(Pair(STEP, tup(a, b, c)), Return))

    return Implementation(t.fold, t.deps, lambda p: go(p.fst, _fold_order(p.snd.items, order, skip_first)), name)


def fold_specs(t: FoldTypes, rel_name: str, pre: Callable[[Value], Domain], rel: Callable, solve=None,
               outputs=None) -> SimpleNamespace:
    """FoldSpec, BaseSpec and StepSpec for accumulator precondition ``pre`` and relation ``rel(a, d, bs, c)``.

    ``rel`` is decided, so its evidence is unit. A step witness is
    ``tup(d, bs, unit)``: the accumulator witness, the already-folded tail,
    and evidence that the tail folds to the step's input ``c``. ``solve(a, d, c)``
    proposes candidate tails so the witness domain can be enumerated.
    ``outputs(a, d, bs)`` proposes every ``c`` related to ``bs``; when given,
    base and step calls only branch on those responses.
    """

    def holds(a, d, bs, c):
        return bool(rel(a, d, bs, c))

    def solved(a, d, bs):
        def enum():
            return (c for c in outputs(a, d, bs) if c in t.C and holds(a, d, bs, c))

        return Domain(f"{rel_name}Out", lambda c: c in t.C and holds(a, d, bs, c), enum, complete=True)

    def base_responses(a, d):
        return solved(a, d, NIL) if outputs is not None else t.C

    def step_responses(x, w):
        if outputs is None or not (isinstance(w, Pair) and isinstance(w.snd, Pair)):
            return t.C
        return solved(x.fst, w.fst, cons(x.snd.fst, w.snd.fst))

    fold_spec = Contract(
        f"FoldSpec[{rel_name}]", t.fold,
        lambda p: pre(p.fst),
        lambda p, d, c, e: e == UNIT and holds(p.fst, d, p.snd, c),
        lambda p, d, c: D.decided(holds(p.fst, d, p.snd, c)),
    )
    base_spec = Contract(
        f"BaseSpec[{rel_name}]", t.base,
        pre,
        lambda a, d, c, e: e == UNIT and holds(a, d, NIL, c),
        lambda a, d, c: D.decided(holds(a, d, NIL, c)),
        base_responses,
    )

    def step_pre(x):
        a, _, c = untup(x, 3)
        ds = pre(a)

        def contains(w):
            if not (isinstance(w, Pair) and isinstance(w.snd, Pair)):
                return False
            d, bs, e = untup(w, 3)
            return d in ds and bs in t.Bs and e == UNIT and holds(a, d, bs, c)

        enum = None
        if solve is not None and ds.enumerable:
            def enum():
                for d in ds.values():
                    for bs in solve(a, d, c):
                        if bs in t.Bs and holds(a, d, bs, c):
                            yield tup(d, bs, UNIT)

        return Domain(f"StepWitness[{rel_name}]", contains, enum, complete=getattr(solve, "complete", False))

    def step_holds(x, w, c2):
        a, b = x.fst, x.snd.fst
        d, bs = w.fst, w.snd.fst
        return holds(a, d, cons(b, bs), c2)

    step_spec = Contract(
        f"StepSpec[{rel_name}]", t.step,
        step_pre,
        lambda x, w, c2, e: e == UNIT and step_holds(x, w, c2),
        lambda x, w, c2: D.decided(step_holds(x, w, c2)),
        step_responses,
    )
    deps = mk_sum_contract(FOLD_LABELS, {BASE: base_spec, STEP: step_spec})
    return SimpleNamespace(fold=fold_spec, base=base_spec, step=step_spec, deps=deps)


def fold_ind(t: FoldTypes, specs: SimpleNamespace, name: str = "foldInd", order=None, skip_first: bool = False,
             base: Optional[Implementation] = None) -> VerifiedImplementation:
    """Verified fold by induction on the list, mirroring :func:`fold_impl`."""

    def go(a, d, bs):
        if not bs:
            return CallC(Pair(BASE, a), d, ReturnC)
        b, rest = bs[0], bs[1:]
        return checked_sequence(
            go(a, d, rest),
            lambda c, e: CallC(Pair(STEP, tup(a, b, c)), tup(d, List(rest), e), ReturnC),
        )

    return VerifiedImplementation(
        base or fold_impl(t, order=order, skip_first=skip_first),
        specs.fold,
        specs.deps,
        lambda p, d: go(p.fst, d, _fold_order(p.snd.items, order, skip_first)),
        name,
    )


def _closed_verified(impl: Implementation, spec: Contract, fn: Callable, name: str) -> VerifiedImplementation:
    """Verified closed module whose only obligation is its leaf (decided, unit evidence)."""
    return VerifiedImplementation(impl, spec, CONTRACT_ZERO, lambda a, c: ReturnC(fn(a), UNIT), name)


# -- append -----------------------------------------------------------------------------


def append_relation(ys: List, u: Value, xs: List, zs: List) -> bool:
    """``Append ys _ xs zs``: ``zs`` is ``xs`` followed by ``ys``."""
    return zs.items == xs.items + ys.items


def _append_solve(ys, d, zs):
    n = len(zs.items) - len(ys.items)
    if n >= 0 and zs.items[n:] == ys.items:
        yield List(zs.items[:n])


_append_solve.complete = True


def _append_outputs(ys, d, xs):
    return (List(xs.items + ys.items),)


def append_types(alphabet: int = 3, ys_len: int = 3, xs_len: int = 3, out_len: Optional[int] = None) -> FoldTypes:
    x = D.nats(enum_bound=alphabet)
    out_len = ys_len + xs_len if out_len is None else out_len
    return FoldTypes(
        ("List Nat", "Nat", "List Nat"),
        D.lists(x, enum_len=ys_len),
        x,
        D.lists(x, enum_len=xs_len),
        D.lists(x, enum_len=out_len),
    )


APPEND_MUTATIONS = {
    "drop-cons": "appendStep returns the accumulator without consing",
    "cons-at-end": "appendStep puts the element at the end",
    "duplicate": "appendStep conses the element twice",
    "base-empty": "appendBase returns the empty list",
    "base-reversed": "appendBase reverses the accumulator",
    "cons-zero": "appendStep conses 0 instead of the element",
    "increment": "appendStep conses the element plus one",
    "skip-first": "fold skips the step for the first element",
    "reversed-order": "fold processes the list back to front",
    "base-doubled": "appendBase returns the accumulator twice",
}


def _append_base_fn(mutation):
    if mutation == "base-empty":
        return lambda ys: NIL
    if mutation == "base-reversed":
        return lambda ys: List(tuple(reversed(ys.items)))
    if mutation == "base-doubled":
        return lambda ys: List(ys.items + ys.items)
    return lambda ys: ys


def _append_step_fn(mutation):
    def fn(p):
        _, x, c = untup(p, 3)
        if mutation == "drop-cons":
            return c
        if mutation == "cons-at-end":
            return List(c.items + (x,))
        if mutation == "duplicate":
            return List((x, x) + c.items)
        if mutation == "cons-zero":
            return cons(Nat(0), c)
        if mutation == "increment":
            return cons(Nat(x.n + 1), c)
        return cons(x, c)
    return fn


@lru_cache(maxsize=None)
def append_family(alphabet: int = 3, max_len: int = 3, mutation: str = "none",
                  ys_len: Optional[int] = None, out_len: Optional[int] = None) -> SimpleNamespace:
    """fold/appendBase/appendStep/append and their verified counterparts."""
    if mutation != "none" and mutation not in APPEND_MUTATIONS:
        raise DomainError(f"unknown append mutation {mutation!r}; choose from {', '.join(APPEND_MUTATIONS)}")
    t = append_types(alphabet, max_len if ys_len is None else ys_len, max_len, out_len)
    order = (lambda bs: tuple(reversed(bs))) if mutation == "reversed-order" else None
    skip = mutation == "skip-first"
    fold = fold_impl(t, "fold", order, skip)
    base_fn, step_fn = _append_base_fn(mutation), _append_step_fn(mutation)
    base = closed(t.base, base_fn, "appendBase")
    step = closed(t.step, step_fn, "appendStep")
    parts = {BASE: base, STEP: step}
    append = multi_compose(FOLD_LABELS, fold, parts)
    append.name = "append"

    specs = fold_specs(t, "Append", lambda a: D.UNITS, append_relation, _append_solve, _append_outputs)
    find = fold_ind(t, specs, "foldInd", order, skip, base=fold)
    base_spec = _closed_verified(base, specs.base, base_fn, "appendBaseSpec")
    step_spec = _closed_verified(step, specs.step, step_fn, "appendStepSpec")
    spec = verified_multi_compose(FOLD_LABELS, find, {BASE: base_spec, STEP: step_spec})
    spec.name = "appendSpec"
    return SimpleNamespace(
        types=t, fold=fold, base=base, step=step, append=append,
        specs=specs, fold_ind=find, base_spec=base_spec, step_spec=step_spec, append_spec=spec,
    )


# -- concat --------------------------------------------------------------------------------


def concat_relation(u: Value, d: Value, xss: List, zs: List) -> bool:
    return zs == flatten(xss)


def concat_types(alphabet: int = 2, max_len: int = 2) -> FoldTypes:
    x = D.nats(enum_bound=alphabet)
    inner = D.lists(x, enum_len=max_len)
    return FoldTypes(
        ("⊤", "List Nat", "List Nat"),
        D.UNITS,
        inner,
        D.lists(inner, enum_len=max_len),
        D.lists(x, enum_len=max_len * max_len),
    )


@lru_cache(maxsize=None)
def concat_family(alphabet: int = 2, max_len: int = 2) -> SimpleNamespace:
    """concatFold/concatBase/concatStep/concat, with concatStep calling append."""
    t = concat_types(alphabet, max_len)
    # the append that concatStep calls must enumerate every (accumulator, inner list) it can see
    app = append_family(alphabet, max_len, ys_len=max_len * max_len, out_len=max_len * max_len + max_len)
    fold = fold_impl(t, "concatFold")
    base = closed(t.base, lambda _: NIL, "concatBase")

    def step_body(p):
        _, xs, c = untup(p, 3)
        return Call(Pair(c, xs), Return)  # append (c, xs) = xs ++ c

    step = Implementation(t.step, app.types.fold, step_body, "concatStep")
    step_append = kleisli_compose(step, app.append)
    concat = multi_compose(FOLD_LABELS, fold, {BASE: base, STEP: step_append})
    concat.name = "concat"

    def solve(u, d, c):
        return (xss for xss in t.Bs.values() if flatten(xss) == c)

    specs = fold_specs(t, "Concat", lambda a: D.UNITS, concat_relation, solve, lambda u, d, xss: (flatten(xss),))
    find = fold_ind(t, specs, "concatFoldInd", base=fold)
    base_spec = _closed_verified(base, specs.base, lambda _: NIL, "concatBaseSpec")

    def step_verify(p, w):
        _, xs, c = untup(p, 3)
        return CallC(Pair(c, xs), UNIT, lambda zs, e: ReturnC(zs, UNIT))

    step_spec = VerifiedImplementation(step, specs.step, app.specs.fold, step_verify, "concatStepSpec")
    step_append_spec = verified_kleisli_compose(step_spec, app.append_spec)
    spec = verified_multi_compose(FOLD_LABELS, find, {BASE: base_spec, STEP: step_append_spec})
    spec.name = "concatSpec"
    return SimpleNamespace(
        types=t, append=app, fold=fold, base=base, step=step, step_append=step_append, concat=concat,
        specs=specs, fold_ind=find, base_spec=base_spec, step_spec=step_spec,
        step_append_spec=step_append_spec, concat_spec=spec,
    )


# -- wiring: the two diagrams and their boxes -------------------------------------------------


def _leaf_signature(name: str, cod: Interface) -> BoxSignature:
    return BoxSignature(name, D.EMPTY, lambda u: ZERO, cod)


@lru_cache(maxsize=None)
def default_registry(alphabet: int = 3, max_len: int = 3) -> Registry:
    """Boxes for the append and concat diagrams, closed (no external inputs)."""
    app = append_family(alphabet, max_len)
    cat = concat_family()
    at, ct = app.types, cat.types
    r = Registry(name="default")
    r.register(BoxSignature("fold", FOLD_LABELS, {BASE: at.base, STEP: at.step}.__getitem__, at.fold), app.fold)
    r.register(_leaf_signature("appendBase", at.base), app.base)
    r.register(_leaf_signature("appendStep", at.step), app.step)
    r.register(_leaf_signature("append", at.fold), app.append)
    r.register(BoxSignature("concatFold", FOLD_LABELS, {BASE: ct.base, STEP: ct.step}.__getitem__, ct.fold), cat.fold)
    r.register(_leaf_signature("concatBase", ct.base), cat.base)
    one = D.finite("{fold}", (FOLD,))
    step_sig = BoxSignature("concatStep", one, lambda u: at.fold, ct.step)
    r.register(step_sig, Implementation(
        ct.step, step_sig.dependencies(), lambda p: relabel(cat.step(p), lambda x: Pair(FOLD, x)), "concatStep"
    ))
    return r


APPEND_DIAGRAM = Box("fold", {BASE: Box("appendBase"), STEP: Box("appendStep")})
CONCAT_DIAGRAM = Box("concatFold", {BASE: Box("concatBase"), STEP: Box("concatStep", {FOLD: APPEND_DIAGRAM})})


# -- Fibonacci --------------------------------------------------------------------------------


def fib_number(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def is_fib(x: int, y: int) -> bool:
    """``IsFib x y``, decided by computing the ``x``-th Fibonacci number."""
    a, b = 0, 1
    for _ in range(x):
        if a > y:  # the sequence is nondecreasing, so it can only overshoot further
            return False
        a, b = b, a + b
    return a == y


def fib_indices(y: int) -> tuple:
    """All ``x`` with ``IsFib x y``."""
    out, a, b, x = [], 0, 1, 0
    while a <= y:
        if a == y:
            out.append(x)
        a, b, x = b, a + b, x + 1
    return tuple(out)


def _fib_index_domain(y: int, ok: Callable[[int], bool], name: str) -> Domain:
    return Domain(
        name,
        lambda w: isinstance(w, Nat) and is_fib(w.n, y) and ok(w.n),
        lambda: (Nat(x) for x in fib_indices(y) if ok(x)),
        complete=True,
    )


FIB = simple_interface("Fib", D.UNITS, _named(D.nats(), "Nat"))


def fib_state_domain(enum_bound: int = 32) -> Domain:
    return _named(D.product(D.nats(enum_bound=enum_bound), D.nats(enum_bound=enum_bound)), "Nat×Nat")


def fib_dep() -> Contract:
    """``FibDep``: every answer is a Fibonacci number; evidence is its index."""
    return Contract(
        "FibDep", FIB,
        lambda _: D.UNITS,
        lambda a, c, y, e: isinstance(e, Nat) and is_fib(e.n, y.n),
        lambda a, c, y: _fib_index_domain(y.n, lambda x: True, f"IsFib(·, {y.n})"),
    )


def fib_invariant_witnesses(s: Value) -> Domain:
    """Indices ``x`` with ``IsFib x y × IsFib (x+1) z`` for ``s = (y, z)``."""
    y, z = s.fst.n, s.snd.n
    return _fib_index_domain(y, lambda x: is_fib(x + 1, z), f"FibInvariant({y}, {z})")


def fib_invariant(enum_bound: int = 32) -> Contract:
    return mk_invariant_contract(
        fib_state_domain(enum_bound),
        lambda s, w: w in fib_invariant_witnesses(s),
        witnesses=fib_invariant_witnesses,
        name="FibInvariant",
    )


def _next_state(s: Value, corrupt_from: Optional[int]) -> Value:
    x, y = s.fst.n, s.snd.n
    z = x + y
    if corrupt_from is not None and x >= fib_number(corrupt_from):
        z += 1  # off by one
    return Pair(Nat(y), Nat(z))


def fib_update(enum_bound: int = 32, corrupt_from: Optional[int] = None) -> Implementation:
    """Read ``(x, y)``, write ``(y, x + y)``, answer ``x``."""
    S = state_interface(fib_state_domain(enum_bound))

    def body(_):
        return Call(GET, lambda s: Call(put(_next_state(s, corrupt_from)), lambda _u: Return(s.fst)))

    return Implementation(FIB, S, body, "fibUpdate")


def fib_update_spec(enum_bound: int = 32, corrupt_from: Optional[int] = None) -> VerifiedImplementation:
    """The read state comes with its index ``i``; the written state gets ``i + 1``."""

    def verify(_a, _c):
        return CallC(GET, UNIT, lambda s, i: CallC(
            put(_next_state(s, corrupt_from)), Nat(i.n + 1), lambda _u, _e: ReturnC(s.fst, i)
        ))

    return VerifiedImplementation(
        fib_update(enum_bound, corrupt_from), fib_dep(), fib_invariant(enum_bound), verify, "fibUpdateSpec"
    )


FIB_START = Pair(Nat(0), Nat(1))


def fib_machine(corrupt_from: Optional[int] = None) -> Mealy:
    return prog_to_mealy(fib_update(corrupt_from=corrupt_from), state_runner(FIB_START))


def fib_spec(corrupt_from: Optional[int] = None) -> Monitor:
    return prog_to_mealy_monitored(
        fib_update_spec(corrupt_from=corrupt_from), invariant_monitor(FIB_START, Nat(0), fib_invariant())
    )


# -- state and a decidable invariant ------------------------------------------------------


NAT_STATE = state_interface(_named(D.nats(enum_bound=8), "Nat"))


def even_invariant() -> Contract:
    return mk_invariant_contract(_named(D.nats(enum_bound=8), "Nat"), lambda s: s.n % 2 == 0, name="Even")


# -- relational demos over the parallel sum ---------------------------------------------------


def closed_relational(f: Implementation, g: Implementation, rel: Contract, name: str) -> VerifiedImplementation:
    """``f ∣∣ g`` checked against trivial one-sided contracts plus ``rel`` on simultaneous calls.

    Both sides are closed, so every leaf is ``ReturnC(result, unit)`` and the
    checker decides the relation directly.
    """
    left, right = trivial_contract(f.source), trivial_contract(g.source)
    contract = recombine_parallel_contract(left, right, rel, name=f"{name}Spec")

    def verify(v, w):
        return ReturnC(run_closed(base, v), UNIT)

    base = parallel_impl(f, g)
    return VerifiedImplementation(base, contract, parallel_contract(CONTRACT_ZERO, CONTRACT_ZERO), verify, name)


COUNTER = Interface(
    "Counter",
    _named(D.product(D.nat_below(8), D.nat_below(8)), "Public×Secret"),
    lambda _: _named(D.nats(enum_bound=8), "Nat"),
)
LEVEL = simple_interface("Level", D.nat_below(8), _named(D.nats(enum_bound=16), "Nat"))


def noninterference(leak: bool = False) -> VerifiedImplementation:
    """Two runs of a counter module that agree on the public counter must agree on the output."""

    def view(p):
        public, secret = p.fst.n, p.snd.n
        return Nat((public + 1 + (secret % 2 if leak else 0)) % 8)

    f = closed(COUNTER, view, "leakyView" if leak else "publicView")
    rel = relational_contract(COUNTER, COUNTER, lambda a, c: a.fst == c.fst, lambda a, c, b, d: b == d, "LowEquivalent")
    return closed_relational(f, f, rel, "noninterference")


def monotonicity(mutant: bool = False) -> VerifiedImplementation:
    """``x1 ≤ x2`` implies ``f x1 ≤ f x2`` for ``f x = 2x`` (mutant: ``7 - x``)."""
    f = closed(LEVEL, (lambda x: Nat(7 - x.n)) if mutant else (lambda x: Nat(2 * x.n)), "flip" if mutant else "double")
    rel = relational_contract(LEVEL, LEVEL, lambda a, c: a.n <= c.n, lambda a, c, b, d: b.n <= d.n, "Monotone")
    return closed_relational(f, f, rel, "monotonicity")


def parallel_spec(alphabet: int = 2, max_len: int = 2) -> VerifiedImplementation:
    """appendSpec ∣∣ concatSpec at small bounds."""
    vf = parallel_verified(append_family(alphabet, max_len).append_spec, concat_family(alphabet, max_len).concat_spec)
    vf.name = "parallelSpec"
    return vf


# -- the catalog ---------------------------------------------------------------------------------

KINDS = ("implementation", "verified", "machine", "monitor", "diagram", "contract")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str
    build: Callable = field(repr=False, compare=False)
    parameters: dict = field(default_factory=dict)
    summary: str = ""
    default_input: Optional[Value] = None  # what `trace --count` feeds a machine or monitor
    mutations: tuple = ()
    monitor: Optional[str] = None  # entry that shadows this machine in `trace --monitored`

    def payload(self, **overrides):
        unknown = set(overrides) - set(self.parameters)
        if unknown:
            raise DomainError(f"{self.name} takes no parameter(s) {', '.join(sorted(unknown))}")
        params = {**self.parameters, **overrides}
        if "mutation" in params and params["mutation"] not in ("none",) + self.mutations:
            raise DomainError(f"{self.name} has no mutation {params['mutation']!r}; choose from {', '.join(self.mutations)}")
        return self.build(**params)


def _corrupt(mutation):
    return 3 if mutation == "off-by-one" else None


def _entries() -> list:
    A = {"alphabet": 3, "max_len": 3}
    C = {"alphabet": 2, "max_len": 2}
    muts = tuple(APPEND_MUTATIONS)
    am = {**A, "mutation": "none"}
    fm = {"mutation": "none"}
    E = CatalogEntry
    return [
        E("fold", "implementation", lambda **p: append_family(**p).fold, A, "generic list fold, typed for append"),
        E("appendBase", "implementation", lambda **p: append_family(**p).base, A, "append's base case: return the accumulator"),
        E("appendStep", "implementation", lambda **p: append_family(**p).step, A, "append's step: cons the element"),
        E("append", "implementation", lambda **p: append_family(**p).append, A, "fold with appendBase/appendStep; (ys, xs) ↦ xs ++ ys"),
        E("concatFold", "implementation", lambda **p: concat_family(**p).fold, C, "generic list fold, typed for concat"),
        E("concatBase", "implementation", lambda **p: concat_family(**p).base, C, "concat's base case: the empty list"),
        E("concatStep", "implementation", lambda **p: concat_family(**p).step, C, "concat's step, calling append"),
        E("concat", "implementation", lambda **p: concat_family(**p).concat, C, "fold with concatBase and concatStep ∘ append"),
        E("appendDiagram", "diagram", lambda: APPEND_DIAGRAM, {}, "fold box fed by appendBase and appendStep"),
        E("concatDiagram", "diagram", lambda: CONCAT_DIAGRAM, {}, "concatFold box; its step box is wired through the append diagram"),
        E("foldInd", "verified", lambda **p: append_family(**p).fold_ind, am, "fold verified by induction (Append instance)", mutations=muts),
        E("appendBaseSpec", "verified", lambda **p: append_family(**p).base_spec, am, "appendBase meets BaseSpec", mutations=muts),
        E("appendStepSpec", "verified", lambda **p: append_family(**p).step_spec, am, "appendStep meets StepSpec", mutations=muts),
        E("appendSpec", "verified", lambda **p: append_family(**p).append_spec, am, "append computes list append", mutations=muts),
        E("concatFoldInd", "verified", lambda **p: concat_family(**p).fold_ind, C, "fold verified by induction (Concat instance)"),
        E("concatBaseSpec", "verified", lambda **p: concat_family(**p).base_spec, C, "concatBase meets BaseSpec"),
        E("concatStepSpec", "verified", lambda **p: concat_family(**p).step_spec, C, "concatStep meets StepSpec, relying on appendSpec's contract"),
        E("concatSpec", "verified", lambda **p: concat_family(**p).concat_spec, C, "concat flattens a list of lists"),
        E("parallelSpec", "verified", parallel_spec, C, "appendSpec ∣∣ concatSpec"),
        E("noninterference", "verified", lambda mutation: noninterference(mutation == "leak"), fm,
          "public output of a counter pair ignores the secret counter", mutations=("leak",)),
        E("monotonicity", "verified", lambda mutation: monotonicity(mutation == "flip"), fm,
          "x ↦ 2x is monotone (relational contract)", mutations=("flip",)),
        E("fibUpdate", "implementation", lambda mutation: fib_update(corrupt_from=_corrupt(mutation)), fm,
          "one Fibonacci step over State(Nat×Nat)", mutations=("off-by-one",)),
        E("fibUpdateSpec", "verified", lambda mutation: fib_update_spec(corrupt_from=_corrupt(mutation)), fm,
          "fibUpdate preserves FibInvariant and answers Fibonacci numbers", mutations=("off-by-one",)),
        E("fib", "machine", lambda mutation: fib_machine(_corrupt(mutation)), fm,
          "fibUpdate run on the state runner from (0, 1)", UNIT, ("off-by-one",), monitor="fibSpec"),
        E("fibSpec", "monitor", lambda mutation: fib_spec(_corrupt(mutation)), fm,
          "fib shadowed by the FibInvariant monitor", UNIT, ("off-by-one",)),
        E("fibDep", "contract", fib_dep, {}, "answers are Fibonacci numbers; evidence is the index"),
        E("fibInvariant", "contract", fib_invariant, {}, "the state is a pair of consecutive Fibonacci numbers"),
        E("state", "machine", lambda: state_runner(Nat(0)), {}, "state runner over Nat starting at 0", GET, monitor="evenState"),
        E("evenState", "monitor", lambda: invariant_monitor(Nat(0), UNIT, even_invariant()), {},
          "state runner checked against the invariant 'state is even'", GET),
        E("evenInvariant", "contract", even_invariant, {}, "invariant contract: written states are even"),
    ]


CATALOG = {e.name: e for e in _entries()}


def entry(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise DomainError(f"no catalog entry named {name!r}") from None


def get(name: str, **params):
    return entry(name).payload(**params)


def verified_entries() -> list:
    return [e for e in CATALOG.values() if e.kind == "verified"]


# -- compositions whose components are checked separately -------------------------------------


@dataclass(frozen=True)
class Composition:
    name: str
    components: tuple  # ((label, VerifiedImplementation), ...)
    composite: VerifiedImplementation


def compositions(append_bounds: tuple = (3, 3), concat_bounds: tuple = (2, 2)) -> list:
    app = append_family(*append_bounds)
    cat = concat_family(*concat_bounds)
    inner = cat.append
    return [
        Composition("appendSpec", (("foldInd", app.fold_ind), ("appendBaseSpec", app.base_spec),
                                   ("appendStepSpec", app.step_spec)), app.append_spec),
        Composition("concatStepSpec ∘ appendSpec", (("concatStepSpec", cat.step_spec), ("appendSpec", inner.append_spec)),
                    cat.step_append_spec),
        Composition("concatSpec", (("concatFoldInd", cat.fold_ind), ("concatBaseSpec", cat.base_spec),
                                   ("concatStepSpec ∘ appendSpec", cat.step_append_spec)), cat.concat_spec),
    ]
