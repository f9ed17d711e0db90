"""Executable law suites over seeded random programs, modules and machines.

Random fixtures are *pure*: a random program is a fixed tree whose shape at
each node is drawn from an RNG keyed by the seed and the path of responses
leading there, so building it twice gives extensionally equal trees and a
random machine is an explicit-state transition table.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from typing import Callable

from . import domains as D
from .core import (
    DEFAULT_DEPTH, Call, Implementation, Interface, Leaf, Node, Program, Return, TRUNCATED, forwarder, impl_oplus,
    implementations_equal, injection, kleisli_compose, materialize, mk_oplus, mk_sum_interface, multi_compose,
    programs_equal, sequence,
)
from .domains import Domain
from .machines import Mealy, StateMachine, bisimilar, mealy_oplus, mealy_zero, prog_to_mealy, run_program, run_trace
from .parallel import both_prog, mealy_parallel, parallel_impl, parallel_interface
from .values import ConjBoth, ConjLeft, ConjRight, Inl, Nat, Pair, Tag, UNIT, Value, show

# -- fixture interfaces -------------------------------------------------------------

P = Interface("P", D.nat_below(3), lambda a: D.nat_below(2))
Q = Interface("Q", D.BOOLS, lambda b: D.nat_below(3))
R = Interface("R", D.nat_below(2), lambda a: D.BOOLS if a.n == 0 else D.nat_below(3))
S = Interface("S", D.finite("S", (Tag("x", UNIT), Tag("y", UNIT))), lambda t: D.nat_below(2))
RESULTS = D.nat_below(4)


def _draw(key: str) -> int:
    """64 deterministic pseudo-random bits for ``key`` (stable across processes)."""
    return int.from_bytes(hashlib.blake2b(key.encode(), digest_size=8).digest(), "little")


def _pick(dom: Domain, bits: int) -> Value:
    vals = dom.values()
    return vals[bits % len(vals)]


def random_program(q: Interface, result: Domain, seed, max_depth: int = 3, key: str = "") -> "Program":
    """A fixed random tree over ``q`` (finite domains only) with leaves in ``result``."""
    n = _draw(f"{seed}/{key}")
    if max_depth == 0 or n % 10 < 3:
        return Return(_pick(result, n >> 8))
    x = _pick(q.positions, n >> 8)
    return Call(x, lambda b: random_program(q, result, seed, max_depth - 1, f"{key}/{show(x)}>{show(b)}"))


def random_continuation(q: Interface, result: Domain, seed, max_depth: int = 2) -> Callable:
    return lambda v: random_program(q, result, f"{seed}/k/{show(v)}", max_depth)


def random_impl(p: Interface, q: Interface, seed, max_depth: int = 3) -> Implementation:
    return Implementation(
        p, q, lambda a: random_program(q, p.response(a), f"{seed}/{show(a)}", max_depth), f"rand[{p.name}⇒{q.name}#{seed}]"
    )


def random_machine(q: Interface, seed, states: int = 4) -> Mealy:
    def transition(s, x):
        n = _draw(f"{seed}/{s.n}/{show(x)}")
        return _pick(q.response(x), n), Nat((n >> 16) % states)

    return StateMachine(Nat(0), transition, f"machine#{seed}")


@dataclass
class LawResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, detail: str):
        if len(self.failures) < 5:
            self.failures.append(detail)

    def to_json(self) -> dict:
        return {"law": self.name, "cases": self.cases, "passed": self.passed, "failures": list(self.failures)}


# -- the suites ------------------------------------------------------------------------


def monad_laws(seed: int = 0, cases: int = 500, budget: int = DEFAULT_DEPTH) -> list:
    left, right, assoc = LawResult("monad/left-identity"), LawResult("monad/right-identity"), LawResult("monad/associativity")
    for i in range(cases):
        s = f"{seed}/monad/{i}"
        m = random_program(Q, RESULTS, s)
        k = random_continuation(Q, RESULTS, f"{s}/k")
        h = random_continuation(Q, RESULTS, f"{s}/h")
        v = RESULTS.sample(random.Random(s))
        for law in (left, right, assoc):
            law.cases += 1
        if not programs_equal(sequence(Return(v), k), k(v), Q, budget):
            left.fail(f"case {i}: return {show(v)} >>= k differs from k {show(v)}")
        if not programs_equal(sequence(m, Return), m, Q, budget):
            right.fail(f"case {i}: m >>= return differs from m")
        if not programs_equal(sequence(sequence(m, k), h), sequence(m, lambda x: sequence(k(x), h)), Q, budget):
            assoc.fail(f"case {i}: (m >>= k) >>= h differs from m >>= (k >=> h)")
    return [left, right, assoc]


def kleisli_laws(seed: int = 0, cases: int = 500, budget: int = DEFAULT_DEPTH, max_depth: int = 2) -> list:
    ident, assoc, univ = LawResult("kleisli/identity"), LawResult("kleisli/associativity"), LawResult("sum/universal-property")
    index = D.finite("{u,v}", (Tag("u", UNIT), Tag("v", UNIT)))
    family = {Tag("u", UNIT): P, Tag("v", UNIT): Q}
    summed = mk_sum_interface(index, family)
    for i in range(cases):
        s = f"{seed}/kleisli/{i}"
        f, g, h = (random_impl(P, Q, f"{s}/f", max_depth), random_impl(Q, R, f"{s}/g", max_depth),
                   random_impl(R, S, f"{s}/h", max_depth))
        ident.cases += 1
        if not (implementations_equal(kleisli_compose(f, forwarder(Q)), f, budget=budget)
                and implementations_equal(kleisli_compose(forwarder(P), f), f, budget=budget)):
            ident.fail(f"case {i}: forwarder is not a two-sided identity for {f.name}")
        assoc.cases += 1
        lhs = kleisli_compose(kleisli_compose(f, g), h)
        rhs = kleisli_compose(f, kleisli_compose(g, h))
        if not implementations_equal(lhs, rhs, budget=budget):
            assoc.fail(f"case {i}: (f∘g)∘h differs from f∘(g∘h)")
        # an implementation out of a sum is determined by its restrictions to the summands
        univ.cases += 1
        k = random_impl(summed, R, f"{s}/sum", max_depth)
        parts = {u: kleisli_compose(injection(index, family, u), k) for u in index.values()}
        rebuilt = multi_compose(index, forwarder(summed), parts)
        if not implementations_equal(rebuilt, k, budget=budget):
            univ.fail(f"case {i}: copairing the restrictions of {k.name} does not give it back")
    return [ident, assoc, univ]


def mealy_laws(seed: int = 0, cases: int = 100, depth: int = 20) -> list:
    ident, comp = LawResult("mealy/identity"), LawResult("mealy/functoriality")
    for i in range(cases):
        s = f"{seed}/mealy/{i}"
        f, g = random_impl(P, Q, f"{s}/f"), random_impl(Q, R, f"{s}/g")
        m = random_machine(R, f"{s}/m")
        ident.cases += 1
        if not bisimilar(prog_to_mealy(forwarder(R), m), m, R, depth, seed=i, sequences=1):
            ident.fail(f"case {i}: lifting the forwarder changes the machine")
        comp.cases += 1
        if not bisimilar(prog_to_mealy(kleisli_compose(f, g), m), prog_to_mealy(f, prog_to_mealy(g, m)), P, depth,
                         seed=i, sequences=1):
            comp.fail(f"case {i}: prog_to_mealy(f∘g, m) differs from prog_to_mealy(f, prog_to_mealy(g, m))")
    return [ident, comp]


def monoidal_laws(seed: int = 0, cases: int = 100, depth: int = 20) -> list:
    nat, unit = LawResult("monoidal/oplus-naturality"), LawResult("monoidal/zero-unit")
    source = mk_oplus(P, S)
    for i in range(cases):
        s = f"{seed}/monoidal/{i}"
        f, g = random_impl(P, Q, f"{s}/f"), random_impl(S, R, f"{s}/g")
        m1, m2 = random_machine(Q, f"{s}/m1"), random_machine(R, f"{s}/m2")
        nat.cases += 1
        lhs = prog_to_mealy(impl_oplus(f, g), mealy_oplus(m1, m2))
        rhs = mealy_oplus(prog_to_mealy(f, m1), prog_to_mealy(g, m2))
        if not bisimilar(lhs, rhs, source, depth, seed=i, sequences=1):
            nat.fail(f"case {i}: lifting f ⊕ g over m1 ⊕ m2 differs from lifting each side")
        unit.cases += 1
        rng = random.Random(s)
        xs = [P.positions.sample(rng) for _ in range(depth)]
        m = random_machine(P, f"{s}/m")
        if run_trace(mealy_oplus(m, mealy_zero()), [Inl(x) for x in xs]).outputs != run_trace(m, xs).outputs:
            unit.fail(f"case {i}: m ⊕ 0 differs from m")
    return [nat, unit]


# -- parallel --------------------------------------------------------------------------


def tree_both(t1, t2):
    """Lockstep product of two materialized trees (independent of :func:`both_prog`)."""
    if t1 is TRUNCATED or t2 is TRUNCATED:
        return TRUNCATED
    if isinstance(t1, Leaf) and isinstance(t2, Leaf):
        return Leaf(Pair(t1.value, t2.value))
    if isinstance(t1, Node) and isinstance(t2, Leaf):
        return Node(ConjLeft(t1.position), tuple((b, tree_both(s, t2)) for b, s in t1.branches))
    if isinstance(t1, Leaf):
        return Node(ConjRight(t2.position), tuple((d, tree_both(t1, s)) for d, s in t2.branches))
    return Node(
        ConjBoth(t1.position, t2.position),
        tuple((Pair(b, d), tree_both(s1, s2)) for b, s1 in t1.branches for d, s2 in t2.branches),
    )


@dataclass(frozen=True, slots=True)
class CountingMealy(Mealy):
    """Wraps a machine and counts how often it has been stepped."""

    inner: Mealy
    steps: int = 0

    def step(self, x):
        y, m = self.inner.step(x)
        return y, CountingMealy(m, self.steps + 1)


def random_parallel_input(p: Interface, q: Interface, rng: random.Random) -> Value:
    k = rng.randrange(3)
    if k == 0:
        return ConjLeft(p.positions.sample(rng))
    if k == 1:
        return ConjRight(q.positions.sample(rng))
    return ConjBoth(p.positions.sample(rng), q.positions.sample(rng))


def parallel_laws(seed: int = 0, pairs: int = 200, traces: int = 1000, depth: int = 20,
                  budget: int = DEFAULT_DEPTH) -> list:
    eqs, affine = LawResult("parallel/both-prog-equations"), LawResult("parallel/affine-steps")
    proj, nat = LawResult("parallel/projection-coherence"), LawResult("parallel/lifting-naturality")
    pq = parallel_interface(P, Q)
    for i in range(pairs):
        s = f"{seed}/both/{i}"
        e1, e2 = random_program(P, RESULTS, f"{s}/1"), random_program(Q, RESULTS, f"{s}/2")
        eqs.cases += 1
        got = materialize(both_prog(e1, e2), pq, budget)
        want = tree_both(materialize(e1, P, budget), materialize(e2, Q, budget))
        if got != want:
            eqs.fail(f"pair {i}: both_prog disagrees with the lockstep product of the two trees")
        # running the paired program on paired machines runs each program on its own machine
        m1, m2 = random_machine(P, f"{s}/m1"), random_machine(Q, f"{s}/m2")
        (r, m12) = run_program(both_prog(e1, e2), mealy_parallel(m1, m2))
        (r1, n1), (r2, n2) = run_program(e1, m1), run_program(e2, m2)
        if r != Pair(r1, r2) or m12.left != n1 or m12.right != n2:
            eqs.fail(f"pair {i}: running both_prog on m1 ∣∣ m2 differs from separate runs")
    for i in range(traces):
        rng = random.Random(f"{seed}/affine/{i}")
        m = mealy_parallel(CountingMealy(random_machine(P, f"{seed}/a{i}")), CountingMealy(random_machine(Q, f"{seed}/b{i}")))
        affine.cases += 1
        for k in range(depth):
            x = random_parallel_input(P, Q, rng)
            before = (m.left.steps, m.right.steps)
            _, m = m.step(x)
            dl, dr = m.left.steps - before[0], m.right.steps - before[1]
            expect = (int(not isinstance(x, ConjRight)), int(not isinstance(x, ConjLeft)))
            if (dl, dr) != expect or dl > 1 or dr > 1:
                affine.fail(f"trace {i} step {k}: {show(x)} stepped components {dl}/{dr} times")
                break
    for i in range(pairs):
        rng = random.Random(f"{seed}/proj/{i}")
        m1, m2 = random_machine(P, f"{seed}/p{i}"), random_machine(Q, f"{seed}/q{i}")
        xs = [ConjBoth(P.positions.sample(rng), Q.positions.sample(rng)) for _ in range(depth)]
        proj.cases += 1
        outs = run_trace(mealy_parallel(m1, m2), xs).outputs
        left = run_trace(m1, [x.l for x in xs]).outputs
        right = run_trace(m2, [x.r for x in xs]).outputs
        if tuple(o.fst for o in outs) != left or tuple(o.snd for o in outs) != right:
            proj.fail(f"case {i}: both-only trace does not project onto the component traces")
        f, g = random_impl(P, R, f"{seed}/pf{i}"), random_impl(Q, S, f"{seed}/pg{i}")
        n1, n2 = random_machine(R, f"{seed}/pr{i}"), random_machine(S, f"{seed}/ps{i}")
        nat.cases += 1
        if not bisimilar(prog_to_mealy(parallel_impl(f, g), mealy_parallel(n1, n2)),
                         mealy_parallel(prog_to_mealy(f, n1), prog_to_mealy(g, n2)), pq, depth, seed=i, sequences=1):
            nat.fail(f"case {i}: lifting f ∣∣ g over n1 ∣∣ n2 differs from lifting each side")
    return [eqs, affine, proj, nat]


SUITES = {
    "monad": monad_laws,
    "kleisli": kleisli_laws,
    "mealy": mealy_laws,
    "monoidal": monoidal_laws,
    "parallel": parallel_laws,
}


def run_suite(name: str, seed: int = 0, depth: int = 20, budget: int = DEFAULT_DEPTH) -> list:
    """Run one suite (or ``"all"``); ``depth`` is the bisimulation/trace depth."""
    names = list(SUITES) if name == "all" else [name]
    out = []
    for n in names:
        if n in ("monad", "kleisli"):
            out += SUITES[n](seed, budget=budget)
        elif n == "parallel":
            out += parallel_laws(seed, depth=depth, budget=budget)
        else:
            out += SUITES[n](seed, depth=depth)
    return out
