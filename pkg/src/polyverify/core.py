"""Interfaces, free-monad programs over them, and their composition.

An :class:`Interface` is a position domain with a response domain per
position. A :class:`Program` over an interface is a tree of calls whose
leaves carry results; an :class:`Implementation` sends every position of a
source interface to a program over a target interface. Implementations
compose by substitution (Kleisli composition), including the multi-ary form
used when a module depends on an indexed sum of interfaces.

Continuations are opaque Python callables, so programs are compared
extensionally: :func:`materialize` expands a tree to a finite form under an
explicit depth budget, sampling responses from seeded generators when a
response domain cannot be enumerated.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Union

from . import domains as D
from .domains import Domain
from .errors import CompositionError, DomainError, MaterializationError, NotClosedError
from .values import Inl, Inr, Pair, Value, show, to_json

DEFAULT_DEPTH = 64
DEFAULT_SAMPLES = 32


class Interface:
    """A polynomial ``(positions, response)``.

    Two interfaces are equal when their names are equal; names are built
    structurally by the constructors in this module, so independently built
    copies of the same interface compare equal.
    """

    __slots__ = ("name", "positions", "_response")

    def __init__(self, name: str, positions: Domain, response: Callable[[Value], Domain]):
        self.name = name
        self.positions = positions
        self._response = response

    def response(self, position: Value) -> Domain:
        if position not in self.positions:
            raise DomainError(f"{show(position)} is not a position of {self.name}")
        return self._response(position)

    def __eq__(self, other):
        return isinstance(other, Interface) and other.name == self.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"Interface({self.name})"


def simple_interface(name: str, positions: Domain, response: Domain) -> Interface:
    """An interface whose response domain does not depend on the position."""
    return Interface(name, positions, lambda _: response)


def zero_interface() -> Interface:
    return ZERO


ZERO = Interface("0", D.EMPTY, lambda _: D.EMPTY)


def _family_fn(family) -> Callable:
    if isinstance(family, Mapping):
        def lookup(u):
            try:
                return family[u]
            except KeyError:
                raise DomainError(f"{show(u)} is not an index of this family") from None
        return lookup
    return family


def mk_sum_interface(index: Domain, family, name: Optional[str] = None) -> Interface:
    """Indexed sum: positions are ``Pair(u, x)`` with ``x`` a position of ``family(u)``."""
    fam = _family_fn(family)

    def member(u):
        if u not in index:
            raise DomainError(f"{show(u)} is not in the index domain {index.name}")
        return fam(u)

    if name is None:
        if index.enumerable and index.complete:
            labels = index.values()
            if not labels:
                name = ZERO.name
            else:
                name = "Σ{" + ", ".join(f"{show(u)}: {fam(u).name}" for u in labels) + "}"
        else:
            name = f"Σ({index.name}, {getattr(family, '__name__', 'family')})"

    positions = D.sigma(index, lambda u: member(u).positions, name=f"pos[{name}]")
    if index.enumerable and index.complete:
        positions.complete = all(fam(u).positions.complete for u in index.values())
    return Interface(name, positions, lambda p: member(p.fst).response(p.snd))


def mk_oplus(p: Interface, q: Interface) -> Interface:
    """Binary sum ``p ⊕ q`` with ``Inl``/``Inr``-tagged positions."""

    def response(v):
        return p.response(v.v) if isinstance(v, Inl) else q.response(v.v)

    return Interface(f"({p.name} ⊕ {q.name})", D.binary_sum(p.positions, q.positions), response)


# -- programs -----------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Return:
    result: Value


@dataclass(frozen=True, slots=True, eq=False)
class Call:
    position: Value
    cont: Callable[[Value], "Program"]

    def __repr__(self):
        return f"Call({show(self.position)}, …)"


Program = Union[Return, Call]


def call(position: Value, cont: Callable[[Value], Program] = Return) -> Call:
    return Call(position, cont)


def sequence(m: Program, k: Callable[[Value], Program]) -> Program:
    """Monadic bind: graft ``k(result)`` onto every leaf of ``m``."""
    if isinstance(m, Return):
        return k(m.result)
    inner = m.cont
    return Call(m.position, lambda b: sequence(inner(b), k))


def relabel(e: Program, inject: Callable[[Value], Value]) -> Program:
    """Rename every call position of ``e`` (responses are unchanged)."""
    if isinstance(e, Return):
        return e
    inner = e.cont
    return Call(inject(e.position), lambda b: relabel(inner(b), inject))


# -- implementations -------------------------------------------------------------


class Implementation:
    """A module: each source position is sent to a program over ``target``."""

    __slots__ = ("source", "target", "body", "name")

    def __init__(self, source: Interface, target: Interface, body: Callable[[Value], Program], name: str = "impl"):
        self.source = source
        self.target = target
        self.body = body
        self.name = name

    def __call__(self, a: Value) -> Program:
        if a not in self.source.positions:
            raise DomainError(f"{show(a)} is not a position of {self.source.name} (in {self.name})")
        return self.body(a)

    def __repr__(self):
        return f"Implementation({self.name}: {self.source.name} ⇒ Free {self.target.name})"


def closed(source: Interface, fn: Callable[[Value], Value], name: str) -> Implementation:
    """A module with no dependencies computing ``fn`` directly."""
    return Implementation(source, ZERO, lambda a: Return(fn(a)), name)


def lens(source: Interface, target: Interface, forward, backward, name: str = "lens") -> Implementation:
    """The single-call pattern: call ``forward(a)`` once, then map the answer back."""
    return Implementation(source, target, lambda a: Call(forward(a), lambda d: Return(backward(a, d))), name)


def forwarder(p: Interface) -> Implementation:
    """Identity of the Kleisli category: ``a ↦ Call(a, Return)``."""
    return Implementation(p, p, lambda a: Call(a, Return), f"id[{p.name}]")


def injection(index: Domain, family, u: Value) -> Implementation:
    """Forward calls on ``family(u)`` into summand ``u`` of the indexed sum."""
    fam = _family_fn(family)
    target = mk_sum_interface(index, family)
    return Implementation(fam(u), target, lambda x: Call(Pair(u, x), Return), f"ι[{show(u)}]")


def substitute(e: Program, g: Implementation) -> Program:
    """Replace every call in ``e`` by ``g``'s program for it, splicing continuations."""
    if isinstance(e, Return):
        return e
    inner = e.cont
    return sequence(g(e.position), lambda b: substitute(inner(b), g))


def kleisli_compose(f: Implementation, g: Implementation) -> Implementation:
    """``f ∘ g``: run ``f``, interpreting each of its calls with ``g``."""
    if f.target != g.source:
        raise CompositionError(f"cannot compose {f.name} (target {f.target.name}) with {g.name} (source {g.source.name})")
    return Implementation(f.source, g.target, lambda a: substitute(f.body(a), g), f"({f.name} ∘ {g.name})")


def multi_compose(index: Domain, f: Implementation, g, target: Optional[Interface] = None) -> Implementation:
    """Compose ``f`` (depending on a sum over ``index``) with one module per summand."""
    fam = _family_fn(g)
    expected = mk_sum_interface(index, lambda u: fam(u).source,
                                name=None if index.enumerable and index.complete else f.target.name)
    if f.target != expected:
        raise CompositionError(f"{f.name} targets {f.target.name}, but the family provides {expected.name}")
    if index.enumerable:
        targets = {fam(u).target for u in index.values()}
        if len(targets) > 1:
            raise CompositionError("family members have different targets: " + ", ".join(sorted(t.name for t in targets)))
        if targets:
            (common,) = targets
            if target is not None and target != common:
                raise CompositionError(f"family targets {common.name}, not {target.name}")
            target = common
    if target is None:
        raise CompositionError("cannot infer the composite target; pass target= explicitly")
    summed = Implementation(expected, target, lambda p: fam(p.fst)(p.snd), "[" + ", ".join(
        f"{show(u)}↦{fam(u).name}" for u in (index.values() if index.enumerable else ())) + "]")
    composite = kleisli_compose(f, summed)
    composite.name = f"comp({f.name}, {summed.name})"
    return composite


def impl_oplus(f: Implementation, g: Implementation) -> Implementation:
    """``f ⊕ g : p ⊕ p' ⇒ Free (q ⊕ q')`` acting on each side independently."""
    source = mk_oplus(f.source, g.source)
    target = mk_oplus(f.target, g.target)

    def body(v):
        if isinstance(v, Inl):
            return relabel(f(v.v), Inl)
        return relabel(g(v.v), Inr)

    return Implementation(source, target, body, f"({f.name} ⊕ {g.name})")


def run_closed(f: Implementation, a: Value) -> Value:
    """Evaluate a closed module (``Free 0 C ≅ C``)."""
    if not f.target.positions.is_empty():
        raise NotClosedError(f"{f.name} depends on {f.target.name}; it is not closed")
    e = f(a)
    if isinstance(e, Call):
        raise NotClosedError(f"{f.name} called {show(e.position)} while evaluating {show(a)}")
    return e.result


# -- extensional comparison ---------------------------------------------------


@dataclass(frozen=True, slots=True)
class Leaf:
    value: Value


@dataclass(frozen=True, slots=True)
class Node:
    position: Value
    branches: tuple  # ((response, subtree), ...)


@dataclass(frozen=True, slots=True)
class Truncated:
    pass


TRUNCATED = Truncated()
Tree = Union[Leaf, Node, Truncated]


def _responses(q: Interface, position: Value, path: tuple, seed: int, samples: int) -> tuple:
    dom = q.response(position)
    if dom.enumerable:
        return dom.values()
    if not dom.samplable:
        raise MaterializationError(f"response domain {dom.name} of {show(position)} is neither enumerable nor samplable")
    rng = random.Random(f"{seed}/{'.'.join(map(str, path))}/{show(position)}")
    return dom.draw(rng, samples)


def materialize(
    e: Program,
    q: Interface,
    depth_budget: int = DEFAULT_DEPTH,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    result_domain: Optional[Domain] = None,
) -> Tree:
    """Expand ``e`` into a finite :data:`Tree`; calls deeper than the budget become ``TRUNCATED``."""

    def go(e, depth, path):
        if isinstance(e, Return):
            if result_domain is not None:
                result_domain.require(e.result, "result")
            return Leaf(e.result)
        if depth >= depth_budget:
            return TRUNCATED
        resp = _responses(q, e.position, path, seed, samples)
        return Node(e.position, tuple((b, go(e.cont(b), depth + 1, path + (i,))) for i, b in enumerate(resp)))

    return go(e, 0, ())


def tree_to_json(t: Tree) -> dict:
    if isinstance(t, Leaf):
        return {"return": to_json(t.value)}
    if isinstance(t, Node):
        return {"call": to_json(t.position),
                "branches": [{"response": to_json(b), "then": tree_to_json(sub)} for b, sub in t.branches]}
    return {"truncated": True}


def programs_equal(
    e1: Program,
    e2: Program,
    q: Interface,
    budget: int = DEFAULT_DEPTH,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
) -> bool:
    """Extensional equality: the two materializations agree node for node.

    Walks both trees in lockstep (stopping at the first difference), which is
    equivalent to comparing the full materializations.
    """

    def go(a, b, depth, path):
        if isinstance(a, Return) or isinstance(b, Return):
            return isinstance(a, Return) and isinstance(b, Return) and a.result == b.result
        if a.position != b.position:
            return False
        if depth >= budget:
            return True
        for i, r in enumerate(_responses(q, a.position, path, seed, samples)):
            if not go(a.cont(r), b.cont(r), depth + 1, path + (i,)):
                return False
        return True

    return go(e1, e2, 0, ())


def implementations_equal(f: Implementation, g: Implementation, positions=None, **kw) -> bool:
    """Pointwise :func:`programs_equal` over ``positions`` (default: f's enumerated source)."""
    if f.target != g.target:
        return False
    pts = f.source.positions.values() if positions is None else positions
    return all(programs_equal(f(a), g(a), f.target, **kw) for a in pts)


def count_calls(t: Tree) -> int:
    if isinstance(t, Node):
        return 1 + sum(count_calls(sub) for _, sub in t.branches)
    return 0


def path_call_counts(t: Tree) -> list:
    """Number of call nodes on each root-to-leaf path, in enumeration order."""
    if isinstance(t, Node):
        return [1 + n for _, sub in t.branches for n in path_call_counts(sub)]
    return [0]
