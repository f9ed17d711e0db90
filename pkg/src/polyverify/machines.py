"""Mealy machines: persistent steppers that run programs.

``m.step(x)`` returns ``(response, successor)`` and never mutates ``m``, so
a machine value can be replayed, compared, and stepped from several places.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from . import domains as D
from .core import Call, Implementation, Interface, Program
from .domains import Domain
from .errors import DomainError, ParseError, TraceError
from .values import UNIT, Inl, Inr, Tag, Value, from_json, show, to_json

DEFAULT_BISIM_DEPTH = 50
DEFAULT_BISIM_SEQUENCES = 100


class Mealy:
    """Base class; subclasses implement :meth:`step`."""

    def step(self, x: Value) -> tuple:
        raise NotImplementedError


# -- the state effect -----------------------------------------------------------

GET = Tag("get", UNIT)


def put(s: Value) -> Tag:
    return Tag("put", s)


def state_interface(S: Domain) -> Interface:
    """``State S``: ``get`` answers an ``S``, ``put s`` answers unit."""
    positions = D.tagged({"get": D.UNITS, "put": S}, name=f"StateI({S.name})")
    return Interface(f"State({S.name})", positions, lambda v: S if v.label == "get" else D.UNITS)


@dataclass(frozen=True, slots=True)
class StateRunner(Mealy):
    """Runner for the state effect: threads the current state."""

    state: Value

    def step(self, x):
        if isinstance(x, Tag) and x.label == "get" and x.payload == UNIT:
            return self.state, self
        if isinstance(x, Tag) and x.label == "put":
            return UNIT, StateRunner(x.payload)
        raise DomainError(f"{show(x)} is not a State operation")


def state_runner(s0: Value) -> StateRunner:
    return StateRunner(s0)


@dataclass(frozen=True, slots=True)
class StateMachine(Mealy):
    """A machine given by an explicit state and a transition function."""

    state: Value
    transition: Callable = field(compare=False)
    name: str = field(default="machine", compare=False)

    def step(self, x):
        out, nxt = self.transition(self.state, x)
        return out, StateMachine(nxt, self.transition, self.name)


# -- running programs --------------------------------------------------------------


def run_program(e: Program, m: Mealy) -> tuple:
    """Fold a call tree against a machine, returning ``(result, successor)``."""
    while isinstance(e, Call):
        b, m = m.step(e.position)
        e = e.cont(b)
    return e.result, m


@dataclass(frozen=True, slots=True)
class LiftedMealy(Mealy):
    impl: Implementation
    inner: Mealy

    def step(self, a):
        b, m2 = run_program(self.impl(a), self.inner)
        return b, LiftedMealy(self.impl, m2)


def prog_to_mealy(f: Implementation, m: Mealy) -> Mealy:
    """A machine for ``f.source`` that runs ``f`` on the machine ``m`` for ``f.target``."""
    return LiftedMealy(f, m)


@dataclass(frozen=True, slots=True)
class OplusMealy(Mealy):
    left: Mealy
    right: Mealy

    def step(self, x):
        if isinstance(x, Inl):
            b, m = self.left.step(x.v)
            return b, OplusMealy(m, self.right)
        if isinstance(x, Inr):
            d, m = self.right.step(x.v)
            return d, OplusMealy(self.left, m)
        raise DomainError(f"{show(x)} is not an inl/inr input")


def mealy_oplus(m1: Mealy, m2: Mealy) -> Mealy:
    return OplusMealy(m1, m2)


@dataclass(frozen=True, slots=True)
class ZeroMealy(Mealy):
    def step(self, x):
        raise DomainError("the empty interface has no positions")


MEALY_ZERO = ZeroMealy()


def mealy_zero() -> Mealy:
    return MEALY_ZERO


# -- traces ----------------------------------------------------------------------


@dataclass(frozen=True)
class Trace:
    steps: tuple  # ((input, output), ...)
    final: Optional[Mealy] = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.steps)

    @property
    def inputs(self) -> tuple:
        return tuple(i for i, _ in self.steps)

    @property
    def outputs(self) -> tuple:
        return tuple(o for _, o in self.steps)

    def to_json(self) -> dict:
        return {"steps": [{"in": to_json(i), "out": to_json(o)} for i, o in self.steps]}

    @classmethod
    def from_json(cls, obj) -> "Trace":
        if not isinstance(obj, dict) or set(obj) != {"steps"} or not isinstance(obj["steps"], list):
            raise ParseError("trace must be an object with a single 'steps' array")
        steps = []
        for k, s in enumerate(obj["steps"]):
            if not isinstance(s, dict) or set(s) != {"in", "out"}:
                raise ParseError("trace step needs exactly 'in' and 'out'", f"$.steps[{k}]")
            steps.append((from_json(s["in"], f"$.steps[{k}].in"), from_json(s["out"], f"$.steps[{k}].out")))
        return cls(tuple(steps))


def run_trace(m: Mealy, inputs: Iterable[Value]) -> Trace:
    steps = []
    for k, x in enumerate(inputs):
        try:
            y, m = m.step(x)
        except DomainError as exc:
            raise TraceError(k, exc) from exc
        steps.append((x, y))
    return Trace(tuple(steps), m)


# -- bounded bisimulation -------------------------------------------------------------


def _outcome(m: Mealy, x: Value):
    try:
        return m.step(x)
    except DomainError as exc:
        return ("error", type(exc)), None


def distinguish(
    m1: Mealy,
    m2: Mealy,
    p: Interface,
    depth: int = DEFAULT_BISIM_DEPTH,
    seed: int = 0,
    sequences: int = DEFAULT_BISIM_SEQUENCES,
) -> Optional[list]:
    """An input sequence on which the machines' outputs differ, or ``None``.

    All input sequences up to ``depth`` are explored when there are no more
    than ``sequences`` of them; otherwise ``sequences`` seeded random
    sequences of length ``depth`` are replayed.
    """
    pos = p.positions
    if pos.enumerable:
        inputs = pos.values()
        if not inputs:
            return None
        if len(inputs) ** depth <= sequences:
            return _distinguish_all(m1, m2, inputs, depth)
    rng = random.Random(seed)
    for _ in range(sequences):
        a, b = m1, m2
        seq = []
        for _ in range(depth):
            x = pos.sample(rng)
            seq.append(x)
            (ya, a), (yb, b) = _outcome(a, x), _outcome(b, x)
            if ya != yb:
                return seq
            if a is None:
                break
    return None


def _distinguish_all(m1, m2, inputs, depth):
    stack = [(m1, m2, [])]
    while stack:
        a, b, seq = stack.pop()
        if len(seq) == depth:
            continue
        for x in inputs:
            (ya, a2), (yb, b2) = _outcome(a, x), _outcome(b, x)
            if ya != yb:
                return seq + [x]
            if a2 is not None:
                stack.append((a2, b2, seq + [x]))
    return None


def bisimilar(
    m1: Mealy,
    m2: Mealy,
    p: Interface,
    depth: int = DEFAULT_BISIM_DEPTH,
    seed: int = 0,
    sequences: int = DEFAULT_BISIM_SEQUENCES,
) -> bool:
    """Bounded, seeded stand-in for equality of machines."""
    return distinguish(m1, m2, p, depth, seed, sequences) is None


def replay(m: Mealy, inputs: Sequence[Value]) -> tuple:
    """Outputs of ``m`` on ``inputs`` (convenience for tests and laws)."""
    return run_trace(m, inputs).outputs


def all_sequences(inputs: Sequence[Value], length: int):
    return itertools.product(inputs, repeat=length)
