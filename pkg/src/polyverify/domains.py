"""Runtime stand-ins for the sets that index interfaces and contracts.

A :class:`Domain` answers three questions about a collection of values:
membership, a deterministic finite enumeration (optional), and seeded
sampling. An enumeration may be a bounded truncation of an infinite set (for
example naturals below a bound); ``complete`` records whether it covers every
member. Enumeration order is the tie-breaking order used everywhere else.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, Iterable, Iterator, Optional

from .errors import DomainError
from .values import (
    UNIT, FALSE, TRUE, ConjBoth, ConjLeft, ConjRight, Inl, Inr, List, Nat, Pair, Tag,
    Value, show,
)

Sampler = Callable[[random.Random], Value]

_MAX_REJECTIONS = 1000


class Domain:
    __slots__ = ("name", "_contains", "_enumerate", "_sampler", "complete", "_cache")

    def __init__(
        self,
        name: str,
        contains: Callable[[Value], bool],
        enumerate: Optional[Callable[[], Iterable[Value]]] = None,
        sampler: Optional[Sampler] = None,
        complete: bool = False,
    ):
        self.name = name
        self._contains = contains
        self._enumerate = enumerate
        self._sampler = sampler
        self.complete = complete and enumerate is not None
        self._cache: Optional[tuple] = None

    def __contains__(self, v: Value) -> bool:
        return bool(self._contains(v))

    def __repr__(self) -> str:
        return f"Domain({self.name})"

    @property
    def enumerable(self) -> bool:
        return self._enumerate is not None

    @property
    def samplable(self) -> bool:
        return self._sampler is not None or self._enumerate is not None

    def values(self) -> tuple:
        """The finite enumeration; raises :class:`DomainError` if there is none."""
        if self._cache is None:
            if self._enumerate is None:
                raise DomainError(f"domain {self.name} is not enumerable")
            self._cache = tuple(_dedupe(self._enumerate()))
        return self._cache

    def is_empty(self) -> bool:
        return self.enumerable and self.complete and not self.values()

    def sample(self, rng: random.Random) -> Value:
        if self._sampler is not None:
            return self._sampler(rng)
        vals = self.values()
        if not vals:
            raise DomainError(f"cannot sample from empty domain {self.name}")
        return vals[rng.randrange(len(vals))]

    def draw(self, rng: random.Random, n: int) -> tuple:
        """Up to ``n`` distinct sampled members, in draw order."""
        seen = dict()
        for _ in range(n):
            seen.setdefault(self.sample(rng), None)
        return tuple(seen)

    def require(self, v: Value, what: str = "value") -> Value:
        if v not in self:
            raise DomainError(f"{what} {show(v)} is not in {self.name}")
        return v


def _dedupe(values: Iterable[Value]) -> Iterator[Value]:
    seen = set()
    for v in values:
        if v not in seen:
            seen.add(v)
            yield v


# -- basic domains ----------------------------------------------------------


def finite(name: str, values: Iterable[Value]) -> Domain:
    vals = tuple(_dedupe(values))
    members = frozenset(vals)
    sampler = (lambda rng: vals[rng.randrange(len(vals))]) if vals else None
    return Domain(name, members.__contains__, lambda: vals, sampler, complete=True)


EMPTY = finite("∅", ())
UNITS = finite("⊤", (UNIT,))
BOOLS = finite("Bool", (FALSE, TRUE))


def singleton(v: Value) -> Domain:
    return finite("{" + show(v) + "}", (v,))


def nat_below(n: int) -> Domain:
    """The complete finite domain ``{0, …, n-1}``."""
    return Domain(
        f"Nat<{n}",
        lambda v: isinstance(v, Nat) and v.n < n,
        lambda: (Nat(i) for i in range(n)),
        (lambda rng: Nat(rng.randrange(n))) if n else None,
        complete=True,
    )


def nats(enum_bound: Optional[int] = None, sample_bound: int = 100) -> Domain:
    """All naturals; optionally enumerated up to ``enum_bound`` (a truncation)."""
    enum = (lambda: (Nat(i) for i in range(enum_bound))) if enum_bound is not None else None
    name = "Nat" if enum_bound is None else f"Nat[enum<{enum_bound}]"
    # bound isinstance check: same test as ``isinstance(v, Nat)`` without a Python frame per element
    return Domain(name, Nat.__instancecheck__, enum, lambda rng: Nat(rng.randrange(sample_bound)))


def lists(
    elem: Domain,
    max_len: Optional[int] = None,
    enum_len: Optional[int] = None,
    sample_len: int = 16,
) -> Domain:
    """Lists over ``elem``.

    ``max_len`` restricts membership; ``enum_len`` truncates the enumeration
    of an otherwise unbounded list domain. Enumeration is by length, then in
    the product order of ``elem``'s enumeration.
    """
    bound = max_len if max_len is not None else enum_len
    if max_len is not None and enum_len is not None:
        bound = min(max_len, enum_len)

    def contains(v):
        if not isinstance(v, List):
            return False
        if max_len is not None and len(v.items) > max_len:
            return False
        # the raw predicate, not ``in``: lists are re-checked at every call boundary
        return all(map(elem._contains, v.items))

    enum = None
    if bound is not None and elem.enumerable:
        def enum():
            base = elem.values()
            for k in range(bound + 1):
                for combo in itertools.product(base, repeat=k):
                    yield List(combo)

    def sampler(rng):
        top = sample_len if max_len is None else min(sample_len, max_len)
        k = rng.randint(0, top)
        return List(tuple(elem.sample(rng) for _ in range(k)))

    if max_len is not None:
        name = f"List≤{max_len}({elem.name})"
    elif enum_len is not None:
        name = f"List({elem.name})[enum≤{enum_len}]"
    else:
        name = f"List({elem.name})"
    complete = max_len is not None and (enum_len is None or enum_len >= max_len) and elem.complete
    return Domain(name, contains, enum, sampler if elem.samplable else None, complete)


def sigma(first: Domain, family: Callable[[Value], Domain], name: Optional[str] = None) -> Domain:
    """Dependent pairs ``Pair(x, y)`` with ``x ∈ first`` and ``y ∈ family(x)``."""

    def contains(v):
        return isinstance(v, Pair) and v.fst in first and v.snd in family(v.fst)

    enum = None
    if first.enumerable:
        def enum():
            for x in first.values():
                for y in family(x).values():
                    yield Pair(x, y)

    def sampler(rng):
        for _ in range(_MAX_REJECTIONS):
            x = first.sample(rng)
            fam = family(x)
            if fam.enumerable and fam.complete and not fam.values():
                continue
            return Pair(x, fam.sample(rng))
        raise DomainError(f"could not sample from {name or 'Σ(' + first.name + ')'}")

    complete = first.complete  # refined lazily: families are assumed complete when enumerable
    return Domain(name or f"Σ({first.name}, …)", contains, enum, sampler if first.samplable else None, complete)


def product(a: Domain, b: Domain) -> Domain:
    d = sigma(a, lambda _: b, name=f"{a.name}×{b.name}")
    d.complete = a.complete and b.complete and a.enumerable and b.enumerable
    return d


def tagged(options: dict, name: Optional[str] = None) -> Domain:
    """Tagged union ``Tag(label, payload)`` with payload drawn from ``options[label]``."""
    labels = tuple(options)

    def contains(v):
        return isinstance(v, Tag) and v.label in options and v.payload in options[v.label]

    enum = None
    if all(d.enumerable for d in options.values()):
        def enum():
            for label in labels:
                for p in options[label].values():
                    yield Tag(label, p)

    def sampler(rng):
        label = labels[rng.randrange(len(labels))]
        return Tag(label, options[label].sample(rng))

    complete = all(d.complete for d in options.values())
    inner = ", ".join(f"{k}:{d.name}" for k, d in options.items())
    return Domain(name or f"Tag{{{inner}}}", contains, enum, sampler if labels else None, complete)


def binary_sum(a: Domain, b: Domain) -> Domain:
    """``Inl(a) | Inr(b)``."""

    def contains(v):
        return (isinstance(v, Inl) and v.v in a) or (isinstance(v, Inr) and v.v in b)

    enum = None
    if a.enumerable and b.enumerable:
        def enum():
            yield from (Inl(x) for x in a.values())
            yield from (Inr(y) for y in b.values())

    def sampler(rng):
        options = [d for d in (a, b) if not d.is_empty()]
        if not options:
            raise DomainError("cannot sample from an empty sum")
        side = options[rng.randrange(len(options))]
        return Inl(a.sample(rng)) if side is a else Inr(b.sample(rng))

    return Domain(f"({a.name}+{b.name})", contains, enum, sampler, a.complete and b.complete)


def conjunctive_sum(a: Domain, b: Domain) -> Domain:
    """``ConjLeft(a) | ConjRight(b) | ConjBoth(a, b)`` (either, or both)."""

    def contains(v):
        if isinstance(v, ConjLeft):
            return v.v in a
        if isinstance(v, ConjRight):
            return v.v in b
        return isinstance(v, ConjBoth) and v.l in a and v.r in b

    enum = None
    if a.enumerable and b.enumerable:
        def enum():
            yield from (ConjLeft(x) for x in a.values())
            yield from (ConjRight(y) for y in b.values())
            for x in a.values():
                for y in b.values():
                    yield ConjBoth(x, y)

    def sampler(rng):
        k = rng.randrange(3)
        if k == 0 and not a.is_empty():
            return ConjLeft(a.sample(rng))
        if k == 1 and not b.is_empty():
            return ConjRight(b.sample(rng))
        if not a.is_empty() and not b.is_empty():
            return ConjBoth(a.sample(rng), b.sample(rng))
        if not a.is_empty():
            return ConjLeft(a.sample(rng))
        return ConjRight(b.sample(rng))

    return Domain(f"({a.name}∨{b.name})", contains, enum, sampler, a.complete and b.complete)


def subset(base: Domain, pred: Callable[[Value], bool], name: str) -> Domain:
    """Members of ``base`` satisfying ``pred``; sampling is by rejection."""
    enum = None
    if base.enumerable:
        def enum():
            return (v for v in base.values() if pred(v))

    def sampler(rng):
        for _ in range(_MAX_REJECTIONS):
            v = base.sample(rng)
            if pred(v):
                return v
        raise DomainError(f"rejection sampling from {name} failed")

    return Domain(name, lambda v: v in base and pred(v), enum, sampler if base.samplable else None, base.complete)


def decided(holds: bool, witness: Value = UNIT) -> Domain:
    """The proof-irrelevant evidence set of a decidable proposition."""
    if holds:
        return UNITS if witness == UNIT else singleton(witness)
    return EMPTY

