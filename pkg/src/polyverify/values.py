"""Closed universal value model and its canonical JSON codec.

Every position, response, witness and piece of evidence handled by the
package is one of the immutable constructors below. Equality is structural
and hashing is consistent with it, so values can key dictionaries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable, Union

from .errors import ParseError


@dataclass(frozen=True, slots=True)
class Unit:
    def __repr__(self) -> str:
        return "UNIT"


@dataclass(frozen=True, slots=True)
class Nat:
    n: int

    def __post_init__(self):
        if type(self.n) is not int or self.n < 0:
            raise TypeError(f"Nat requires a nonnegative int, got {self.n!r}")


@dataclass(frozen=True, slots=True)
class Bool:
    b: bool

    def __post_init__(self):
        if type(self.b) is not bool:
            raise TypeError(f"Bool requires a bool, got {self.b!r}")


@dataclass(frozen=True, slots=True)
class Pair:
    fst: "Value"
    snd: "Value"


@dataclass(frozen=True, slots=True)
class List:
    items: tuple

    def __post_init__(self):
        if type(self.items) is not tuple:
            object.__setattr__(self, "items", tuple(self.items))

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


@dataclass(frozen=True, slots=True)
class Tag:
    label: str
    payload: "Value"


@dataclass(frozen=True, slots=True)
class Inl:
    v: "Value"


@dataclass(frozen=True, slots=True)
class Inr:
    v: "Value"


@dataclass(frozen=True, slots=True)
class ConjLeft:
    v: "Value"


@dataclass(frozen=True, slots=True)
class ConjRight:
    v: "Value"


@dataclass(frozen=True, slots=True)
class ConjBoth:
    l: "Value"  # noqa: E741
    r: "Value"


Value = Union[Unit, Nat, Bool, Pair, List, Tag, Inl, Inr, ConjLeft, ConjRight, ConjBoth]
VALUE_TYPES = (Unit, Nat, Bool, Pair, List, Tag, Inl, Inr, ConjLeft, ConjRight, ConjBoth)

UNIT = Unit()
TRUE = Bool(True)
FALSE = Bool(False)
NIL = List(())


def is_value(v: Any) -> bool:
    return isinstance(v, VALUE_TYPES)


def nat(n: int) -> Nat:
    return Nat(n)


def pair(a: Value, b: Value) -> Pair:
    return Pair(a, b)


def tup(*vs: Value) -> Value:
    """Right-nested pairs: ``tup(a, b, c) == Pair(a, Pair(b, c))``."""
    if len(vs) < 2:
        raise ValueError("tup needs at least two components")
    out = vs[-1]
    for v in reversed(vs[:-1]):
        out = Pair(v, out)
    return out


def untup(v: Value, n: int) -> tuple:
    """Inverse of :func:`tup` for an ``n``-component right-nested pair."""
    out = []
    for _ in range(n - 1):
        if not isinstance(v, Pair):
            raise TypeError(f"expected a {n}-tuple, got {show(v)}")
        out.append(v.fst)
        v = v.snd
    out.append(v)
    return tuple(out)


def lst(items: Iterable[Value]) -> List:
    return List(tuple(items))


def cons(x: Value, xs: List) -> List:
    return List((x, *xs.items))


def tag(label: str, payload: Value = UNIT) -> Tag:
    return Tag(label, payload)


# -- conversion to/from plain Python data ---------------------------------


def from_py(obj: Any) -> Value:
    """Convert plain Python data: None→Unit, bool→Bool, int→Nat, list→List, tuple→Pair(s)."""
    if is_value(obj):
        return obj
    if obj is None:
        return UNIT
    if isinstance(obj, bool):
        return Bool(obj)
    if isinstance(obj, int):
        return Nat(obj)
    if isinstance(obj, list):
        return List(tuple(from_py(x) for x in obj))
    if isinstance(obj, tuple):
        if len(obj) == 0:
            return UNIT
        if len(obj) == 1:
            return from_py(obj[0])
        return tup(*(from_py(x) for x in obj))
    raise TypeError(f"cannot convert {type(obj).__name__} to a Value")


def to_py(v: Value) -> Any:
    """Best-effort inverse of :func:`from_py` (pairs become 2-tuples)."""
    if isinstance(v, Unit):
        return None
    if isinstance(v, Nat):
        return v.n
    if isinstance(v, Bool):
        return v.b
    if isinstance(v, Pair):
        return (to_py(v.fst), to_py(v.snd))
    if isinstance(v, List):
        return [to_py(x) for x in v.items]
    if isinstance(v, Tag):
        return (v.label, to_py(v.payload))
    if isinstance(v, (Inl, Inr, ConjLeft, ConjRight)):
        return (type(v).__name__.lower(), to_py(v.v))
    if isinstance(v, ConjBoth):
        return ("both", to_py(v.l), to_py(v.r))
    raise TypeError(f"not a Value: {v!r}")


def show(v: Value) -> str:
    """Compact human-readable rendering used by the CLI text output."""
    if isinstance(v, Unit):
        return "()"
    if isinstance(v, Nat):
        return str(v.n)
    if isinstance(v, Bool):
        return "true" if v.b else "false"
    if isinstance(v, Pair):
        return f"({show(v.fst)}, {show(v.snd)})"
    if isinstance(v, List):
        return "[" + ", ".join(show(x) for x in v.items) + "]"
    if isinstance(v, Tag):
        if isinstance(v.payload, Unit):
            return v.label
        return f"{v.label}({show(v.payload)})"
    if isinstance(v, Inl):
        return f"inl({show(v.v)})"
    if isinstance(v, Inr):
        return f"inr({show(v.v)})"
    if isinstance(v, ConjLeft):
        return f"left({show(v.v)})"
    if isinstance(v, ConjRight):
        return f"right({show(v.v)})"
    if isinstance(v, ConjBoth):
        return f"both({show(v.l)}, {show(v.r)})"
    raise TypeError(f"not a Value: {v!r}")


# -- canonical JSON ---------------------------------------------------------

_INJECTIONS = {"inl": Inl, "inr": Inr, "left": ConjLeft, "right": ConjRight}
_INJECTION_NAMES = {cls: name for name, cls in _INJECTIONS.items()}


def to_json(v: Value) -> dict:
    """Encode ``v`` as its canonical JSON object (a plain dict)."""
    if isinstance(v, Unit):
        return {"t": "unit"}
    if isinstance(v, Nat):
        return {"t": "nat", "v": str(v.n)}
    if isinstance(v, Bool):
        return {"t": "bool", "v": v.b}
    if isinstance(v, Pair):
        return {"t": "pair", "fst": to_json(v.fst), "snd": to_json(v.snd)}
    if isinstance(v, List):
        return {"t": "list", "items": [to_json(x) for x in v.items]}
    if isinstance(v, Tag):
        return {"t": "tag", "label": v.label, "payload": to_json(v.payload)}
    if isinstance(v, ConjBoth):
        return {"t": "both", "l": to_json(v.l), "r": to_json(v.r)}
    name = _INJECTION_NAMES.get(type(v))
    if name is not None:
        return {"t": name, "v": to_json(v.v)}
    raise TypeError(f"not a Value: {v!r}")


_FIELDS = {
    "unit": set(),
    "nat": {"v"},
    "bool": {"v"},
    "pair": {"fst", "snd"},
    "list": {"items"},
    "tag": {"label", "payload"},
    "both": {"l", "r"},
    **{name: {"v"} for name in _INJECTIONS},
}


def from_json(obj: Any, path: str = "$") -> Value:
    """Decode a canonical JSON object; rejects unknown or missing fields."""
    if not isinstance(obj, dict) or "t" not in obj:
        raise ParseError("expected a value object with a 't' field", path)
    t = obj["t"]
    if t not in _FIELDS:
        raise ParseError(f"unknown value type {t!r}", path)
    keys = set(obj) - {"t"}
    if keys != _FIELDS[t]:
        raise ParseError(f"{t}: expected fields {sorted(_FIELDS[t])}, got {sorted(keys)}", path)
    if t == "unit":
        return UNIT
    if t == "nat":
        s = obj["v"]
        if not isinstance(s, str) or not s.isdigit() or not s.isascii() or (len(s) > 1 and s[0] == "0"):
            raise ParseError(f"nat expects a canonical decimal string, got {s!r}", path + ".v")
        return Nat(int(s))
    if t == "bool":
        if not isinstance(obj["v"], bool):
            raise ParseError("bool expects true/false", path + ".v")
        return Bool(obj["v"])
    if t == "pair":
        return Pair(from_json(obj["fst"], path + ".fst"), from_json(obj["snd"], path + ".snd"))
    if t == "list":
        items = obj["items"]
        if not isinstance(items, list):
            raise ParseError("list expects an items array", path + ".items")
        return List(tuple(from_json(x, f"{path}.items[{i}]") for i, x in enumerate(items)))
    if t == "tag":
        if not isinstance(obj["label"], str):
            raise ParseError("tag label must be a string", path + ".label")
        return Tag(obj["label"], from_json(obj["payload"], path + ".payload"))
    if t == "both":
        return ConjBoth(from_json(obj["l"], path + ".l"), from_json(obj["r"], path + ".r"))
    return _INJECTIONS[t](from_json(obj["v"], path + ".v"))


def dumps(v: Value) -> str:
    """Canonical text form: sorted keys, no insignificant whitespace."""
    return json.dumps(to_json(v), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def loads(text: str) -> Value:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    return from_json(obj)


# -- command-line literals --------------------------------------------------

_SHORTHAND_HELP = "unit | nat:N | bool:true | list:[...] | pair:[a,b] | tag:label[:<literal>] | <canonical JSON>"


def parse_literal(text: str) -> Value:
    """Parse a command-line value literal.

    Accepts the canonical JSON encoding, or a shorthand that is normalised to
    it. Inside ``list:``/``pair:`` plain JSON numbers, booleans, arrays and
    null are converted as in :func:`from_py`; nested canonical objects are
    allowed too.
    """
    s = text.strip()
    if s in ("unit", "()"):
        return UNIT
    if s.startswith("{"):
        return loads(s)
    head, sep, rest = s.partition(":")
    if not sep:
        if s.isdigit():
            return Nat(int(s))
        raise ParseError(f"cannot parse value literal {text!r}; expected {_SHORTHAND_HELP}")
    if head == "nat":
        if not rest.isdigit():
            raise ParseError(f"bad nat literal {text!r}")
        return Nat(int(rest))
    if head == "bool":
        if rest not in ("true", "false"):
            raise ParseError(f"bad bool literal {text!r}")
        return Bool(rest == "true")
    if head == "tag":
        label, sep2, payload = rest.partition(":")
        if not label:
            raise ParseError(f"bad tag literal {text!r}")
        return Tag(label, parse_literal(payload) if sep2 else UNIT)
    if head in ("list", "pair"):
        try:
            data = json.loads(rest)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad {head} literal {text!r}: {exc.msg}") from exc
        if not isinstance(data, list):
            raise ParseError(f"{head} literal needs a JSON array")
        items = [_loose(x) for x in data]
        if head == "list":
            return List(tuple(items))
        if len(items) != 2:
            raise ParseError("pair literal needs exactly two components")
        return Pair(items[0], items[1])
    raise ParseError(f"unknown literal prefix {head!r}; expected {_SHORTHAND_HELP}")


def _loose(x: Any) -> Value:
    if isinstance(x, dict):
        return from_json(x)
    if isinstance(x, list):
        return List(tuple(_loose(y) for y in x))
    if isinstance(x, (bool, int)) or x is None:
        return from_py(x)
    raise ParseError(f"unsupported literal component {x!r}")
