"""Wiring diagrams: trees of boxes and external wires that compose to one module.

A box ``b`` provides ``cod(b)`` and depends on one interface ``dom(b)(u)`` per
arity label ``u``; each dependency slot is filled by a sub-diagram. A wire
routes a dependency out to external input ``i``. :func:`compose_wiring`
turns a well-formed diagram into a single implementation of the root box's
interface over the sum of external inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Union

from . import domains as D
from .core import Call, Implementation, Interface, Return, mk_sum_interface, multi_compose
from .domains import Domain
from .errors import CompositionError, DomainError, ParseError
from .values import UNIT, Pair, Tag, Value, dumps, from_json, show, to_json


@dataclass(frozen=True)
class BoxSignature:
    name: str
    arity: Domain
    dom: Callable[[Value], Interface] = field(compare=False)
    cod: Interface

    def labels(self) -> tuple:
        return self.arity.values()

    def dependencies(self) -> Interface:
        return mk_sum_interface(self.arity, self.dom)


@dataclass(frozen=True)
class Wire:
    label: Value


@dataclass(frozen=True, eq=True)
class Box:
    name: str
    children: Mapping = field(default_factory=dict)  # arity label -> diagram

    def __hash__(self):
        return hash((self.name, tuple(self.children.items())))


Diagram = Union[Wire, Box]


def _no_inputs(i):
    raise DomainError(f"no external input {show(i)}")


class Registry:
    """Named boxes, each pinned to one signature and one implementation."""

    def __init__(self, inputs: Domain = D.EMPTY, input_iface: Optional[Callable[[Value], Interface]] = None, name: str = "registry"):
        self.name = name
        self.inputs = inputs
        self.input_iface = input_iface or _no_inputs
        self.boxes: dict = {}

    def register(self, sig: BoxSignature, impl: Implementation) -> "Registry":
        if impl.source != sig.cod:
            raise CompositionError(f"box {sig.name}: implementation provides {impl.source.name}, signature says {sig.cod.name}")
        if impl.target != sig.dependencies():
            raise CompositionError(
                f"box {sig.name}: implementation depends on {impl.target.name}, signature says {sig.dependencies().name}"
            )
        self.boxes[sig.name] = (sig, impl)
        return self

    def signature(self, name: str) -> BoxSignature:
        return self.boxes[name][0]

    def implementation(self, name: str) -> Implementation:
        return self.boxes[name][1]

    def target(self) -> Interface:
        """Interface of all external inputs; every composed diagram depends on it."""
        return mk_sum_interface(self.inputs, self.input_iface)

    def __contains__(self, name):
        return name in self.boxes

    def names(self) -> list:
        return sorted(self.boxes)


def output_interface(d: Diagram, r: Registry) -> Interface:
    if isinstance(d, Wire):
        if d.label not in r.inputs:
            raise DomainError(f"{show(d.label)} is not an external input")
        return r.input_iface(d.label)
    return r.signature(d.name).cod


# -- validation ------------------------------------------------------------------


@dataclass(frozen=True)
class Issue:
    path: str
    kind: str  # unknown-box | unknown-input | arity-gap | extra-child | interface-mismatch
    detail: str

    def __str__(self):
        return f"{self.path}: {self.kind}: {self.detail}"


def validate(d: Diagram, r: Registry) -> list:
    """Problems with ``d`` against ``r``; empty iff ``d`` composes."""
    issues = []

    def go(d, path):
        if isinstance(d, Wire):
            if d.label not in r.inputs:
                issues.append(Issue(path, "unknown-input", f"{show(d.label)} is not an external input"))
            return
        if d.name not in r:
            issues.append(Issue(path, "unknown-box", f"no box named {d.name!r}"))
            return
        sig = r.signature(d.name)
        labels = sig.labels()
        for u in labels:
            if u not in d.children:
                issues.append(Issue(path, "arity-gap", f"{d.name} has no child for {show(u)}"))
        for u, child in d.children.items():
            cpath = f"{path}.children[{show(u)}]"
            if u not in sig.arity:
                issues.append(Issue(path, "extra-child", f"{show(u)} is not an arity label of {d.name}"))
                continue
            go(child, cpath)
            try:
                got = output_interface(child, r)
            except (KeyError, DomainError):
                continue  # already reported below
            want = sig.dom(u)
            if got != want:
                issues.append(Issue(cpath, "interface-mismatch", f"slot expects {want.name}, child provides {got.name}"))

    go(d, "$")
    return issues


# -- composition --------------------------------------------------------------------


def compose_wiring(d: Diagram, r: Registry) -> Implementation:
    """The module a diagram denotes: ``output_interface(d) ⇒ Free r.target()``."""
    issues = validate(d, r)
    if issues:
        raise CompositionError("diagram does not compose:\n  " + "\n  ".join(map(str, issues)))
    target = r.target()
    return _compose(d, r, target)


def _compose(d, r, target):
    if isinstance(d, Wire):
        i = d.label
        return Implementation(r.input_iface(i), target, lambda x: Call(Pair(i, x), Return), f"wire[{show(i)}]")
    sig, impl = r.boxes[d.name]
    parts = {u: _compose(d.children[u], r, target) for u in sig.labels()}
    composite = multi_compose(sig.arity, impl, parts, target=target)
    composite.name = d.name if not parts else f"{d.name}(" + ", ".join(f"{show(u)}={p.name}" for u, p in parts.items()) + ")"
    return composite


# -- file format ----------------------------------------------------------------------


class _Pairs(list):
    """JSON object kept as its raw key/value pairs so duplicates can be reported."""


def _raw(text: str):
    try:
        return json.loads(text, object_pairs_hook=_Pairs)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc


def _plain(obj, path):
    """Convert a raw tree to dicts, rejecting duplicate keys."""
    if isinstance(obj, _Pairs):
        out = {}
        for k, v in obj:
            if k in out:
                raise ParseError(f"duplicate key {k!r}", path)
            out[k] = _plain(v, f"{path}.{k}")
        return out
    if isinstance(obj, list):
        return [_plain(x, f"{path}[{i}]") for i, x in enumerate(obj)]
    return obj


def _label(key: str, path: str) -> Value:
    """Arity labels are keyed by canonical JSON; a bare word ``w`` means ``Tag(w, unit)``."""
    if key.lstrip().startswith("{"):
        try:
            return from_json(json.loads(key), path)
        except json.JSONDecodeError as exc:
            raise ParseError(f"child key is not a value: {exc.msg}", path) from exc
    if key and key.replace("_", "").replace("-", "").isalnum():
        return Tag(key, UNIT)
    raise ParseError(f"child key {key!r} is neither canonical value JSON nor a bare label", path)


def _diagram(obj, r: Registry, path: str) -> Diagram:
    if isinstance(obj, _Pairs):
        keys = [k for k, _ in obj]
        if len(set(keys)) != len(keys):
            dup = next(k for k in keys if keys.count(k) > 1)
            raise ParseError(f"duplicate key {dup!r}", path)
        obj = dict(obj)
    if not isinstance(obj, dict):
        raise ParseError("a diagram must be an object", path)
    if "wire" in obj:
        if set(obj) != {"wire"}:
            raise ParseError(f"unknown fields {sorted(set(obj) - {'wire'})}", path)
        return Wire(from_json(_plain(obj["wire"], f"{path}.wire"), f"{path}.wire"))
    if "box" in obj:
        extra = set(obj) - {"box", "children"}
        if extra:
            raise ParseError(f"unknown fields {sorted(extra)}", path)
        name = obj["box"]
        if not isinstance(name, str):
            raise ParseError("box name must be a string", f"{path}.box")
        if name not in r:
            raise ParseError(f"unknown box {name!r}", f"{path}.box")
        raw_children = obj.get("children", _Pairs())
        if not isinstance(raw_children, _Pairs):
            raise ParseError("children must be an object", f"{path}.children")
        children = {}
        for key, sub in raw_children:
            cpath = f"{path}.children[{key}]"
            u = _label(key, cpath)
            if u in children:
                raise ParseError(f"duplicate child {show(u)}", cpath)
            children[u] = _diagram(sub, r, cpath)
        return Box(name, children)
    raise ParseError("a diagram needs either 'wire' or 'box'", path)


def parse_wiring_file(text: str, r: Registry) -> Diagram:
    return _diagram(_raw(text), r, "$")


def diagram_to_json(d: Diagram) -> dict:
    if isinstance(d, Wire):
        return {"wire": to_json(d.label)}
    return {"box": d.name, "children": {dumps(u): diagram_to_json(c) for u, c in d.children.items()}}


def dump_diagram(d: Diagram) -> str:
    return json.dumps(diagram_to_json(d), sort_keys=True, indent=2, ensure_ascii=False)
