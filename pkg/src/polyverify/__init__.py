"""Compositional verification with polynomial interfaces.

Modules are implementations ``p ⇒ Free q``; they compose by substitution
(:func:`kleisli_compose`, :func:`multi_compose`, wiring diagrams), run against
Mealy machines, and carry assume-guarantee contracts that are checked
exhaustively or monitored at run time.
"""

from .values import (
    UNIT, Bool, ConjBoth, ConjLeft, ConjRight, Inl, Inr, List, Nat, Pair, Tag, Unit, Value,
    dumps, from_json, loads, parse_literal, show, to_json,
)
from .errors import (
    CompositionError, ContractViolation, DomainError, MaterializationError, ModeError,
    NotClosedError, ParseError, PolyError, TraceError,
)
from .core import (
    Call, Implementation, Interface, Program, Return, forwarder, implementations_equal, kleisli_compose,
    materialize, multi_compose, programs_equal, run_closed, sequence,
)
from .contracts import (
    CheckReport, Contract, VerifiedImplementation, check_verified, erase, erasure_coherent,
    verified_kleisli_compose, verified_multi_compose,
)
from .machines import Mealy, Trace, bisimilar, prog_to_mealy, run_trace, state_runner
from .monitors import Monitor, prog_to_mealy_monitored, run_monitored_trace
from .wiring import Box, Registry, Wire, compose_wiring, parse_wiring_file

__all__ = [
    "UNIT",
    "Bool",
    "ConjBoth",
    "ConjLeft",
    "ConjRight",
    "Inl",
    "Inr",
    "List",
    "Nat",
    "Pair",
    "Tag",
    "Unit",
    "Value",
    "dumps",
    "from_json",
    "loads",
    "parse_literal",
    "show",
    "to_json",
    "CompositionError",
    "ContractViolation",
    "DomainError",
    "MaterializationError",
    "ModeError",
    "NotClosedError",
    "ParseError",
    "PolyError",
    "TraceError",
    "Call",
    "Implementation",
    "Interface",
    "Program",
    "Return",
    "forwarder",
    "implementations_equal",
    "kleisli_compose",
    "materialize",
    "multi_compose",
    "programs_equal",
    "run_closed",
    "sequence",
    "CheckReport",
    "Contract",
    "VerifiedImplementation",
    "check_verified",
    "erase",
    "erasure_coherent",
    "verified_kleisli_compose",
    "verified_multi_compose",
    "Mealy",
    "Trace",
    "bisimilar",
    "prog_to_mealy",
    "run_trace",
    "state_runner",
    "Monitor",
    "prog_to_mealy_monitored",
    "run_monitored_trace",
    "Box",
    "Registry",
    "Wire",
    "compose_wiring",
    "parse_wiring_file",
]

__version__ = "0.1.0"
