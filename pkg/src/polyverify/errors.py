"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class PolyError(Exception):
    """Base class for all package errors."""


class DomainError(PolyError, ValueError):
    """A value was used outside the domain it was required to inhabit."""


class CompositionError(PolyError):
    """Two modules (or contracts) could not be composed because their interfaces differ."""


class NotClosedError(PolyError):
    """A program expected to be closed performed a call."""


class MaterializationError(PolyError):
    """A program tree could not be expanded into a finite comparable form."""


class ModeError(PolyError):
    """Exhaustive checking was requested over a domain that cannot be enumerated."""


class ParseError(PolyError, ValueError):
    """Malformed input document (value literal, wiring file, trace file)."""

    def __init__(self, message: str, path: str = "$", line: int | None = None):
        self.path = path
        self.line = line
        where = f"line {line}" if line is not None else path
        super().__init__(f"{where}: {message}")


class TraceError(PolyError):
    """A machine rejected an input part way through a trace."""

    def __init__(self, index: int, cause: Exception):
        self.index = index
        self.cause = cause
        super().__init__(f"input #{index}: {cause}")


class ContractViolation(PolyError):
    """A monitor observed a step that breaks its contract.

    ``path`` is the sequence of call indices leading to the failing call and
    ``component`` names the parallel side ("left"/"right") when the violation
    came from a component of a parallel monitor.
    """

    def __init__(self, detail: str, path: tuple[int, ...] = (), component: str | None = None):
        self.detail = detail
        self.path = tuple(path)
        self.component = component
        super().__init__(self._message())

    def _message(self) -> str:
        prefix = f"[{self.component}] " if self.component else ""
        return f"{prefix}{self.detail} (path={list(self.path)})"

    def within(self, index: int) -> "ContractViolation":
        return ContractViolation(self.detail, (index, *self.path), self.component)

    def tagged(self, component: str) -> "ContractViolation":
        tag = component if self.component is None else f"{component}.{self.component}"
        return ContractViolation(self.detail, self.path, tag)

    def to_json(self) -> dict:
        return {"detail": self.detail, "path": list(self.path), "component": self.component}
