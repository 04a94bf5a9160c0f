"""Exception hierarchy shared by models, simulators and the adaptation engine."""

from __future__ import annotations

from typing import Any


class MaceError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(MaceError, ValueError):
    """Configuration is inconsistent or incomplete."""


class PreconditionError(MaceError, ValueError):
    """An operation was called outside its documented domain."""


class NumericalFault(MaceError, RuntimeError):
    """A computation produced non-finite values.

    ``context`` carries whatever locates the fault: the joint index, the
    training or tuning iteration, and for tuning a parameter snapshot taken
    right before the failing step so it can be inspected afterwards.
    """

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.context: dict[str, Any] = context

    def __str__(self) -> str:
        base = super().__str__()
        keys = [k for k in self.context if k != "snapshot"]
        if not keys:
            return base
        detail = ", ".join(f"{k}={self.context[k]!r}" for k in keys)
        return f"{base} ({detail})"


class EmptyCutError(MaceError, ValueError):
    """A hyperplane cut left no (or too few) points."""


class AllZeroScoresError(MaceError, RuntimeError):
    """Every sample of a batch scored exactly zero."""


class RejectionInfeasibleError(MaceError, RuntimeError):
    """The rejection oracle's acceptance rate is too low to be usable."""
