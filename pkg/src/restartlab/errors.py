"""Exception types raised across the package."""

from __future__ import annotations


class RestartLabError(Exception):
    """Base class for every error raised by restartlab."""


class InvalidParameter(RestartLabError, ValueError):
    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"invalid {field}: {reason}")


class DomainError(RestartLabError, ValueError):
    """An argument lies outside the domain on which a formula is defined."""


class Overflow(RestartLabError, OverflowError):
    """A lambda value or an accumulated sum left the 64-bit working range."""


class Unsupported(RestartLabError, ValueError):
    def __init__(self, kind, reason: str):
        self.kind = kind
        super().__init__(f"unsupported for {kind}: {reason}")


class CapExceeded(RestartLabError):
    """The restart driver ran ``k_cap`` runs without a success.

    The partial trace is attached as ``trace``.
    """

    def __init__(self, k_cap: int, trace=None):
        self.k_cap = k_cap
        self.trace = trace
        super().__init__(f"no success within k_cap={k_cap} runs")
