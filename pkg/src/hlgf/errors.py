"""Exception types shared by all modules.

Every error carries the offending datum in ``.datum`` so that callers (and the
command line front end) can report it without parsing the message.
"""

from __future__ import annotations

from typing import Any


class HlgfError(Exception):
    """Base class for every domain error raised by the library."""

    def __init__(self, message: str, datum: Any = None) -> None:
        super().__init__(message)
        self.datum = datum

    @property
    def name(self) -> str:
        return type(self).__name__


class SharedNotSubcomplex(HlgfError):
    pass


class DimensionMismatch(HlgfError):
    pass


class MalformedExpression(HlgfError):
    pass


class BoundaryMismatch(HlgfError):
    pass


class NotComposable(HlgfError):
    pass


class EndpointMismatch(HlgfError):
    pass


class EdgeNotInComplex(HlgfError):
    pass


class FaceNotLabeled(HlgfError):
    pass


class ModelNotFinite(HlgfError):
    pass


class NotClosed(HlgfError):
    pass


class BaseMismatch(HlgfError):
    pass


class BudgetExceeded(HlgfError):
    pass


class InvalidGlobalField(HlgfError):
    pass


class OverlapDisagreement(HlgfError):
    pass


class NotARefinement(HlgfError):
    pass


class ModelLevelUnsupported(HlgfError):
    pass


class NotAClosedSurface(HlgfError):
    pass


class AnchorMismatch(HlgfError):
    pass


class InvalidData(HlgfError):
    """Structurally inconsistent input (missing labels, unknown elements)."""


class Budget:
    """Counter of elementary checks that raises once a limit is crossed."""

    def __init__(self, limit: int | None = None) -> None:
        self.limit = limit
        self.used = 0

    def require(self, amount: int, what: str = "enumeration") -> None:
        """Fail up front if a planned amount of work exceeds the remaining budget."""
        if self.limit is not None and self.used + amount > self.limit:
            raise BudgetExceeded(
                f"{what} needs {amount} checks, budget allows {self.limit - self.used}",
                amount,
            )
        self.used += amount


DEFAULT_BUDGET = 10**7
