"""Exception types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


class QGPError(Exception):
    """Base class for all errors raised by qgp."""


class NotUnit(QGPError, ArithmeticError):
    pass


class SpecMismatch(QGPError, ValueError):
    """Operands live in different coefficient rings."""


class ShapeMismatch(QGPError, ValueError):
    pass


class NoSolution(QGPError):
    """A linear system X·A = B has no solution."""


class NoExtension(QGPError):
    pass


class NotInjectiveInclusion(QGPError, ValueError):
    pass


class NotInjectiveModule(QGPError, ValueError):
    pass


class NotCofibrant(QGPError, ValueError):
    pass


class BlockMismatch(QGPError, ValueError):
    pass


class InternalInvariantBroken(QGPError, AssertionError):
    """A certified postcondition failed; always an implementation bug."""


class ParseError(QGPError, ValueError):
    pass


class ValidationError(QGPError, ValueError):
    def __init__(self, violation):
        super().__init__(str(violation))
        self.violation = violation


class CyclicError(QGPError):
    def __init__(self, cycle):
        super().__init__("quiver has a directed cycle: " + " -> ".join(cycle))
        self.cycle = list(cycle)


class QuiverNameError(QGPError):
    pass


@dataclass(frozen=True)
class Violation:
    """A failed data invariant. ``kind`` is a short tag such as ``"shape"``."""

    kind: str
    detail: str = ""
    where: str | None = None

    def __str__(self):
        loc = f" at {self.where}" if self.where is not None else ""
        return f"{self.kind}{loc}: {self.detail}" if self.detail else f"{self.kind}{loc}"
