"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class AdiabaticError(ValueError):
    """Base class for errors raised by this package."""


class DimensionMismatchError(AdiabaticError):
    pass


class HermiticityError(AdiabaticError):
    pass


class NormalizationError(AdiabaticError):
    pass


class ConvergenceError(AdiabaticError, ArithmeticError):
    pass


class DegenerateSpectrumError(AdiabaticError):
    def __init__(self, message: str, gap: float | None = None):
        super().__init__(message)
        self.gap = gap


class DegeneratePathError(DegenerateSpectrumError):
    """A step on an operator path has a (near-)degenerate ground state."""

    def __init__(self, step: int, gap: float, s: float | None = None):
        where = f"step {step}" if s is None else f"step {step} (s = {s:.6g})"
        super().__init__(f"degenerate ground state at {where}: gap = {gap:.3e}", gap)
        self.step = step
        self.s = s


class InsufficientDataError(AdiabaticError):
    pass
