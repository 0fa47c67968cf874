"""
Exception hierarchy for the toolkit

Definite negative answers (Refuted, Obstruction, NotFound, Infeasible) are
returned as values. Exceptions are for violated preconditions and for
questions the exact machinery cannot settle.
"""
from typing import Any, Optional


class HahnMahlerError(Exception):
    """Base error, carries an optional structured context for JSON reports"""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.context = context

    def to_dict(self) -> dict:
        payload = {"error": type(self).__name__, "message": str(self)}
        if self.context:
            payload["context"] = {k: str(v) for k, v in sorted(self.context.items())}
        return payload


class PreconditionViolation(HahnMahlerError):
    """An operation was called outside its documented precondition"""


# exponent-core

class ContextMismatch(HahnMahlerError):
    """Two exponents belong to different scale contexts"""


class InvalidScale(HahnMahlerError):
    """Scale construction rejected (p/q = 1, non-positive, bad interval)"""


class RefinementExhausted(HahnMahlerError):
    """Interval evaluation could not separate two distinct symbolic exponents"""


class ZeroInput(HahnMahlerError):
    """Valuation of zero requested"""


class NotRepresentable(HahnMahlerError):
    """Result falls outside the group generated by Q, alpha, beta and s"""


# hahn-series

class ZeroSeries(HahnMahlerError):
    """Valuation of a series without terms"""


class NonPositiveExponentScale(HahnMahlerError):
    """substitute() called with r <= 0"""


class UndecidableMembership(HahnMahlerError):
    """Coset membership of a symbolic exponent cannot be settled by identity"""


# mahler-equations

class AlreadyHomogeneous(HahnMahlerError):
    """homogenize() called on an equation with zero right-hand side"""


class DegenerateEquation(HahnMahlerError):
    """Fewer than two nonzero coefficients"""


class BaseAlreadyAboveOne(HahnMahlerError):
    """invert_base() called on a base > 1"""


class SeedInconsistent(HahnMahlerError):
    """The seeded prefix already violates the equation"""


class AmbiguousContinuation(HahnMahlerError):
    """A free coefficient above the seeded valuation was not seeded"""

    def __init__(self, message: str, exponent: Optional[Any] = None, **context: Any):
        super().__init__(message, exponent=exponent, **context)
        self.exponent = exponent


class SolverLimitExceeded(HahnMahlerError):
    """Propagation produced more terms than the configured cap"""


# support-decomposition

class SymbolicBaseUnsupported(HahnMahlerError):
    """Operation requires a rational base"""


class IrrationalClassPresent(HahnMahlerError):
    """A support class has a representative outside Q"""


# base-combination

class CoefficientVanishes(PreconditionViolation):
    """A rewrite step would divide by a zero coefficient"""

    def __init__(self, message: str, index: Optional[int] = None, **context: Any):
        super().__init__(message, index=index, **context)
        self.index = index


class KernelEmpty(HahnMahlerError):
    """Left kernel unexpectedly trivial"""


class WindowTooSmall(HahnMahlerError):
    """Too few trusted coefficients for the requested unknowns"""


# rationality

class SupportNotDivisible(HahnMahlerError):
    """Some exponent is not divisible by q^d"""

    def __init__(self, message: str, witness: Optional[Any] = None, **context: Any):
        super().__init__(message, witness=witness, **context)
        self.witness = witness


class SymbolicOnly(HahnMahlerError):
    """joint_valuation_consistency needs symbolic independent bases"""
