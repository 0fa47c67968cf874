"""
Mahler bases (scales) and the context that registers them

A scale is either an exact rational p/q or a named real known through a
rigorous interval of rational endpoints. Symbolic scales registered with a
sympy-parsable expression can be refined on demand.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Tuple, Union

import sympy

from app.errors import InvalidScale

logger = logging.getLogger(__name__)

Enclosure = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class RationalScale:
    """Exact base p/q in lowest terms, p/q > 0 and p/q != 1"""

    p: int
    q: int

    def __post_init__(self):
        if self.p <= 0 or self.q <= 0:
            raise InvalidScale("rational scale must be positive", p=self.p, q=self.q)
        if math.gcd(self.p, self.q) != 1:
            raise InvalidScale("rational scale must be in lowest terms", p=self.p, q=self.q)
        if self.p == self.q:
            raise InvalidScale("a 1-Mahler equation is degenerate", p=self.p, q=self.q)

    @classmethod
    def of(cls, value: Union[Fraction, int, str]) -> "RationalScale":
        value = Fraction(value)
        return cls(value.numerator, value.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def is_symbolic(self) -> bool:
        return False

    @property
    def label(self) -> str:
        return str(self.value)

    def enclosure(self, bits: int = 0) -> Enclosure:
        return self.value, self.value


@lru_cache(maxsize=512)
def _expression_enclosure(expression: str, bits: int) -> Enclosure:
    """Evaluate a sympy expression and widen it to a safe interval of width ~2^-bits"""
    digits = int(bits * math.log10(2)) + 10
    approx = sympy.N(sympy.sympify(expression), digits)
    center = sympy.Rational(approx)
    center = Fraction(int(center.p), int(center.q))
    radius = abs(center) / (2 ** bits) + Fraction(1, 2 ** (bits + 4))
    return center - radius, center + radius


@dataclass(frozen=True)
class SymbolicScale:
    """
    Named real scale known through an enclosing interval

    Args:
        name: identifier used in serialized exponents (alpha, beta, s)
        lo, hi: exact enclosure, 0 < lo < hi unless allow_nonpositive
        expression: optional sympy expression the refiner evaluates
        excluded: rationals the user declared the scale unequal to
        refiner: optional pure function bits -> (lo, hi), overrides expression
    """

    name: str
    lo: Fraction
    hi: Fraction
    expression: Optional[str] = None
    excluded: Tuple[Fraction, ...] = ()
    allow_nonpositive: bool = False
    refiner: Optional[Callable[[int], Enclosure]] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        object.__setattr__(self, "excluded", tuple(Fraction(e) for e in self.excluded))
        if not self.lo < self.hi:
            raise InvalidScale("symbolic scale needs lo < hi", name=self.name, lo=self.lo, hi=self.hi)
        if self.lo <= 0 and not self.allow_nonpositive:
            raise InvalidScale("symbolic scale must be positive", name=self.name, lo=self.lo)
        if self.lo <= 1 <= self.hi and not self.allow_nonpositive:
            # a base that might equal 1 cannot be told apart from the degenerate case
            raise InvalidScale("scale interval contains 1", name=self.name)
        for value in self.excluded:
            if self.lo <= value <= self.hi:
                raise InvalidScale(
                    "scale interval contains a declared-unequal rational",
                    name=self.name, value=value,
                )

    @property
    def is_symbolic(self) -> bool:
        return True

    @property
    def label(self) -> str:
        return self.name

    @property
    def can_refine(self) -> bool:
        return self.refiner is not None or self.expression is not None

    def enclosure(self, bits: int = 0) -> Enclosure:
        """
        Enclosure at the requested precision, always inside the registered interval

        bits <= 0 returns the registered interval.
        """
        if bits <= 0 or not self.can_refine:
            return self.lo, self.hi
        if self.refiner is not None:
            lo, hi = self.refiner(bits)
        else:
            lo, hi = _expression_enclosure(self.expression, bits)
        lo, hi = max(lo, self.lo), min(hi, self.hi)
        if lo > hi:
            raise InvalidScale("refined enclosure left the registered interval", name=self.name)
        logger.debug(f"Refined {self.name} at {bits} bits: width {float(hi - lo):.3e}")
        return lo, hi


Scale = Union[RationalScale, SymbolicScale]


@dataclass(frozen=True)
class ScaleContext:
    """
    Registered scales for one computation

    alpha is always present; beta only for two-base questions. shift is the
    approximation of the distinguished class generator s, when one is used.
    independent records the user's assertion that the symbolic scales (and s)
    are algebraically independent, which makes coefficient identity decide
    equality and integrality.
    """

    alpha: Scale
    beta: Optional[Scale] = None
    shift: Optional[SymbolicScale] = None
    independent: bool = False

    def scale(self, index: int) -> Optional[Scale]:
        return self.alpha if index == 0 else self.beta

    @property
    def is_rational(self) -> bool:
        return not self.alpha.is_symbolic and (self.beta is None or not self.beta.is_symbolic)

    @property
    def has_symbolic(self) -> bool:
        return not self.is_rational


def rational_context(alpha: Union[Fraction, int, str], beta: Optional[Union[Fraction, int, str]] = None) -> ScaleContext:
    """Context for one or two exact rational bases"""
    return ScaleContext(
        alpha=RationalScale.of(alpha),
        beta=RationalScale.of(beta) if beta is not None else None,
    )
