"""
Mahler equations, verdicts and equation checking
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from app.core.exponent import Exponent, exp_pow, merge_contexts
from app.core.scales import RationalScale, ScaleContext
from app.errors import DegenerateEquation, InvalidScale, PreconditionViolation
from app.series.fracpoly import FracPoly
from app.series.hahn import TruncatedHahnSeries, series_add, series_mul, series_neg, substitute

logger = logging.getLogger(__name__)

CoeffLike = Union[FracPoly, TruncatedHahnSeries, Sequence]


def as_frac_poly(value: CoeffLike) -> FracPoly:
    if isinstance(value, TruncatedHahnSeries):
        return FracPoly.of(value)
    return FracPoly.from_coeffs(value)


@dataclass(frozen=True)
class MahlerEquation:
    """
    sum_i P_i(x) F(x^(base^i)) = rhs(x)

    Args:
        base: monomial exponent, an exact rational p/q or alpha^n beta^m
        coeffs: P_0..P_d, P_d nonzero, d >= 1
        rhs: right-hand side A
    """

    base: Exponent
    coeffs: Tuple[FracPoly, ...]
    rhs: FracPoly = FracPoly()

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise DegenerateEquation("a Mahler equation needs degree at least 1", degree=len(self.coeffs) - 1)
        if self.coeffs[-1].is_zero:
            raise PreconditionViolation("top coefficient P_d must be nonzero")
        base = self.base
        if base.rational_value is not None:
            RationalScale.of(base.rational_value)
        else:
            if not base.is_monomial or base.has_shift or base.terms[0][1] != 1:
                raise InvalidScale("symbolic base must be alpha^n beta^m", base=str(base))
            if not base > 0:
                raise InvalidScale("base must be positive", base=str(base))

    @classmethod
    def build(
        cls,
        base: Union[Exponent, Fraction, int, str],
        coeffs: Iterable[CoeffLike],
        rhs: Optional[CoeffLike] = None,
    ) -> "MahlerEquation":
        base = base if isinstance(base, Exponent) else Exponent.rational(Fraction(base))
        return cls(base, tuple(as_frac_poly(c) for c in coeffs), as_frac_poly(rhs) if rhs is not None else FracPoly())

    @classmethod
    def symbolic(cls, context: ScaleContext, power: Tuple[int, int], coeffs: Iterable[CoeffLike], rhs: Optional[CoeffLike] = None) -> "MahlerEquation":
        n, m = power
        return cls.build(Exponent.monomial(context, n, m), coeffs, rhs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_homogeneous(self) -> bool:
        return self.rhs.is_zero

    @property
    def is_rational_base(self) -> bool:
        return self.base.rational_value is not None

    @property
    def rational_base(self) -> Fraction:
        if self.base.rational_value is None:
            raise PreconditionViolation("equation has a symbolic base", base=str(self.base))
        return self.base.rational_value

    @property
    def context(self) -> Optional[ScaleContext]:
        return merge_contexts(self.base, *[e for P in self.coeffs for e, _ in P.terms])

    def base_power(self, i: int) -> Exponent:
        return exp_pow(self.base, i)

    def nonzero_indices(self) -> List[int]:
        return [i for i, P in enumerate(self.coeffs) if not P.is_zero]

    def __str__(self):
        parts = [f"({P})*F(x^({self.base_power(i)}))" for i, P in enumerate(self.coeffs) if not P.is_zero]
        return " + ".join(parts) + f" = {self.rhs}"


@dataclass(frozen=True)
class Verified:
    up_to: Optional[Exponent] = None

    kind = "Verified"


@dataclass(frozen=True)
class Refuted:
    at_exponent: Exponent
    residual_coeff: Fraction

    kind = "Refuted"


@dataclass(frozen=True)
class Inconclusive:
    reason: str

    kind = "Inconclusive"


Verdict = Union[Verified, Refuted, Inconclusive]


def operator_summands(F: TruncatedHahnSeries, eq: MahlerEquation) -> List[TruncatedHahnSeries]:
    """P_i(x) F(x^(base^i)) for every nonzero P_i"""
    summands = []
    for i in eq.nonzero_indices():
        summands.append(series_mul(eq.coeffs[i], substitute(F, eq.base_power(i))))
    return summands


def apply_operator(F: TruncatedHahnSeries, eq: MahlerEquation) -> TruncatedHahnSeries:
    """Residual sum_i P_i F(x^(base^i)) - rhs, exact below its cutoff"""
    residual = series_neg(eq.rhs)
    for summand in operator_summands(F, eq):
        residual = series_add(residual, summand)
    return residual


def check_equation(F: TruncatedHahnSeries, eq: MahlerEquation) -> Verdict:
    """
    Verify a truncated series against an equation

    Returns:
        Refuted at the least nonzero residual exponent, Verified up to the
        combined cutoff, or Inconclusive when that cutoff does not exceed the
        valuation of every summand.
    """
    summands = operator_summands(F, eq)
    residual = series_neg(eq.rhs)
    for summand in summands:
        residual = series_add(residual, summand)
    theta = residual.cutoff

    if residual.terms:
        e, c = residual.terms[0]
        logger.debug(f"Residual {c} at x^({e})")
        return Refuted(e, c)
    if theta is None:
        return Verified(None)

    lowest = [s.terms[0][0] for s in summands if s.terms]
    if eq.rhs.terms:
        lowest.append(eq.rhs.terms[0][0])
    if not lowest:
        return Inconclusive(f"no term of F or A lies below the cutoff {theta}")
    if all(theta <= v for v in lowest):
        return Inconclusive(f"cutoff {theta} does not exceed the valuation of any summand")
    return Verified(theta)


@dataclass(frozen=True)
class NotFound:
    """A search that ended without a result within its bounds"""

    reason: str

    kind = "NotFound"
