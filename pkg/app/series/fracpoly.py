"""
Fractional-exponent polynomials and their bridge to sympy rational function fields
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.fields import field as rational_function_field

from app.core.exponent import Exponent, Monomial, RationalLike, merge_contexts
from app.core.scales import ScaleContext
from app.errors import NotRepresentable, PreconditionViolation
from app.series.hahn import TruncatedHahnSeries, series_from_terms

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FracPoly(TruncatedHahnSeries):
    """Exact finite series with nonnegative exponents, an element of K[x^(1/l)]"""

    def __post_init__(self):
        super().__post_init__()
        if self.cutoff is not None:
            raise PreconditionViolation("a polynomial coefficient must be exact", cutoff=str(self.cutoff))
        for e, _ in self.terms:
            if e < 0:
                raise PreconditionViolation("polynomial coefficient with a negative exponent", exponent=str(e))

    @classmethod
    def of(cls, series: TruncatedHahnSeries) -> "FracPoly":
        if isinstance(series, FracPoly):
            return series
        return cls(series.terms, series.cutoff)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[RationalLike]) -> "FracPoly":
        """Dense coefficients of 1, x, x^2, ..."""
        return cls.of(series_from_terms((i, c) for i, c in enumerate(coeffs)))

    @classmethod
    def from_terms(cls, terms, cutoff=None, context: Optional[ScaleContext] = None) -> "FracPoly":
        return cls.of(series_from_terms(terms, cutoff, context))

    @classmethod
    def constant(cls, c: RationalLike = 1) -> "FracPoly":
        return cls.of(series_from_terms([(0, c)]))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def denominator(self) -> int:
        """Least l with every exponent in (1/l)Z, taken over each rational coefficient of an exponent"""
        l = 1
        for e, _ in self.terms:
            for _key, c in e.terms:
                l = math.lcm(l, c.denominator)
        return l

    @property
    def lowest_coefficient(self) -> Fraction:
        return self.terms[0][1]


class ExponentEncoder:
    """
    Encode finite series as elements of QQ(y_1, ..., y_r)

    Each monomial alpha^m beta^n occurring in an exponent gets a variable
    y_(m,n) = x^(alpha^m beta^n / L), where L clears every exponent
    denominator. For rational bases there is one variable y = x^(1/L).
    """

    def __init__(self, exponents: Iterable[Exponent], context: Optional[ScaleContext] = None):
        exponents = list(exponents)
        keys = set()
        L = 1
        for e in exponents:
            for (m, n, k), c in e.terms:
                if k:
                    raise NotRepresentable("class generator s cannot be encoded as a polynomial variable")
                keys.add((m, n))
                L = math.lcm(L, c.denominator)
        keys.add((0, 0))
        self.keys: List[Tuple[int, int]] = sorted(keys)
        self.index = {key: i for i, key in enumerate(self.keys)}
        self.L = L
        self.context = context or (merge_contexts(*exponents) if exponents else None)
        names = ",".join(f"y{i}" for i in range(len(self.keys)))
        self.field, *self.gens = rational_function_field(names, QQ)
        self.ring = self.field.ring
        logger.debug(f"Encoder over {len(self.keys)} variable(s), L={L}")

    def _powers(self, e: Exponent) -> List[int]:
        powers = [0] * len(self.keys)
        for (m, n, _k), c in e.terms:
            scaled = c * self.L
            if scaled.denominator != 1 or (m, n) not in self.index:
                raise NotRepresentable("exponent outside the encoder lattice", exponent=str(e), L=self.L)
            powers[self.index[(m, n)]] = int(scaled)
        return powers

    def monomial(self, e: Exponent):
        powers = self._powers(e)
        value = self.field.one
        for gen, power in zip(self.gens, powers):
            if power:
                value *= gen ** power
        return value

    def encode(self, series: TruncatedHahnSeries):
        if not series.is_exact:
            raise PreconditionViolation("only exact finite series can be encoded")
        value = self.field.zero
        for e, c in series.terms:
            value += QQ(c.numerator, c.denominator) * self.monomial(e)
        return value

    def encode_poly(self, series: TruncatedHahnSeries):
        """Ring element for a finite series with nonnegative exponents"""
        value = self.ring.zero
        for e, c in series.terms:
            powers = self._powers(e)
            if any(p < 0 for p in powers):
                raise NotRepresentable("negative power in a polynomial encoding", exponent=str(e))
            term = self.ring.ground_new(QQ(c.numerator, c.denominator))
            for gen, power in zip(self.ring.gens, powers):
                if power:
                    term *= gen ** power
            value += term
        return value

    def decode(self, poly, rescale: bool = True) -> TruncatedHahnSeries:
        """
        Map a ring element back to a series

        Args:
            poly: element of self.ring
            rescale: apply x -> x^L, so y_(m,n) becomes x^(alpha^m beta^n)
        """
        terms = []
        for monom, coeff in poly.terms():
            exponent: Dict[Monomial, Fraction] = {}
            for power, key in zip(monom, self.keys):
                if power:
                    step = Fraction(power) if rescale else Fraction(power, self.L)
                    exponent[(key[0], key[1], 0)] = exponent.get((key[0], key[1], 0), Fraction(0)) + step
            terms.append((Exponent.make(exponent, self.context), to_fraction(coeff)))
        return series_from_terms(terms)


def to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def clear_denominators(row: Sequence, ring) -> List:
    """Multiply a row of field elements by the lcm of its denominators, giving ring elements"""
    common = ring.one
    for value in row:
        if value:
            common = common.lcm(value.denom)
    cleared = []
    for value in row:
        if not value:
            cleared.append(ring.zero)
        else:
            cleared.append(value.numer * common.exquo(value.denom))
    return cleared
