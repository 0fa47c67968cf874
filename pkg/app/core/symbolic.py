"""
sympy views of exponents, for arguments that divide by alpha^j - alpha^i
"""
import logging
from fractions import Fraction
from typing import Dict, Optional

import sympy

from app.core.exponent import Exponent, Monomial
from app.core.scales import ScaleContext

logger = logging.getLogger(__name__)

ALPHA, BETA, SHIFT = sympy.symbols("alpha beta s", positive=True)
_GENERATORS = (ALPHA, BETA, SHIFT)


def to_sympy(e: Exponent) -> sympy.Expr:
    expr = sympy.Integer(0)
    for (m, n, k), c in e.terms:
        expr += sympy.Rational(c.numerator, c.denominator) * ALPHA ** m * BETA ** n * SHIFT ** k
    return expr


def from_sympy(expr: sympy.Expr, context: Optional[ScaleContext]) -> Optional[Exponent]:
    """Exponent for a Laurent polynomial in alpha, beta, s; None when expr is not one"""
    expr = sympy.expand(expr)
    terms: Dict[Monomial, Fraction] = {}
    for monomial, coeff in expr.as_coefficients_dict().items():
        if not coeff.is_Rational:
            return None
        powers = monomial.as_powers_dict()
        key = []
        for gen in _GENERATORS:
            power = powers.pop(gen, 0)
            if not sympy.sympify(power).is_Integer:
                return None
            key.append(int(power))
        rest = {b: p for b, p in powers.items() if b != 1}
        if rest or key[2] not in (0, 1):
            return None
        terms[tuple(key)] = terms.get(tuple(key), Fraction(0)) + Fraction(int(coeff.p), int(coeff.q))
    return Exponent.make(terms, context)


def laurent_quotient(numerator: sympy.Expr, denominator: sympy.Expr) -> Optional[sympy.Expr]:
    """numerator / denominator when the quotient is a Laurent polynomial, else None"""
    if denominator == 0:
        return None
    q = sympy.cancel(numerator / denominator)
    _num, den = sympy.fraction(q)
    den_poly = sympy.Poly(den, *_GENERATORS)
    if not den_poly.is_monomial:
        return None
    return sympy.expand(q)
