"""
Canonical form of an equation: primitive integer coefficients, no common
polynomial factor, positive leading coefficient on top
"""
import functools
import logging
import math
from fractions import Fraction
from typing import List, Sequence

from app.errors import DegenerateEquation
from app.mahler.equation import MahlerEquation
from app.series.fracpoly import ExponentEncoder, FracPoly
from app.series.hahn import TruncatedHahnSeries, series_scale

logger = logging.getLogger(__name__)


def normalize_content(polys: Sequence[TruncatedHahnSeries]) -> List[FracPoly]:
    """Scale jointly to coprime integer coefficients, top polynomial's highest term positive"""
    coeffs = [c for P in polys for _, c in P.terms]
    if not coeffs:
        return [FracPoly.of(P) for P in polys]
    den = math.lcm(*(c.denominator for c in coeffs))
    num = math.gcd(*(int(c * den) for c in coeffs))
    scale = Fraction(den, num)
    top = next(P for P in reversed(polys) if P.terms)
    if top.terms[-1][1] < 0:
        scale = -scale
    return [FracPoly.of(series_scale(P, scale)) for P in polys]


def canonical_equation(eq: MahlerEquation) -> MahlerEquation:
    """
    Divide out the polynomial gcd of all coefficients (and the rhs), then
    normalize the content. Equivalent equations map to the same result.
    """
    polys = list(eq.coeffs) + ([eq.rhs] if not eq.is_homogeneous else [])
    encoder = ExponentEncoder((e for P in polys for e, _ in P.terms), eq.context)
    encoded = [encoder.encode_poly(P) for P in polys]
    nonzero = [p for p in encoded if p]
    if not nonzero:
        raise DegenerateEquation("all coefficients vanish")
    g = functools.reduce(lambda a, b: a.gcd(b), nonzero)
    reduced = [encoder.decode(p.exquo(g), rescale=False) if p else FracPoly() for p in encoded]
    normalized = normalize_content(reduced)
    coeffs = tuple(normalized[: len(eq.coeffs)])
    rhs = normalized[len(eq.coeffs)] if not eq.is_homogeneous else FracPoly()
    return MahlerEquation(eq.base, coeffs, rhs)


def equation_sort_key(eq: MahlerEquation):
    """Least degree, then least total coefficient degree, then text order"""
    total = Fraction(0)
    for P in eq.coeffs:
        if P.terms and P.terms[-1][0].rational_value is not None:
            total += P.terms[-1][0].rational_value
    return eq.degree, total, str(eq)


def equivalent(a: MahlerEquation, b: MahlerEquation) -> bool:
    return a.base == b.base and canonical_equation(a) == canonical_equation(b)
