"""
Rational-function certificates V*F - U = 0 below the cutoff, and inner series
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Union

from sympy import QQ
from sympy.polys.rings import ring as polynomial_ring

from app.config import get_settings
from app.core.exponent import Exponent
from app.errors import PreconditionViolation, SupportNotDivisible, WindowTooSmall
from app.linalg.bareiss import INTEGERS, nullspace
from app.mahler.equation import NotFound
from app.series.fracpoly import FracPoly, to_fraction
from app.series.hahn import TruncatedHahnSeries, series_from_terms, series_mul, series_sub

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RationalCertificate:
    """F = U / V below theta, with V(0) = 1"""

    U: TruncatedHahnSeries
    V: FracPoly
    theta: Optional[Exponent]

    kind = "Certificate"


def _integer_support(F: TruncatedHahnSeries) -> Dict[int, Fraction]:
    coeffs = {}
    for e, c in F.terms:
        value = e.rational_value
        if value is None or value.denominator != 1:
            raise PreconditionViolation("certification needs integer exponents", exponent=str(e))
        coeffs[int(value)] = c
    return coeffs


def _hankel_rows(g: Dict[int, Fraction], top: int, degree: int, deg_max: int) -> List[List[int]]:
    """sum_j v_j g_(k-j) = 0 for deg_max < k < top, nonzero rows only"""
    rows = []
    for k in range(deg_max + 1, top):
        row = [g.get(k - j, Fraction(0)) for j in range(degree + 1)]
        if not any(row):
            continue
        den = math.lcm(*(c.denominator for c in row))
        rows.append([int(c * den) for c in row])
    return rows


def certify_rational(
    F: TruncatedHahnSeries,
    deg_max: int,
    margin: Optional[int] = None,
) -> Union[RationalCertificate, NotFound]:
    """
    Find U, V with deg U, deg V <= deg_max and V*F = U below the cutoff

    Args:
        F: series with integer exponents
        deg_max: degree bound for numerator and denominator
        margin: trusted coefficients required beyond 2*deg_max, from settings by default

    Returns:
        RationalCertificate with the least denominator degree, or NotFound
    """
    margin = get_settings().certify_safety_margin if margin is None else margin
    coeffs = _integer_support(F)
    if F.cutoff is None:
        return _exact_certificate(F, coeffs, deg_max)
    if not coeffs:
        return RationalCertificate(TruncatedHahnSeries(), FracPoly.constant(1), F.cutoff)

    v = min(coeffs)
    g = {k - v: c for k, c in coeffs.items()}
    theta = F.cutoff.as_fraction() - v
    top = math.ceil(theta)
    if theta <= 2 * deg_max + margin:
        raise WindowTooSmall("cutoff too low for the degree bound", theta=str(theta), deg_max=deg_max, margin=margin)

    for degree in range(deg_max + 1):
        rows = _hankel_rows(g, top, degree, deg_max)
        kernel = nullspace(rows, INTEGERS) if rows else [[1] + [0] * degree]
        vector = next((vec for vec in kernel if vec[0] != 0), None)
        if vector is None:
            continue
        certificate = _build_certificate(F, g, vector, v, deg_max, top)
        if certificate is not None:
            logger.info(f"Certified rational with denominator degree {certificate.V.terms[-1][0]}")
            return certificate
    return NotFound(f"no rational function with numerator and denominator degree <= {deg_max}")


def _exact_certificate(F: TruncatedHahnSeries, coeffs: Dict[int, Fraction], deg_max: int) -> Union[RationalCertificate, NotFound]:
    """
    Exact input is x^v times a polynomial P, so U = F, V = 1 is the only
    candidate: V*P = U forces deg U >= deg P.
    """
    span = max(coeffs) - min(coeffs) if coeffs else 0
    if span > deg_max:
        return NotFound(f"exact polynomial of degree {span} exceeds the degree bound {deg_max}")
    return RationalCertificate(F, FracPoly.constant(1), None)


def _build_certificate(F, g, vector, v, deg_max, top) -> Optional[RationalCertificate]:
    R, x = polynomial_ring("x", QQ)
    V = R.from_dict({(j,): QQ(c) for j, c in enumerate(vector) if c})
    U = R.zero
    for k in range(min(deg_max + 1, top)):
        c = sum((Fraction(vector[j]) * g.get(k - j, Fraction(0)) for j in range(len(vector)) if j <= k), Fraction(0))
        if c:
            U += QQ(c.numerator, c.denominator) * x ** k
    if U:
        common = U.gcd(V)
        U, V = U.exquo(common), V.exquo(common)
    else:
        V = R.one
    lead = V.coeff(R.one)
    U, V = U.quo_ground(lead), V.quo_ground(lead)

    u_series = series_from_terms(((m[0] + v, to_fraction(c)) for m, c in U.terms()))
    v_series = FracPoly.from_terms((m[0], to_fraction(c)) for m, c in V.terms())
    residual = series_sub(series_mul(v_series, F), u_series)
    if residual.terms:
        logger.debug(f"Candidate denominator rejected at x^({residual.terms[0][0]})")
        return None
    return RationalCertificate(u_series, v_series, F.cutoff)


def extract_inner_series(F: TruncatedHahnSeries, q: int, d: int) -> TruncatedHahnSeries:
    """
    G with G(x^(q^d)) = F

    Raises:
        SupportNotDivisible: an exponent is not a multiple of q^d
    """
    if q < 2 or d < 1:
        raise PreconditionViolation("need q >= 2 and d >= 1", q=q, d=d)
    step = q ** d
    coeffs = _integer_support(F)
    for k in coeffs:
        if k % step:
            raise SupportNotDivisible("exponent not divisible by q^d", witness=k, step=step)
    cutoff = F.cutoff.as_fraction() / step if F.cutoff is not None else None
    return series_from_terms(((k // step, c) for k, c in coeffs.items()), cutoff)
