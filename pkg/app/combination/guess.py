"""
Equation guessing: find sum_i P_i(x) F(x^(base^i)) = 0 from a series prefix
"""
import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Union

from app.combination.canonical import canonical_equation, equation_sort_key
from app.config import get_settings
from app.core.exponent import Exponent
from app.errors import DegenerateEquation, PreconditionViolation, SymbolicBaseUnsupported, WindowTooSmall
from app.linalg.bareiss import INTEGERS, nullspace
from app.mahler.equation import MahlerEquation, NotFound, Verified, check_equation
from app.series.fracpoly import FracPoly
from app.series.hahn import TruncatedHahnSeries, series_from_terms

logger = logging.getLogger(__name__)


def _rational_base(base: Union[Exponent, Fraction, int, str]) -> Fraction:
    if isinstance(base, Exponent):
        if base.rational_value is None:
            raise SymbolicBaseUnsupported("guessing needs a rational base", base=str(base))
        return base.rational_value
    return Fraction(base)


def _window(F: TruncatedHahnSeries, alpha: Fraction, d: int) -> Optional[Fraction]:
    """Every x^k F(x^(alpha^i)), i <= d, is exact below this exponent; None when F is exact"""
    if F.cutoff is None:
        return None
    theta = F.cutoff.as_fraction()
    return min(alpha ** i * theta for i in range(d + 1))


def _system(F: TruncatedHahnSeries, alpha: Fraction, d: int, deg: int) -> List[List[int]]:
    """Integer rows, one per exponent below the window, columns (i, k) in order"""
    window = _window(F, alpha, d)
    scaled: List[Dict[Fraction, Fraction]] = []
    for i in range(d + 1):
        scale = alpha ** i
        scaled.append({e.rational_value * scale: c for e, c in F.terms})
    row_exponents = set()
    for i in range(d + 1):
        for e in scaled[i]:
            for k in range(deg + 1):
                if window is None or e + k < window:
                    row_exponents.add(e + k)
    rows = []
    for e in sorted(row_exponents):
        row = [scaled[i].get(e - k, Fraction(0)) for i in range(d + 1) for k in range(deg + 1)]
        den = math.lcm(*(c.denominator for c in row))
        rows.append([int(c * den) for c in row])
    return rows


def _equation_from_vector(base: Fraction, vector: List[int], d: int, deg: int) -> Optional[MahlerEquation]:
    coeffs = [
        FracPoly.of(series_from_terms((k, vector[i * (deg + 1) + k]) for k in range(deg + 1)))
        for i in range(d + 1)
    ]
    while coeffs and coeffs[-1].is_zero:
        coeffs.pop()
    if len(coeffs) < 2:
        return None
    try:
        return canonical_equation(MahlerEquation(Exponent.rational(base), tuple(coeffs), FracPoly()))
    except DegenerateEquation:
        return None


def guess_equation(
    F: TruncatedHahnSeries,
    base: Union[Exponent, Fraction, int, str],
    d_max: int,
    deg_max: int,
    margin: Optional[int] = None,
) -> Union[MahlerEquation, NotFound]:
    """
    Search degrees d = 1..d_max and coefficient degrees 0..deg_max

    Args:
        F: series with rational exponents, exact below its cutoff
        base: rational base
        d_max: largest equation degree tried
        deg_max: largest coefficient degree tried
        margin: rows required beyond the unknown count, from settings by default

    Returns:
        The least candidate (by degree, then coefficient degree) that check_equation
        verifies, or NotFound
    """
    alpha = _rational_base(base)
    if not F.rational_support:
        raise PreconditionViolation("guessing needs rational exponents")
    if d_max < 1 or deg_max < 0:
        raise PreconditionViolation("need d_max >= 1 and deg_max >= 0", d_max=d_max, deg_max=deg_max)
    margin = get_settings().guess_safety_margin if margin is None else margin

    for d in range(1, d_max + 1):
        for deg in range(deg_max + 1):
            unknowns = (d + 1) * (deg + 1)
            rows = _system(F, alpha, d, deg)
            if F.cutoff is not None and len(rows) < unknowns + margin:
                raise WindowTooSmall(
                    "too few trusted exponents for the unknowns",
                    rows=len(rows), unknowns=unknowns, margin=margin, d=d, deg=deg,
                )
            kernel = nullspace(rows, INTEGERS) if rows else [
                [1 if j == k else 0 for j in range(unknowns)] for k in range(unknowns)
            ]
            if not kernel:
                continue
            candidates = []
            for vector in kernel:
                eq = _equation_from_vector(alpha, vector, d, deg)
                if eq is not None and isinstance(check_equation(F, eq), Verified):
                    candidates.append(eq)
            if candidates:
                best = min(candidates, key=equation_sort_key)
                logger.info(f"Guessed a degree {best.degree} equation in base {alpha} (coefficient degree {deg})")
                return best
            logger.debug(f"Kernel of dimension {len(kernel)} at d={d}, deg={deg} gave no verified equation")
    return NotFound(f"no equation with d <= {d_max} and coefficient degree <= {deg_max}")
