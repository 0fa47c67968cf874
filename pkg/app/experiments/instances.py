"""
Seeded random instances

Every generator takes a random.Random so a batch is reproduced from its seed.
"""
import logging
import random
from fractions import Fraction
from typing import Tuple

from app.core.exponent import Exponent
from app.core.scales import ScaleContext, SymbolicScale
from app.io.schemas import EquationModel, SeriesModel
from app.mahler.equation import MahlerEquation
from app.series.fracpoly import FracPoly
from app.series.hahn import TruncatedHahnSeries, expand_rational, series_add, series_from_terms, series_scale

logger = logging.getLogger(__name__)


def _coeff(rng: random.Random, bound: int, nonzero: bool = False) -> Fraction:
    while True:
        c = Fraction(rng.randint(-bound, bound))
        if c or not nonzero:
            return c


def random_poly(rng: random.Random, degree: int, bound: int = 5, nonzero: bool = True) -> FracPoly:
    """Dense integer polynomial of degree at most `degree`, nonzero when asked"""
    while True:
        P = FracPoly.from_coeffs(_coeff(rng, bound) for _ in range(degree + 1))
        if not nonzero or not P.is_zero:
            return P


def random_equation(rng: random.Random, base, d: int, deg: int, bound: int = 5) -> MahlerEquation:
    """Homogeneous equation with P_0 and P_d nonzero"""
    base = base if isinstance(base, Exponent) else Exponent.rational(Fraction(base))
    coeffs = [random_poly(rng, deg, bound, nonzero=(i in (0, d))) for i in range(d + 1)]
    return MahlerEquation(base, tuple(coeffs), FracPoly())


def random_series(rng: random.Random, n_terms: int, cutoff: int, bound: int = 9) -> TruncatedHahnSeries:
    """Integer-exponent series with n_terms random coefficients below cutoff"""
    exponents = rng.sample(range(cutoff), min(n_terms, cutoff))
    return series_from_terms(((k, _coeff(rng, bound, nonzero=True)) for k in exponents), cutoff)


def planted_rational(rng: random.Random, degree: int, cutoff: int, bound: int = 5) -> Tuple[FracPoly, FracPoly, TruncatedHahnSeries]:
    """(U, V, expansion of U/V below cutoff) with V(0) = 1"""
    V = FracPoly.from_coeffs([1] + [_coeff(rng, bound) for _ in range(degree)])
    U = random_poly(rng, degree, bound)
    return U, V, expand_rational(U, V, cutoff)


def lacunary_series(cutoff: int, start: int = 0) -> TruncatedHahnSeries:
    """sum_(n >= start) x^(2^n) below cutoff"""
    terms = []
    n = start
    while 2 ** n < cutoff:
        terms.append((2 ** n, 1))
        n += 1
    return series_from_terms(terms, cutoff)


def geometric_series(cutoff, shift=0, step=1) -> TruncatedHahnSeries:
    """x^shift / (1 - x^step) below cutoff"""
    cutoff = Fraction(cutoff)
    terms = []
    k = 0
    while Fraction(shift) + k * Fraction(step) < cutoff:
        terms.append((Fraction(shift) + k * Fraction(step), 1))
        k += 1
    return series_from_terms(terms, cutoff)


def two_class_equation(w: int) -> MahlerEquation:
    """
    Base-2 equation solved by 1/(1-x) and by x^(1/w)/(1-x)

    With u = 1/w: P_0 = x^(3u) - x^u, P_1 = (1 - x^(3u))(1 + x),
    P_2 = -(1 + x)(1 + x^2)(1 - x^u).
    """
    u = Fraction(1, w)
    P0 = FracPoly.from_terms([(3 * u, 1), (u, -1)])
    P1 = FracPoly.from_terms([(0, 1), (1, 1), (3 * u, -1), (1 + 3 * u, -1)])
    one_x = [(0, 1), (1, 1), (2, 1), (3, 1)]
    P2 = FracPoly.from_terms([(e, -c) for e, c in one_x] + [(e + u, c) for e, c in one_x])
    return MahlerEquation(Exponent.rational(2), (P0, P1, P2), FracPoly())


def two_class_series(rng: random.Random, w: int, cutoff: int, bound: int = 5) -> TruncatedHahnSeries:
    """a/(1-x) + b x^(1/w)/(1-x) with random nonzero a, b"""
    a, b = _coeff(rng, bound, nonzero=True), _coeff(rng, bound, nonzero=True)
    return series_add(
        series_scale(geometric_series(cutoff), a),
        series_scale(geometric_series(cutoff, Fraction(1, w)), b),
    )


def independent_context(alpha: Tuple[str, str] = ("1.41", "1.42"), beta: Tuple[str, str] = ("1.73", "1.74")) -> ScaleContext:
    """alpha ~ sqrt(2), beta ~ sqrt(3), registered as algebraically independent"""
    return ScaleContext(
        alpha=SymbolicScale("alpha", Fraction(alpha[0]), Fraction(alpha[1]), expression="sqrt(2)"),
        beta=SymbolicScale("beta", Fraction(beta[0]), Fraction(beta[1]), expression="sqrt(3)"),
        independent=True,
    )


def random_symbolic_equation(
    rng: random.Random,
    context: ScaleContext,
    power: Tuple[int, int],
    d: int = 2,
    max_valuation: int = 6,
) -> MahlerEquation:
    """Equation in base alpha^n beta^m whose coefficients have random distinct valuations"""
    valuations = rng.sample(range(max_valuation + 1), d + 1)
    coeffs = []
    for v in valuations:
        coeffs.append(FracPoly.from_terms([(v, _coeff(rng, 5, nonzero=True)), (v + 1, _coeff(rng, 5))]))
    return MahlerEquation.symbolic(context, power, coeffs)


def sample_instance(kind: str, seed: int, degree: int = 2, cutoff: int = 64) -> dict:
    """Serializable instance for the sample command"""
    rng = random.Random(seed)
    if kind == "series":
        return {"series": SeriesModel.from_series(random_series(rng, cutoff // 2, cutoff)).model_dump()}
    if kind == "equation":
        eq = random_equation(rng, Fraction(3, 2), degree, 4)
        return {"equation": EquationModel.from_equation(eq).model_dump()}
    if kind == "rational":
        U, V, F = planted_rational(rng, degree, cutoff)
        return {
            "U": SeriesModel.from_series(U).model_dump(),
            "V": SeriesModel.from_series(V).model_dump(),
            "series": SeriesModel.from_series(F).model_dump(),
        }
    raise ValueError(f"unknown instance kind {kind!r}")
