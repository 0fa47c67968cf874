"""
Rewriting F(x^(A^i B^j)) over a finite window of generators

Given sum_k P_k(x) F(x^(A^k)) = 0 of degree d1 and a B-equation of degree
d2, every generator F(x^(A^i B^j)) is a K(x^(1/L))-linear combination of the
window generators with 0 <= i < d1, 0 <= j < d2. Forward steps solve the
shifted equation for its top term, backward steps for its bottom term.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from app.combination.canonical import canonical_equation
from app.core.exponent import Exponent, exp_mul, exp_pow
from app.core.valuation import lcm_all
from app.errors import CoefficientVanishes, KernelEmpty, PreconditionViolation
from app.linalg.bareiss import left_kernel, polynomial_domain
from app.mahler.equation import MahlerEquation
from app.mahler.reductions import Reduction
from app.series.fracpoly import ExponentEncoder, FracPoly, clear_denominators
from app.series.hahn import TruncatedHahnSeries, series_add, series_mul, series_neg, substitute

logger = logging.getLogger(__name__)

Vector = Tuple


def _check_input(eq: MahlerEquation, label: str):
    if not eq.is_homogeneous:
        raise PreconditionViolation(f"{label} must be homogeneous")
    if eq.coeffs[0].is_zero:
        raise CoefficientVanishes(f"{label} has P_0 = 0, normalize it first", index=0, equation=label)


@dataclass
class SpanBasis:
    """
    Window module for two equations of one series

    rules maps (i, j) outside the window to a vector over the window index
    i * d2 + j whose entries are rational functions in the encoder variables.
    """

    eq_a: MahlerEquation
    eq_b: MahlerEquation
    window_bound: int
    encoder: ExponentEncoder
    rules: Dict[Tuple[int, int], Vector] = field(default_factory=dict)

    @property
    def dims(self) -> Tuple[int, int]:
        return self.eq_a.degree, self.eq_b.degree

    @property
    def reach(self) -> int:
        """R = d1 * d2 * N, the largest |i| and |j| covered"""
        d1, d2 = self.dims
        return d1 * d2 * self.window_bound

    def in_window(self, i: int, j: int) -> bool:
        d1, d2 = self.dims
        return 0 <= i < d1 and 0 <= j < d2

    def window(self) -> List[Tuple[int, int]]:
        d1, d2 = self.dims
        return [(i, j) for i in range(d1) for j in range(d2)]

    def shift(self, i: int, j: int) -> Exponent:
        return exp_mul(exp_pow(self.eq_a.base, i), exp_pow(self.eq_b.base, j))


def _box_exponents(eq_a: MahlerEquation, eq_b: MahlerEquation, reach: int) -> List[Exponent]:
    exponents = []
    coeff_exponents = {e for eq in (eq_a, eq_b) for P in eq.coeffs for e, _ in P.terms}
    for i in range(-reach, reach + 1):
        for j in range(-reach, reach + 1):
            s = exp_mul(exp_pow(eq_a.base, i), exp_pow(eq_b.base, j))
            exponents.extend(exp_mul(e, s) for e in coeff_exponents)
    return exponents


def build_span(eq_a: MahlerEquation, eq_b: MahlerEquation, window_bound: int) -> SpanBasis:
    """
    Rewrite rules for every generator with |i|, |j| <= d1 * d2 * N

    Args:
        eq_a: homogeneous equation in base A with P_0 != 0
        eq_b: homogeneous equation in base B with P_0 != 0
        window_bound: N

    Returns:
        SpanBasis with the rules filled in
    """
    _check_input(eq_a, "first equation")
    _check_input(eq_b, "second equation")
    if eq_a.is_rational_base != eq_b.is_rational_base:
        raise PreconditionViolation("bases must be both rational or both symbolic")
    if not eq_a.is_rational_base:
        context = eq_a.context or eq_b.context
        if context is None or not context.independent:
            raise PreconditionViolation("symbolic bases need the independence assertion")
    if window_bound < 0:
        raise PreconditionViolation("window bound must be nonnegative", window_bound=window_bound)

    d1, d2 = eq_a.degree, eq_b.degree
    reach = d1 * d2 * window_bound
    encoder = ExponentEncoder(_box_exponents(eq_a, eq_b, reach), eq_a.context or eq_b.context)
    span = SpanBasis(eq_a, eq_b, window_bound, encoder)
    if window_bound == 0:
        return span

    for i in range(-reach, reach + 1):
        for j in range(-reach, reach + 1):
            if not span.in_window(i, j):
                span.rules[(i, j)] = reduce_generator(span, i, j)
    logger.info(f"Span built: window {d1}x{d2}, {len(span.rules)} rule(s), L={encoder.L}")
    return span


def _unit(span: SpanBasis, i: int, j: int) -> Vector:
    d2 = span.dims[1]
    size = span.dims[0] * d2
    field_ = span.encoder.field
    return tuple(field_.one if k == i * d2 + j else field_.zero for k in range(size))


def _combine(span: SpanBasis, weighted: List[Tuple[object, Vector]]) -> Vector:
    size = span.dims[0] * span.dims[1]
    out = [span.encoder.field.zero] * size
    for weight, vector in weighted:
        for k in range(size):
            if vector[k]:
                out[k] += weight * vector[k]
    return tuple(out)


def _step(span: SpanBasis, eq: MahlerEquation, shift: Exponent, solve_for: int, neighbours) -> Vector:
    """Solve the equation shifted by x -> x^shift for its term of index solve_for"""
    encoder = span.encoder
    coeffs = [encoder.encode(substitute(P, shift)) if not P.is_zero else encoder.field.zero for P in eq.coeffs]
    pivot = coeffs[solve_for]
    if not pivot:
        raise CoefficientVanishes("rewrite step divides by a zero coefficient", index=solve_for)
    weighted = [(-coeffs[k] / pivot, neighbours(k)) for k in range(len(coeffs)) if k != solve_for and coeffs[k]]
    return _combine(span, weighted)


def reduce_generator(span: SpanBasis, i: int, j: int) -> Vector:
    """Vector over the window representing F(x^(A^i B^j))"""
    if (i, j) in span.rules:
        return span.rules[(i, j)]
    if span.in_window(i, j):
        return _unit(span, i, j)
    d1, d2 = span.dims
    if i >= d1:
        base_i = i - d1
        vector = _step(span, span.eq_a, span.shift(base_i, j), d1, lambda k: reduce_generator(span, base_i + k, j))
    elif i < 0:
        vector = _step(span, span.eq_a, span.shift(i, j), 0, lambda k: reduce_generator(span, i + k, j))
    elif j >= d2:
        base_j = j - d2
        vector = _step(span, span.eq_b, span.shift(i, base_j), d2, lambda k: reduce_generator(span, i, base_j + k))
    else:
        vector = _step(span, span.eq_b, span.shift(i, j), 0, lambda k: reduce_generator(span, i, j + k))
    span.rules[(i, j)] = vector
    logger.debug(f"Reduced generator ({i}, {j})")
    return vector


def rule_residual(span: SpanBasis, i: int, j: int, F: TruncatedHahnSeries) -> TruncatedHahnSeries:
    """
    den * F(x^(A^i B^j)) - sum_k w_k F(x^(window_k)) for the cleared rule

    Zero below the cutoff whenever F satisfies both equations.
    """
    vector = reduce_generator(span, i, j)
    ring = span.encoder.ring
    cleared = clear_denominators(list(vector) + [span.encoder.field.one], ring)
    den = cleared[-1]
    residual = series_mul(span.encoder.decode(den, rescale=False), substitute(F, span.shift(i, j)))
    for k, (wi, wj) in enumerate(span.window()):
        if cleared[k]:
            term = series_mul(span.encoder.decode(cleared[k], rescale=False), substitute(F, span.shift(wi, wj)))
            residual = series_add(residual, series_neg(term))
    return residual


def _total_degree(poly) -> int:
    return max((sum(m) for m in poly.monoms()), default=-1)


def _kernel_key(vector: List) -> tuple:
    return sum(_total_degree(p) for p in vector if p), tuple(str(p) for p in vector)


def combine_bases(
    eq_a: MahlerEquation,
    eq_b: MahlerEquation,
    n: int,
    m: int,
    span: Optional[SpanBasis] = None,
) -> Reduction:
    """
    Equation in base A^n B^m for G(x) = F(x^l)

    Rows F(x^((A^n B^m)^j)), j = 0..d1*d2, are written over the window; a
    left-kernel vector of the cleared rows gives the coefficients, and x -> x^l
    clears the remaining fractional exponents.

    Returns:
        Reduction with the canonical equation and witness l
    """
    if n == 0 and m == 0:
        raise PreconditionViolation("(n, m) must not be (0, 0)")
    if span is None:
        span = build_span(eq_a, eq_b, max(abs(n), abs(m)))
    elif max(abs(n), abs(m)) > span.window_bound:
        raise PreconditionViolation("(n, m) outside the built window", n=n, m=m, window_bound=span.window_bound)

    d1, d2 = span.dims
    ring = span.encoder.ring
    rows = []
    dens = []
    for j in range(d1 * d2 + 1):
        vector = reduce_generator(span, n * j, m * j)
        cleared = clear_denominators(list(vector) + [span.encoder.field.one], ring)
        rows.append(cleared[:-1])
        dens.append(cleared[-1])

    kernel = left_kernel(rows, polynomial_domain(ring))
    if not kernel:
        raise KernelEmpty("no relation among the combined generators", n=n, m=m)
    chosen = min((list(v) for v in kernel), key=_kernel_key)
    coeffs = [z * den for z, den in zip(chosen, dens)]
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    if sum(1 for c in coeffs if c) < 2:
        raise KernelEmpty("kernel vector has fewer than two nonzero entries", n=n, m=m)

    polys = [FracPoly.of(span.encoder.decode(c, rescale=False)) if c else FracPoly() for c in coeffs]
    l = lcm_all(P.denominator for P in polys)
    if l > 1:
        polys = [FracPoly.of(substitute(P, l)) for P in polys]
    base = exp_mul(exp_pow(eq_a.base, n), exp_pow(eq_b.base, m))
    equation = canonical_equation(MahlerEquation(base, tuple(polys), FracPoly()))
    logger.info(f"Combined bases into {base}, degree {equation.degree}, l={l}")
    return Reduction(equation, Exponent.rational(l), f"combine_bases: G(x) = F(x^{l}), base ({n}, {m})")
