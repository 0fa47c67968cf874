"""
Truncated Hahn series with exact rational coefficients

A series stores every term below its cutoff exponent and asserts nothing at
or above it. cutoff=None marks an exact finite series.
"""
from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from app.core.exponent import (
    Exponent,
    RationalLike,
    exp_add,
    exp_compare,
    exp_mul,
    exp_sub,
    exponent_from_json,
    exponent_to_json,
    merge_contexts,
)
from app.core.scales import ScaleContext
from app.errors import (
    NonPositiveExponentScale,
    PreconditionViolation,
    UndecidableMembership,
    ZeroSeries,
)

logger = logging.getLogger(__name__)

Term = Tuple[Exponent, Fraction]
SupportSet = Tuple[Exponent, ...]
ExponentLike = Union[Exponent, RationalLike]

_sort_key = functools.cmp_to_key(lambda a, b: exp_compare(a, b).value)


def _sorted_exponents(exponents: Iterable[Exponent]) -> List[Exponent]:
    exponents = list(exponents)
    if all(e.rational_value is not None for e in exponents):
        return sorted(exponents, key=lambda e: e.rational_value)
    return sorted(exponents, key=_sort_key)


def _min_cutoff(a: Optional[Exponent], b: Optional[Exponent]) -> Optional[Exponent]:
    if a is None:
        return b
    if b is None:
        return a
    return a if a <= b else b


@dataclass(frozen=True)
class TruncatedHahnSeries:
    """
    Exact prefix of a Hahn series

    Args:
        terms: (exponent, coefficient) pairs, strictly increasing, no zeros
        cutoff: exclusive bound, None for an exact finite series
    """

    terms: Tuple[Term, ...] = ()
    cutoff: Optional[Exponent] = None
    rational_support: bool = field(default=True, init=False, compare=False)

    def __post_init__(self):
        rational = all(e.rational_value is not None for e, _ in self.terms)
        if self.cutoff is not None:
            rational = rational and self.cutoff.rational_value is not None
        object.__setattr__(self, "rational_support", rational)

    # construction

    @classmethod
    def from_terms(
        cls,
        terms: Iterable[Tuple[ExponentLike, RationalLike]],
        cutoff: Optional[ExponentLike] = None,
        context: Optional[ScaleContext] = None,
    ) -> "TruncatedHahnSeries":
        return series_from_terms(terms, cutoff, context)

    @classmethod
    def zero(cls, cutoff: Optional[ExponentLike] = None) -> "TruncatedHahnSeries":
        return cls((), Exponent.coerce(cutoff) if cutoff is not None else None)

    @classmethod
    def monomial(cls, exponent: ExponentLike, coeff: RationalLike = 1, cutoff: Optional[ExponentLike] = None) -> "TruncatedHahnSeries":
        return series_from_terms([(exponent, coeff)], cutoff)

    @classmethod
    def polynomial(cls, coeffs: Iterable[RationalLike], cutoff: Optional[ExponentLike] = None) -> "TruncatedHahnSeries":
        """Dense integer-exponent coefficients starting at x^0"""
        return series_from_terms(((i, c) for i, c in enumerate(coeffs)), cutoff)

    # queries

    @property
    def is_exact_zero(self) -> bool:
        return not self.terms and self.cutoff is None

    @property
    def is_known_empty(self) -> bool:
        """No terms below a finite cutoff: zero as far as it is known, not proven zero"""
        return not self.terms and self.cutoff is not None

    @property
    def is_exact(self) -> bool:
        return self.cutoff is None

    @property
    def context(self) -> Optional[ScaleContext]:
        exponents = [e for e, _ in self.terms]
        if self.cutoff is not None:
            exponents.append(self.cutoff)
        return merge_contexts(*exponents) if exponents else None

    def exponents(self) -> SupportSet:
        return tuple(e for e, _ in self.terms)

    def as_dict(self) -> Dict[Exponent, Fraction]:
        return dict(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms)

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_sub(self, other)

    def __neg__(self):
        return series_neg(self)

    def __mul__(self, other):
        if isinstance(other, TruncatedHahnSeries):
            return series_mul(self, other)
        return series_scale(self, other)

    __rmul__ = __mul__

    def __str__(self):
        body = " + ".join(f"{c}*x^({e})" for e, c in self.terms) or "0"
        return f"{body} [< {self.cutoff}]" if self.cutoff is not None else body


def series_from_terms(
    terms: Iterable[Tuple[ExponentLike, RationalLike]],
    cutoff: Optional[ExponentLike] = None,
    context: Optional[ScaleContext] = None,
) -> TruncatedHahnSeries:
    """Canonicalize: merge equal exponents, drop zeros and anything at or above the cutoff, sort"""
    merged: Dict[Exponent, Fraction] = {}
    for e, c in terms:
        e = Exponent.coerce(e, context)
        merged[e] = merged.get(e, Fraction(0)) + Fraction(c)
    theta = Exponent.coerce(cutoff, context) if cutoff is not None else None
    kept = [e for e, c in merged.items() if c != 0 and (theta is None or e < theta)]
    return TruncatedHahnSeries(tuple((e, merged[e]) for e in _sorted_exponents(kept)), theta)


def coefficient(F: TruncatedHahnSeries, e: ExponentLike) -> Fraction:
    e = Exponent.coerce(e)
    if F.cutoff is not None and e >= F.cutoff:
        raise PreconditionViolation("coefficient requested at or above the cutoff", exponent=str(e), cutoff=str(F.cutoff))
    for exp, c in F.terms:
        if exp == e:
            return c
    return Fraction(0)


def support(F: TruncatedHahnSeries) -> SupportSet:
    return F.exponents()


def series_add(F: TruncatedHahnSeries, G: TruncatedHahnSeries) -> TruncatedHahnSeries:
    return series_from_terms(list(F.terms) + list(G.terms), _min_cutoff(F.cutoff, G.cutoff))


def series_neg(F: TruncatedHahnSeries) -> TruncatedHahnSeries:
    return TruncatedHahnSeries(tuple((e, -c) for e, c in F.terms), F.cutoff)


def series_sub(F: TruncatedHahnSeries, G: TruncatedHahnSeries) -> TruncatedHahnSeries:
    return series_add(F, series_neg(G))


def series_scale(F: TruncatedHahnSeries, c: RationalLike) -> TruncatedHahnSeries:
    c = Fraction(c)
    if c == 0:
        return TruncatedHahnSeries((), F.cutoff)
    return TruncatedHahnSeries(tuple((e, v * c) for e, v in F.terms), F.cutoff)


def series_shift(F: TruncatedHahnSeries, e: ExponentLike) -> TruncatedHahnSeries:
    """Multiply by x^e"""
    e = Exponent.coerce(e)
    cutoff = exp_add(F.cutoff, e) if F.cutoff is not None else None
    return TruncatedHahnSeries(tuple((exp_add(x, e), c) for x, c in F.terms), cutoff)


def series_truncate(F: TruncatedHahnSeries, theta: ExponentLike) -> TruncatedHahnSeries:
    theta = _min_cutoff(F.cutoff, Exponent.coerce(theta))
    return TruncatedHahnSeries(tuple((e, c) for e, c in F.terms if e < theta), theta)


def _effective_valuation(F: TruncatedHahnSeries) -> Exponent:
    return F.terms[0][0] if F.terms else F.cutoff


def series_mul(F: TruncatedHahnSeries, G: TruncatedHahnSeries) -> TruncatedHahnSeries:
    """
    Product of truncated series

    The result is exact below min(theta_F + v(G), theta_G + v(F)); an exact
    zero factor gives an exact zero.
    """
    if F.is_exact_zero or G.is_exact_zero:
        return TruncatedHahnSeries()
    cutoff = None
    if F.cutoff is not None:
        cutoff = _min_cutoff(cutoff, exp_add(F.cutoff, _effective_valuation(G)))
    if G.cutoff is not None:
        cutoff = _min_cutoff(cutoff, exp_add(G.cutoff, _effective_valuation(F)))

    if F.rational_support and G.rational_support:
        acc: Dict[Fraction, Fraction] = {}
        for e1, c1 in F.terms:
            x1 = e1.rational_value
            for e2, c2 in G.terms:
                x = x1 + e2.rational_value
                acc[x] = acc.get(x, Fraction(0)) + c1 * c2
        context = F.context or G.context
        return series_from_terms(((Exponent.rational(x, context), c) for x, c in acc.items()), cutoff)

    products = []
    for e1, c1 in F.terms:
        for e2, c2 in G.terms:
            products.append((exp_add(e1, e2), c1 * c2))
    return series_from_terms(products, cutoff)


def _positive_scale(r: ExponentLike) -> Exponent:
    r = Exponent.coerce(r)
    if not r > 0:
        raise NonPositiveExponentScale("substitution x -> x^r needs r > 0", r=str(r))
    return r


def substitute(F: TruncatedHahnSeries, r: ExponentLike) -> TruncatedHahnSeries:
    """x -> x^r for r > 0: every exponent and the cutoff are multiplied by r"""
    r = _positive_scale(r)
    if r == 1:
        return F
    if r.rational_value is not None and F.rational_support:
        k = r.rational_value
        context = r.context
        terms = tuple((Exponent.rational(e.rational_value * k, e.context or context), c) for e, c in F.terms)
        cutoff = Exponent.rational(F.cutoff.rational_value * k, F.cutoff.context or context) if F.cutoff is not None else None
        return TruncatedHahnSeries(terms, cutoff)
    terms = tuple((exp_mul(e, r), c) for e, c in F.terms)
    cutoff = exp_mul(F.cutoff, r) if F.cutoff is not None else None
    return TruncatedHahnSeries(terms, cutoff)


def valuation(F: TruncatedHahnSeries) -> Exponent:
    if not F.terms:
        raise ZeroSeries("valuation of a series without terms", cutoff=str(F.cutoff))
    return F.terms[0][0]


def project(F: TruncatedHahnSeries, predicate: Callable[[Exponent], bool]) -> TruncatedHahnSeries:
    """Keep the terms whose exponent satisfies the predicate; cutoff preserved"""
    return TruncatedHahnSeries(tuple((e, c) for e, c in F.terms if predicate(e)), F.cutoff)


def in_rational_coset(d: Exponent, step: Fraction = Fraction(1)) -> bool:
    """
    Decide d in step*Z

    The class generator s counts as a formal independent symbol; other
    symbolic parts need the independence assertion.
    """
    if d.rational_value is not None:
        return (d.rational_value / step).denominator == 1
    symbolic_scales = any(m or n for (m, n, _), _c in d.terms)
    if not symbolic_scales or (d.context is not None and d.context.independent):
        return False
    raise UndecidableMembership("coset membership of a symbolic exponent is not decided by identity", exponent=str(d))


def project_coset(F: TruncatedHahnSeries, gamma: ExponentLike, step: RationalLike = 1) -> TruncatedHahnSeries:
    """
    Terms with exponent in gamma + step*Z

    Args:
        F: series to project
        gamma: coset representative
        step: lattice generator, Z by default
    """
    gamma = Exponent.coerce(gamma)
    step = Fraction(step)
    return project(F, lambda e: in_rational_coset(exp_sub(e, gamma), step))


def expand_rational(U: TruncatedHahnSeries, V: TruncatedHahnSeries, theta: ExponentLike) -> TruncatedHahnSeries:
    """
    Laurent expansion of U/V below theta

    Args:
        U: finite numerator with integer exponents
        V: finite denominator with integer exponents and V(0) != 0, no negative powers
        theta: integer cutoff

    Returns:
        series exact below theta
    """
    theta = Exponent.coerce(theta)
    for poly in (U, V):
        if not poly.is_exact or any(e.rational_value is None or e.rational_value.denominator != 1 for e, _ in poly.terms):
            raise PreconditionViolation("expand_rational needs exact integer-exponent polynomials")
    v = {int(e.rational_value): c for e, c in V.terms}
    if v.get(0, 0) == 0 or min(v) < 0:
        raise PreconditionViolation("denominator must have a nonzero constant term and no negative powers")
    u = {int(e.rational_value): c for e, c in U.terms}
    top = math.ceil(theta.as_fraction())
    if not u:
        return TruncatedHahnSeries.zero(theta)
    start = min(u)
    coeffs: Dict[int, Fraction] = {}
    for k in range(start, top):
        acc = u.get(k, Fraction(0))
        for j, vj in v.items():
            if j and (k - j) in coeffs:
                acc -= vj * coeffs[k - j]
        coeffs[k] = acc / v[0]
    return series_from_terms(coeffs.items(), theta)


def series_to_json(F: TruncatedHahnSeries) -> dict:
    return {
        "terms": [[exponent_to_json(e), str(c)] for e, c in F.terms],
        "cutoff": exponent_to_json(F.cutoff) if F.cutoff is not None else "inf",
    }


def series_from_json(payload: Mapping, context: Optional[ScaleContext] = None) -> TruncatedHahnSeries:
    cutoff = payload.get("cutoff", "inf")
    theta = None if cutoff in ("inf", None) else exponent_from_json(cutoff, context)
    terms = [(exponent_from_json(e, context), Fraction(c)) for e, c in payload.get("terms", [])]
    return series_from_terms(terms, theta, context)
