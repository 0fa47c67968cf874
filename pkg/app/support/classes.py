"""
Support classes T(s) = alpha^Z s + Z[alpha, 1/alpha] for a rational base

For alpha = p/q in lowest terms Z[alpha, 1/alpha] = Z[1/(pq)], so the class
of a rational s is fixed by its residue u/w modulo Z[1/(pq)] (w prime to pq)
up to multiplication by p/q mod w.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

import sympy

from app.core.exponent import Exponent, ONE
from app.core.scales import RationalScale
from app.core.valuation import lcm_all, split_coprime
from app.errors import IrrationalClassPresent, PreconditionViolation, SymbolicBaseUnsupported
from app.mahler.equation import MahlerEquation, Verdict, Verified, check_equation
from app.mahler.reductions import admissible_valuations
from app.series.hahn import TruncatedHahnSeries, series_from_terms, substitute

logger = logging.getLogger(__name__)

BaseLike = Union[Fraction, int, str, Exponent, RationalScale]


def _rational_base(base: BaseLike) -> Fraction:
    if isinstance(base, RationalScale):
        return base.value
    if isinstance(base, Exponent):
        if base.rational_value is None:
            raise SymbolicBaseUnsupported("support classes need a rational base", base=str(base))
        base = base.rational_value
    base = Fraction(base)
    RationalScale.of(base)
    return base


@dataclass(frozen=True)
class SupportClass:
    """T(representative) for a rational base; representative 0 is Z[alpha, 1/alpha] itself"""

    base: Fraction
    representative: Exponent

    @property
    def is_lattice(self) -> bool:
        return self.representative.is_zero

    @property
    def is_rational(self) -> bool:
        return self.representative.rational_value is not None

    @property
    def modulus(self) -> int:
        """w of the residue u/w, 1 for the lattice class"""
        return self.representative.rational_part().denominator if self.is_rational else 0

    def __str__(self):
        return f"T({self.representative})"


def _residue(r: Fraction, n: int) -> Tuple[int, int]:
    """(u, w) with r - u/w in Z[1/n], gcd(w, n) = 1, 0 <= u < w, u/w reduced"""
    b1, b2 = split_coprime(r.denominator, n)
    if b2 == 1:
        return 0, 1
    u = (r.numerator * pow(b1, -1, b2)) % b2
    g = math.gcd(u, b2)
    return u // g, b2 // g


def _orbit_min(u: int, w: int, p: int, q: int) -> int:
    if w == 1:
        return 0
    step = (p * pow(q, -1, w)) % w
    size = int(sympy.n_order(step, w)) if w > 1 and step != 1 else 1
    best, current = u, u
    for _ in range(size - 1):
        current = (current * step) % w
        best = min(best, current)
    return best


def _normalize_scale_factor(c: Fraction, alpha: Fraction) -> Tuple[Fraction, int]:
    """(c', k) with c = c' * alpha^k and c' in [1, alpha) (or [1, 1/alpha) when alpha < 1)"""
    a = alpha if alpha > 1 else 1 / alpha
    sign = 1 if c > 0 else -1
    c = abs(c)
    k = 0
    while c >= a:
        c /= a
        k += 1
    while c < 1:
        c *= a
        k -= 1
    return sign * c, (k if alpha > 1 else -k)


def canonical_class(e: Exponent, base: BaseLike) -> SupportClass:
    """
    Canonical class of an exponent

    Rational exponents map to the least residue u/w in their orbit.
    Exponents c*s + r have c moved into [1, alpha) along the alpha-orbit and
    the rational part reduced modulo Z[1/(pq)] after the same rescaling.
    """
    alpha = _rational_base(base)
    p, q = alpha.numerator, alpha.denominator
    n = p * q
    if e.rational_value is not None:
        u, w = _residue(e.rational_value, n)
        u = _orbit_min(u, w, p, q)
        return SupportClass(alpha, Exponent.rational(Fraction(u, w)))
    c = e.coefficient((0, 0, 1))
    if c == 0 or any(key not in (ONE, (0, 0, 1)) for key, _ in e.terms):
        raise SymbolicBaseUnsupported("class of an exponent involving symbolic scales", exponent=str(e))
    c_norm, k = _normalize_scale_factor(c, alpha)
    u, w = _residue(e.rational_part() / alpha ** k, n)
    rep = Exponent.make({(0, 0, 1): c_norm, ONE: Fraction(u, w)}, e.context)
    return SupportClass(alpha, rep)


def same_class(a: Exponent, b: Exponent, base: BaseLike) -> bool:
    """Is there m in Z and r in Z[alpha, 1/alpha] with alpha^m a + r = b"""
    a, b = Exponent.coerce(a), Exponent.coerce(b)
    return canonical_class(a, base) == canonical_class(b, base)


def class_orbit_size(cls: SupportClass) -> Optional[int]:
    """Multiplicative order of alpha acting on the class residue; None for classes through s"""
    if not cls.is_rational:
        return None
    w = cls.modulus
    if w == 1:
        return 1
    p, q = cls.base.numerator, cls.base.denominator
    step = (p * pow(q, -1, w)) % w
    return 1 if step == 1 else int(sympy.n_order(step, w))


def _class_sort_key(cls: SupportClass):
    rep = cls.representative
    return (not cls.is_rational, rep.rational_value if cls.is_rational else rep.coefficient((0, 0, 1)), rep.rational_part())


def decompose(F: TruncatedHahnSeries, base: BaseLike) -> List[Tuple[SupportClass, TruncatedHahnSeries]]:
    """
    Split F into its class components

    Returns:
        (class, component) pairs, lattice class first; components sum to F
    """
    alpha = _rational_base(base)
    groups: Dict[SupportClass, list] = {}
    for e, c in F.terms:
        groups.setdefault(canonical_class(e, alpha), []).append((e, c))
    parts = [(cls, series_from_terms(terms, F.cutoff)) for cls, terms in groups.items()]
    parts.sort(key=lambda item: _class_sort_key(item[0]))
    logger.debug(f"Decomposed {len(F)} terms into {len(parts)} class(es)")
    return parts


def class_component_preserves_equation(F: TruncatedHahnSeries, eq: MahlerEquation) -> List[Tuple[SupportClass, Verdict]]:
    """Each class component of a verified solution, checked against the same equation"""
    verdict = check_equation(F, eq)
    if not isinstance(verdict, Verified):
        raise PreconditionViolation("series does not verify against the equation", verdict=verdict.kind)
    return [(cls, check_equation(part, eq)) for cls, part in decompose(F, eq.base)]


def class_count_bound(eq: MahlerEquation) -> List[Exponent]:
    """Candidate minimal exponents per class; every class of a solution meets one of them"""
    return admissible_valuations(eq)


@dataclass(frozen=True)
class DecompositionReport:
    classes: Tuple[SupportClass, ...]
    candidates: Tuple[Exponent, ...]
    verdicts: Tuple[str, ...]
    within_bound: bool
    covered: bool


def decomposition_check(F: TruncatedHahnSeries, eq: MahlerEquation) -> DecompositionReport:
    """Class count against the candidate count, and every class valuation against the candidates"""
    checked = class_component_preserves_equation(F, eq)
    candidates = class_count_bound(eq)
    parts = dict(decompose(F, eq.base))
    covered = all(
        any(same_class(parts[cls].terms[0][0], v, eq.base) for v in candidates)
        for cls, _ in checked
    )
    return DecompositionReport(
        classes=tuple(cls for cls, _ in checked),
        candidates=tuple(candidates),
        verdicts=tuple(v.kind for _, v in checked),
        within_bound=len(checked) <= len(candidates),
        covered=covered,
    )


def rescale_to_lattice(F: TruncatedHahnSeries, base: BaseLike) -> Tuple[int, TruncatedHahnSeries]:
    """
    Smallest l with P(F(x^l)) inside Z[alpha, 1/alpha]

    Returns:
        (l, F(x^l))
    """
    alpha = _rational_base(base)
    moduli = []
    for cls, _part in decompose(F, alpha):
        if not cls.is_rational:
            raise IrrationalClassPresent("a support class has a representative outside Q", representative=str(cls.representative))
        moduli.append(cls.modulus)
    l = lcm_all(moduli)
    return l, substitute(F, l)
