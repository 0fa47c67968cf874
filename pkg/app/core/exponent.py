"""
Exponents: exact elements of the group generated by Q, alpha, beta and s
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from app.config import get_settings
from app.core.scales import Enclosure, ScaleContext
from app.errors import (
    ContextMismatch,
    NotRepresentable,
    PreconditionViolation,
    RefinementExhausted,
    UndecidableMembership,
    ZeroInput,
)

logger = logging.getLogger(__name__)

# (alpha power, beta power, s power); the s power is 0 or 1
Monomial = Tuple[int, int, int]
RationalLike = Union[int, Fraction, str]

ONE: Monomial = (0, 0, 0)


class Ordering(enum.Enum):
    LT = -1
    EQ = 0
    GT = 1


def _collapse(terms: Mapping[Monomial, Fraction], context: Optional[ScaleContext]) -> Tuple[Tuple[Monomial, Fraction], ...]:
    """Fold rational scales into the coefficients and drop zeros, sorted by monomial"""
    merged: Dict[Monomial, Fraction] = {}
    for (m, n, k), c in terms.items():
        c = Fraction(c)
        if c == 0:
            continue
        if k not in (0, 1):
            raise NotRepresentable("class generator s appears with power other than 0 or 1", power=k)
        if context is not None:
            if m and not context.alpha.is_symbolic:
                c *= context.alpha.value ** m
                m = 0
            if n and context.beta is not None and not context.beta.is_symbolic:
                c *= context.beta.value ** n
                n = 0
        if (m or n or k) and context is None:
            raise PreconditionViolation("symbolic exponent needs a scale context", monomial=(m, n, k))
        if n and context.beta is None:
            raise PreconditionViolation("beta power used without a registered beta", monomial=(m, n, k))
        if k and context.shift is None and not context.independent:
            raise PreconditionViolation("class generator s needs a shift scale or an independence assertion")
        key = (m, n, k)
        merged[key] = merged.get(key, Fraction(0)) + c
    return tuple(sorted((key, c) for key, c in merged.items() if c != 0))


@dataclass(frozen=True, eq=False)
class Exponent:
    """
    Finite formal sum of c * alpha^m * beta^n * s^k with exact rational c

    Canonical: sorted by monomial, no zero coefficients, rational scales
    already folded into the coefficient.
    """

    terms: Tuple[Tuple[Monomial, Fraction], ...]
    context: Optional[ScaleContext] = None
    rational_value: Optional[Fraction] = field(default=None, init=False)

    def __post_init__(self):
        if all(key == ONE for key, _ in self.terms):
            value = self.terms[0][1] if self.terms else Fraction(0)
            object.__setattr__(self, "rational_value", value)

    # construction

    @classmethod
    def make(cls, terms: Mapping[Monomial, RationalLike], context: Optional[ScaleContext] = None) -> "Exponent":
        return cls(_collapse({k: Fraction(v) for k, v in terms.items()}, context), context)

    @classmethod
    def rational(cls, value: RationalLike, context: Optional[ScaleContext] = None) -> "Exponent":
        value = Fraction(value)
        return cls(((ONE, value),) if value else (), context)

    @classmethod
    def zero(cls, context: Optional[ScaleContext] = None) -> "Exponent":
        return cls((), context)

    @classmethod
    def monomial(cls, context: ScaleContext, m: int = 0, n: int = 0, k: int = 0, coeff: RationalLike = 1) -> "Exponent":
        return cls.make({(m, n, k): Fraction(coeff)}, context)

    @classmethod
    def coerce(cls, value: Union["Exponent", RationalLike], context: Optional[ScaleContext] = None) -> "Exponent":
        if isinstance(value, Exponent):
            return value
        return cls.rational(value, context)

    # predicates

    @property
    def is_rational(self) -> bool:
        return self.rational_value is not None

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def has_shift(self) -> bool:
        return any(key[2] for key, _ in self.terms)

    def as_fraction(self) -> Fraction:
        if self.rational_value is None:
            raise PreconditionViolation("exponent is not rational", exponent=str(self))
        return self.rational_value

    def coefficient(self, key: Monomial) -> Fraction:
        for k, c in self.terms:
            if k == key:
                return c
        return Fraction(0)

    def rational_part(self) -> Fraction:
        return self.coefficient(ONE)

    def with_context(self, context: Optional[ScaleContext]) -> "Exponent":
        if context is self.context:
            return self
        return Exponent(_collapse(dict(self.terms), context), context)

    # interval evaluation

    def enclosure(self, bits: int = 0) -> Enclosure:
        if self.rational_value is not None:
            return self.rational_value, self.rational_value
        lo_total, hi_total = Fraction(0), Fraction(0)
        for (m, n, k), c in self.terms:
            lo, hi = Fraction(1), Fraction(1)
            if m:
                lo, hi = _imul((lo, hi), _ipow(self.context.alpha.enclosure(bits), m))
            if n:
                lo, hi = _imul((lo, hi), _ipow(self.context.beta.enclosure(bits), n))
            if k:
                if self.context.shift is None:
                    raise RefinementExhausted("class generator s has no numeric approximation")
                lo, hi = _imul((lo, hi), self.context.shift.enclosure(bits))
            lo, hi = (c * lo, c * hi) if c > 0 else (c * hi, c * lo)
            lo_total += lo
            hi_total += hi
        return lo_total, hi_total

    def can_refine(self) -> bool:
        ctx = self.context
        if ctx is None:
            return False
        used = set()
        for (m, n, k), _ in self.terms:
            if m:
                used.add(ctx.alpha)
            if n:
                used.add(ctx.beta)
            if k and ctx.shift is not None:
                used.add(ctx.shift)
        return all(getattr(s, "can_refine", False) for s in used if s.is_symbolic)

    # operators

    def __add__(self, other):
        return exp_add(self, Exponent.coerce(other, self.context))

    __radd__ = __add__

    def __neg__(self):
        return exp_neg(self)

    def __sub__(self, other):
        return exp_sub(self, Exponent.coerce(other, self.context))

    def __rsub__(self, other):
        return exp_sub(Exponent.coerce(other, self.context), self)

    def __mul__(self, other):
        if isinstance(other, Exponent):
            return exp_mul(self, other)
        c = Fraction(other)
        return Exponent(tuple((key, v * c) for key, v in self.terms) if c else (), self.context)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.rational_value is not None and self.rational_value == other
        if not isinstance(other, Exponent):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self.rational_value is not None:
            return hash(self.rational_value)
        return hash(self.terms)

    def __lt__(self, other):
        return exp_compare(self, Exponent.coerce(other, self.context)) is Ordering.LT

    def __le__(self, other):
        return exp_compare(self, Exponent.coerce(other, self.context)) is not Ordering.GT

    def __gt__(self, other):
        return exp_compare(self, Exponent.coerce(other, self.context)) is Ordering.GT

    def __ge__(self, other):
        return exp_compare(self, Exponent.coerce(other, self.context)) is not Ordering.LT

    def __str__(self):
        if self.rational_value is not None:
            return str(self.rational_value)
        parts = []
        for (m, n, k), c in self.terms:
            factors = []
            if m:
                factors.append(self.context.alpha.label + (f"^{m}" if m != 1 else ""))
            if n:
                factors.append(self.context.beta.label + (f"^{n}" if n != 1 else ""))
            if k:
                factors.append("s")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"Exponent({self})"


def _imul(a: Enclosure, b: Enclosure) -> Enclosure:
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(products), max(products)


def _ipow(a: Enclosure, k: int) -> Enclosure:
    lo, hi = a
    if k < 0:
        lo, hi = 1 / hi, 1 / lo
        k = -k
    return lo ** k, hi ** k


def merge_contexts(*exponents: Exponent) -> Optional[ScaleContext]:
    """Common context of the operands; None-context operands are pure rationals and adapt"""
    context = None
    for e in exponents:
        if e.context is None:
            continue
        if context is None:
            context = e.context
        elif e.context != context:
            raise ContextMismatch("exponents belong to different scale contexts", left=str(context), right=str(e.context))
    return context


def exp_add(a: Exponent, b: Exponent) -> Exponent:
    if a.rational_value is not None and b.rational_value is not None:
        return Exponent.rational(a.rational_value + b.rational_value, a.context or b.context)
    context = merge_contexts(a, b)
    terms: Dict[Monomial, Fraction] = dict(a.terms)
    for key, c in b.terms:
        terms[key] = terms.get(key, Fraction(0)) + c
    return Exponent.make(terms, context)


def exp_neg(a: Exponent) -> Exponent:
    return Exponent(tuple((key, -c) for key, c in a.terms), a.context)


def exp_sub(a: Exponent, b: Exponent) -> Exponent:
    return exp_add(a, exp_neg(b))


def exp_div_rational(a: Exponent, c: RationalLike) -> Exponent:
    c = Fraction(c)
    if c == 0:
        raise ZeroInput("division of an exponent by zero")
    return Exponent(tuple((key, v / c) for key, v in a.terms), a.context)


def exp_scale_mul(a: Exponent, k: Tuple[int, int], context: Optional[ScaleContext] = None) -> Exponent:
    """
    Multiply an exponent by alpha^m * beta^n

    Args:
        a: exponent to scale
        k: the power pair (m, n)
        context: scale context, defaults to the exponent's own

    Returns:
        Canonical exponent with every monomial shifted by (m, n)
    """
    m, n = k
    context = context or a.context
    if (m or n) and context is None:
        raise PreconditionViolation("scaling by a base power needs a scale context")
    return Exponent.make({(u + m, v + n, s): c for (u, v, s), c in a.terms}, context)


def exp_mul(a: Exponent, b: Exponent) -> Exponent:
    if a.rational_value is not None and b.rational_value is not None:
        return Exponent.rational(a.rational_value * b.rational_value, a.context or b.context)
    context = merge_contexts(a, b)
    terms: Dict[Monomial, Fraction] = {}
    for (m1, n1, k1), c1 in a.terms:
        for (m2, n2, k2), c2 in b.terms:
            if k1 + k2 > 1:
                raise NotRepresentable("product contains s^2", left=str(a), right=str(b))
            key = (m1 + m2, n1 + n2, k1 + k2)
            terms[key] = terms.get(key, Fraction(0)) + c1 * c2
    return Exponent.make(terms, context)


def exp_pow(a: Exponent, k: int) -> Exponent:
    """Integer power of a monomial exponent (a base power, a rational, or c*s)"""
    if a.rational_value is not None:
        if a.rational_value == 0 and k < 0:
            raise ZeroInput("negative power of zero")
        return Exponent.rational(a.rational_value ** k, a.context)
    if not a.is_monomial:
        raise NotRepresentable("power of a non-monomial exponent", exponent=str(a))
    (m, n, s), c = a.terms[0]
    if k == 0:
        return Exponent.rational(1, a.context)
    if s * k not in (0, 1):
        raise NotRepresentable("power of s outside {0, 1}", power=s * k)
    return Exponent.make({(m * k, n * k, s * k): c ** k}, a.context)


def exp_div_monomial(a: Exponent, b: Exponent) -> Exponent:
    """a / b for b a nonzero monomial without s"""
    if b.rational_value is not None:
        return exp_div_rational(a, b.rational_value)
    if not b.is_monomial or b.has_shift:
        raise NotRepresentable("division by a non-monomial exponent", divisor=str(b))
    (m, n, _), c = b.terms[0]
    return exp_div_rational(exp_scale_mul(a, (-m, -n), merge_contexts(a, b)), c)


def _sign(d: Exponent) -> int:
    if d.rational_value is not None:
        return (d.rational_value > 0) - (d.rational_value < 0)
    settings = get_settings()
    lo, hi = d.enclosure(0)
    if lo > 0:
        return 1
    if hi < 0:
        return -1
    if not d.can_refine():
        raise RefinementExhausted("registered intervals do not separate and cannot be refined", difference=str(d))
    bits = settings.initial_precision_bits
    for _ in range(settings.refinement_cap):
        lo, hi = d.enclosure(bits)
        logger.debug(f"Comparing at {bits} bits: [{float(lo):.6g}, {float(hi):.6g}]")
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2
        if bits > settings.max_precision_bits:
            break
    raise RefinementExhausted(
        "interval evaluation failed to separate distinct exponents; the supplied scales may be dependent",
        difference=str(d), bits=bits,
    )


def exp_compare(a: Exponent, b: Exponent) -> Ordering:
    """
    Total order on exponents

    Rationals compare exactly. Otherwise identical canonical forms are EQ and
    distinct ones are separated by refining interval evaluation of a - b.
    """
    if a.rational_value is not None and b.rational_value is not None:
        x, y = a.rational_value, b.rational_value
        return Ordering.LT if x < y else Ordering.GT if x > y else Ordering.EQ
    d = exp_sub(a, b)
    if d.is_zero:
        return Ordering.EQ
    return Ordering(_sign(d))


def exp_min(values: Iterable[Exponent]) -> Exponent:
    best = None
    for v in values:
        if best is None or v < best:
            best = v
    if best is None:
        raise PreconditionViolation("minimum of an empty exponent set")
    return best


def exp_max(values: Iterable[Exponent]) -> Exponent:
    best = None
    for v in values:
        if best is None or v > best:
            best = v
    if best is None:
        raise PreconditionViolation("maximum of an empty exponent set")
    return best


def is_integer(a: Exponent) -> bool:
    """Integrality; symbolic parts decide by identity only under declared independence"""
    if a.rational_value is not None:
        return a.rational_value.denominator == 1
    if a.context is not None and a.context.independent:
        return False
    raise UndecidableMembership("integrality of a symbolic exponent without an independence assertion", exponent=str(a))


def exponent_to_json(a: Exponent) -> Union[str, dict]:
    if a.rational_value is not None:
        return str(a.rational_value)
    return {"terms": [{"m": m, "n": n, "s": k, "c": str(c)} for (m, n, k), c in a.terms]}


def exponent_from_json(payload: Union[str, int, dict], context: Optional[ScaleContext] = None) -> Exponent:
    if isinstance(payload, (str, int)):
        return Exponent.rational(Fraction(payload), context)
    terms = {(int(t["m"]), int(t.get("n", 0)), int(t.get("s", 0))): Fraction(t["c"]) for t in payload["terms"]}
    return Exponent.make(terms, context)
