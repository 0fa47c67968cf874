"""
Pydantic models for the JSON files the CLI reads and writes

Exact rationals travel as "num/den" strings. An exponent is either such a
string or {"terms": [{"m", "n", "s", "c"}]} for alpha^m beta^n s^s * c.
"""
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, field_validator, model_validator

from app.core.exponent import Exponent, exponent_from_json, exponent_to_json
from app.core.scales import ScaleContext, SymbolicScale
from app.mahler.equation import Inconclusive, MahlerEquation, NotFound, Refuted, Verified
from app.series.fracpoly import FracPoly
from app.series.hahn import TruncatedHahnSeries, series_from_json, series_to_json

ExponentJSON = Union[str, int, Dict[str, Any]]


def _rational(value: Any) -> str:
    try:
        return str(Fraction(str(value)))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {value!r}") from exc


def _exponent(value: Any) -> ExponentJSON:
    if isinstance(value, dict):
        terms = value.get("terms")
        if not isinstance(terms, list):
            raise ValueError("exponent object needs a 'terms' list")
        for term in terms:
            if "c" not in term:
                raise ValueError("exponent term needs a coefficient 'c'")
            _rational(term["c"])
        return value
    return _rational(value)


class ScaleModel(BaseModel):
    name: str
    lo: str
    hi: str
    expression: Optional[str] = None
    excluded: List[str] = []

    @field_validator("lo", "hi", mode="before")
    @classmethod
    def exact_bound(cls, v):
        return _rational(v)

    @field_validator("excluded", mode="before")
    @classmethod
    def exact_excluded(cls, v):
        return [_rational(x) for x in v]

    def to_scale(self) -> SymbolicScale:
        return SymbolicScale(
            name=self.name,
            lo=Fraction(self.lo),
            hi=Fraction(self.hi),
            expression=self.expression,
            excluded=tuple(Fraction(x) for x in self.excluded),
        )


class ScalesFile(BaseModel):
    """Registration of symbolic scales; independence must be asserted"""

    alpha: ScaleModel
    beta: Optional[ScaleModel] = None
    shift: Optional[ScaleModel] = None
    independent: bool

    @field_validator("independent")
    @classmethod
    def must_assert(cls, v):
        if not v:
            raise ValueError("symbolic scales must be registered with \"independent\": true")
        return v

    def to_context(self) -> ScaleContext:
        return ScaleContext(
            alpha=self.alpha.to_scale(),
            beta=self.beta.to_scale() if self.beta else None,
            shift=self.shift.to_scale() if self.shift else None,
            independent=self.independent,
        )


class SeriesModel(BaseModel):
    terms: List[Tuple[ExponentJSON, str]] = []
    cutoff: ExponentJSON = "inf"

    @field_validator("terms", mode="before")
    @classmethod
    def exact_terms(cls, v):
        return [(_exponent(e), _rational(c)) for e, c in v]

    @field_validator("cutoff", mode="before")
    @classmethod
    def exact_cutoff(cls, v):
        return "inf" if v in ("inf", None) else _exponent(v)

    def to_series(self, context: Optional[ScaleContext] = None) -> TruncatedHahnSeries:
        return series_from_json(self.model_dump(), context)

    @classmethod
    def from_series(cls, F: TruncatedHahnSeries) -> "SeriesModel":
        return cls(**series_to_json(F))


class BaseSpec(BaseModel):
    """{"p": 3, "q": 2} for a rational base, {"pow": [n, m]} for alpha^n beta^m"""

    p: Optional[int] = None
    q: int = 1
    pow: Optional[Tuple[int, int]] = None

    @model_validator(mode="after")
    def one_form(self):
        if (self.p is None) == (self.pow is None):
            raise ValueError("base needs exactly one of 'p' (with optional 'q') or 'pow'")
        if self.p is not None and (self.p <= 0 or self.q <= 0 or self.p == self.q):
            raise ValueError("rational base needs positive p != q")
        return self

    def to_exponent(self, context: Optional[ScaleContext]) -> Exponent:
        if self.p is not None:
            return Exponent.rational(Fraction(self.p, self.q), context)
        if context is None:
            raise ValueError("a symbolic base needs a --scales registration")
        n, m = self.pow
        return Exponent.monomial(context, n, m)

    @classmethod
    def from_exponent(cls, e: Exponent) -> "BaseSpec":
        if e.rational_value is not None:
            return cls(p=e.rational_value.numerator, q=e.rational_value.denominator)
        (m, n, _k), _c = e.terms[0]
        return cls(pow=(m, n))


CoeffJSON = Union[List[str], SeriesModel]


class EquationModel(BaseModel):
    """
    sum_i coeffs[i](x) F(x^(base^i)) = rhs(x)

    A coefficient is a dense list ["1", "-1", ...] of x^0, x^1, ... or a
    series object without cutoff.
    """

    base: BaseSpec
    coeffs: List[CoeffJSON]
    rhs: Optional[CoeffJSON] = None

    @field_validator("coeffs", mode="before")
    @classmethod
    def dense_exact(cls, v):
        return [[_rational(c) for c in P] if isinstance(P, list) else P for P in v]

    @field_validator("rhs", mode="before")
    @classmethod
    def dense_exact_rhs(cls, v):
        return [_rational(c) for c in v] if isinstance(v, list) else v

    def to_equation(self, context: Optional[ScaleContext] = None) -> MahlerEquation:
        def poly(P: CoeffJSON) -> FracPoly:
            if isinstance(P, list):
                return FracPoly.from_coeffs(Fraction(c) for c in P)
            return FracPoly.of(P.to_series(context))

        rhs = poly(self.rhs) if self.rhs is not None else FracPoly()
        return MahlerEquation(self.base.to_exponent(context), tuple(poly(P) for P in self.coeffs), rhs)

    @classmethod
    def from_equation(cls, eq: MahlerEquation) -> "EquationModel":
        return cls(
            base=BaseSpec.from_exponent(eq.base),
            coeffs=[SeriesModel.from_series(P) for P in eq.coeffs],
            rhs=SeriesModel.from_series(eq.rhs) if not eq.is_homogeneous else None,
        )


class VerdictModel(BaseModel):
    kind: str
    up_to: Optional[ExponentJSON] = None
    at_exponent: Optional[ExponentJSON] = None
    residual_coeff: Optional[str] = None
    reason: Optional[str] = None


def verdict_to_model(verdict) -> VerdictModel:
    if isinstance(verdict, Verified):
        return VerdictModel(kind=verdict.kind, up_to=exponent_to_json(verdict.up_to) if verdict.up_to is not None else "inf")
    if isinstance(verdict, Refuted):
        return VerdictModel(
            kind=verdict.kind,
            at_exponent=exponent_to_json(verdict.at_exponent),
            residual_coeff=str(verdict.residual_coeff),
        )
    if isinstance(verdict, (Inconclusive, NotFound)):
        return VerdictModel(kind=verdict.kind, reason=verdict.reason)
    raise TypeError(f"unknown verdict {verdict!r}")


class CertificateModel(BaseModel):
    kind: str = "Certificate"
    U: SeriesModel
    V: SeriesModel
    theta: ExponentJSON


def exponent_model(e: Optional[Exponent]) -> ExponentJSON:
    return exponent_to_json(e) if e is not None else "inf"


def parse_exponent(value: ExponentJSON, context: Optional[ScaleContext] = None) -> Exponent:
    return exponent_from_json(_exponent(value), context)
