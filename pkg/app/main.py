"""
Command-line front end

Every subcommand reads JSON files, writes one JSON document to stdout and
exits with 0 (success / Verified), 1 (usage, parse or precondition error),
2 (a definite negative answer) or 3 (Inconclusive).

Usage:
    python -m app verify --series f.json --equation e.json --cutoff 65536
"""
import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel, ValidationError

from app.combination.guess import guess_equation
from app.combination.span import combine_bases
from app.config import get_settings, settings_override
from app.core.exponent import Exponent
from app.core.scales import ScaleContext
from app.errors import HahnMahlerError
from app.experiments.instances import sample_instance
from app.io.schemas import (
    CertificateModel,
    EquationModel,
    ScalesFile,
    SeriesModel,
    exponent_model,
    parse_exponent,
    verdict_to_model,
)
from app.mahler.equation import Inconclusive, MahlerEquation, NotFound, Refuted, Verified, check_equation
from app.mahler.reductions import (
    admissible_valuations,
    homogenize,
    invert_base,
    normalize_leading,
    shift_equation,
    valuation_candidates,
)
from app.mahler.solver import Obstruction, minimal_term_profile, solve_equation
from app.rationality.certify import certify_rational
from app.rationality.lattice import lattice_intersection_filter, padic_witness
from app.rationality.obstruction import Infeasible, joint_valuation_consistency, minimal_exponent_obstruction
from app.series.hahn import TruncatedHahnSeries, series_truncate, substitute, support
from app.support.classes import decompose, rescale_to_lattice
from app.utils.logger import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

Outcome = Tuple[Dict[str, Any], int]


class JobSpec(BaseModel):
    """Effective parameters of one run, echoed in the output header"""

    command: str
    inputs: Dict[str, str]
    cutoff: Optional[str]
    deg_max: int
    d_max: int
    window: int
    precision_cap: int
    seed: Optional[int]
    output: Optional[str]


# input helpers

def _read_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _context(args) -> Optional[ScaleContext]:
    if not args.scales:
        return None
    return ScalesFile.model_validate(_read_json(args.scales)).to_context()


def _series(path: str, args, context) -> TruncatedHahnSeries:
    F = SeriesModel.model_validate(_read_json(path)).to_series(context)
    if args.cutoff is not None:
        F = series_truncate(F, parse_exponent(args.cutoff, context))
    return F


def _equation(path: str, context) -> MahlerEquation:
    return EquationModel.model_validate(_read_json(path)).to_equation(context)


def _equation_json(eq: MahlerEquation) -> dict:
    return EquationModel.from_equation(eq).model_dump()


def _series_json(F: TruncatedHahnSeries) -> dict:
    return SeriesModel.from_series(F).model_dump()


VERDICT_CODES = {Verified: EXIT_OK, Refuted: EXIT_NEGATIVE, Inconclusive: EXIT_INCONCLUSIVE, NotFound: EXIT_NEGATIVE}


def _verdict_outcome(verdict) -> Outcome:
    return verdict_to_model(verdict).model_dump(), VERDICT_CODES[type(verdict)]


# subcommands

def cmd_verify(args, context) -> Outcome:
    F = _series(args.series, args, context)
    eq = _equation(args.equation, context)
    return _verdict_outcome(check_equation(F, eq))


def _obstruction_json(result: Obstruction) -> dict:
    return {
        "kind": result.kind,
        "exponent": exponent_model(result.exponent),
        "position": exponent_model(result.position),
        "reason": result.reason,
        "residual_coeff": str(result.residual_coeff),
        "indices": list(result.indices),
    }


def cmd_solve(args, context) -> Outcome:
    eq = _equation(args.equation, context)
    theta = parse_exponent(args.cutoff or str(get_settings().default_cutoff), context)
    if args.prefix:
        prefix = SeriesModel.model_validate(_read_json(args.prefix)).to_series(context)
        runs = [("prefix", list(prefix.terms))]
    else:
        runs = [
            (str(v), [(v, 1)])
            for v in admissible_valuations(eq)
            if v < theta and (not args.laurent or (v.rational_value is not None and v.rational_value.denominator == 1))
        ]
    results = []
    found = False
    for label, seeds in runs:
        result = solve_equation(eq, seeds, theta, lattice=Fraction(1) if args.laurent else None)
        if isinstance(result, Obstruction):
            results.append({"seed": label, **_obstruction_json(result)})
        else:
            found = found or bool(result.terms)
            results.append({"seed": label, "kind": "Series", "series": _series_json(result)})
    return {"runs": results}, (EXIT_OK if found or not runs else EXIT_NEGATIVE)


def cmd_homogenize(args, context) -> Outcome:
    step = homogenize(_equation(args.equation, context))
    return {"equation": _equation_json(step.equation), "witness": exponent_model(step.witness)}, EXIT_OK


def cmd_normalize(args, context) -> Outcome:
    eq, i = normalize_leading(_equation(args.equation, context))
    return {"equation": _equation_json(eq), "dropped": i}, EXIT_OK


def cmd_invert_base(args, context) -> Outcome:
    step = invert_base(_equation(args.equation, context))
    return {"equation": _equation_json(step.equation), "witness": exponent_model(step.witness)}, EXIT_OK


def cmd_shift(args, context) -> Outcome:
    r = parse_exponent(args.by, context)
    eq = shift_equation(_equation(args.equation, context), r)
    return {"equation": _equation_json(eq), "witness": exponent_model(r)}, EXIT_OK


def _base_arg(value: str, context) -> Exponent:
    return parse_exponent(value, context)


def cmd_decompose(args, context) -> Outcome:
    F = _series(args.series, args, context)
    parts = decompose(F, _base_arg(args.base, context))
    return {
        "classes": [
            {"representative": exponent_model(cls.representative), "part": _series_json(part)}
            for cls, part in parts
        ]
    }, EXIT_OK


def cmd_rescale(args, context) -> Outcome:
    F = _series(args.series, args, context)
    l, G = rescale_to_lattice(F, _base_arg(args.base, context))
    return {"l": l, "series": _series_json(G)}, EXIT_OK


def cmd_combine(args, context) -> Outcome:
    eq_a = _equation(args.equation_a, context)
    eq_b = _equation(args.equation_b, context)
    step = combine_bases(eq_a, eq_b, args.n, args.m)
    payload = {
        "equation": _equation_json(step.equation),
        "witness": exponent_model(step.witness),
        "degree": step.equation.degree,
    }
    if not args.series:
        return payload, EXIT_OK
    F = _series(args.series, args, context)
    payload["verdict"], code = _verdict_outcome(check_equation(substitute(F, step.witness), step.equation))
    return payload, code


def cmd_guess(args, context) -> Outcome:
    F = _series(args.series, args, context)
    result = guess_equation(F, _base_arg(args.base, context), args.d_max, args.deg_max)
    if isinstance(result, NotFound):
        return _verdict_outcome(result)
    return {"kind": "Equation", "equation": _equation_json(result)}, EXIT_OK


def cmd_certify(args, context) -> Outcome:
    F = _series(args.series, args, context)
    result = certify_rational(F, args.deg_max)
    if isinstance(result, NotFound):
        return _verdict_outcome(result)
    return CertificateModel(
        U=SeriesModel.from_series(result.U),
        V=SeriesModel.from_series(result.V),
        theta=exponent_model(result.theta),
    ).model_dump(), EXIT_OK


def cmd_witness(args, context) -> Outcome:
    result = padic_witness(Fraction(args.alpha), Fraction(args.beta), args.prime, args.window)
    if isinstance(result, NotFound):
        return _verdict_outcome(result)
    return {"kind": "Witness", "n": result[0], "m": result[1]}, EXIT_OK


def _pairs(text: str) -> List[Tuple[int, int]]:
    pairs = []
    for chunk in filter(None, text.split(";")):
        n, m = chunk.split(",")
        pairs.append((int(n), int(m)))
    return pairs


def cmd_filter(args, context) -> Outcome:
    F = _series(args.series, args, context)
    kept = lattice_intersection_filter(support(F), _pairs(args.pairs), Fraction(args.alpha), Fraction(args.beta))
    return {"support": [exponent_model(e) for e in kept]}, EXIT_OK


def cmd_obstruct(args, context) -> Outcome:
    eq_a = _equation(args.equation_a, context)
    if args.equation_b is None and eq_a.is_rational_base:
        result = minimal_exponent_obstruction(eq_a)
        if isinstance(result, Obstruction):
            return _obstruction_json(result), EXIT_NEGATIVE
        return {"kind": "Feasible", "valuations": [exponent_model(v) for v in result]}, EXIT_OK
    eq_b = _equation(args.equation_b, context) if args.equation_b else None
    result = joint_valuation_consistency(eq_a, eq_b)
    if isinstance(result, Infeasible):
        ob = result.obstruction
        return {
            "kind": result.kind,
            "base": ob.base,
            "pairs_a": [list(p) for p in ob.pairs_a],
            "pairs_b": [list(p) for p in ob.pairs_b],
            "constraints": list(ob.constraints),
        }, EXIT_NEGATIVE
    return {"kind": "Feasible", "valuations": [exponent_model(v) for v in result]}, EXIT_OK


def cmd_valuations(args, context) -> Outcome:
    eq = _equation(args.equation, context)
    rows = []
    for i, j, v in valuation_candidates(eq):
        row = {"i": i, "j": j, "valuation": exponent_model(v) if v is not None else None}
        if v is not None:
            profile = minimal_term_profile(eq, v)
            row["profile"] = {
                "exponent": exponent_model(profile.exponent),
                "indices": list(profile.indices),
                "combined_coeff": str(profile.combined_coeff),
            }
        rows.append(row)
    return {"candidates": rows, "admissible": [exponent_model(v) for v in admissible_valuations(eq)]}, EXIT_OK


def cmd_sample(args, context) -> Outcome:
    seed = args.seed if args.seed is not None else 0
    cutoff = int(Fraction(args.cutoff)) if args.cutoff else get_settings().default_cutoff
    return sample_instance(args.kind, seed, args.deg_max, cutoff), EXIT_OK


COMMANDS: Dict[str, Callable] = {
    "verify": cmd_verify,
    "solve": cmd_solve,
    "homogenize": cmd_homogenize,
    "normalize": cmd_normalize,
    "invert-base": cmd_invert_base,
    "shift": cmd_shift,
    "decompose": cmd_decompose,
    "rescale": cmd_rescale,
    "combine": cmd_combine,
    "guess": cmd_guess,
    "certify": cmd_certify,
    "witness": cmd_witness,
    "filter": cmd_filter,
    "obstruct": cmd_obstruct,
    "valuations": cmd_valuations,
    "sample": cmd_sample,
}


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cutoff", help="Truncate inputs (or set the solver horizon) at this exponent")
    common.add_argument("--deg-max", type=int, default=settings.default_deg_max)
    common.add_argument("--d-max", type=int, default=settings.default_d_max)
    common.add_argument("--window", type=int, default=settings.default_window)
    common.add_argument("--precision-cap", type=int, default=settings.refinement_cap)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--json", dest="output", help="Also write the JSON document to this path")
    common.add_argument("--scales", help="Scale registration file for symbolic bases")
    common.add_argument("--log-level", default=settings.log_level)

    parser = argparse.ArgumentParser(
        prog="hahn-mahler",
        description="Exact computations with truncated Hahn series and Mahler equations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("verify", "Check a series against an equation")
    p.add_argument("--series", required=True)
    p.add_argument("--equation", required=True)

    p = add("solve", "Propagate coefficients of a homogeneous equation")
    p.add_argument("--equation", required=True)
    p.add_argument("--prefix", help="Series whose terms seed the solver; default: each admissible valuation")
    p.add_argument("--laurent", action="store_true", help="Restrict the solution to integer exponents")

    for name, help_text in (
        ("homogenize", "Homogeneous equation for F(x^q)"),
        ("normalize", "Drop leading zero coefficients"),
        ("invert-base", "Equation with base above one"),
        ("valuations", "Candidate valuations and their minimal-term profiles"),
    ):
        add(name, help_text).add_argument("--equation", required=True)

    p = add("shift", "Equation satisfied by F(x^r)")
    p.add_argument("--equation", required=True)
    p.add_argument("--by", required=True)

    for name, help_text in (("decompose", "Split a series into support classes"), ("rescale", "Push every class into the lattice")):
        p = add(name, help_text)
        p.add_argument("--series", required=True)
        p.add_argument("--base", required=True)

    p = add("combine", "Equation in base A^n B^m from an A- and a B-equation")
    p.add_argument("--equation-a", required=True)
    p.add_argument("--equation-b", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--series", help="Check the result against F(x^l)")

    p = add("guess", "Find an equation from a series prefix")
    p.add_argument("--series", required=True)
    p.add_argument("--base", required=True)

    p = add("certify", "Rational-function certificate")
    p.add_argument("--series", required=True)

    p = add("witness", "p-adic witness pair")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--prime", type=int, required=True)

    p = add("filter", "Lattice intersection of a support")
    p.add_argument("--series", required=True)
    p.add_argument("--pairs", required=True, help="n,m;n,m;...")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)

    p = add("obstruct", "Valuation obstruction for one rational or two symbolic equations")
    p.add_argument("--equation-a", required=True)
    p.add_argument("--equation-b")

    p = add("sample", "Seeded random instance")
    p.add_argument("--kind", choices=("series", "equation", "rational"), required=True)

    return parser


def _job(args) -> JobSpec:
    inputs = {
        key: value
        for key, value in vars(args).items()
        if key in ("series", "equation", "equation_a", "equation_b", "prefix", "scales") and value
    }
    return JobSpec(
        command=args.command,
        inputs=inputs,
        cutoff=args.cutoff,
        deg_max=args.deg_max,
        d_max=args.d_max,
        window=args.window,
        precision_cap=args.precision_cap,
        seed=args.seed,
        output=args.output,
    )


def _execute(args) -> Outcome:
    try:
        context = _context(args)
        return COMMANDS[args.command](args, context)
    except ValidationError as e:
        errors = [{"loc": ".".join(str(x) for x in err["loc"]), "msg": err["msg"]} for err in e.errors()]
        return {"error": "ValidationError", "details": errors}, EXIT_ERROR
    except HahnMahlerError as e:
        return e.to_dict(), EXIT_ERROR
    except (OSError, ValueError) as e:
        return {"error": type(e).__name__, "message": str(e)}, EXIT_ERROR


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    job = _job(args)

    with settings_override(refinement_cap=args.precision_cap) as settings:
        result, code = _execute(args)

    document = json.dumps({"params": job.model_dump(), "result": result}, sort_keys=True, indent=settings.json_indent)
    print(document)
    if job.output:
        with open(job.output, "w", encoding="utf-8") as handle:
            handle.write(document + "\n")
    if code == EXIT_ERROR:
        logger.error(f"{args.command} failed: {result.get('message') or result.get('error')}")
    else:
        logger.info(f"{args.command} finished with exit code {code}")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
