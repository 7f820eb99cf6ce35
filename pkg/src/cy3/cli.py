"""File-driven front end.

A problem file is a JSON object with keys "cubic" (monomial-coefficient map,
missing monomials are 0), "c2" (three integers, not all zero), optional
"matrices" (3x3 integer matrices of determinant +-1), and optional "bound".
Reports are emitted as JSON or text with every exact value rendered losslessly.

Exit codes: 0 definitive verdict, 1 input error, 2 geometric inconsistency,
3 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .core_arith import QuadSurd
from .cubic_geometry import (
    FULL_JORDAN,
    QuadricLine,
    RelationReport,
    ThreeLines,
    UnipotentSplit,
    check_hyperbolic_relations,
    check_unipotent_relations,
    hyperbolic_factorization,
    quadric_signature,
    singular_locus,
    unipotent_factorization,
)
from .element_classify import (
    FiniteOrder,
    Hyperbolic,
    Identity,
    OutOfTheory,
    UnipotentDeficient,
    UnipotentFull,
    classify,
)
from .errors import (
    BoundTooLarge,
    Cy3Error,
    GeometricInconsistency,
    NotUnimodular,
    ParseError,
    RelationsNotVerified,
    ValidationError,
)
from .group_structure import (
    CharacterWitness,
    GroupVerdict,
    TauWitness,
    analyze_group,
    enumerate_symmetries,
)
from .lattice_forms import (
    MONOMIAL_INDICES,
    LatticeMap,
    LinearForm,
    TrilinearForm,
    preserves_pair,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_GEOMETRIC = 2
EXIT_INCONCLUSIVE = 3

COMMANDS = ("classify", "factor", "analyze", "enumerate")

PROBLEM_KEYS = {"cubic", "c2", "matrices", "bound"}


@dataclass(frozen=True)
class ProblemFile:
    cubic: TrilinearForm
    c2: LinearForm
    matrices: tuple[LatticeMap, ...]
    bound: int | None


def parse_problem(text: str) -> ProblemFile:
    """Parse and validate a problem file; all invariant violations are named."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError("top-level value must be a JSON object")
    unknown = set(data) - PROBLEM_KEYS
    if unknown:
        raise ValidationError(f"unknown keys: {sorted(unknown)}")

    cubic_raw = data.get("cubic", {})
    if not isinstance(cubic_raw, dict):
        raise ValidationError("'cubic' must be an object of monomial coefficients")
    bad = set(cubic_raw) - set(MONOMIAL_INDICES)
    if bad:
        raise ValidationError(f"unknown monomial keys: {sorted(bad)}")
    for key, value in cubic_raw.items():
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValidationError(f"monomial coefficient '{key}' must be an integer")
    cubic = TrilinearForm.from_cubic_coefficients(cubic_raw)

    c2_raw = data.get("c2")
    if (
        not isinstance(c2_raw, list)
        or len(c2_raw) != 3
        or any(not isinstance(x, int) or isinstance(x, bool) for x in c2_raw)
    ):
        raise ValidationError("'c2' must be an array of 3 integers")
    c2 = LinearForm(*c2_raw)
    if c2.is_zero():
        raise ValidationError(
            "c2 = 0 is rejected: the pairing with the second Chern class is "
            "assumed nonzero"
        )

    matrices = []
    for i, m in enumerate(data.get("matrices", [])):
        if (
            not isinstance(m, list)
            or len(m) != 3
            or any(
                not isinstance(r, list)
                or len(r) != 3
                or any(not isinstance(x, int) or isinstance(x, bool) for x in r)
                for r in m
            )
        ):
            raise ValidationError(f"matrix {i} must be a 3x3 integer array")
        try:
            matrices.append(LatticeMap(m))
        except NotUnimodular as exc:
            raise ValidationError(f"matrix {i} is not unimodular: {exc}") from exc

    bound = data.get("bound")
    if bound is not None and (not isinstance(bound, int) or isinstance(bound, bool)):
        raise ValidationError("'bound' must be an integer")
    return ProblemFile(cubic=cubic, c2=c2, matrices=tuple(matrices), bound=bound)


# -- rendering -------------------------------------------------------------------


def render_scalar(x) -> str:
    if isinstance(x, QuadSurd):
        return str(x)
    return str(Fraction(x))


def render_vector(v) -> list[str]:
    return [render_scalar(x) for x in v]


def render_matrix_exact(m) -> list[list[str]]:
    return [[render_scalar(x) for x in row] for row in m]


def render_relation_report(report: RelationReport) -> dict:
    return {
        "rows": [
            {
                "name": r.name,
                "left": render_scalar(r.left),
                "right": render_scalar(r.right),
                "holds": r.holds,
            }
            for r in report.rows
        ],
        "overall": report.overall,
    }


def render_class(cls) -> dict:
    if isinstance(cls, Identity):
        return {"kind": "Identity"}
    if isinstance(cls, FiniteOrder):
        return {"kind": "FiniteOrder", "n": cls.n, "lambda": cls.lambda_tag}
    if isinstance(cls, Hyperbolic):
        return {
            "kind": "Hyperbolic",
            "s": cls.s,
            "alpha": render_scalar(cls.alpha),
            "u": render_vector(cls.u),
            "v": render_vector(cls.v),
            "w": list(cls.w),
        }
    if isinstance(cls, UnipotentFull):
        return {
            "kind": "UnipotentFull",
            "w": list(cls.w),
            "w1": list(cls.w1),
            "w2": list(cls.w2),
        }
    if isinstance(cls, UnipotentDeficient):
        return {
            "kind": "UnipotentDeficient",
            "rank_of_g_minus_id": cls.rank_of_g_minus_id,
            "note": FULL_JORDAN,
        }
    assert isinstance(cls, OutOfTheory)
    return {"kind": "OutOfTheory", "reason": cls.reason}


def render_factorization(fact) -> dict:
    if isinstance(fact, ThreeLines):
        return {
            "kind": "ThreeLines",
            "frame": [render_vector(col) for col in fact.frame],
            "B": render_scalar(fact.b),
            "lines_in_frame": {
                "L1": render_vector(fact.l1),
                "L2": render_vector(fact.l2),
                "L": render_vector(fact.l),
            },
        }
    if isinstance(fact, QuadricLine):
        return {
            "kind": "QuadricLine",
            "frame": [render_vector(col) for col in fact.frame],
            "A": render_scalar(fact.a),
            "B": render_scalar(fact.b),
            "quadric_in_frame": render_matrix_exact(fact.quadric.m),
            "signature": list(quadric_signature(fact.quadric)),
            "tangency_points": [render_vector(p) for p in fact.tangency_points],
            "tangent": fact.tangent,
        }
    assert isinstance(fact, UnipotentSplit)
    return {
        "kind": "QuadricLine",
        "frame": [list(col) for col in fact.frame],
        "E": render_scalar(fact.e),
        "F": render_scalar(fact.f),
        "quadric_in_frame": render_matrix_exact(fact.quadric.m),
        "signature": list(quadric_signature(fact.quadric)),
        "tangency_points": [render_vector(fact.frame[0])],
        "tangent": True,
    }


def render_verdict(verdict: GroupVerdict) -> dict:
    out: dict = {"kind": verdict.kind}
    if verdict.elements is not None:
        out["elements"] = [[list(r) for r in g.rows] for g in verdict.elements]
        out["order"] = len(verdict.elements)
    if isinstance(verdict.witness, TauWitness):
        out["witness"] = {
            "type": "tau",
            "p": verdict.witness.p,
            "values": list(verdict.witness.values),
            "generator_value": verdict.witness.generator_value,
        }
    elif isinstance(verdict.witness, CharacterWitness):
        out["witness"] = {
            "type": "character",
            "generator": render_scalar(verdict.witness.generator),
            "exponents": list(verdict.witness.exponents),
            "values": [render_scalar(v) for v in verdict.witness.values],
            "exponent_bound": verdict.witness.exponent_bound,
        }
    if verdict.reason:
        out["reason"] = verdict.reason
    return out


def _empty_report() -> dict:
    return {
        "version": __version__,
        "elements": [],
        "relations": [],
        "factorization": None,
        "verdict": None,
        "reductions": [],
    }


# -- command pipelines ------------------------------------------------------------


def run(
    problem: ProblemFile,
    command: str,
    *,
    bound: int | None = None,
    allow_large_bound: bool = False,
) -> tuple[dict, int]:
    """Run one pipeline; returns (report, exit code)."""
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}")
    report = _empty_report()
    T, L = problem.cubic, problem.c2
    try:
        if command == "classify":
            return _run_classify(problem, report)
        if command == "factor":
            return _run_factor(problem, report)
        if command == "analyze":
            generators = list(problem.matrices) or None
            verdict = analyze_group(
                T, L, generators,
                bound=_effective_bound(problem, bound, default=3),
                allow_large_bound=allow_large_bound,
            )
            report["verdict"] = render_verdict(verdict)
            report["reductions"] = list(verdict.reductions)
            code = EXIT_OK if verdict.kind != "Inconclusive" else EXIT_INCONCLUSIVE
            return report, code
        # enumerate
        found = enumerate_symmetries(
            T, L, _effective_bound(problem, bound, default=2),
            allow_large_bound=allow_large_bound,
        )
        report["elements"] = [
            {"matrix": [list(r) for r in g.rows], "preserves_pair": True}
            for g in found
        ]
        report["verdict"] = {"kind": "Enumeration", "count": len(found)}
        return report, EXIT_OK
    except (BoundTooLarge, ValidationError) as exc:
        report["verdict"] = {"kind": "InputError", "message": str(exc)}
        return report, EXIT_INPUT
    except GeometricInconsistency as exc:
        report["verdict"] = {
            "kind": "GeometricInconsistency",
            "mechanism": exc.mechanism,
            "message": str(exc),
        }
        return report, EXIT_GEOMETRIC


def _effective_bound(problem: ProblemFile, cli_bound: int | None, default: int) -> int:
    if cli_bound is not None:
        return cli_bound
    if problem.bound is not None:
        return problem.bound
    return default


def _run_classify(problem: ProblemFile, report: dict) -> tuple[dict, int]:
    if not problem.matrices:
        raise ValidationError("classify needs at least one matrix")
    T, L = problem.cubic, problem.c2
    for g in problem.matrices:
        cls = classify(g, L)
        report["elements"].append(
            {
                "matrix": [list(r) for r in g.rows],
                "preserves_pair": preserves_pair(g, T, L),
                "class": render_class(cls),
            }
        )
    return report, EXIT_OK


def _run_factor(problem: ProblemFile, report: dict) -> tuple[dict, int]:
    if not problem.matrices:
        raise ValidationError("factor needs at least one matrix")
    T, L = problem.cubic, problem.c2
    seed = None
    for g in problem.matrices:
        cls = classify(g, L)
        report["elements"].append(
            {
                "matrix": [list(r) for r in g.rows],
                "preserves_pair": preserves_pair(g, T, L),
                "class": render_class(cls),
            }
        )
        if isinstance(cls, UnipotentDeficient):
            raise GeometricInconsistency(FULL_JORDAN, "rank(g - id) = 1")
        if seed is None and isinstance(cls, (Hyperbolic, UnipotentFull)):
            seed = cls
    if seed is None:
        report["verdict"] = {
            "kind": "Inconclusive",
            "reason": "no infinite-order generator to factor against",
        }
        return report, EXIT_INCONCLUSIVE
    if isinstance(seed, Hyperbolic):
        rel = check_hyperbolic_relations(T, L, seed.u, seed.v, seed.w)
        report["relations"].append(render_relation_report(rel))
        if not rel.overall:
            failing = [r.name for r in rel.rows if not r.holds]
            report["verdict"] = {
                "kind": "Inconclusive",
                "reason": f"hyperbolic relations failed: {failing}",
            }
            return report, EXIT_INCONCLUSIVE
        fact = hyperbolic_factorization(T, seed.u, seed.v, seed.w, relation_report=rel)
    else:
        frame = (seed.w, seed.w1, seed.w2)
        rel = check_unipotent_relations(T, L, *frame)
        report["relations"].append(render_relation_report(rel))
        try:
            # the Lefschetz E = 0 check fires before the relation gate
            fact = unipotent_factorization(T, *frame, relation_report=rel)
        except RelationsNotVerified:
            failing = [r.name for r in rel.rows if not r.holds]
            report["verdict"] = {
                "kind": "Inconclusive",
                "reason": f"unipotent relations failed: {failing}",
            }
            return report, EXIT_INCONCLUSIVE
    rendered = render_factorization(fact)
    rendered["singular_locus"] = [render_vector(line) for line in singular_locus(fact)]
    report["factorization"] = rendered
    report["verdict"] = {"kind": "Factorized"}
    return report, EXIT_OK


# -- text rendering and entry point -------------------------------------------------


def format_text(report: dict) -> str:
    lines = [f"cy3 report (version {report['version']})"]
    for element in report["elements"]:
        cls = element.get("class")
        if cls is None:
            lines.append(f"  symmetry {element['matrix']}")
            continue
        detail = ", ".join(
            f"{k}={v}" for k, v in cls.items() if k != "kind"
        )
        lines.append(
            f"  element {element['matrix']}: {cls['kind']}"
            + (f" ({detail})" if detail else "")
            + ("" if element.get("preserves_pair", True) else " [does NOT preserve the pair]")
        )
    for rel in report["relations"]:
        lines.append(f"  relations: {'all hold' if rel['overall'] else 'FAILED'}")
        for row in rel["rows"]:
            mark = "ok" if row["holds"] else "FAIL"
            lines.append(f"    [{mark}] {row['name']}: {row['left']} vs {row['right']}")
    fact = report["factorization"]
    if fact:
        lines.append(f"  factorization: {fact['kind']}")
        for key in ("A", "B", "E", "F", "signature", "singular_locus"):
            if key in fact:
                lines.append(f"    {key} = {fact[key]}")
    verdict = report["verdict"]
    if verdict:
        detail = ", ".join(f"{k}={v}" for k, v in verdict.items() if k != "kind")
        lines.append(f"  verdict: {verdict['kind']}" + (f" ({detail})" if detail else ""))
    for reduction in report["reductions"]:
        lines.append(f"  reduction: {reduction}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cy3",
        description="Exact analysis of cubic-form symmetries on a rank-3 lattice",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("classify", "classify each input matrix against the linear form"),
        ("factor", "verify relations and factor the cubic along an infinite-order symmetry"),
        ("analyze", "certify the finite / almost-abelian-rank-1 dichotomy"),
        ("enumerate", "brute-force all bounded symmetries of the pair"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", required=True, help="problem file (JSON)")
        p.add_argument("--bound", type=int, default=None,
                       help="entry bound for enumeration")
        p.add_argument("--allow-large-bound", action="store_true",
                       help="override the enumeration bound guard")
        p.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"cy3: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        problem = parse_problem(text)
    except (ParseError, ValidationError) as exc:
        print(f"cy3: invalid problem file: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        report, code = run(
            problem,
            args.command,
            bound=args.bound,
            allow_large_bound=args.allow_large_bound,
        )
    except Cy3Error as exc:
        print(f"cy3: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=False))
    else:
        print(format_text(report), end="")
    return code


if __name__ == "__main__":
    sys.exit(main())
