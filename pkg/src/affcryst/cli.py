"""Command line front end: ``affcryst check|build|defspace|realize``.

Exit codes: 0 ran (the verdict is in the payload), 2 unreadable or malformed input,
3 invariant violation, 4 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import documents as docs
from .affine import engel_flag
from .cryst import AffineRep, is_crystallographic, unipotence_flag, validate_rep
from .errors import (
    DocumentError,
    InternalInvariantError,
    InvariantError,
    RelationError,
    SearchExhaustedError,
)
from .linalg import Matrix
from .nillie import Grading, LieAlgebra
from .realization import realize
from .scalar import format_rational, scalar_to_json
from .scheuneman import DEFAULT_GRID, derivation_rep, graded_rep, three_step_rep, two_step_rep
from .shadow import (
    PolycyclicRep,
    char_restriction_check,
    hull_action_from_reference,
    is_crystallographic_poly,
    shadow_closure,
)
from .torus import CAProduct, ca_to_rep, canonical_form, fixed_locus_scan, locus_csv, parse_grid

EXIT_OK, EXIT_DOCUMENT, EXIT_INVARIANT, EXIT_INTERNAL = 0, 2, 3, 4


def _scalar(x):
    return None if x is None else scalar_to_json(x)


def _verdict(command: str, **payload) -> dict:
    return {"kind": "verdict", "version": docs.VERSION, "command": command, **payload}


def _load(path: str, kinds: Sequence[str]):
    value = docs.load(path)
    obj = docs.read(path)
    if obj.get("kind") not in kinds:
        raise DocumentError(f"expected a document of kind {' or '.join(kinds)}, got {obj.get('kind')!r}")
    return value


def _parse_matrix(text: str, name: str) -> Matrix:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"--{name} must be a JSON matrix: {exc}") from exc
    return docs.matrix_in(raw, None)


def _parse_fractions(text: str, name: str) -> list[Fraction]:
    try:
        return [Fraction(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise DocumentError(f"--{name} must be comma-separated rationals: {exc}") from exc


# -- subcommands -----------------------------------------------------------------------


def cmd_check(args) -> dict:
    value = _load(args.input, ("rep", "pcrep"))
    if isinstance(value, AffineRep):
        validate_rep(value)
        flag = unipotence_flag(value)
        verdict = is_crystallographic(value)
        return _verdict(
            "check",
            input_kind="rep",
            crystallographic=verdict.crystallographic,
            delta=_scalar(verdict.delta),
            engel_ok=bool(flag),
            details={"n": value.n, "homomorphism": True},
        )
    assert isinstance(value, PolycyclicRep)
    verdict = is_crystallographic_poly(value)
    closure = shadow_closure(value)
    details: dict = {"n": value.n, "supplement": value.supplement, "generators": len(value.generators)}
    if verdict.crystallographic:
        hull = hull_action_from_reference(value)
        details["char_restriction"] = [char_restriction_check(g, a) for g, a in zip(value.generators, hull.orbit_matrices)]
        details["hull_action"] = [docs.matrix_out(a) for a in hull.orbit_matrices]
    return _verdict(
        "check",
        input_kind="pcrep",
        crystallographic=verdict.crystallographic,
        delta=_scalar(verdict.delta),
        shadow_dim=verdict.shadow_dim,
        engel_ok=bool(closure) and bool(engel_flag(closure)),
        details=details,
    )


def cmd_build(args) -> dict:
    L = _load(args.input, ("lie",))
    assert isinstance(L, LieAlgebra)
    meta: dict = {"construction": args.kind}
    if args.kind == "two-step":
        rho = two_step_rep(L)
    elif args.kind == "graded":
        if not args.weights:
            raise DocumentError("--weights is required for the graded construction")
        weights = _parse_fractions(args.weights, "weights")
        if any(w.denominator != 1 for w in weights):
            raise DocumentError("--weights must be integers")
        rho = graded_rep(L, Grading(tuple(int(w) for w in weights)))
        meta["weights"] = [int(w) for w in weights]
    elif args.kind == "derivation":
        if not args.derivation:
            raise DocumentError("--derivation is required for the derivation construction")
        D = _parse_matrix(args.derivation, "derivation")
        rho = derivation_rep(L, D)
        meta["derivation"] = docs.matrix_out(D)
    else:
        grid = _parse_fractions(args.scales, "scales") if args.scales else list(DEFAULT_GRID)
        result = three_step_rep(L, grid, seed=args.seed)
        rho = result.rep
        meta["scales"] = [format_rational(s) for s in result.scales]
        meta["derivation"] = docs.matrix_out(result.derivation)
        meta["grid_points_tried"] = len(result.tried)
    verdict = is_crystallographic(rho)
    meta["delta"] = _scalar(verdict.delta)
    meta["crystallographic"] = verdict.crystallographic
    out = docs.rep_to_json(rho)
    out["meta"] = meta
    return out


def cmd_defspace(args):
    if args.phi:
        phi = _parse_matrix(args.phi, "phi")
        grid = parse_grid(args.grid or "-1:1:11")
        points = fixed_locus_scan(phi, grid, seed=args.seed, parallel=args.parallel)
        return locus_csv(points)
    if not args.input:
        raise DocumentError("defspace needs --input, or --phi for a fixed-locus scan")
    value = _load(args.input, ("rep", "ca"))
    rho = ca_to_rep(value) if isinstance(value, CAProduct) else value
    if not rho.algebra.is_abelian():
        raise InvariantError("defspace needs a representation of an abelian Lie algebra")
    if not is_crystallographic(rho).crystallographic:
        raise InvariantError("defspace needs a crystallographic representation")
    return docs.ca_to_json(canonical_form(rho))


def cmd_realize(args) -> dict:
    spec = _load(args.input, ("ext",))
    report = realize(spec, seed=args.seed)
    autos = []
    for r in report.autos:
        autos.append(
            {
                "index": r.index,
                "order": r.order,
                "fixed": r.fixed,
                "certified": r.certified,
                "conjugator": None if r.conjugator is None else docs.matrix_out(r.conjugator),
                "lift": None if r.lift is None else docs.matrix_out(r.lift),
                "corrected": r.corrected,
            }
        )
    relations = []
    if report.extension is not None:
        for rel in report.extension.relations:
            entry = {"word": list(rel.word), "holds": rel.holds}
            if not rel.holds:
                entry["residual"] = docs.matrix_out(rel.residual)
            relations.append(entry)
    return _verdict(
        "realize",
        realizable=report.realizable,
        verdict="realizable" if report.realizable else "not-certified",
        base_crystallographic=report.base_crystallographic,
        autos=autos,
        relations=relations,
        adjusted_translations=report.adjusted_translations,
        notes=list(report.notes),
    )


COMMANDS = {"check": cmd_check, "build": cmd_build, "defspace": cmd_defspace, "realize": cmd_realize}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help="input JSON document")
    common.add_argument("--output", "-o", help="write the result here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized nonsingularity sampling (default 0)")

    parser = argparse.ArgumentParser(prog="affcryst", description="Exact tests and constructions for affine crystallographic actions.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("check", parents=[common], help="crystallography verdict for a rep or pcrep document")

    b = sub.add_parser("build", parents=[common], help="construct a simply transitive representation")
    b.add_argument("--kind", required=True, choices=["two-step", "graded", "derivation", "three-step"])
    b.add_argument("--weights", help="comma-separated grading weights (graded)")
    b.add_argument("--derivation", help="derivation matrix as JSON (derivation)")
    b.add_argument("--scales", help="comma-separated scale grid (three-step); default 1,2,3,1/2,1/3")

    d = sub.add_parser("defspace", parents=[common], help="canonical product, or a fixed-locus CSV with --phi")
    d.add_argument("--phi", help="2x2 automorphism as JSON for a fixed-locus scan over the plane")
    d.add_argument("--grid", help="lo:hi:count per coordinate (default -1:1:11)")
    d.add_argument("--parallel", type=int, default=0, help="worker processes for the grid scan")

    sub.add_parser("realize", parents=[common], help="realization report for an ext document")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # let values such as "-1:1:11" follow --grid without an "="
    for idx in range(len(argv) - 1):
        if argv[idx] in ("--grid", "--phi", "--scales", "--weights") and argv[idx + 1].startswith("-"):
            argv[idx : idx + 2] = [f"{argv[idx]}={argv[idx + 1]}", ""]
    args = parser.parse_args([a for a in argv if a != ""])
    if args.command != "defspace" and not args.input:
        parser.error(f"{args.command} needs --input")
    try:
        result = COMMANDS[args.command](args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOCUMENT
    except ValueError as exc:
        # grid syntax and similar argument-level problems
        if isinstance(exc, InvariantError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVARIANT
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOCUMENT
    except (SearchExhaustedError, RelationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    text = result if isinstance(result, str) else docs.dumps(result)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
