"""Command-line front end.

Subcommands::

    pf          generalized Pfaffian of each input matrix
    apf         antisymmetrized Pfaffian (any square matrix)
    wnf         normal form: blocks, det(U), reconstruction residual
    check       conjugate-normality flag and residual
    identities  full identity battery report
    gen         generate a matrix from a spectrum-prescription JSON

Results are emitted as one JSON document per input line (``gen`` emits the
matrix document itself, or a summary when writing to ``--output``).  Errors
are emitted as ``{"error": {"code": ..., "message": ...}}`` and drive the
exit status: 0 success, 2 parse/input error, 3 not conjugate-normal, 4
Pfaffian undefined, 5 tolerance or spectral-consistency failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .ensembles import SpectrumSpec, random_conjugate_normal, random_ginibre
from .errors import Error, InputError, ParseError
from .generalized import (
    antisymmetrized_pfaffian,
    generalized_pfaffian,
    generalized_pfaffian_via_relation,
    identity_report,
)
from .io import (
    FORMAT_MM,
    FORMATS,
    complex_pair,
    json_dumps,
    parse_matrix,
    render_matrix,
)
from .linalg import Tolerances
from .normal_form import OffDiagBlock, is_conjugate_normal, reconstruct, wigner_normal_form

SEED_ENV = "WIGNERPF_SEED"
DEFAULT_IDENTITY_SEED = 1905


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wignerpf",
        description="Wigner normal form and generalized Pfaffians of "
        "conjugate-normal matrices.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=FORMATS,
        default=FORMAT_MM,
        help="matrix document format (default: mm, Matrix Market array)",
    )
    common.add_argument(
        "--tol-eig",
        type=float,
        default=1e-10,
        metavar="X",
        help="relative eigen-residual / conjugate-normality tolerance",
    )
    common.add_argument(
        "--tol-cluster",
        type=float,
        default=1e-8,
        metavar="X",
        help="base eigenvalue clustering tolerance",
    )
    common.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"seed for seeded operations (default: ${SEED_ENV} if set)",
    )
    common.add_argument(
        "--output",
        metavar="PATH",
        default=None,
        help="write output to PATH instead of stdout",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    pf = sub.add_parser("pf", parents=[common], help="generalized Pfaffian")
    pf.add_argument(
        "--method",
        choices=("normal-form", "relation", "polynomial"),
        default="normal-form",
        help="evaluation route (polynomial is limited to dimension 12)",
    )
    pf.add_argument("inputs", nargs="+", help="matrix file(s); '-' reads stdin")

    for name, help_text in (
        ("apf", "antisymmetrized Pfaffian"),
        ("wnf", "normal form A = U Sigma U^T"),
        ("check", "conjugate-normality test"),
    ):
        cmd = sub.add_parser(name, parents=[common], help=help_text)
        cmd.add_argument("inputs", nargs="+", help="matrix file(s); '-' reads stdin")

    identities = sub.add_parser(
        "identities", parents=[common], help="algebraic identity battery"
    )
    identities.add_argument(
        "--partner",
        metavar="PATH",
        default=None,
        help="symmetric tensor-partner matrix file (default: seeded random 2x2)",
    )
    identities.add_argument(
        "--lam",
        metavar="Z",
        default="0.6+0.8j",
        help="scaling constant, Python complex syntax (default: 0.6+0.8j)",
    )
    identities.add_argument("inputs", nargs="+", help="matrix file(s); '-' reads stdin")

    gen = sub.add_parser(
        "gen", parents=[common], help="generate a matrix from a spectrum JSON"
    )
    gen.add_argument("spec", help="spectrum-prescription JSON file; '-' reads stdin")
    return parser


def _effective_seed(args) -> int | None:
    if args.seed is not None:
        return args.seed
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _read_matrix(path: str, fmt: str) -> np.ndarray:
    if path == "-":
        return parse_matrix(sys.stdin, fmt).matrix
    return parse_matrix(path, fmt).matrix


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise InputError(f"cannot parse {text!r} as a complex number") from None


def _pf_payload(result) -> dict:
    d = result.diagnostics
    return {
        "pfaffian": complex_pair(result.value),
        "method": result.method,
        "det": complex_pair(d.det),
        "singular": d.singular,
        "cross_check_residual": d.cross_check_residual,
    }


def _run_single(args, matrix: np.ndarray, tol: Tolerances) -> dict:
    command = args.command
    if command == "pf":
        if args.method == "normal-form":
            result = generalized_pfaffian(matrix, tol)
        elif args.method == "relation":
            result = generalized_pfaffian_via_relation(matrix, tol)
        else:
            result = generalized_pfaffian_via_relation(matrix, tol, engine="polynomial")
        return _pf_payload(result)
    if command == "apf":
        result = antisymmetrized_pfaffian(matrix)
        payload = _pf_payload(result)
        if matrix.shape[0] % 2:
            payload["warning"] = (
                "odd dimension: the antisymmetric part is singular and the "
                "antisymmetrized Pfaffian is 0 by convention"
            )
        return payload
    if command == "wnf":
        nf = wigner_normal_form(matrix, tol)
        blocks = []
        for block in nf.blocks:
            if isinstance(block, OffDiagBlock):
                blocks.append(
                    {
                        "type": "offdiag",
                        "value": complex_pair(block.s),
                        "multiplicity": block.multiplicity,
                    }
                )
            else:
                blocks.append(
                    {
                        "type": "real1",
                        "value": block.sigma,
                        "multiplicity": block.multiplicity,
                    }
                )
        residual = float(np.linalg.norm(matrix - reconstruct(nf)))
        return {
            "det_U": complex_pair(nf.det_u),
            "blocks": blocks,
            "reconstruction_residual": residual,
        }
    if command == "check":
        flag, residual = is_conjugate_normal(matrix, tol)
        return {"conjugate_normal": flag, "residual": residual}
    if command == "identities":
        seed = _effective_seed(args)
        if seed is None:
            seed = DEFAULT_IDENTITY_SEED
        if args.partner is not None:
            partner = _read_matrix(args.partner, args.format)
        else:
            g = random_ginibre(2, seed)
            partner = (g + g.T) / 2.0
        report = identity_report(
            matrix,
            partner,
            _parse_complex(args.lam),
            tol,
            congruence_seed=seed,
        )
        return {
            "passed": report.passed,
            "checks": [
                {
                    "name": c.name,
                    "residual": c.residual,
                    "threshold": c.threshold,
                    "passed": c.passed,
                }
                for c in report.checks
            ],
        }
    raise InputError(f"unknown command {command!r}")


def _error_line(exc: Error) -> str:
    return json_dumps({"error": {"code": exc.exit_code, "message": str(exc)}}) + "\n"


def _cmd_gen(args) -> str:
    """Generate the matrix; returns the text destined for stdout."""
    if args.spec == "-":
        raw = sys.stdin.read()
    else:
        try:
            with open(args.spec, "r", encoding="utf-8") as handle:
                raw = handle.read()
        except OSError as exc:
            raise ParseError(f"cannot read {args.spec}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    spec = SpectrumSpec.from_json_dict(data)
    seed = _effective_seed(args)
    if seed is not None:
        spec = SpectrumSpec(entries=spec.entries, seed=seed, dim=spec.dim)
    matrix = random_conjugate_normal(spec)
    text = render_matrix(matrix, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
        summary = {
            "written": args.output,
            "rows": int(matrix.shape[0]),
            "cols": int(matrix.shape[1]),
            "seed": spec.seed,
            "format": args.format,
        }
        return json_dumps(summary) + "\n"
    return text


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "gen":
        try:
            stdout_text = _cmd_gen(args)
            code = 0
        except Error as exc:
            stdout_text = _error_line(exc)
            code = exc.exit_code
        sys.stdout.write(stdout_text)
        return code

    lines: list[str] = []
    code = 0
    try:
        tol = Tolerances(eig_residual=args.tol_eig, cluster=args.tol_cluster)
        for path in args.inputs:
            matrix = _read_matrix(path, args.format)
            lines.append(json_dumps(_run_single(args, matrix, tol)) + "\n")
    except Error as exc:
        # processing stops at the first failing input; earlier results are kept
        lines.append(_error_line(exc))
        code = exc.exit_code
    text = "".join(lines)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
