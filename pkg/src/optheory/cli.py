"""Command-line front end.

Exit codes: 0 all checks pass, 1 some check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__, calibration, models, suites
from .config import DEFAULT_TOLERANCES
from .errors import (
    FaithfulnessError,
    IdentifiabilityError,
    InputError,
    NotPreparableError,
    PositivityError,
    ZeroProbabilityError,
)
from .report import CLAIM, FAIL, Check, Report
from .theory_io import dump_theory, load_theory

DOMAIN_ERRORS = (FaithfulnessError, PositivityError, NotPreparableError, IdentifiabilityError, ZeroProbabilityError)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--theory", metavar="PATH", help="theory JSON file")
    src.add_argument("--model", metavar="NAME", help="built-in model: classical2 | qubit (or classicalN)")
    p.add_argument("--tol", type=float, default=1e-9, help="absolute tolerance (default 1e-9)")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    return p


def _seeded(p, samples, seed, samples_flag="--samples"):
    p.add_argument(samples_flag, type=int, default=samples, dest="samples")
    p.add_argument("--seed", type=int, default=seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="optheory", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    p = sub.add_parser("validate", parents=[common], help="theory axioms and statistical-structure properties")
    _seeded(p, 100, 0)
    sub.add_parser("faithful", parents=[common], help="dynamical and preparational faithfulness of the form")
    p = sub.add_parser("transpose", parents=[common], help="transposed transformation and its axioms")
    p.add_argument("--transformation", metavar="NAME")
    _seeded(p, 100, 0)
    p = sub.add_parser("gns", parents=[common], help="involution, adjoint, GNS quotient and representation")
    _seeded(p, 100, 0)
    p.add_argument("--null-factor", type=float, default=1e-10, help="null-space threshold relative to lambda_max")
    p = sub.add_parser("cstar", parents=[common], help="C*-identity, norms and Cauchy-Schwarz")
    _seeded(p, 50, 0)
    p = sub.add_parser("born", parents=[common], help="Born rule in the GNS representation")
    _seeded(p, 20, 0, samples_flag="--trials")
    p = sub.add_parser("calibrate", parents=[common], help="simulate and invert faithful-state calibration")
    p.add_argument("--transformation", metavar="NAME", required=True)
    p.add_argument("--shots", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int, default=50, help="random maps for the noiseless round trip")
    p.add_argument("--max-error", type=float, help="fail when the Frobenius error exceeds this")
    p.add_argument("--counts", metavar="PATH", help="write outcome counts as CSV")
    p.add_argument("--estimate", metavar="PATH", help="write the estimated matrix as JSON")
    p = sub.add_parser("export-theory", help="write a built-in model as a theory file")
    p.add_argument("model_name", metavar="MODEL")
    p.add_argument("--out", metavar="PATH")
    return parser


def _theory(args):
    if args.theory:
        return load_theory(args.theory)
    if args.model:
        return models.build_model(args.model)
    raise InputError("one of --theory or --model is required")


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run(args) -> tuple[Report | None, int]:
    if args.command == "export-theory":
        _emit(dump_theory(models.build_model(args.model_name)), args.out)
        return None, 0

    theory = _theory(args)
    tol = args.tol
    seed = getattr(args, "seed", None)
    tolerances = {"tol": tol, "suite": DEFAULT_TOLERANCES.as_dict()}
    start = time.perf_counter()
    data: dict = {}
    try:
        if args.command == "validate":
            checks, data = suites.validate_suite(theory, args.samples, args.seed, tol)
        elif args.command == "faithful":
            checks, data = suites.faithful_suite(theory, tol)
        elif args.command == "transpose":
            checks, data = suites.transpose_suite(theory, args.samples, args.seed, tol, args.transformation)
        elif args.command == "gns":
            tolerances["null_factor"] = args.null_factor
            checks, data = suites.gns_suite(theory, args.samples, args.seed, tol, args.null_factor)
        elif args.command == "cstar":
            checks, data = suites.cstar_suite(theory, args.samples, args.seed, tol)
        elif args.command == "born":
            checks, data = suites.born_suite(theory, args.samples, args.seed, tol)
        elif args.command == "calibrate":
            checks, data, cal = suites.calibrate_suite(
                theory, args.transformation, args.shots, args.seed, args.samples, tol, args.max_error
            )
            if args.counts:
                Path(args.counts).write_text(calibration.counts_to_csv(cal.counts, cal.missed), encoding="utf-8")
            if args.estimate:
                Path(args.estimate).write_text(json.dumps({"matrix": cal.estimate.tolist()}, indent=2) + "\n")
        else:  # pragma: no cover - argparse rejects unknown commands
            raise InputError(f"unknown command {args.command}")
    except DOMAIN_ERRORS as exc:
        checks = [Check("precondition", FAIL, None, CLAIM, {"error": f"{type(exc).__name__}: {exc}"})]
    report = Report(
        command=args.command,
        theory=theory.name,
        tolerances=tolerances,
        checks=checks,
        version=__version__,
        seed=seed,
        data=data,
        timings={"wall_seconds": round(time.perf_counter() - start, 6)},
    )
    _emit(report.to_json() if args.format == "json" else report.to_text(), args.out)
    return report, report.exit_code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _, code = run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
