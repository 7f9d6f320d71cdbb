"""Command line front end

Exit codes: 0 success, 1 verification failure or bound violation, 2 input error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from . import __version__
from .bounds import (
    PirParameters,
    capacity_beta,
    outer_envelope,
    parse_rational,
    theorem1_line,
    theorem1_min_beta,
    theorem1_region_minimum,
    theorem2_line,
    theorem2_min_alpha,
    theorem3_line,
)
from .documents import (
    curve_csv,
    curve_document,
    dumps,
    load_certificate,
    load_model,
    load_scheme,
    model_hash,
    rational_text,
    render_number,
    save_certificate,
    save_model,
    save_scheme,
    write_atomic,
)
from .errors import (
    CertificateError,
    DocumentError,
    ExpressionError,
    ModelError,
    ParameterError,
    SchemeError,
    SizeGuardError,
    SolverError,
    UnknownTagError,
)
from .lp import SolverSettings, verify_certificate
from .lp.certificate import DualCertificate
from .models import ModelOptions, build_model, minimize_objective, parse_scalar_bound
from .schemes import ENUMERATION_LIMIT, PirScheme, builtin_download_all, builtin_xor2, verify_scheme

LOGGER = logging.getLogger(__name__)
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_SOLVER = 3
INPUT_ERRORS = (
    DocumentError,
    ExpressionError,
    ModelError,
    ParameterError,
    SchemeError,
    SizeGuardError,
    UnknownTagError,
)
Value = Union[Fraction, float, int, bool, str]


def _value_json(value: Value) -> Any:
    if isinstance(value, bool) or isinstance(value, str):
        return value
    if isinstance(value, float):
        return {"decimal": f"{value:.12g}"}
    return {"exact": rational_text(Fraction(value)), "decimal": f"{float(value):.12g}"}


def _value_text(value: Value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, str):
        return value
    return render_number(value if isinstance(value, float) else Fraction(value))


def _value_cells(value: Value) -> Tuple[str, str]:
    if isinstance(value, bool) or isinstance(value, str):
        return _value_text(value), ""
    if isinstance(value, float):
        return "", f"{value:.12g}"
    return rational_text(Fraction(value)), f"{float(value):.12g}"


@dataclass
class RunReport:
    """What was asked, what came out and how long it took"""

    command: str
    inputs: Dict[str, str] = field(default_factory=dict)
    results: List[Tuple[str, Value]] = field(default_factory=list)
    seconds: float = field(default=0.0)
    exit_code: int = field(default=EXIT_OK)

    def add(self, name: str, value: Value) -> None:
        """Append one result, the order is kept"""
        self.results.append((name, value))

    def render(self, fmt: Optional[str]) -> str:
        """json, csv (name,exact,decimal) or aligned text; timing is kept apart from the results"""
        if fmt == "json":
            return dumps(
                {
                    "command": self.command,
                    "version": __version__,
                    "inputs": self.inputs,
                    "results": [{"name": name, "value": _value_json(value)} for name, value in self.results],
                    "exit_code": self.exit_code,
                    "timing": {"seconds": round(self.seconds, 3)},
                }
            )
        if fmt == "csv":
            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator="\n")
            writer.writerow(["name", "exact", "decimal"])
            writer.writerows([name, *_value_cells(value)] for name, value in self.results)
            return buffer.getvalue()
        names = ["command", "timing"] + list(self.inputs) + [name for name, _ in self.results]
        width = max(len(name) for name in names)
        lines = [f"{'command'.ljust(width)} : {self.command} (pirbounds {__version__})"]
        lines += [f"{key.ljust(width)} : {value}" for key, value in sorted(self.inputs.items())]
        lines += [f"{name.ljust(width)} : {_value_text(value)}" for name, value in self.results]
        lines.append(f"{'timing'.ljust(width)} : {self.seconds:.3f}s")
        return "\n".join(lines) + "\n"


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ParameterError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _objective_arg(text: str) -> Tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"objective must look like 'CA,CB', got '{text}'")
    return _rational_arg(parts[0]), _rational_arg(parts[1])


def _params(args: argparse.Namespace, default: Optional[Tuple[int, int]] = None) -> PirParameters:
    n, k = args.n, args.k
    if default is not None:
        n = default[0] if n is None else n
        k = default[1] if k is None else k
    if n is None or k is None:
        raise ParameterError("--n and --k are required for this command")
    return PirParameters(n, k)


def cmd_bound(args: argparse.Namespace, report: RunReport) -> None:
    """Line coefficients and, given one cost, the implied bound on the other"""
    alpha, beta = args.alpha, args.beta
    if args.theorem == "capacity":
        report.add("capacity_beta", capacity_beta(_params(args)))
        return
    if args.theorem == "1":
        params = _params(args)
        line = theorem1_line(params)
    elif args.theorem == "2":
        params = _params(args)
        line = theorem2_line(params)
    else:
        params = _params(args, default=(2, 2))
        line = theorem3_line(params)
    report.add("line", line.render())
    report.add("c_alpha", line.c_alpha)
    report.add("c_beta", line.c_beta)
    report.add("rhs", line.rhs)
    if alpha is not None:
        if args.theorem == "1":
            bound = theorem1_min_beta(params, alpha)
            report.add("beta_lower", bound.value)
            report.add("theorem1_beta", bound.theorem1)
            report.add("binding", bound.binding.value)
        else:
            value = line.min_beta(alpha)
            assert value is not None
            report.add("beta_lower", value)
    if beta is not None:
        line_alpha = theorem2_min_alpha(params, beta) if args.theorem == "2" else line.min_alpha(beta)
        if line_alpha is None:
            raise ParameterError("the line does not involve storage")
        report.add("alpha_lower", max(line_alpha, params.min_storage))
        report.add("binding", line.provenance.value if line_alpha >= params.min_storage else "storage")


def cmd_curve(args: argparse.Namespace, report: RunReport) -> Optional[str]:
    """Outer envelope samples as CSV (default) or JSON"""
    params = _params(args)
    points = outer_envelope(params, args.samples)
    report.add("samples", len(points))
    if args.format == "json":
        return dumps(curve_document(params, points))
    return curve_csv(points)


def cmd_lp(args: argparse.Namespace, report: RunReport) -> None:
    """Build, solve, certify, optionally write the model and certificate documents"""
    c_alpha, c_beta = args.objective
    options = ModelOptions(
        include_symmetry=not args.no_symmetry, include_pseudo=args.model == "pseudo", objective=(c_alpha, c_beta)
    )
    model = build_model(options)
    extra = [parse_scalar_bound(text) for text in args.extra]
    settings = SolverSettings(backend=args.backend, max_denominator=args.max_denominator)
    minimum = minimize_objective(model, c_alpha, c_beta, extra=extra, settings=settings)
    digest = model_hash(minimum.program)
    certificate = DualCertificate(minimum.certificate.weights, minimum.certificate.certified_bound, digest)
    report.add("variables", model.ground.size)
    report.add("constraints", len(minimum.program.constraints))
    report.add("optimum", minimum.value)
    report.add("certified_bound", certificate.certified_bound)
    report.add("certificate_rows", len(certificate.weights))
    report.add("certificate_verified", True)
    report.add("iterations", minimum.solution.iterations)
    report.add("model_hash", digest)
    if args.model == "base" and not extra:
        region, _ = theorem1_region_minimum(PirParameters(2, 2), c_alpha, c_beta)
        report.add("theorem1_region_minimum", region)
        report.add("stronger_than_theorem1", certificate.certified_bound > region)
        if certificate.certified_bound <= region:
            report.add("note", "Shannon-only: no bound stronger than the cut-set-like line")
    if args.model_out:
        write_path = Path(args.model_out)
        save_model(write_path, minimum.program)
        report.inputs["model_out"] = str(write_path)
    if args.certificate_out:
        save_certificate(args.certificate_out, certificate)
        report.inputs["certificate_out"] = str(args.certificate_out)


def cmd_cert_verify(args: argparse.Namespace, report: RunReport) -> None:
    """Exact re-verification of a stored certificate against a stored model"""
    program = load_model(args.model)
    certificate = load_certificate(args.certificate)
    digest = model_hash(program)
    if certificate.model_hash is not None and certificate.model_hash != digest:
        LOGGER.warning(
            "certificate was issued for model {}, this model hashes to {}".format(certificate.model_hash, digest)
        )
    result = verify_certificate(program, certificate)
    report.add("certified_bound", result.certified_bound)
    report.add("verified", result.valid)
    for line in result.describe(program):
        report.add("problem", line)
    if not result.valid:
        report.exit_code = EXIT_FAILURE


def _build_scheme(args: argparse.Namespace) -> PirScheme:
    if args.scheme == "file":
        if not args.file:
            raise ParameterError("--file is required for --scheme file")
        return load_scheme(args.file)
    length = args.l if args.l is not None else 1
    if args.scheme == "xor2":
        if args.k is None:
            raise ParameterError("--k is required for the XOR scheme")
        if args.n not in (None, 2):
            raise ParameterError("the XOR scheme runs on two databases", N=args.n)
        return builtin_xor2(args.k, length)
    params = _params(args)
    return builtin_download_all(params.n, params.k, length, args.alphabet)


def cmd_scheme(args: argparse.Namespace, report: RunReport) -> None:
    """Verify correctness and privacy, measure costs, compare against every bound line"""
    scheme = _build_scheme(args)
    result = verify_scheme(scheme, args.limit)
    report.add("scheme", scheme.name)
    report.add("correct", result.correctness.passed)
    report.add("correctness_cases", result.correctness.cases)
    report.add("correctness_method", result.correctness.method)
    example = result.correctness.counterexample
    if example is not None:
        report.add(
            "counterexample",
            f"messages={[list(message) for message in example.messages]} key={example.key} "
            f"desired=W{example.desired + 1} estimate={list(example.estimate)}",
        )
    report.add("private", result.privacy.passed)
    if not result.privacy.passed:
        for db, per_index in enumerate(result.privacy.distributions):
            for desired, distribution in enumerate(per_index):
                rendered = " ".join(f"{list(query)}:{rational_text(prob)}" for query, prob in distribution.items())
                report.add(f"db{db + 1}_queries_for_W{desired + 1}", rendered)
    costs = result.costs
    for db, per_db in enumerate(costs.per_database):
        report.add(f"alpha_{db + 1}", per_db.alpha)
        report.add(f"beta_{db + 1}", per_db.beta)
        report.add(f"alpha_info_{db + 1}", per_db.alpha_info)
        report.add(f"beta_info_{db + 1}", per_db.beta_info)
    report.add("alpha", costs.alpha)
    report.add("beta", costs.beta)
    report.add("alpha_info", costs.alpha_info)
    report.add("beta_info", costs.beta_info)
    for problem in costs.invariant_violations():
        report.add("cost_problem", problem)
    for check in result.bounds:
        verdict = "satisfied" if check.satisfied else "VIOLATED"
        report.add(check.line.provenance.value, f"{check.line.render()}: {verdict}")
    if args.scheme_out:
        save_scheme(args.scheme_out, scheme, args.limit)
        report.inputs["scheme_out"] = str(args.scheme_out)
    if not result.passed:
        report.exit_code = EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    """All verbs and flags"""
    parser = argparse.ArgumentParser(prog="pirbounds", description="PIR storage/download tradeoff toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--format", choices=("csv", "json"), default=None, help="output format")
    parser.add_argument("--out", default=None, help="write the output here instead of standard output")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--quiet", action="store_true", help="log errors only")
    verbosity.add_argument("--verbose", action="store_true", help="log progress")
    verbs = parser.add_subparsers(dest="verb", required=True)

    bound = verbs.add_parser("bound", help="evaluate a closed-form bound")
    bound.add_argument("--theorem", choices=("1", "2", "3", "capacity"), required=True)
    bound.add_argument("--n", type=int)
    bound.add_argument("--k", type=int)
    costs = bound.add_mutually_exclusive_group()
    costs.add_argument("--alpha", type=_rational_arg)
    costs.add_argument("--beta", type=_rational_arg)
    bound.set_defaults(handler=cmd_bound)

    curve = verbs.add_parser("curve", help="sample the outer envelope")
    curve.add_argument("--n", type=int, required=True)
    curve.add_argument("--k", type=int, required=True)
    curve.add_argument("--samples", type=int, default=101)
    curve.set_defaults(handler=cmd_curve)

    lp = verbs.add_parser("lp", help="solve an entropy LP and certify the optimum")
    lp.add_argument("--model", choices=("base", "pseudo"), required=True)
    lp.add_argument("--no-symmetry", action="store_true")
    lp.add_argument("--objective", type=_objective_arg, required=True, help="CA,CB for CA*alpha + CB*beta")
    lp.add_argument("--extra", action="append", default=[], help="e.g. 'beta<=3/4', repeatable")
    lp.add_argument("--model-out")
    lp.add_argument("--certificate-out")
    lp.add_argument("--backend", choices=("highs", "bland"), default="highs")
    lp.add_argument("--max-denominator", type=int, default=SolverSettings().max_denominator)
    lp.set_defaults(handler=cmd_lp)

    cert = verbs.add_parser("cert-verify", help="re-verify a stored certificate")
    cert.add_argument("--model", required=True)
    cert.add_argument("--certificate", required=True)
    cert.set_defaults(handler=cmd_cert_verify)

    scheme = verbs.add_parser("scheme", help="verify a PIR scheme")
    scheme.add_argument("--scheme", choices=("download-all", "xor2", "file"), required=True)
    scheme.add_argument("--n", type=int)
    scheme.add_argument("--k", type=int)
    scheme.add_argument("--l", type=int)
    scheme.add_argument("--alphabet", type=int, default=2)
    scheme.add_argument("--file")
    scheme.add_argument("--scheme-out")
    scheme.add_argument("--limit", type=int, default=ENUMERATION_LIMIT)
    scheme.set_defaults(handler=cmd_scheme)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.WARNING
    if args.verbose:
        level = logging.INFO
    if args.quiet:
        level = logging.ERROR
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _inputs(args: argparse.Namespace) -> Dict[str, str]:
    skip = {"handler", "verb", "format", "out", "quiet", "verbose"}
    rendered = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or value is None or value == [] or value is False:
            continue
        if isinstance(value, tuple):
            value = ",".join(rational_text(part) for part in value)
        elif isinstance(value, list):
            value = ";".join(str(part) for part in value)
        elif isinstance(value, Fraction):
            value = rational_text(value)
        rendered[key] = str(value)
    return rendered


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point, returns the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INPUT
    _configure_logging(args)
    handler: Callable[[argparse.Namespace, RunReport], Optional[str]] = args.handler
    report = RunReport(command=args.verb, inputs=_inputs(args))
    started = time.monotonic()
    try:
        data = handler(args, report)
    except INPUT_ERRORS as exc:
        LOGGER.error(str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except CertificateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    report.seconds = time.monotonic() - started
    try:
        if data is not None:
            _emit(data, args.out)
        else:
            _emit(report.render(args.format), args.out)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
