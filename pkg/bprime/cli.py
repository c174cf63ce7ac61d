"""Command line interface.

Examples
--------
::

    bprime bprime --h "x1^2+x2^2+x3^2+x4^2" --f "x1" --weights infer
    bprime bs --f "x1^2+x2^2+x3^2"
    bprime verify --certificate laplacian_certificate.json
    bprime --job job.json
"""

import argparse
from dataclasses import dataclass, field
from enum import IntEnum
import json
import logging
import sys
from typing import Any, Dict, List, NoReturn, Optional, Sequence, Tuple

from . import debug_logger
from ._version import __version__
from .bernstein import bprime_wh, full_from_reduced, integral_roots
from .decide import Conclusion, Verdict, decide_ci, decide_hypersurface
from .exceptions import BprimeError, ResourceLimitError
from .groebner import buchberger, quotient_basis
from .polyring import MonomialOrder, OrderKind, WeightSystem
from .singularity import (
    Morphism,
    critical_ideal,
    infer_morphism_weights,
    jacobian_minors,
    normalize_weights,
)
from .utils import (
    dumps,
    factored_to_json,
    format_weights,
    load_certificate,
    parse_morphism,
    parse_weights,
)
from .weylcheck import verify_membership_certificate


LOGGER = logging.getLogger(__name__)

COMMANDS = ("minors", "basis", "bprime", "bs", "decide", "verify", "infer-weights")


class ExitCode(IntEnum):
    SUCCESS = 0
    INPUT_ERROR = 1
    INCONCLUSIVE = 2


@dataclass(frozen=True)
class JobSpec:
    """One command with its inputs, from the command line or a job file.

    A job file is a JSON object with the keys ``command``, ``h``, ``f``,
    ``nvars``, ``weights``, ``order``, ``format``, ``with_f``,
    ``assume_generation`` and ``certificate``; only ``command`` is required.
    """

    command: str
    h: Tuple[str, ...] = ()
    f: Optional[str] = None
    nvars: Optional[int] = None
    weights: str = "infer"
    order: OrderKind = OrderKind.WGREVLEX
    output_format: str = "json"
    with_f: bool = False
    assume_generation: bool = False
    certificate: Optional[str] = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command '{self.command}'")

        if self.output_format not in ("json", "text"):
            raise ValueError(f"Unknown output format '{self.output_format}'")

        if self.command == "verify":
            if not self.certificate:
                raise ValueError("The 'verify' command requires a certificate")
        elif self.f is None:
            raise ValueError(f"The '{self.command}' command requires 'f'")

        if self.command == "bs" and self.h:
            raise ValueError("The 'bs' command takes 'f' only")

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "JobSpec":
        """Return the job described by the decoded JSON object `obj`."""
        unknown = set(obj) - {
            "command", "h", "f", "nvars", "weights", "order", "format", "with_f",
            "assume_generation", "certificate",
        }
        if unknown:
            raise ValueError(f"Unknown job file key(s): {', '.join(sorted(unknown))}")

        if "command" not in obj:
            raise ValueError("The job file has no 'command'")

        weights = obj.get("weights", "infer")
        if isinstance(weights, list):
            weights = ",".join(str(w) for w in weights)

        h = obj.get("h", [])
        return cls(
            command=obj["command"],
            h=tuple([h] if isinstance(h, str) else h),
            f=obj.get("f"),
            nvars=obj.get("nvars"),
            weights=str(weights),
            order=OrderKind(obj.get("order", "wgrevlex")),
            output_format=obj.get("format", "json"),
            with_f=bool(obj.get("with_f", False)),
            assume_generation=bool(obj.get("assume_generation", False)),
            certificate=obj.get("certificate"),
        )

    def morphism(self) -> Morphism:
        """Return the parsed morphism, checking its arity."""
        if self.f is None:
            raise ValueError(f"The '{self.command}' command requires 'f'")

        return parse_morphism(self.h, self.f, self.nvars)

    def weight_system(self, m: Morphism) -> WeightSystem:
        """Return the explicit weights or infer them with ``deg f = 1``."""
        if self.weights == "infer":
            return infer_morphism_weights(m)

        weights = WeightSystem(parse_weights(self.weights))
        if len(weights) != m.n:
            raise ValueError(f"Got {len(weights)} weight(s) for {m.n} variable(s)")

        return weights


@dataclass
class Report:
    """The output of a command and its exit code."""

    data: Dict[str, Any]
    lines: List[str] = field(default_factory=list)
    code: ExitCode = ExitCode.SUCCESS

    def render(self, output_format: str) -> str:
        if output_format == "json":
            return dumps(self.data)

        return "\n".join(self.lines) + "\n"


def _label(columns: Sequence[int]) -> str:
    return ",".join(str(c + 1) for c in columns)


def _minors(job: JobSpec) -> Report:
    m = job.morphism()
    minors = jacobian_minors(m, include_f=job.with_f)
    data: Dict[str, Any] = {
        "rows": "h,f" if job.with_f else "h",
        "minors": {_label(k): str(v) for k, v in sorted(minors.items())},
    }
    lines = [f"m[{_label(k)}] = {v}" for k, v in sorted(minors.items())]
    return Report(data, lines)


def _basis(job: JobSpec) -> Report:
    m = job.morphism()
    nw = normalize_weights(m, job.weight_system(m))
    ideal = critical_ideal(m, include_f=True)
    gb = buchberger(ideal, MonomialOrder.from_weights(nw.alpha, job.order))
    basis = quotient_basis(gb, nw.alpha)
    monomials = [str(m.ring.one().mul_term(mono)) for mono in basis.monomials]
    data: Dict[str, Any] = {
        "dimension": basis.dimension,
        "monomials": monomials,
        "weights": [str(w) for w in basis.weights],
        "weight_set": [str(w) for w in basis.weight_set],
        "multiplicities": {str(w): k for w, k in basis.multiplicities.items()},
    }
    lines = [f"dimension: {basis.dimension}"]
    lines.extend(f"{mono}  (weight {w})" for mono, w in zip(monomials, basis.weights))
    return Report(data, lines)


def _bprime(job: JobSpec) -> Report:
    m = job.morphism()
    nw = normalize_weights(m, job.weight_system(m))
    b = bprime_wh(m, nw, job.order)
    data: Dict[str, Any] = {
        "bprime": factored_to_json(b),
        "text": str(b),
        "alpha": format_weights(nw.alpha),
        "rho": format_weights(nw.rho),
        "integral_roots": integral_roots(b),
    }
    return Report(data, [f"b'(s) = {b}"])


def _check_input(verdict: Verdict) -> None:
    # Inputs outside the closed formula exit 1, running out of resources exits 2
    if verdict.error is not None and not isinstance(
        verdict.error, ResourceLimitError
    ):
        raise verdict.error


def _bs(job: JobSpec) -> Report:
    m = job.morphism()
    weights = job.weight_system(m)
    verdict = decide_hypersurface(m.f, weights, job.order)
    _check_input(verdict)
    data: Dict[str, Any] = {"verdict": verdict.to_json()}
    lines = []
    if verdict.evidence:
        btilde = verdict.evidence[0].bpoly
        b = full_from_reduced(btilde)
        data["btilde"] = factored_to_json(btilde)
        data["b"] = factored_to_json(b)
        data["text"] = str(b)
        lines.append(f"b(s) = {b}")

    lines.append(f"verdict: {verdict.conclusion.value}")
    if verdict.conclusion is Conclusion.INCONCLUSIVE:
        lines.append(f"reason: {verdict.reason}")
        return Report(data, lines, ExitCode.INCONCLUSIVE)

    return Report(data, lines)


def _decide(job: JobSpec) -> Report:
    m = job.morphism()
    verdict = decide_ci(m, job.weight_system(m), job.assume_generation, job.order)
    _check_input(verdict)
    lines = [
        f"verdict: {verdict.conclusion.value}",
        f"hypothesis: {verdict.hypothesis_status.value}",
    ]
    lines.extend(
        f"{e.name} = {e.bpoly}, integral roots {list(e.integral_roots)}"
        for e in verdict.evidence
    )
    if verdict.reason:
        lines.append(f"reason: {verdict.reason}")

    code = (
        ExitCode.INCONCLUSIVE
        if verdict.conclusion is Conclusion.INCONCLUSIVE
        else ExitCode.SUCCESS
    )
    return Report(verdict.to_json(), lines, code)


def _verify(job: JobSpec) -> Report:
    cert = load_certificate(job.certificate)  # type: ignore[arg-type]
    verified = verify_membership_certificate(
        cert.b,
        cert.parts,
        cert.morphism,
        powers=cert.powers,
        allow_arbitrary=cert.allow_arbitrary,
    )
    code = ExitCode.SUCCESS if verified else ExitCode.INPUT_ERROR
    return Report({"verified": verified}, [f"verified: {str(verified).lower()}"], code)


def _infer_weights(job: JobSpec) -> Report:
    m = job.morphism()
    nw = normalize_weights(m, job.weight_system(m))
    data = {"weights": format_weights(nw.alpha), "rho": format_weights(nw.rho)}
    lines = [f"weights: ({', '.join(data['weights'])})"]
    if m.p:
        lines.append(f"rho: ({', '.join(data['rho'])})")

    return Report(data, lines)


HANDLERS = {
    "minors": _minors,
    "basis": _basis,
    "bprime": _bprime,
    "bs": _bs,
    "decide": _decide,
    "verify": _verify,
    "infer-weights": _infer_weights,
}


class _ArgumentParser(argparse.ArgumentParser):
    """Exit with `ExitCode.INPUT_ERROR` on invalid arguments."""

    def error(self, message: str) -> NoReturn:
        self.exit(
            ExitCode.INPUT_ERROR, f"error: {message}, see '{self.prog} --help'\n"
        )


def _parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="bprime",
        description=(
            "Bernstein-type polynomials of weighted-homogeneous complete "
            "intersections"
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--job", help="run the command described by a JSON job file")
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="log debugging output to stderr"
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--h", action="append", default=[], metavar="EXPR",
        help="a component h_i, repeat for each one",
    )
    common.add_argument("--f", metavar="EXPR", help="the last component f")
    common.add_argument("--nvars", type=int, help="the number of variables")
    common.add_argument(
        "--weights", default="infer",
        help="'infer' (default) or comma-separated weights such as '1/2,1/3'",
    )
    common.add_argument(
        "--order", choices=[k.value for k in OrderKind], default="wgrevlex",
        help="the monomial order for Groebner bases",
    )
    common.add_argument("--format", choices=["json", "text"], default="json")

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    helps = {
        "minors": "maximal minors of the Jacobian matrix",
        "basis": "monomial basis of O/((h, f) + J_{h,f})",
        "bprime": "the closed formula for b'_f(h, s)",
        "bs": "Bernstein polynomial and decision for a hypersurface",
        "decide": "decide whether L = R for a complete intersection",
        "verify": "check a functional equation certificate",
        "infer-weights": "weights making every component homogeneous",
    }
    for name in COMMANDS:
        sub = subparsers.add_parser(name, parents=[common], help=helps[name])
        if name == "minors":
            sub.add_argument(
                "--with-f", action="store_true", help="include f as the last row"
            )
        elif name == "decide":
            sub.add_argument(
                "--assume-generation", action="store_true",
                help="assume delta_h generates R_h when it can't be established",
            )
        elif name == "verify":
            sub.add_argument("--certificate", required=True, help="JSON certificate")

    return parser


def _job(args: argparse.Namespace) -> JobSpec:
    if args.job:
        with open(args.job, "r", encoding="utf-8") as f:
            try:
                return JobSpec.from_json(json.load(f))
            except json.JSONDecodeError as exc:
                raise ValueError(
                    f"'{args.job}' is not a valid JSON file: {exc}"
                ) from exc

    if not args.command:
        raise ValueError("No command given, see 'bprime --help'")

    return JobSpec(
        command=args.command,
        h=tuple(args.h),
        f=args.f,
        nvars=args.nvars,
        weights=args.weights,
        order=OrderKind(args.order),
        output_format=args.format,
        with_f=getattr(args, "with_f", False),
        assume_generation=getattr(args, "assume_generation", False),
        certificate=getattr(args, "certificate", None),
    )


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line interface and return the exit code.

    Parameters
    ----------
    argv : list[str], optional
        The arguments, default ``sys.argv[1:]``.

    Returns
    -------
    int
        ``0`` on success, ``1`` for invalid input or a certificate that
        doesn't verify and ``2`` for an inconclusive decision.
    """
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        # --help, --version and invalid arguments
        return int(exc.code or 0)

    if args.verbose:
        debug_logger()

    try:
        job = _job(args)
        report = HANDLERS[job.command](job)
    except (BprimeError, ValueError, OSError) as exc:
        LOGGER.debug(f"{type(exc).__name__}: {exc}")
        sys.stderr.write(f"error: {exc}\n")
        return ExitCode.INPUT_ERROR

    sys.stdout.write(report.render(job.output_format))
    return report.code


def main() -> None:
    sys.exit(run())
