"""
Command-line frontend for the Freiman rectifier.
Dispatches subcommands to the library and emits one structured document per run.
"""

import argparse
import logging
import random
import sys
import time
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from app.core.config import get_settings
from app.core.errors import (
    EXIT_OK,
    BoundAbortError,
    RectifierError,
    UsageError,
    VerificationError,
)
from app.models.schemas import (
    BoundProfile,
    CommandName,
    RectifyResult,
    ResultantResult,
    RunDocument,
    RunStatus,
    SubresultantResult,
)
from app.modules.constructible import (
    adversarial_set,
    build_chain,
    build_special_chain,
    certify_nonconstructible,
    count_constructible_upper,
)
from app.modules.demos import (
    PointLineConfig,
    lattice_report,
    sparse_square_terms,
    transfer_incidences,
    transfer_report,
)
from app.modules.exact_linalg import rectify_linear
from app.modules.int_poly import IntPoly, default_names, parse_poly
from app.modules.rectifier import get_rectifier
from app.modules.resultants import resultant, subresultants, sylvester, to_domain_poly
from app.modules.tower import Tower
from app.services.report_writer import get_report_writer

logger = logging.getLogger(__name__)

_STATUS_BY_EXIT = {
    0: RunStatus.VERIFIED,
    1: RunStatus.USAGE_ERROR,
    2: RunStatus.BOUND_ABORT,
    3: RunStatus.VERIFICATION_FAILURE,
}


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as exit 1."""

    def error(self, message: str):
        raise UsageError(message)


# ----------------------------------------------------------------------
# Flag parsing
# ----------------------------------------------------------------------

def parse_set(text: Optional[str]) -> List[int]:
    if not text:
        raise UsageError("--set is required")
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise UsageError(f"--set must be comma-separated integers, got {text!r}")


def parse_order(text: Optional[str], n: int) -> Optional[List[int]]:
    """1-based variable indices, e.g. "2,1"."""
    if not text:
        return None
    try:
        order = [int(item) - 1 for item in text.split(",")]
    except ValueError:
        raise UsageError(f"--order must list variable indices, got {text!r}")
    if sorted(order) != list(range(n)):
        raise UsageError(f"--order must be a permutation of 1..{n}")
    return order


def parse_fractions(text: str) -> List[Fraction]:
    try:
        return [Fraction(item.strip()) for item in text.split(",") if item.strip()]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot read rationals from {text!r}")


def _require(value: Any, flag: str) -> Any:
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _common_polys(texts: Sequence[str]) -> Tuple[List[IntPoly], int]:
    polys = [parse_poly(text) for text in texts]
    nvars = max(f.nvars for f in polys)
    return [f.extend(nvars) if f.nvars < nvars else f for f in polys], nvars


def _variable_index(name: str, nvars: int) -> int:
    names = default_names(nvars)
    if name not in names:
        raise UsageError(f"--var {name!r} is not one of {names}")
    return names.index(name)


def _profile(args: argparse.Namespace) -> BoundProfile:
    settings = get_settings()
    k = args.k or settings.DEFAULT_K
    return BoundProfile(k=k, t=args.t or settings.DEFAULT_T or k)


# ----------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------

def cmd_rectify(args: argparse.Namespace) -> Tuple[Dict[str, Any], Dict[str, bool]]:
    values = parse_set(args.set)
    profile = _profile(args)
    result = get_rectifier().rectify(
        values,
        _require(args.p, "--p"),
        profile.k,
        t=profile.t,
        force=args.force,
        order=parse_order(args.order, len(values)),
        require_guarantee=args.require_guarantee,
    )
    document = result.to_result()
    flags = {"guaranteed": document.guaranteed, "exact_ok": document.exact_ok, "verified": document.verified}
    return document.model_dump(mode="json"), flags


def cmd_verify(args: argparse.Namespace) -> Tuple[Dict[str, Any], Dict[str, bool]]:
    rectifier = get_rectifier()
    if args.document:
        source = get_report_writer().read(args.document)
        if source.result is None:
            raise UsageError(f"{args.document} carries no result")
        previous = RectifyResult.model_validate(source.result)
        tower = Tower.from_document(previous.tower)
        points = [tower.parse_element(text) for text in previous.points]
        report = rectifier.verify(previous.anchors, points, tower.prime, previous.profile.k, previous.profile.t)
    else:
        values = parse_set(args.set)
        points = parse_fractions(_require(args.points, "--points"))
        profile = _profile(args)
        report = rectifier.verify(values, points, _require(args.p, "--p"), profile.k, profile.t)
    if not report.passed:
        raise VerificationError(
            "candidate is not ring-isomorphic to the set",
            {"discrepancy": report.first_discrepancy, "result": report.model_dump(mode="json")},
        )
    return report.model_dump(mode="json"), {"verified": report.passed}


def cmd_lift_linear(args: argparse.Namespace) -> Tuple[Dict[str, Any], Dict[str, bool]]:
    values = parse_set(args.set)
    k = args.k or get_settings().DEFAULT_K
    result = rectify_linear(values, _require(args.p, "--p"), k)
    return result.model_dump(mode="json"), {"guaranteed": result.guaranteed, "verified": result.verified}


def cmd_resultant(args: argparse.Namespace) -> Tuple[Dict[str, Any], Dict[str, bool]]:
    (f, g), nvars = _common_polys([_require(args.f, "--f"), _require(args.g, "--g")])
    names = default_names(nvars)
    var = _variable_index(args.var, nvars)
    F = to_domain_poly(f, var)
    G = to_domain_poly(g, var, F.domain)
    result = ResultantResult(
        f=f.to_text(names),
        g=g.to_text(names),
        variable=args.var,
        sylvester=[[entry.to_text(names) for entry in row] for row in sylvester(F, G)],
        resultant=resultant(F, G).to_text(names),
    )
    return result.model_dump(mode="json"), {}


def cmd_subres(args: argparse.Namespace) -> Tuple[Dict[str, Any], Dict[str, bool]]:
    (f, g), nvars = _common_polys([_require(args.f, "--f"), _require(args.g, "--g")])
    names = default_names(nvars)
    var = _variable_index(args.var, nvars)
    F = to_domain_poly(f, var)
    G = to_domain_poly(g, var, F.domain)
    seq = subresultants(F, G)
    index = seq.first_nonzero_principal()

    def render(entry) -> str:
        return entry.to_text(args.var, coeff_text=lambda c: c.to_text(names))

    result = SubresultantResult(
        f=f.to_text(names),
        g=g.to_text(names),
        variable=args.var,
        entries=[render(entry) for entry in seq.entries],
        principal=[seq.principal(i).to_text(names) for i in range(len(seq))],
        gcd_index=index,
        gcd=render(seq.entries[index]),
    )
    return result.model_dump(mode="json"), {}


def cmd_chain(args: argparse.Namespace) -> Tuple[Dict[str, Any], Dict[str, bool]]:
    k = args.k or get_settings().DEFAULT_K
    if args.count is not None:
        bound = count_constructible_upper(args.count, k)
        return bound.model_dump(mode="json"), {}
    if args.certify is not None:
        certificate = certify_nonconstructible(args.certify, k)
        return certificate.model_dump(mode="json"), {"verified": certificate.certified}
    target = _require(args.target, "--target")
    chain = build_special_chain(target, args.special) if args.special else build_chain(target, k)
    document = chain.to_document()
    return document.model_dump(mode="json"), {"verified": document.verified}


def cmd_adversarial(args: argparse.Namespace) -> Tuple[Dict[str, Any], Dict[str, bool]]:
    result = adversarial_set(_require(args.p, "--p"), args.k or 3)
    return result.model_dump(mode="json"), {"verified": result.chain.verified}


def _parse_tuples(text: str, width: int, flag: str) -> List[Tuple[int, ...]]:
    items = []
    for chunk in text.split(","):
        parts = chunk.strip().split(":")
        if len(parts) != width:
            raise UsageError(f"{flag} entries need {width} colon-separated integers, got {chunk!r}")
        try:
            items.append(tuple(int(part) for part in parts))
        except ValueError:
            raise UsageError(f"{flag} entries must be integers, got {chunk!r}")
    return items


def _random_sparse(rng: random.Random, terms: int = 4, max_degree: int = 12) -> IntPoly:
    chosen = rng.sample(range(max_degree + 1), terms)
    return IntPoly({(e,): rng.choice([-3, -2, -1, 1, 2, 3]) for e in chosen}, 1)


def cmd_demo(args: argparse.Namespace) -> Tuple[Dict[str, Any], Dict[str, bool]]:
    if args.kind == "lattice":
        report = lattice_report(args.n or 64)
        return report.model_dump(mode="json"), {"verified": report.incidences == report.expected}
    if args.kind == "terms":
        if args.poly:
            f = parse_poly(args.poly[0])
        else:
            f = _random_sparse(random.Random(args.seed))
        return sparse_square_terms(f).model_dump(mode="json"), {}
    p = _require(args.p, "--p")
    if args.kind == "incidences":
        config = PointLineConfig(
            points=_parse_tuples(_require(args.points, "--points"), 2, "--points"),
            lines=_parse_tuples(_require(args.lines, "--lines"), 3, "--lines"),
        )
        report = transfer_incidences(config, p, force=args.force)
    else:
        f = parse_poly(args.poly[0], nvars=1) if args.poly else None
        report = transfer_report(parse_set(args.set), p, mode=args.mode, f=f, force=args.force)
    return report.model_dump(mode="json"), {"guaranteed": report.gate_holds, "verified": report.equal}


def cmd_solve(args: argparse.Namespace) -> Tuple[Dict[str, Any], Dict[str, bool]]:
    values = parse_set(args.set)
    polys = [parse_poly(text, nvars=len(values)) for text in _require(args.poly, "--poly")]
    result = get_rectifier().solve(
        polys,
        values,
        _require(args.p, "--p"),
        force=args.force,
        order=parse_order(args.order, len(values)),
    )
    document = result.to_result()
    return document.model_dump(mode="json"), {"exact_ok": document.exact_ok, "verified": document.verified}


COMMANDS: Dict[CommandName, Callable[[argparse.Namespace], Tuple[Dict[str, Any], Dict[str, bool]]]] = {
    CommandName.RECTIFY: cmd_rectify,
    CommandName.VERIFY: cmd_verify,
    CommandName.LIFT_LINEAR: cmd_lift_linear,
    CommandName.RESULTANT: cmd_resultant,
    CommandName.SUBRES: cmd_subres,
    CommandName.CHAIN: cmd_chain,
    CommandName.ADVERSARIAL: cmd_adversarial,
    CommandName.DEMO: cmd_demo,
    CommandName.SOLVE: cmd_solve,
}


# ----------------------------------------------------------------------
# Parser and runner
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    common = _Parser(add_help=False)
    common.add_argument("--p", type=int, help="prime modulus")
    common.add_argument("--k", type=int, help="L1 norm cap")
    common.add_argument("--t", type=int, help="total degree cap (defaults to k)")
    common.add_argument("--set", help="comma-separated residues")
    common.add_argument("--force", action="store_true", default=settings.FORCE)
    common.add_argument("--require-guarantee", action="store_true")
    common.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    common.add_argument("--out", help="also write the document to this path")
    common.add_argument("--format", choices=["text", "json"], default=settings.OUTPUT_FORMAT)
    common.add_argument("--order", help="elimination order as 1-based indices")

    parser = _Parser(prog="rectifier", description=settings.APP_DESCRIPTION)
    parser.add_argument("--version", action="version", version=settings.APP_VERSION)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("rectify", parents=[common], help="rectify a subset of F_p")

    verify = sub.add_parser("verify", parents=[common], help="brute-force ring-isomorphism check")
    verify.add_argument("--points", help="comma-separated rationals")
    verify.add_argument("--document", help="rectify document to re-verify")

    sub.add_parser("lift-linear", parents=[common], help="Freiman-isomorphic integer set")

    for name in ("resultant", "subres"):
        command = sub.add_parser(name, parents=[common])
        command.add_argument("--f")
        command.add_argument("--g")
        command.add_argument("--var", default="x1")

    chain = sub.add_parser("chain", parents=[common], help="constructibility chains")
    chain.add_argument("--target", type=int)
    chain.add_argument("--special", choices=["mersenne", "fermat"])
    chain.add_argument("--count", type=int, help="count bound for this many steps")
    chain.add_argument("--certify", type=int, help="non-constructibility certificate for p")

    sub.add_parser("adversarial", parents=[common], help="non-rectifiable residue set")

    demo = sub.add_parser("demo", parents=[common], help="applications")
    demo.add_argument("kind", choices=["lattice", "transfer", "terms", "incidences"])
    demo.add_argument("--n", type=int)
    demo.add_argument("--mode", default="sumproduct", choices=["sumproduct", "inverse", "polynomial-image", "polynomial"])
    demo.add_argument("--poly", action="append")
    demo.add_argument("--points", help="x:y pairs")
    demo.add_argument("--lines", help="a:b:c triples")

    solve = sub.add_parser("solve", parents=[common], help="algebraic solution of a system")
    solve.add_argument("--poly", action="append")
    return parser


def _inputs(args: argparse.Namespace) -> Dict[str, Any]:
    return {key: value for key, value in vars(args).items() if value is not None and key != "command"}


def run(args: argparse.Namespace) -> Tuple[RunDocument, int]:
    """
    Dispatch one job.

    Returns:
        (document, exit code)
    """
    settings = get_settings()
    command = CommandName(args.command)
    started = time.perf_counter()
    result: Optional[Dict[str, Any]] = None
    error: Optional[Dict[str, Any]] = None
    flags: Dict[str, bool] = {"force": bool(args.force)}
    try:
        result, extra = COMMANDS[command](args)
        flags.update(extra)
        code = EXIT_OK
    except RectifierError as e:
        code = e.exit_code
        error = e.to_dict()
        error["details"].pop("result", None)
        if isinstance(e.details.get("result"), dict):
            result = e.details["result"]
        if isinstance(e, BoundAbortError):
            logger.warning(f"{command.value}: bound abort: {e.message}")
        elif isinstance(e, UsageError):
            logger.warning(f"{command.value}: usage error: {e.message}")
        else:
            logger.error(f"{command.value}: {type(e).__name__}: {e.message}")
    except Exception as e:
        logger.error(f"Unhandled exception in {command.value}: {e}", exc_info=True)
        code = 3
        error = {"type": type(e).__name__, "message": str(e), "details": {}}

    elapsed = (time.perf_counter() - started) * 1000 if settings.INCLUDE_TIMING else None
    document = RunDocument(
        command=command,
        status=_STATUS_BY_EXIT[code],
        exit_code=code,
        version=settings.APP_VERSION,
        inputs=_inputs(args),
        flags=flags,
        result=result,
        error=error,
        elapsed_ms=elapsed,
    )
    return document, code


def main(argv: Optional[Sequence[str]] = None) -> int:
    settings = get_settings()
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"usage error: {e.message}", file=sys.stderr)
        return e.exit_code

    document, code = run(args)
    sys.stdout.write(get_report_writer().write(document, out=args.out, fmt=args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
