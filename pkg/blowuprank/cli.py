"""Command-line front end.

Reports go to standard output (or ``--out``) as JSON; diagnostics go to
standard error. Exit codes: 0 success, 1 usage, parse or construction error,
2 search infeasible under the cap, 3 file or serialization error.
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, NoReturn, Optional, Sequence

from blowuprank.config import SearchConfig, load_settings
from blowuprank.construct import (
    check_hypothesis,
    construct_from_polynomial,
    construct_remark_f2,
    construct_skew3,
    construct_theorem2,
    theorem2_hypotheses,
    verify_counterexample,
)
from blowuprank.core import (
    BlowupError,
    CapExceededError,
    SerializationError,
    SpaceFileError,
    format_exception,
)
from blowuprank.gf import FieldSpec, field_make
from blowuprank.higman import higman_linearize, pad_pencil, verify_higman
from blowuprank.io import SpaceFile, read_space, write_json
from blowuprank.logging import configure_logging, get_module_logger
from blowuprank.ncpoly import ncpoly_parse
from blowuprank.pencil import SearchMode, blowup_profile, blowup_rank
from blowuprank.serialization import report, serialize, tool_info

logger = get_module_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_IO = 3

Payload = Dict[str, Any]


class ArgumentParser(argparse.ArgumentParser):
    """Argument parser that exits with the usage code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _modulus(text: str) -> List[int]:
    try:
        return [int(c) for c in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid modulus {text!r}") from e


def _field(args: argparse.Namespace) -> FieldSpec:
    return field_make(args.p, args.k, args.modulus)


def _search_config(args: argparse.Namespace) -> SearchConfig:
    settings = args.settings
    return settings.search_config(
        cap=getattr(args, "cap", None),
        threads=getattr(args, "threads", None),
        budget=getattr(args, "budget", None),
        seed=getattr(args, "seed", None),
    )


def _search_parameters(args: argparse.Namespace, config: SearchConfig) -> Payload:
    parameters: Payload = {"cap": config.cap}
    if getattr(args, "mode", None) == SearchMode.RANDOM.value:
        parameters.update(seed=config.seed, budget=config.budget)
    return parameters


def _space_file(pencil: Any, instance: Any) -> Payload:
    data = serialize(SpaceFile(pencil, instance))
    data["tool"] = tool_info()
    return data


# Commands -------------------------------------------------------------


def cmd_construct(args: argparse.Namespace) -> Payload:
    """Build a space file."""
    family = args.family
    if family == "theorem2":
        F = _field(args)
        pencil = construct_theorem2(F, args.d, args.n)
        instance: Any = {"q": F.q, "d": args.d, "n": args.n}
        data = _space_file(pencil, instance)
        data["hypotheses"] = theorem2_hypotheses(F.q, args.d, args.n).serialize()
        return data
    if family == "remark-f2":
        return _space_file(construct_remark_f2(), "remark_f2")
    if family == "skew3":
        return _space_file(construct_skew3(_field(args)), "skew3")
    F = _field(args)
    f = ncpoly_parse(args.poly, F)
    return _space_file(
        construct_from_polynomial(f, args.pad), {"poly": f.to_text(), "pad": args.pad}
    )


def cmd_blowup_rank(args: argparse.Namespace) -> Payload:
    """Search one blow-up rank."""
    space = read_space(args.space)
    config = _search_config(args)
    certificate = blowup_rank(space.pencil, args.d, args.mode, config)
    parameters = {"space": str(args.space), "d": args.d, "mode": args.mode}
    parameters.update(_search_parameters(args, config))
    body = {"instance": space.instance, "certificate": certificate.serialize()}
    return report("certificate", body, space.pencil.field, parameters)


def cmd_verify(args: argparse.Namespace) -> Payload:
    """Verify a counterexample candidate."""
    space = read_space(args.space)
    config = _search_config(args)
    verdict = verify_counterexample(
        space.pencil, args.d, args.mode, config, space.instance
    )
    parameters = {"space": str(args.space), "d": args.d, "mode": args.mode}
    parameters.update(_search_parameters(args, config))
    return report("verdict", verdict.serialize(), space.pencil.field, parameters)


def cmd_census(args: argparse.Namespace) -> Payload:
    """Singularity census plus nonzero witness."""
    F = _field(args)
    f = ncpoly_parse(args.poly, F)
    config = _search_config(args)
    hypothesis = check_hypothesis(f, args.d, config)
    body = hypothesis.census.serialize()
    body.update(
        holds=hypothesis.holds, nonzero_witness=hypothesis.witness.serialize()
    )
    parameters = {"poly": args.poly, "d": args.d, "cap": config.cap}
    return report("census", body, F, parameters)


def cmd_higman(args: argparse.Namespace) -> Payload:
    """Linearize a polynomial and optionally verify and pad it."""
    F = _field(args)
    f = ncpoly_parse(args.poly, F)
    pencil = higman_linearize(f)
    config = _search_config(args)
    body: Payload = {
        "poly": f.to_text(),
        "size": pencil.rows,
        "pencil": pencil.serialize(),
    }
    checks = [verify_higman(pencil, f, d, config) for d in args.verify_d or []]
    body["verification"] = [c.serialize() for c in checks]
    body["contract_holds"] = all(c.holds for c in checks) if checks else None
    if args.pad is not None:
        body["padded"] = pad_pencil(pencil, args.pad).serialize()
    parameters = {"poly": args.poly, "verify_d": args.verify_d or [], "pad": args.pad}
    return report("higman", body, F, parameters)


def cmd_profile(args: argparse.Namespace) -> Payload:
    """Blow-up ranks for d = 1, ..., d_max."""
    space = read_space(args.space)
    config = _search_config(args)
    certificates = blowup_profile(
        space.pencil, range(1, args.d_max + 1), args.mode, config
    )
    body = {
        "instance": space.instance,
        "profile": [c.serialize() for c in certificates],
        "regular": all(c.is_multiple_of_d for c in certificates),
    }
    parameters = {"space": str(args.space), "d_max": args.d_max, "mode": args.mode}
    parameters.update(_search_parameters(args, config))
    return report("profile", body, space.pencil.field, parameters)


# Parser ---------------------------------------------------------------


def _add_field_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=int, required=True, help="Field characteristic")
    parser.add_argument("--k", type=int, default=1, help="Extension degree")
    parser.add_argument(
        "--modulus",
        type=_modulus,
        default=None,
        help="Irreducible modulus coefficients, highest degree first (e.g. 1,1,1)",
    )


def _add_search_arguments(parser: argparse.ArgumentParser, modes: bool = True) -> None:
    if modes:
        parser.add_argument(
            "--mode",
            choices=[m.value for m in SearchMode],
            default=SearchMode.EXHAUSTIVE.value,
        )
        parser.add_argument("--seed", type=int, default=None, help="Random-mode seed")
        parser.add_argument(
            "--budget", type=int, default=None, help="Random-mode samples"
        )
    parser.add_argument("--threads", type=int, default=None, help="Worker count")
    parser.add_argument("--cap", type=int, default=None, help="Exhaustive tuple cap")


def build_parser() -> ArgumentParser:
    """Build the argument parser."""
    parser = ArgumentParser(
        prog="blowup-rank",
        description="Exact blow-up ranks of matrix spaces over small finite fields.",
    )
    parser.add_argument("--config", type=Path, default=None, help="YAML settings file")
    parser.add_argument("--log-level", default=None, help="Log level")
    parser.add_argument(
        "--log-json", action="store_true", default=None, help="JSON log lines"
    )
    parser.add_argument("--out", type=Path, default=None, help="Report path")
    commands = parser.add_subparsers(dest="command", required=True)

    construct = commands.add_parser("construct", help="Build a space file")
    families = construct.add_subparsers(dest="family", required=True)
    theorem2 = families.add_parser("theorem2", help="Padded Frobenius pencil")
    _add_field_arguments(theorem2)
    theorem2.add_argument("--d", type=int, required=True)
    theorem2.add_argument("--n", type=int, required=True)
    families.add_parser("remark-f2", help="The 7×7 pencil over GF(2)")
    skew3 = families.add_parser("skew3", help="3×3 skew-symmetric pencil")
    _add_field_arguments(skew3)
    polynomial = families.add_parser("polynomial", help="Padded linearization of f")
    _add_field_arguments(polynomial)
    polynomial.add_argument("--poly", required=True)
    polynomial.add_argument("--pad", type=int, default=1)
    construct.set_defaults(handler=cmd_construct)

    for name, handler, helptext in (
        ("blowup-rank", cmd_blowup_rank, "Search a blow-up rank"),
        ("verify", cmd_verify, "Verify a counterexample"),
    ):
        sub = commands.add_parser(name, help=helptext)
        sub.add_argument("--space", type=Path, required=True)
        sub.add_argument("--d", type=int, required=True)
        _add_search_arguments(sub)
        sub.set_defaults(handler=handler)

    profile = commands.add_parser("profile", help="Blow-up ranks for a range of d")
    profile.add_argument("--space", type=Path, required=True)
    profile.add_argument("--d-max", type=int, required=True)
    _add_search_arguments(profile)
    profile.set_defaults(handler=cmd_profile)

    census = commands.add_parser("census", help="Singularity census of f")
    _add_field_arguments(census)
    census.add_argument("--poly", required=True)
    census.add_argument("--d", type=int, required=True)
    _add_search_arguments(census, modes=False)
    census.add_argument("--seed", type=int, default=None, help="Witness fallback seed")
    census.add_argument(
        "--budget", type=int, default=None, help="Witness fallback samples"
    )
    census.set_defaults(handler=cmd_census)

    higman = commands.add_parser("higman", help="Linearize f")
    _add_field_arguments(higman)
    higman.add_argument("--poly", required=True)
    higman.add_argument("--verify-d", type=int, action="append", default=None)
    higman.add_argument("--pad", type=int, default=None)
    _add_search_arguments(higman, modes=False)
    higman.set_defaults(handler=cmd_higman)
    return parser


def _exit_code(error: BlowupError) -> int:
    if isinstance(error, CapExceededError):
        return EXIT_INFEASIBLE
    if isinstance(error, (SpaceFileError, SerializationError)):
        return EXIT_IO
    return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line.

    Args:
        argv: Arguments, defaults to ``sys.argv[1:]``

    Returns:
        Exit code
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.settings = load_settings(
            args.config, log_level=args.log_level, log_json=args.log_json
        )
        configure_logging(args.settings.log_level, args.settings.log_json)
        handler: Callable[[argparse.Namespace], Payload] = args.handler
        logger.info("command_started", command=args.command)
        payload = handler(args)
        write_json(payload, args.out)
    except BlowupError as e:
        sys.stderr.write(f"error: {format_exception(e)}\n")
        return _exit_code(e)
    return EXIT_OK


__all__ = [
    "EXIT_INFEASIBLE",
    "EXIT_IO",
    "EXIT_OK",
    "EXIT_USAGE",
    "build_parser",
    "cmd_blowup_rank",
    "cmd_census",
    "cmd_construct",
    "cmd_higman",
    "cmd_profile",
    "cmd_verify",
    "main",
]
