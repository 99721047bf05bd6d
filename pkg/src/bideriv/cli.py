"""Command-line front end.

    bideriv analyze POSET
    bideriv check POSET MAP [--ring R]
    bideriv decompose POSET MAP [--ring R]
    bideriv solve POSET --prime P [--no-prune]
    bideriv fuzz POSET [--ring R] --seed N --trials N

JSON on stdout is the contract; ``--format text`` prints the same content as
``path: value`` lines.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Any

from .bilinear import BilinearMap, is_biderivation, lemma_suite, map_from_spec
from .poset import CycleError, FinitePoset, PosetError
from .rings import RingDescriptor, RingError
from .sampling import COEFF_BOUND, DENOM_BOUND, random_biderivation
from .solver import SolverError, assemble, solve_basis
from .structure import (
    DecompositionError,
    check_preconditions,
    extract_decomposition,
    reconstruct,
    verify_lambda_constancy,
    verify_structure_theorem,
)

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_POSET_AXIOM = 4
EXIT_IDENTITY = 5
EXIT_PRECONDITION = 6
EXIT_ROUND_TRIP = 7

_STAGE_EXIT = {
    "biderivation": EXIT_IDENTITY,
    "preconditions": EXIT_PRECONDITION,
    "lambda constancy": EXIT_ROUND_TRIP,
    "round trip": EXIT_ROUND_TRIP,
}


class CliError(Exception):
    def __init__(self, code: int, message: str, payload: dict | None = None):
        super().__init__(message)
        self.code = code
        self.payload = payload or {}


# -- input -----------------------------------------------------------------------------


def _read_json(path: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def load_poset(path: str) -> FinitePoset:
    obj = _read_json(path)
    try:
        return FinitePoset.from_json(obj)
    except CycleError as exc:
        raise CliError(EXIT_POSET_AXIOM, f"{path}: {exc}", {"witness": list(exc.cycle)}) from None
    except PosetError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from None


def load_map(path: str, poset: FinitePoset, ring: RingDescriptor) -> BilinearMap:
    obj = _read_json(path)
    try:
        return map_from_spec(poset, ring, obj)
    except (ValueError, RingError) as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from None


# -- commands ----------------------------------------------------------------------------


def cmd_analyze(args) -> tuple[dict, int]:
    p = load_poset(args.poset)
    comps = p.connected_components().components
    pre = check_preconditions(p)
    out = {
        "elements": list(p.elements),
        "covers": [list(c) for c in p.cover_pairs()],
        "minimal": list(p.minimal_elements()),
        "maximal": list(p.maximal_elements()),
        "components": [
            {
                "elements": list(members),
                "maximal_chains": [list(ch) for ch in p.maximal_chains(c)],
                "regions": [list(r) for r in p.chain_regions(c).regions],
            }
            for c, members in enumerate(comps)
        ],
        "min_maximal_chain_size": p.min_maximal_chain_size(),
        "precondition": pre.to_json(p, RingDescriptor.integer()),
    }
    return out, EXIT_OK


def cmd_check(args) -> tuple[dict, int]:
    p = load_poset(args.poset)
    d = args.ring
    b = load_map(args.map, p, d)
    bider = is_biderivation(b)
    reports = {"biderivation": bider}
    reports.update(lemma_suite(b))
    if check_preconditions(p).passed:
        for c in range(p.num_components):
            for r in range(p.num_regions(c)):
                reports[f"lambda constancy {c}.{r}"] = verify_lambda_constancy(b, c, r)
    passed = all(rep.passed for rep in reports.values())
    out = {
        "ring": str(d),
        "passed": passed,
        "checks": {name: rep.to_json(p, d) for name, rep in reports.items()},
    }
    return out, EXIT_OK if passed else EXIT_IDENTITY


def cmd_decompose(args) -> tuple[dict, int]:
    p = load_poset(args.poset)
    d = args.ring
    b = load_map(args.map, p, d)
    report = verify_structure_theorem(b)
    if not report.passed:
        return {"passed": False, "stage": report.name, "report": report.to_json(p, d)}, _STAGE_EXIT[report.name]
    return extract_decomposition(b).to_json(), EXIT_OK


def cmd_solve(args) -> tuple[dict, int]:
    p = load_poset(args.poset)
    try:
        system = assemble(p, args.prime, prune=not args.no_prune)
    except SolverError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    basis = solve_basis(system)
    return {"prime": args.prime, "dimension": len(basis), "basis": [m.to_json() for m in basis]}, EXIT_OK


def cmd_fuzz(args) -> tuple[dict, int]:
    p = load_poset(args.poset)
    d = args.ring
    pre = check_preconditions(p)
    if not pre.passed:
        return {"passed": False, "stage": "preconditions", "report": pre.to_json(p, d)}, EXIT_PRECONDITION
    rng = random.Random(args.seed)
    failures = []
    for trial in range(args.trials):
        b, expected = random_biderivation(p, d, rng)
        try:
            dec = extract_decomposition(b)
        except DecompositionError as exc:
            failures.append({"trial": trial, "stage": exc.stage, "report": exc.report.to_json(p, d)})
            continue
        rebuilt = reconstruct(dec)
        if rebuilt != b or dec != expected:
            failures.append({
                "trial": trial,
                "stage": "round trip",
                "mismatched_pairs": len(b.differences(rebuilt)),
                "recovered_generators": dec == expected,
            })
    out = {
        "ring": str(d),
        "seed": args.seed,
        "trials": args.trials,
        "passed": args.trials - len(failures),
        "failures": failures,
    }
    return out, EXIT_OK if not failures else EXIT_ROUND_TRIP


# -- output ------------------------------------------------------------------------------


def _text_lines(obj: Any, prefix: str = "") -> list[str]:
    if isinstance(obj, dict):
        if not obj:
            return [f"{prefix}: {{}}"] if prefix else []
        lines = []
        for k, v in obj.items():
            lines += _text_lines(v, f"{prefix}.{k}" if prefix else str(k))
        return lines
    if isinstance(obj, list):
        if not obj:
            return [f"{prefix}: []"]
        if all(not isinstance(v, (dict, list)) for v in obj):
            return [f"{prefix}: " + ", ".join(json.dumps(v) if not isinstance(v, str) else v for v in obj)]
        lines = []
        for i, v in enumerate(obj):
            lines += _text_lines(v, f"{prefix}[{i}]")
        return lines
    return [f"{prefix}: {json.dumps(obj) if not isinstance(obj, str) else obj}"]


def render(obj: Any, fmt: str) -> str:
    if fmt == "text":
        return "\n".join(_text_lines(obj))
    return json.dumps(obj, indent=2, sort_keys=True)


# -- argument parsing ------------------------------------------------------------------------


def _ring_arg(text: str) -> RingDescriptor:
    try:
        return RingDescriptor.parse(text)
    except RingError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _seed_arg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return n


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if n <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bideriv",
        description="Biderivations of incidence algebras of finite posets.",
        epilog=(
            f"exit codes: {EXIT_OK} ok, 2 usage, {EXIT_PARSE} parse error, {EXIT_POSET_AXIOM} poset axiom "
            f"violation, {EXIT_IDENTITY} identity violation, {EXIT_PRECONDITION} precondition failure, "
            f"{EXIT_ROUND_TRIP} round-trip mismatch"
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    ring_opt = argparse.ArgumentParser(add_help=False)
    ring_opt.add_argument(
        "--ring", type=_ring_arg, default=RingDescriptor.integer(),
        help="integer | modular:N | rational (default: integer)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="components, chains, regions, precondition")
    a.add_argument("poset")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("check", parents=[common, ring_opt], help="biderivation laws and lemma suites")
    c.add_argument("poset")
    c.add_argument("map")
    c.set_defaults(func=cmd_check)

    dcmp = sub.add_parser("decompose", parents=[common, ring_opt], help="extract lambdas and T, verify round trip")
    dcmp.add_argument("poset")
    dcmp.add_argument("map")
    dcmp.set_defaults(func=cmd_decompose)

    s = sub.add_parser("solve", parents=[common], help="basis of all biderivations over Z/p")
    s.add_argument("poset")
    s.add_argument("--prime", type=int, required=True)
    s.add_argument("--no-prune", action="store_true", help="keep every coordinate as an unknown")
    s.set_defaults(func=cmd_solve)

    f = sub.add_parser(
        "fuzz", parents=[common, ring_opt], help="round-trip random inner + extremal sums",
        description=(
            "Sample lambdas and T coefficients: integers in "
            f"-{COEFF_BOUND}..{COEFF_BOUND}, all of Z/n, or rationals a/b with a in "
            f"-{COEFF_BOUND}..{COEFF_BOUND} and b in 1..{DENOM_BOUND}."
        ),
    )
    f.add_argument("poset")
    f.add_argument("--seed", type=_seed_arg, required=True)
    f.add_argument("--trials", type=_positive_int, required=True)
    f.set_defaults(func=cmd_fuzz)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out, code = args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        out, code = {"error": str(exc), **exc.payload}, exc.code
    print(render(out, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
