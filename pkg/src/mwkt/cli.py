"""Command-line interface: normalize, equal, theta, decompose, chain, verify.

Reports are deterministic for a fixed configuration: the same field, seed and
case count produce byte-identical JSON.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field as dc_field

from .common import ParseError, Verdict
from .fields import Field, FieldElement, make_field, parse_diagonal, parse_element
from .forms import DiagonalForm, witt_decompose
from .expressions import kmw_compare, normalize, parse, print_expr, theta
from .wittring import (
    IFiltClass,
    chain_equiv_search,
    in_ideal_power,
    pfister_decompose,
    witt_class,
)
from .suites import SUITE_NAMES, run_suite


@dataclass
class CliConfig:
    """Validated global options shared by all subcommands."""

    field_spec: str | None
    seed: int
    cases: int
    degree_bound: int
    json_output: bool
    suites: tuple[str, ...] = ()
    lets: dict[str, str] = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.cases < 0:
            raise ValueError("case count must be nonnegative")
        if self.degree_bound < 0:
            raise ValueError("degree bound must be nonnegative")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mwkt",
        description=(
            "Milnor-Witt K-theory calculator: canonical forms, equality "
            "verdicts, Witt-ring decompositions and verification suites."
        ),
    )
    parser.add_argument(
        "--field",
        default=None,
        help='coefficient field, e.g. "GF(7)", "GF(2^3)", "GF(2)(t)", "GF(4)(t,u)"',
    )
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    parser.add_argument(
        "--cases", type=int, default=100, help="cases per identity (default 100)"
    )
    parser.add_argument(
        "--degree-bound",
        type=int,
        default=2,
        help="total-degree bound for random function-field elements (default 2)",
    )
    parser.add_argument(
        "--json", action="store_true", help="machine-readable JSON output"
    )
    parser.add_argument(
        "--let",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="bind a name to a field element for use inside expressions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="canonical form of an expression")
    p.add_argument("expression")

    p = sub.add_parser("equal", help="three-valued equality of two expressions")
    p.add_argument("lhs")
    p.add_argument("rhs")

    p = sub.add_parser("theta", help="image in the graded ring I^* (mod h)")
    p.add_argument("expression")

    p = sub.add_parser(
        "decompose", help="Witt decomposition or Pfister decomposition"
    )
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--witt", metavar="ENTRIES", help="diagonal entries, comma separated"
    )
    group.add_argument(
        "--ideal",
        nargs=2,
        metavar=("N", "ENTRIES"),
        help="write the class of the diagonal form as n-fold Pfister forms",
    )

    p = sub.add_parser("chain", help="chain of two-entry rewrites between tuples")
    p.add_argument("start", help="diagonal entries, comma separated")
    p.add_argument("goal", help="diagonal entries, comma separated")
    p.add_argument("--depth", type=int, default=8)

    p = sub.add_parser("verify", help="run randomized verification suites")
    p.add_argument(
        "--suite",
        action="append",
        default=[],
        help=f"suite name or 'all'; one of: {', '.join(SUITE_NAMES)}",
    )
    return parser


def _bindings(field: Field, lets: dict[str, str]) -> dict[str, FieldElement]:
    out: dict[str, FieldElement] = {}
    for name, text in lets.items():
        out[name] = parse_element(field, text, out)
    return out


def _emit(payload: dict, as_json: bool, text_lines: list[str]) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _require_field(config: CliConfig) -> Field:
    if not config.field_spec:
        raise ValueError("this command needs --field")
    return make_field(config.field_spec)


def cmd_normalize(config: CliConfig, expression: str) -> int:
    field = _require_field(config)
    expr = parse(expression, field, _bindings(field, config.lets))
    canonical = normalize(expr, field)
    zero = canonical.is_zero()
    lines = [
        f"degree: {canonical.degree}",
        f"canonical: {canonical.payload}",
        f"zero: {zero}",
    ]
    _emit(
        {"command": "normalize", "input": print_expr(expr),
         "result": canonical.to_json(), "zero": str(zero)},
        config.json_output,
        lines,
    )
    return 0


def cmd_equal(config: CliConfig, lhs: str, rhs: str) -> int:
    field = _require_field(config)
    binds = _bindings(field, config.lets)
    e1 = parse(lhs, field, binds)
    e2 = parse(rhs, field, binds)
    report = kmw_compare(e1, e2, field)
    lines = [f"verdict: {report.verdict}"]
    if report.degree is not None:
        lines.append(f"degree: {report.degree}")
    if report.witt_agree is not None:
        lines.append(f"witt parts agree: {report.witt_agree}")
    if report.milnor_verdict is not None:
        lines.append(f"milnor comparison: {report.milnor_verdict}")
    _emit(
        {"command": "equal", "lhs": print_expr(e1), "rhs": print_expr(e2),
         **report.to_json()},
        config.json_output,
        lines,
    )
    return 0


def cmd_theta(config: CliConfig, expression: str) -> int:
    field = _require_field(config)
    expr = parse(expression, field, _bindings(field, config.lets))
    image = theta(expr, field)
    lines = [
        f"class: {image.cls}",
        f"zero: {image.is_zero()}",
        f"decision-complete: {image.complete}",
    ]
    _emit(
        {"command": "theta", "input": print_expr(expr), "result": image.to_json()},
        config.json_output,
        lines,
    )
    return 0


def cmd_decompose(config: CliConfig, witt: str | None, ideal) -> int:
    field = _require_field(config)
    binds = _bindings(field, config.lets)
    if witt is not None:
        entries = parse_diagonal(field, witt, binds)
        deco = witt_decompose(DiagonalForm(field, entries))
        lines = [
            f"anisotropic: {deco.anisotropic}",
            f"anisotropic rank: {deco.anisotropic.rank}",
            f"metabolic rank: {deco.metabolic_rank}",
        ]
        _emit(
            {
                "command": "decompose",
                "mode": "witt",
                "input": [str(a) for a in entries],
                "anisotropic": deco.anisotropic.to_json(),
                "metabolic_rank": deco.metabolic_rank,
            },
            config.json_output,
            lines,
        )
        return 0
    degree_text, entries_text = ideal
    degree = int(degree_text)
    entries = parse_diagonal(field, entries_text, binds)
    cls = IFiltClass(witt_class(DiagonalForm(field, entries)), degree)
    tuples = pfister_decompose(cls)
    lines = [f"class: {cls}"]
    if tuples:
        lines.append("pfister forms:")
        lines.extend("  <<" + ", ".join(str(a) for a in t) + ">>" for t in tuples)
    else:
        lines.append("pfister forms: (zero class, empty sum)")
    lines.append("verified: True")
    _emit(
        {
            "command": "decompose",
            "mode": "ideal",
            "degree": degree,
            "input": [str(a) for a in entries],
            "pfister": [[str(a) for a in t] for t in tuples],
            "verified": True,
        },
        config.json_output,
        lines,
    )
    return 0


def cmd_chain(config: CliConfig, start: str, goal: str, depth: int) -> int:
    field = _require_field(config)
    binds = _bindings(field, config.lets)
    t1 = parse_diagonal(field, start, binds)
    t2 = parse_diagonal(field, goal, binds)
    path = chain_equiv_search(field, t1, t2, depth=depth)
    if path is None:
        _emit(
            {"command": "chain", "found": False},
            config.json_output,
            ["no chain found (classes differ, or the search budget is too small)"],
        )
        return 1
    lines = [f"chain of {len(path)} step(s):"]
    lines.extend(f"  {step}" for step in path)
    _emit(
        {
            "command": "chain",
            "found": True,
            "steps": [
                {
                    "before": [str(a) for a in s.before],
                    "after": [str(a) for a in s.after],
                    "old_pair": [str(a) for a in s.old_pair],
                    "new_pair": [str(a) for a in s.new_pair],
                    "relation": s.relation,
                    "certificate": s.certificate,
                }
                for s in path
            ],
        },
        config.json_output,
        lines,
    )
    return 0


def cmd_verify(config: CliConfig) -> int:
    field = _require_field(config)
    names = list(config.suites) or ["all"]
    if "all" in names:
        names = list(SUITE_NAMES)
    for name in names:
        if name not in SUITE_NAMES:
            raise ValueError(
                f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)} or 'all'"
            )
    reports = [
        run_suite(name, field, seed=config.seed, cases=config.cases,
                  degree_bound=config.degree_bound)
        for name in names
    ]
    ok = all(r.ok for r in reports)
    if config.json_output:
        payload = {
            "schema": reports[0].schema if reports else "mwkt.report/1",
            "field": field.name,
            "seed": config.seed,
            "cases": config.cases,
            "ok": ok,
            "suites": [r.to_json() for r in reports],
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for rep in reports:
            for res in rep.results:
                if res.skipped:
                    status = f"skip ({res.skipped})"
                elif res.ok:
                    status = f"pass ({res.cases} cases)"
                else:
                    status = f"FAIL ({len(res.failures)} failures)"
                print(f"{rep.suite:12s} {res.identity:40s} {status}")
                for fail in res.failures[:3]:
                    print(f"    inputs={fail.inputs} expected={fail.expected} "
                          f"got={fail.got}")
        print(f"overall: {'ok' if ok else 'FAILED'}")
    return 0 if ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    lets = {}
    for binding in args.let:
        if "=" not in binding:
            parser.error(f"--let needs NAME=VALUE, got {binding!r}")
        name, _, value = binding.partition("=")
        lets[name.strip()] = value
    try:
        config = CliConfig(
            field_spec=args.field,
            seed=args.seed,
            cases=args.cases,
            degree_bound=args.degree_bound,
            json_output=args.json,
            suites=tuple(getattr(args, "suite", []) or []),
            lets=lets,
        )
        if args.command == "normalize":
            return cmd_normalize(config, args.expression)
        if args.command == "equal":
            return cmd_equal(config, args.lhs, args.rhs)
        if args.command == "theta":
            return cmd_theta(config, args.expression)
        if args.command == "decompose":
            return cmd_decompose(config, args.witt, args.ideal)
        if args.command == "chain":
            return cmd_chain(config, args.start, args.goal, args.depth)
        if args.command == "verify":
            return cmd_verify(config)
        parser.error(f"unknown command {args.command!r}")
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
