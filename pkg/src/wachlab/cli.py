"""Command-line front end.

Exit codes: 0 when every report is valid, 1 for input errors, 2 when the
code ran but a mathematical consistency check failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Sequence

from .errors import CapExceeded, EvenDegree, TooLarge, UnsupportedShape, WachlabError
from .families import (
    SCHEMA_VERSION,
    AnalysisReport,
    FamilySpec,
    analyze,
    expected_orbit,
    fixture_expectation,
)
from .reduction import ORACLE_CAP, modulus, oracle_audit

EXIT_OK, EXIT_INPUT, EXIT_MATH = 0, 1, 2
DEFAULT_CAP = 100_000
AUDIT_CAP = 100_000  # residues; a full audit costs one oracle lookup per residue

CSV_COLUMNS = [
    "family",
    "p",
    "f",
    "weights",
    "types",
    "generator",
    "exp1",
    "exp2",
    "det_exponent",
    "irreducible",
    "oracle_agrees",
    "det_ok",
    "star_ok",
    "admissible",
    "summands_agree",
    "ell_match",
    "qk",
    "valid",
]

_INPUT_ERRORS = (UnsupportedShape, EvenDegree, TooLarge, CapExceeded)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _range(text: str) -> range:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    return range(lo, hi + 1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wachlab", description="Mod-p reductions of two-dimensional crystalline representations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text", "csv"), default="json")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--trunc", type=int, help="truncation order T for series checks (default: $WACHLAB_TRUNC or max(32, k(p-1)+8))")

    a = sub.add_parser("analyze", parents=[common], help="analyse a single family member")
    a.add_argument("-p", type=int, required=True)
    a.add_argument("-f", type=int, required=True)
    a.add_argument("-k", "--weights", type=_int_list, required=True, help="weights k_0,...,k_{f-1}")
    a.add_argument("--types", type=_int_list, help="matrix types i_0,...,i_{f-1} in 1..4")
    a.add_argument("--family", choices=("25", "28"), help="one of the f = 2 fixture families")

    s = sub.add_parser("sweep", parents=[common], help="analyse every (weights, types) in a range")
    s.add_argument("-p", type=int, required=True)
    s.add_argument("-f", type=int, required=True)
    s.add_argument("--k-range", type=_range, default=range(1, 5), help="inclusive weight range LO:HI (default 1:4)")
    s.add_argument("--types", type=_int_list, help="fix the type vector instead of ranging over all of them")
    s.add_argument("--family", choices=("25", "28"))
    s.add_argument("--sample", type=int, help="sample this many type vectors")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cap", type=int, default=DEFAULT_CAP, help="refuse sweeps with more instances")
    s.add_argument("--workers", type=int, default=4)

    fx = sub.add_parser("fixtures", parents=[common], help="regression run over the f = 2 fixtures")
    fx.add_argument("-p", type=_int_list, default=[3, 5], help="primes (default 3,5)")
    fx.add_argument("--k-max", type=int, default=6)

    o = sub.add_parser("oracle-audit", parents=[common], help="compare the closed-form criterion with the oracle")
    o.add_argument("-p", type=int, required=True)
    o.add_argument("-f", type=int, required=True)
    o.add_argument("--cap", type=int, default=AUDIT_CAP, help=f"largest p^(2f) - 1 to enumerate (default {AUDIT_CAP})")
    return parser


# commands ----------------------------------------------------------------------

def _spec_from_args(args) -> FamilySpec:
    if len(args.weights) != args.f:
        raise UsageError(f"-k: expected {args.f} weights, got {len(args.weights)}")
    if args.family is not None:
        if args.types:
            raise UsageError("--types cannot be combined with --family")
        return FamilySpec(args.p, args.f, tuple(args.weights), family=args.family)
    if args.types is None:
        raise UsageError("--types is required unless --family is given")
    if len(args.types) != args.f:
        raise UsageError(f"--types: expected {args.f} entries, got {len(args.types)}")
    return FamilySpec(args.p, args.f, tuple(args.weights), tuple(args.types))


def report_row(r: AnalysisReport) -> dict[str, Any]:
    e1, e2 = r.orbit_relative()
    return {
        "family": r.spec.family or "",
        "p": r.spec.p,
        "f": r.spec.f,
        "weights": ";".join(map(str, r.spec.weights)),
        "types": ";".join(map(str, r.spec.types)),
        "generator": r.generator,
        "exp1": e1,
        "exp2": e2,
        "det_exponent": r.det_exponent,
        "irreducible": r.irreducible,
        "oracle_agrees": r.oracle_agrees,
        "det_ok": r.det_ok,
        "star_ok": r.star_ok,
        "admissible": r.admissible,
        "summands_agree": r.summands_agree,
        "ell_match": r.ell_match,
        "qk": r.wach_checks.get("qk"),
        "valid": r.valid,
    }


def _report_text(r: AnalysisReport) -> str:
    data = r.to_json()
    red = data["reduction"]
    lines = [
        f"spec: p={r.spec.p} f={r.spec.f} weights={list(r.spec.weights)} "
        + (f"family={r.spec.family}" if r.spec.family else f"types={list(r.spec.types)}"),
        f"character (ell form): {r.character_ell}",
        f"character (s form):   {r.character_s}",
        f"reduction on inertia: level {red['level']}, exponents {red['exponents']} "
        f"relative to omega_{red['level']},tau_{red['generator']}",
        f"det exponent (lifted): {red['det_exponent']}",
        f"irreducible: {red['irreducible']}  oracle agrees: {red['oracle_agrees']}",
    ]
    lines += [f"{k}: {v}" for k, v in data["checks"].items()]
    lines += [f"wach {k}: {v}" for k, v in data["wach_checks"].items()]
    lines += [f"note: {n}" for n in data["notes"]]
    lines.append("VALID" if r.valid else "INVALID")
    return "\n".join(lines) + "\n"


def _csv_text(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if row.get(k) is None else row.get(k)) for k in columns})
    return buf.getvalue()


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_analyze(args) -> tuple[str, int]:
    report = analyze(_spec_from_args(args), trunc=args.trunc)
    if args.format == "json":
        text = _dump_json({"command": "analyze", **report.to_json()})
    elif args.format == "csv":
        text = _csv_text([report_row(report)], CSV_COLUMNS)
    else:
        text = _report_text(report)
    return text, EXIT_OK if report.valid else EXIT_MATH


def sweep_specs(args) -> list[FamilySpec]:
    f = args.f
    weights = list(itertools.product(args.k_range, repeat=f))
    if args.family is not None:
        return [FamilySpec(args.p, f, w, family=args.family) for w in weights]
    if args.types:
        if len(args.types) != f:
            raise UsageError(f"--types: expected {f} entries, got {len(args.types)}")
        type_vectors = [tuple(args.types)]
    else:
        type_vectors = list(itertools.product((1, 2, 3, 4), repeat=f))
        if args.sample is not None and args.sample < len(type_vectors):
            type_vectors = sorted(random.Random(args.seed).sample(type_vectors, args.sample))
    total = len(weights) * len(type_vectors)
    if total > args.cap:
        raise CapExceeded(f"sweep has {total} instances, above --cap {args.cap}")
    return [FamilySpec(args.p, f, w, t) for w in weights for t in type_vectors]


def cmd_sweep(args) -> tuple[str, int]:
    specs = sweep_specs(args)
    if specs and specs[0].family is None and args.f % 2 == 0:
        raise UnsupportedShape("even f is only supported for the fixture families 25 and 28")
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        reports = list(pool.map(lambda s: analyze(s, trunc=args.trunc), specs))
    reports.sort(key=lambda r: r.spec.key)
    rows = [report_row(r) for r in reports]
    ok = all(r.valid for r in reports)
    if args.format == "csv":
        text = _csv_text(rows, CSV_COLUMNS)
    elif args.format == "json":
        text = _dump_json({"schema_version": SCHEMA_VERSION, "command": "sweep", "count": len(rows), "rows": rows})
    else:
        text = "".join(
            f"{r['family'] or r['types']:>8} k={r['weights']:<10} orbit=({r['exp1']}, {r['exp2']}) "
            f"irreducible={r['irreducible']} valid={r['valid']}\n"
            for r in rows
        ) + f"{len(rows)} instances, {'all valid' if ok else 'FAILURES'}\n"
    return text, EXIT_OK if ok else EXIT_MATH


def fixture_cases(primes: Sequence[int], k_max: int) -> list[dict[str, Any]]:
    cases = []
    for family in ("25", "28"):
        for p in primes:
            for k0 in range(1, k_max + 1):
                for k1 in range(1, k_max + 1):
                    r = analyze(FamilySpec(p, 2, (k0, k1), family=family))
                    exp = fixture_expectation(family, p, k0, k1)
                    checks = {
                        "diagonal_ok": r.diagonal == exp.diag,
                        "character_ok": r.character_ell == exp.character,
                        "orbit_ok": r.reduction == expected_orbit(exp, p),
                        "valid": r.valid,
                    }
                    cases.append(
                        {
                            "family": family,
                            "p": p,
                            "weights": [k0, k1],
                            "character": str(r.character_ell),
                            "orbit": r.orbit_relative(),
                            "generator": r.generator,
                            "irreducible": r.irreducible,
                            **checks,
                            "match": all(checks.values()),
                        }
                    )
    return cases


def cmd_fixtures(args) -> tuple[str, int]:
    cases = fixture_cases(args.p, args.k_max)
    ok = all(c["match"] for c in cases)
    if args.format == "json":
        text = _dump_json({"schema_version": SCHEMA_VERSION, "command": "fixtures", "all_match": ok, "cases": cases})
    elif args.format == "csv":
        cols = ["family", "p", "weights", "character", "orbit", "generator", "irreducible",
                "diagonal_ok", "character_ok", "orbit_ok", "valid", "match"]
        rows = [{**c, "weights": ";".join(map(str, c["weights"])), "orbit": ";".join(map(str, c["orbit"]))} for c in cases]
        text = _csv_text(rows, cols)
    else:
        text = "".join(
            f"({c['family']}) p={c['p']} k={tuple(c['weights'])}: {c['character']} orbit={c['orbit']} "
            f"{'ok' if c['match'] else 'MISMATCH'}\n"
            for c in cases
        ) + f"{sum(c['match'] for c in cases)}/{len(cases)} fixtures match\n"
    return text, EXIT_OK if ok else EXIT_MATH


def cmd_oracle_audit(args) -> tuple[str, int]:
    p, f = args.p, args.f
    residues = modulus(p, 2 * f)
    cap = min(args.cap, ORACLE_CAP)
    if residues > cap:
        raise TooLarge(
            f"p^(2f) - 1 = {residues} residues exceeds the audit cap {cap}; "
            "choose a smaller p or f, or raise --cap (at most 10^7)"
        )
    bad = oracle_audit(p, f)
    if args.format == "json":
        text = _dump_json(
            {
                "schema_version": SCHEMA_VERSION,
                "command": "oracle-audit",
                "p": p,
                "f": f,
                "residues": residues,
                "disagreements": bad,
                "agree": not bad,
            }
        )
    elif args.format == "csv":
        text = _csv_text([{"p": p, "f": f, "residues": residues, "disagreements": len(bad), "agree": not bad}],
                         ["p", "f", "residues", "disagreements", "agree"])
    else:
        text = f"p={p} f={f}: {residues} residues, {len(bad)} disagreements\n"
        text += "".join(f"  counterexample e={e}\n" for e in bad)
    return text, EXIT_OK if not bad else EXIT_MATH


COMMANDS = {
    "analyze": cmd_analyze,
    "sweep": cmd_sweep,
    "fixtures": cmd_fixtures,
    "oracle-audit": cmd_oracle_audit,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = COMMANDS[args.command](args)
    except (UsageError, *_INPUT_ERRORS) as exc:
        print(f"wachlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except WachlabError as exc:
        print(f"wachlab {args.command}: math failure: {exc}", file=sys.stderr)
        return EXIT_MATH
    except ValueError as exc:
        print(f"wachlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
