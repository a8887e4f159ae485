"""Command-line interface: ``polytriple {classify,search,symbols,exceptional}``.

stdout carries one JSON envelope (or CSV with ``--csv``); logs go to stderr.
Exit codes: 0 success, 2 usage or domain error, 3 tension under ``--strict``,
4 resource refusal.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys

from . import oracles
from .classifier import (
    classify,
    classify_consecutive,
    classify_power_family,
    fermat_mersenne_guarantee,
)
from .errors import DomainError, ResourceLimitError
from .exceptional import exceptional_membership, exceptional_union
from .localfield import (
    PadicDiagForm,
    Place,
    anisotropic_primes,
    hasse_symbol,
    hilbert_symbol,
    is_isotropic_ternary,
)
from .polynum import triple_invariants
from .search import DEFAULT_MEMORY_CAP, gap_report

SCHEMA_VERSION = "1.0"
CONFIG_ENV = "POLYTRIPLE_CONFIG"

EXIT_OK, EXIT_USAGE, EXIT_TENSION, EXIT_RESOURCE = 0, 2, 3, 4

log = logging.getLogger("polytriple")


def load_config() -> dict:
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    with open(path) as fh:
        return json.load(fh)


def envelope(command: str, inputs: dict, result, provenance=None) -> dict:
    return {
        "schemaVersion": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "result": result,
        "provenance": provenance or {},
    }


def _ints(text: str, count: int | None = None) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if count is not None and len(vals) != count:
        raise argparse.ArgumentTypeError(f"expected {count} integers, got {len(vals)}")
    return vals


def _triple(text: str) -> list[int]:
    return _ints(text, 3)


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("range must look like LO:HI")
    return int(lo), int(hi)


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")


def cmd_classify(args) -> int:
    inputs = {k: v for k, v in vars(args).items() if k not in {"func", "verbose"} and v is not None}
    if args.consecutive is not None:
        res = classify_consecutive(args.consecutive)
    elif args.power_family is not None:
        k, l, m, alpha, beta, gamma = args.power_family
        res = classify_power_family(alpha, beta, gamma, k, l, m)
    elif args.fermat is not None:
        res = fermat_mersenne_guarantee("fermat", tuple(args.fermat))
    elif args.mersenne is not None:
        res = fermat_mersenne_guarantee("mersenne", tuple(args.mersenne))
    elif args.triple is not None:
        res = classify(*args.triple)
    else:
        raise DomainError("one of --triple, --consecutive, --power-family, --fermat, --mersenne is required")
    payload = res.to_dict()
    if args.csv:
        w = csv.writer(sys.stdout)
        w.writerow(["a", "b", "c", "verdict", "residue_class", "matched_statement", "witnesses"])
        w.writerow([*res.triple, res.verdict.value, res.residue_class, res.matched_statement, json.dumps(res.witnesses)])
        return EXIT_OK
    _emit(
        envelope(
            "classify",
            inputs,
            payload,
            {"matched_statement": res.matched_statement, "witness_chain": res.witness_chain},
        )
    )
    return EXIT_OK


def cmd_search(args) -> int:
    cfg = load_config()
    cap = args.memory_cap or cfg.get("memory_cap_bytes", DEFAULT_MEMORY_CAP)
    workers = args.workers or cfg.get("workers", 1)
    t = triple_invariants(*args.triple)
    try:
        report = gap_report(t, args.bound, ignore_below=args.window, workers=workers, memory_cap=cap)
    except ResourceLimitError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    if args.gaps_out:
        with open(args.gaps_out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "in_S", "witness_t", "witness_r", "tension"])
            for ann in report.annotations:
                first = ann.witnesses[0] if ann.witnesses else None
                w.writerow(
                    [
                        ann.n,
                        int(ann.in_s),
                        "" if first is None else first.t,
                        "" if first is None else first.r,
                        int(ann.tension),
                    ]
                )
    inputs = {"triple": args.triple, "bound": args.bound, "window": args.window, "strict": args.strict}
    _emit(envelope("search", inputs, report.to_dict(), {"tension_items": report.tension_items}))
    if args.strict and report.tension_items:
        return EXIT_TENSION
    return EXIT_OK


def cmd_symbols(args) -> int:
    kind = args.kind
    # argparse leaves a flag placed after "--" among the positionals
    values = [v for v in args.values if v != "--verify"]
    verify = args.verify or len(values) != len(args.values)
    result: dict = {}
    if kind == "hilbert":
        if len(values) != 3:
            raise DomainError("hilbert needs: x y place")
        x, y, place = values
        from fractions import Fraction

        x, y, place = Fraction(x), Fraction(y), Place.parse(place)
        result["value"] = hilbert_symbol(x, y, place)
        inputs = {"x": str(x), "y": str(y), "place": str(place)}
        if verify and not place.is_real:
            result["oracle"] = oracles.hilbert_symbol_by_search(x, y, place.prime)
            result["oracle_agrees"] = result["oracle"] == result["value"]
    elif kind in {"hasse", "isotropic"}:
        if args.form is None or args.p is None:
            raise DomainError(f"{kind} needs --form d1,d2,d3 and --p PRIME")
        f = PadicDiagForm(args.p, tuple(args.form))
        inputs = {"form": args.form, "p": args.p}
        if kind == "hasse":
            result["value"] = hasse_symbol(f)
        else:
            result["value"] = is_isotropic_ternary(f)
            if verify:
                result["oracle"] = oracles.isotropic_by_search(f.entries, f.prime)
                result["oracle_agrees"] = result["oracle"] == result["value"]
    else:
        if args.triple is None:
            raise DomainError("aniso-primes needs --triple a,b,c")
        t = triple_invariants(*args.triple)
        inputs = {"triple": args.triple}
        result["value"] = anisotropic_primes(t)
        if verify:
            fa, fb, fc = t.factors
            result["oracle"] = [
                p for p in sorted({2, *result["value"], *_odd_primes(fa * fb * fc)})
                if not oracles.isotropic_by_search((fa, fb, fc), p)
            ]
            result["oracle_agrees"] = result["oracle"] == result["value"]
    _emit(envelope("symbols", {"kind": kind, **inputs, "verify": verify}, result))
    return EXIT_OK


def _odd_primes(n: int) -> list[int]:
    from .arith import prime_factors

    return [p for p in prime_factors(n) if p != 2]


def cmd_exceptional(args) -> int:
    t = triple_invariants(*args.triple)
    if args.n is not None:
        ns = [args.n]
    elif args.range is not None:
        lo, hi = args.range
        ns = list(range(lo, hi + 1))
    else:
        raise DomainError("one of --n or --range is required")
    rows = []
    for n in ns:
        if args.t is not None:
            w = exceptional_membership(t, args.t, n)
            ws = [] if w is None else [w]
        else:
            ws = exceptional_union(t, n)
        rows.append({"n": n, "witnesses": [[w.t, w.r] for w in ws]})
    result = rows[0]["witnesses"] if args.n is not None else rows
    inputs = {"triple": args.triple, "n": args.n, "range": args.range, "t": args.t}
    _emit(envelope("exceptional", inputs, result))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polytriple", description="Sums of three generalized polygonal numbers.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="almost-universality verdict for a triple")
    p.add_argument("--triple", type=_triple)
    p.add_argument("--consecutive", type=int, metavar="M")
    p.add_argument("--power-family", type=lambda s: _ints(s, 6), metavar="k,l,m,alpha,beta,gamma")
    p.add_argument("--fermat", type=_triple, metavar="k,l,m")
    p.add_argument("--mersenne", type=_triple, metavar="p,q,r")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON envelope (default)")
    fmt.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("search", help="sieve represented integers and report gaps")
    p.add_argument("--triple", type=_triple, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--window", type=int, default=1000, help="gaps below this never count as tension")
    p.add_argument("--gaps-out", metavar="FILE")
    p.add_argument("--strict", action="store_true", help="exit 3 on any tension item")
    p.add_argument("--workers", type=int)
    p.add_argument("--memory-cap", type=int, help="bytes")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("symbols", help="Hilbert/Hasse symbols and isotropy")
    p.add_argument("kind", choices=["hilbert", "hasse", "isotropic", "aniso-primes"])
    p.add_argument("values", nargs="*", help="hilbert: x y place")
    p.add_argument("--form", type=_triple)
    p.add_argument("--p", type=int)
    p.add_argument("--triple", type=_triple)
    p.add_argument("--verify", action="store_true", help="add brute-force oracle agreement")
    p.set_defaults(func=cmd_symbols)

    p = sub.add_parser("exceptional", help="exceptional square-class witnesses")
    p.add_argument("--triple", type=_triple, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--range", type=_range)
    p.add_argument("--t", type=int)
    p.set_defaults(func=cmd_exceptional)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
