"""Command-line front end.

Every command reads family files ``{"n": int, "sets": [[int, ...], ...]}``
and prints one JSON report on stdout::

    {"command": ..., "inputs": {...}, "result": {...}, "timing_ms": ...}

Exit codes: 0 success or pass, 1 definitive negative, 2 input error,
3 resource guard.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction

from .certificate import corollary_check, verify_certificate
from .entropy_engine import decompose, entropy, uniform_on, verify_decomposition
from .errors import InputError, ResourceGuardError
from .family import (
    DEFAULT_POWER_CAP,
    abundant_elements,
    frequencies,
    is_union_closed,
    load_family,
    union_closure_stats,
)
from .search import (
    EXHAUSTED,
    FULL,
    SUBFAMILY,
    SearchConfig,
    ThresholdConfig,
    exhaustive_search,
    greedy_search,
    threshold_power_witness,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_GUARD = 3


def cmd_analyze(args):
    F = load_family(args.family_file)
    table = frequencies(F)
    result = {
        "n": F.n,
        "family_size": len(F),
        "union_closed": is_union_closed(F),
        "absent_counts": {str(i): table.w(i) for i in range(1, F.n + 1)},
        "abundant": abundant_elements(F) if len(F) else [],
    }
    return {"family_file": args.family_file}, result, EXIT_OK


def cmd_closure(args):
    G = load_family(args.generators_file)
    closed, growth = union_closure_stats(G)
    result = {
        "family": closed.to_json(),
        "generators": len(G),
        "closed_size": len(closed),
        "added": len(closed) - len(G),
        "rounds": len(growth),
        "growth_per_round": growth,
    }
    return {"generators_file": args.generators_file}, result, EXIT_OK


def cmd_verify(args):
    F = load_family(args.family_file)
    G = load_family(args.witness_file)
    check = corollary_check if args.corollary else verify_certificate
    report = check(F, G)
    inputs = {"family_file": args.family_file, "witness_file": args.witness_file,
              "corollary": args.corollary}
    return inputs, report.to_json(), EXIT_OK if report.passed else EXIT_NEGATIVE


def _parse_order(text):
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise InputError(f"--order must be a comma-separated list of elements, got {text!r}") from None


def _parse_verify_mode(text):
    if text == "exhaustive":
        return "exhaustive", 0
    if text.startswith("sample:"):
        try:
            k = int(text.split(":", 1)[1])
        except ValueError:
            k = 0
        if k > 0:
            return "sample", k
    raise InputError(f"--verify must be 'exhaustive' or 'sample:<k>', got {text!r}")


def cmd_decompose(args):
    G = load_family(args.witness_file)
    d = uniform_on(G)
    order = _parse_order(args.order) if args.order else None
    mode, k = _parse_verify_mode(args.verify)
    if mode == "sample" and args.seed is None:
        raise InputError("sampled verification requires an explicit --seed")
    vec = decompose(d, order)
    check = verify_decomposition(d, vec, mode, samples=k, seed=args.seed)
    h = entropy(d)
    sum_x = math.fsum(vec.x)
    result = {
        "decomposition": vec.to_json(),
        "entropy": h,
        "sum_minus_entropy": sum_x - h,
        "verification": check.to_json(),
    }
    inputs = {"witness_file": args.witness_file, "order": list(vec.elimination_order),
              "verify": args.verify, "seed": args.seed}
    return inputs, result, EXIT_OK if check.ok else EXIT_NEGATIVE


def cmd_search(args):
    F = load_family(args.family_file)
    if args.mode == "greedy" and args.seed is None:
        raise InputError("greedy search requires an explicit --seed")
    cfg = SearchConfig(
        universe=args.universe,
        min_size=args.min,
        max_size=args.max,
        budget=args.budget,
        seed=0 if args.seed is None else args.seed,
    )
    run = exhaustive_search if args.mode == "exhaustive" else greedy_search
    found = run(F, cfg)
    inputs = {"family_file": args.family_file, "mode": args.mode, **cfg.to_json()}
    if args.mode == "exhaustive":
        inputs.pop("seed")
    result = found.to_json()
    if found.found:
        code, note = EXIT_OK, "witness verified exactly"
    elif found.coverage == EXHAUSTED:
        code, note = EXIT_NEGATIVE, "all candidates examined; no witness exists in this universe"
    else:
        code, note = EXIT_NEGATIVE, "stopped at budget; non-existence not established"
    result["coverage_note"] = note
    return inputs, result, code


def _parse_epsilon(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"--epsilon must be a fraction p/q, got {text!r}") from None


def cmd_power_cert(args):
    F = load_family(args.family_file)
    cfg = ThresholdConfig(copies=args.copies, epsilon=_parse_epsilon(args.epsilon), cap=args.cap)
    report = threshold_power_witness(F, cfg)
    inputs = {"family_file": args.family_file, "copies": cfg.copies,
              "epsilon": str(cfg.epsilon), "cap": cfg.cap}
    return inputs, report.to_json(), EXIT_OK if report.certificate.passed else EXIT_NEGATIVE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="frankl-cert",
        description="Entropy certificates for elements lying in at least half the sets of a family.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="frequencies, union-closedness and abundant elements")
    p.add_argument("family_file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("closure", help="union closure of a generating family")
    p.add_argument("generators_file")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("verify", help="check a witness family against a family")
    p.add_argument("family_file")
    p.add_argument("witness_file")
    p.add_argument("--corollary", action="store_true",
                   help="also require a union-closed family and a witness inside it")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decompose", help="entropy shares of a uniform draw from a family")
    p.add_argument("witness_file")
    p.add_argument("--order", help="elimination order, e.g. 3,2,1 (default n..1)")
    p.add_argument("--verify", default="exhaustive", help="exhaustive | sample:<k>")
    p.add_argument("--seed", type=int, help="required with --verify sample:<k>")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("search", help="search for a witness family")
    p.add_argument("family_file")
    p.add_argument("--mode", choices=["exhaustive", "greedy"], default="exhaustive")
    p.add_argument("--universe", choices=[FULL, SUBFAMILY], default=FULL)
    p.add_argument("--min", type=int, default=2, help="smallest witness size (>= 2)")
    p.add_argument("--max", type=int, help="largest witness size")
    p.add_argument("--budget", type=int, default=10**4, help="candidates to examine")
    p.add_argument("--seed", type=int, help="RNG seed, required for greedy mode")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("power-cert", help="threshold witness on the N-fold power family")
    p.add_argument("family_file")
    p.add_argument("--copies", type=int, required=True, help="number of copies N")
    p.add_argument("--epsilon", required=True, help="rational p/q in (0, 1/2)")
    p.add_argument("--cap", type=int, default=DEFAULT_POWER_CAP,
                   help="largest power family to materialize")
    p.set_defaults(func=cmd_power_cert)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        inputs, result, code = args.func(args)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceGuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    report = {
        "command": args.command,
        "inputs": inputs,
        "result": result,
        "timing_ms": round((time.perf_counter() - start) * 1000, 3),
    }
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
