"""Command-line front door.

Commands: check, reconstruct, derivations, multiply, enumerate-posets.
JSON reports go to stdout (or --out); a human summary goes to stderr.
Exit codes: 0 all pass, 1 theorem violation, 2 input or capability error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .algebra import AlgebraContext, StructureConstants, convolve, structure_constants
from .derivations import check_derivation, derivation_basis
from .posets import PosetError, enumerate_posets, format_poset, parse_poset
from .reconstruction import AbstractAlgebra, ReconstructionError, reconstruct_poset
from .rings import CapabilityError, ring_from_spec
from .suites import run_poset_suite

EXIT_OK = 0
EXIT_THEOREM_VIOLATION = 1
EXIT_INPUT_ERROR = 2


class CliError(Exception):
    pass


def _emit(report, out_path):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_poset(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_poset(fh.read())
    except OSError as exc:
        raise CliError(f"cannot read poset file: {exc}")
    except PosetError as exc:
        raise CliError(f"poset parse error: {exc}")


def _threads():
    # FLAGALG_THREADS caps worker parallelism; execution is sequential and
    # deterministic, so the cap is honored trivially
    try:
        return max(1, int(os.environ.get("FLAGALG_THREADS", "1")))
    except ValueError:
        return 1


def cmd_check(args) -> int:
    ring = ring_from_spec(args.ring)
    if args.poset:
        posets = [( os.path.basename(args.poset), _load_poset(args.poset) )]
    else:
        m = args.all_up_to
        if not 1 <= m <= 5:
            raise CliError("--all-up-to must be between 1 and 5")
        posets = []
        for size in range(1, m + 1):
            for i, p in enumerate(enumerate_posets(size)):
                posets.append((f"size{size}-{i}", p))
    results = []
    any_fail = False
    any_capability = False
    for name, poset in posets:
        entries = run_poset_suite(poset, ring, args.seed)
        for e in entries:
            if e["status"] == "fail":
                any_fail = True
            elif e["status"] == "capability-skip":
                any_capability = True
        results.append(
            {
                "poset": name,
                "size": poset.size,
                "covers": [list(c) for c in poset.covers],
                "theorems": entries,
            }
        )
    report = {
        "artifact_version": __version__,
        "command": "check",
        "ring": ring.name,
        "seed": args.seed,
        "posets": results,
    }
    _emit(report, args.out)
    n_pass = sum(
        1 for r in results for e in r["theorems"] if e["status"] == "pass"
    )
    n_total = sum(len(r["theorems"]) for r in results)
    print(
        f"check: {len(results)} poset(s) over {ring.name}: "
        f"{n_pass}/{n_total} theorem checks passed",
        file=sys.stderr,
    )
    if any_fail:
        return EXIT_THEOREM_VIOLATION
    if any_capability:
        return EXIT_INPUT_ERROR
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    ring = ring_from_spec(args.ring)
    try:
        with open(args.table, encoding="utf-8") as fh:
            sc = StructureConstants.from_json(fh.read())
    except OSError as exc:
        raise CliError(f"cannot read table: {exc}")
    except (ValueError, KeyError) as exc:
        raise CliError(f"malformed structure constants JSON: {exc}")
    if sc.ring != ring:
        raise CliError(f"table ring {sc.ring.name} does not match --ring {ring.name}")
    try:
        algebra = AbstractAlgebra(sc)
        poset, elements, cover_lifts = reconstruct_poset(algebra, seed=args.seed)
    except (CapabilityError, ReconstructionError) as exc:
        report = {
            "artifact_version": __version__,
            "command": "reconstruct",
            "ring": ring.name,
            "status": "fail",
            "diagnostic": str(exc),
        }
        _emit(report, args.out)
        print(f"reconstruct: FAILED: {exc}", file=sys.stderr)
        return EXIT_THEOREM_VIOLATION
    fmt = ring.format
    report = {
        "artifact_version": __version__,
        "command": "reconstruct",
        "ring": ring.name,
        "status": "ok",
        "size": poset.size,
        "covers": [list(c) for c in poset.covers],
        "element_idempotents": [[fmt(v) for v in vec] for vec in elements],
        "cover_idempotents": [[fmt(v) for v in vec] for vec in cover_lifts],
        "stage_ranks": {
            "dim": algebra.dim,
            "elements": poset.size,
            "covers": len(poset.covers),
        },
    }
    _emit(report, args.out)
    print(
        f"reconstruct: recovered a poset on {poset.size} elements with "
        f"{len(poset.covers)} covers",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_derivations(args) -> int:
    ring = ring_from_spec(args.ring)
    poset = _load_poset(args.poset)
    ctx = AlgebraContext(poset, args.n, ring)
    basis = derivation_basis(ctx)
    for t in basis:
        if not check_derivation(ctx, t):
            raise CliError("internal error: kernel vector fails the direct check")
    fmt = ring.format
    violation = args.n == 3 and bool(basis)
    report = {
        "artifact_version": __version__,
        "command": "derivations",
        "ring": ring.name,
        "n": args.n,
        "dim": ctx.dim,
        "kernel_rank": len(basis),
        "basis": [[[fmt(v) for v in row] for row in t.matrix] for t in basis],
    }
    if violation:
        report["status"] = "THEOREM VIOLATION"
    elif args.n >= 4:
        report["warning"] = "n >= 4 is an unverified regime; no theorem is asserted"
    _emit(report, args.out)
    msg = f"derivations: n={args.n}, kernel rank {len(basis)}"
    if violation:
        msg += " — THEOREM VIOLATION (expected 0 for n=3)"
    print(msg, file=sys.stderr)
    return EXIT_THEOREM_VIOLATION if violation else EXIT_OK


def _parse_element(ctx, text):
    try:
        data = json.loads(text)
        coeffs = {}
        for tup, scalar in data:
            idx = ctx.index[tuple(tup)]
            coeffs[idx] = ctx.ring.parse(scalar)
        return ctx.element(coeffs)
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(f"malformed element (expected [[[x,y,z],\"scalar\"],...]): {exc}")


def cmd_multiply(args) -> int:
    ring = ring_from_spec(args.ring)
    poset = _load_poset(args.poset)
    ctx = AlgebraContext(poset, args.n, ring)
    f = _parse_element(ctx, args.lhs)
    g = _parse_element(ctx, args.rhs)
    prod = convolve(f, g)
    fmt = ring.format
    report = {
        "artifact_version": __version__,
        "command": "multiply",
        "ring": ring.name,
        "n": args.n,
        "product": [
            [list(ctx.basis[i]), fmt(v)] for i, v in sorted(prod.coeffs.items())
        ],
    }
    _emit(report, args.out)
    print(f"multiply: product has {len(prod.coeffs)} nonzero coefficients", file=sys.stderr)
    return EXIT_OK


def cmd_enumerate_posets(args) -> int:
    if not 1 <= args.size <= 6:
        raise CliError("size must be between 1 and 6")
    posets = enumerate_posets(args.size)
    report = {
        "artifact_version": __version__,
        "command": "enumerate-posets",
        "size": args.size,
        "count": len(posets),
        "posets": [format_poset(p) for p in posets],
    }
    _emit(report, args.out)
    print(f"enumerate-posets: {len(posets)} classes of size {args.size}", file=sys.stderr)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="flagalg",
        description="Exact computations in partial flag incidence algebras of finite posets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run the theorem battery")
    p.add_argument("poset", nargs="?", help="poset file")
    p.add_argument("--all-up-to", type=int, metavar="M", help="run on every poset of size 1..M")
    p.add_argument("--ring", default="Q")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reconstruct", help="recover a poset from structure constants JSON")
    p.add_argument("table", help="StructureConstants JSON file")
    p.add_argument("--ring", default="Q")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("derivations", help="compute the derivation module")
    p.add_argument("poset", help="poset file")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--ring", default="Q")
    p.add_argument("--out")
    p.set_defaults(func=cmd_derivations)

    p = sub.add_parser("multiply", help="multiply two serialized elements")
    p.add_argument("poset", help="poset file")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--ring", default="Q")
    p.add_argument("--lhs", required=True, help='element JSON, e.g. [[[0,0,1],"1"]]')
    p.add_argument("--rhs", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_multiply)

    p = sub.add_parser("enumerate-posets", help="list non-isomorphic posets of a given size")
    p.add_argument("size", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate_posets)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "check" and bool(args.poset) == (args.all_up_to is not None):
        print("check: give exactly one of a poset file or --all-up-to", file=sys.stderr)
        return EXIT_INPUT_ERROR
    _threads()  # validated for side effects only
    try:
        return args.func(args)
    except (CliError, CapabilityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
