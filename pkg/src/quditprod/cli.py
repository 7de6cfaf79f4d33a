"""Command line entry point.

Subcommands cover the full pipeline: sample a random complex, form
products, extract the CSS code, compute distances, reduce, evaluate the
exact counts, and run the Monte Carlo experiments.  Every file-producing
invocation also writes ``<out>.manifest.json`` recording the tool
version, subcommand, parameters and output paths; re-running with the
same parameters reproduces the primary outputs byte for byte (the
manifest itself carries the only timestamp).

Exit codes: 0 success; 1 failed verification or bad input data;
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict
from datetime import datetime, timezone
from fractions import Fraction

import numpy as np

from . import __version__
from .complexes import (
    ComplexShape,
    complex_from_text,
    complex_to_text,
    random_boundary,
    standard_boundary,
)
from .counting import (
    brute_count_rank_extensions,
    brute_count_rank_matrices,
    count_cycles_by_rank,
    count_rank_extensions,
    count_rank_matrices,
    count_reduced_cycles,
    enumerate_plus_cycle_ranks,
)
from .css import extract_css, min_distance
from .experiments import (
    TrialConfig,
    emit_csv,
    mc_goodness,
    mc_low_weight_kernel,
    mc_uniform_low_weight,
    trial_rng,
)
from .gf import FieldSpec, MatGF, matrix_to_text
from .product import product
from .reduction import ReductionParams, reduce, reduced_kerim_check


def _write_manifest(out_path: str, subcommand: str, params: dict, outputs: list[str]) -> None:
    manifest = {
        "tool": "quditprod",
        "version": __version__,
        "subcommand": subcommand,
        "parameters": params,
        "outputs": outputs,
        "created": datetime.now(timezone.utc).isoformat(),
    }
    with open(out_path + ".manifest.json", "w", encoding="utf-8") as fh:
        fh.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _print_json(obj: dict) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _shape_from_args(args) -> ComplexShape:
    if args.H is not None:
        return ComplexShape.from_hom_dim(args.n, args.H)
    if args.rho is not None:
        return ComplexShape.from_rho(args.n, Fraction(args.rho))
    raise ValueError("one of --H or --rho is required")


def cmd_sample_complex(args) -> int:
    shape = _shape_from_args(args)
    field = FieldSpec(args.dim)
    rng = trial_rng(args.seed, 0)
    c, _, _ = random_boundary(shape, field, rng)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(complex_to_text(c))
    _write_manifest(
        args.out,
        "sample-complex",
        {"dim": args.dim, "n": args.n, "H": args.H,
         "rho": str(args.rho) if args.rho else None, "seed": args.seed},
        [args.out],
    )
    return 0


def cmd_product(args) -> int:
    with open(args.in1, encoding="utf-8") as fh:
        c1 = complex_from_text(fh.read())
    with open(args.in2, encoding="utf-8") as fh:
        c2 = complex_from_text(fh.read())
    pc = product(c1, c2)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(complex_to_text(pc.complex))
    _write_manifest(
        args.out, "product", {"in1": args.in1, "in2": args.in2}, [args.out]
    )
    return 0


def cmd_css_extract(args) -> int:
    with open(args.infile, encoding="utf-8") as fh:
        c = complex_from_text(fh.read())
    code = extract_css(c)
    payload = {
        "dim": code.field.order,
        "n_phys": code.n_phys,
        "k": code.k,
        "stab_weight": code.stab_weight,
        "z_gens": matrix_to_text(code.z_gens),
        "x_gens": matrix_to_text(code.x_gens),
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    _write_manifest(args.out, "css-extract", {"in": args.infile}, [args.out])
    return 0


def cmd_distance(args) -> int:
    with open(args.infile, encoding="utf-8") as fh:
        c = complex_from_text(fh.read())
    code = extract_css(c)
    started = time.perf_counter()
    report = min_distance(code, mode=args.mode, w_max=args.wmax, budget=args.budget)
    elapsed = time.perf_counter() - started
    payload = {
        "n_phys": code.n_phys,
        "k": code.k,
        "stab_weight": code.stab_weight,
        **report.as_dict(),
    }
    if args.out:
        # The saved report is deterministic; timing goes to stdout only.
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        _write_manifest(
            args.out,
            "distance",
            {"in": args.infile, "mode": args.mode, "wmax": args.wmax, "budget": args.budget},
            [args.out],
        )
    if args.json or not args.out:
        _print_json({**payload, "elapsed": elapsed})
    return 0


def cmd_reduce(args) -> int:
    with open(args.infile, encoding="utf-8") as fh:
        c = complex_from_text(fh.read())
    params = ReductionParams(n=c.dim_plus, n_prime=args.nprime)
    rc = reduce(c, params)
    if args.check:
        problems = reduced_kerim_check(rc)
        if problems:
            for item in problems:
                print(f"check failed: {item}", file=sys.stderr)
            return 1
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(complex_to_text(rc.quotient))
    _write_manifest(
        args.out,
        "reduce",
        {"in": args.infile, "nprime": args.nprime, "check": bool(args.check)},
        [args.out],
    )
    return 0


def _verify_counts(field: FieldSpec) -> list[str]:
    """Closed forms vs brute-force enumeration at smoke-test sizes."""
    failures: list[str] = []
    for A in range(1, 4):
        for B in range(1, 4):
            hist = brute_count_rank_matrices(field, A, B)
            for R in range(0, min(A, B) + 1):
                expected = hist.get(R, 0)
                got = count_rank_matrices(A, B, R, field)
                if got != expected:
                    failures.append(f"rank count ({A},{B},{R}): {got} != {expected}")
    for a in range(1, 3):
        for b in range(1, 3):
            for r in range(0, min(a, b) + 1):
                core = np.zeros((a, b), dtype=np.int64)
                core[:r, :r] = np.eye(r, dtype=np.int64)
                fixed = MatGF(field, core, _reduced=True)
                for A in range(a, 4):
                    for B in range(b, 4):
                        hist = brute_count_rank_extensions(field, fixed, A, B)
                        for R in range(0, min(A, B) + 1):
                            expected = hist.get(R, 0)
                            got = count_rank_extensions(a, b, r, A, B, R, field)
                            if got != expected:
                                failures.append(
                                    f"extension count ({a},{b},{r})->({A},{B},{R}): "
                                    f"{got} != {expected}"
                                )
    shape = ComplexShape(n=3, H=1, L=1)
    std = standard_boundary(shape, field)
    pc = product(std, std)
    census = enumerate_plus_cycle_ranks(pc)
    for (rp, rm), expected in census.items():
        got = count_cycles_by_rank(1, 1, rp, rm, field)
        if got != expected:
            failures.append(f"cycle count (1,1,{rp},{rm}): {got} != {expected}")
    return failures


def cmd_count(args) -> int:
    field = FieldSpec(args.dim)
    if args.verify:
        failures = _verify_counts(field)
        if failures:
            for item in failures:
                print(f"mismatch: {item}", file=sys.stderr)
            return 1
        print("all count oracles agree")
        return 0
    needed = {
        "E": ("A", "B", "R"),
        "Eext": ("a", "b", "r", "A", "B", "R"),
        "Z": ("H", "L", "rplus", "rminus"),
        "Gamma": ("n", "nprime", "H", "L", "Rplus", "Rminus"),
    }
    if args.what in needed:
        missing = [name for name in needed[args.what] if getattr(args, name) is None]
        if missing:
            flags = ", ".join(f"--{name}" for name in missing)
            raise ValueError(f"count --what {args.what} needs {flags}")
    if args.what == "E":
        value = count_rank_matrices(args.A, args.B, args.R, field)
        params = {"A": args.A, "B": args.B, "R": args.R}
    elif args.what == "Eext":
        value = count_rank_extensions(args.a, args.b, args.r, args.A, args.B, args.R, field)
        params = {"a": args.a, "b": args.b, "r": args.r, "A": args.A, "B": args.B, "R": args.R}
    elif args.what == "Z":
        value = count_cycles_by_rank(args.H, args.L, args.rplus, args.rminus, field)
        params = {"H": args.H, "L": args.L, "rplus": args.rplus, "rminus": args.rminus}
    elif args.what == "Gamma":
        value = count_reduced_cycles(
            args.n, args.nprime, args.H, args.L, args.Rplus, args.Rminus, field
        )
        params = {"n": args.n, "nprime": args.nprime, "H": args.H, "L": args.L,
                  "Rplus": args.Rplus, "Rminus": args.Rminus}
    else:
        raise ValueError("--what is required (one of E, Eext, Z, Gamma)")
    _print_json({"what": args.what, "dim": args.dim, "params": params, "count": value})
    return 0


def cmd_mc(args) -> int:
    field = FieldSpec(args.dim)
    if args.experiment in ("kernel", "goodness") and args.n < 1:
        raise ValueError(f"{args.experiment} experiment needs --n")
    if args.experiment == "kernel":
        if args.c is None:
            raise ValueError("kernel experiment needs --c")
        cfg = TrialConfig(
            field=field, n=args.n, trials=args.trials, master_seed=args.seed,
            H=args.H, rho=Fraction(args.rho) if args.rho else None, c=Fraction(args.c),
        )
        report = mc_low_weight_kernel(cfg)
    elif args.experiment == "goodness":
        if args.nprime is None:
            raise ValueError("goodness experiment needs --nprime")
        cfg = TrialConfig(
            field=field, n=args.n, trials=args.trials, master_seed=args.seed,
            H=args.H, rho=Fraction(args.rho) if args.rho else None,
        )
        report = mc_goodness(cfg, args.nprime)
    elif args.experiment == "ulw":
        if args.nprime is None or args.rank is None or args.cprime is None:
            raise ValueError("ulw experiment needs --nprime, --rank and --cprime")
        report = mc_uniform_low_weight(
            field, args.nprime, args.rank, Fraction(args.cprime), args.trials, args.seed
        )
    else:
        raise ValueError(f"unknown experiment {args.experiment!r}")
    payload = asdict(report)
    payload["params"] = {k: str(v) for k, v in report.params.items() if v is not None}
    _print_json(payload)
    if args.csv:
        emit_csv([report], args.csv)
        _write_manifest(
            args.csv,
            "mc",
            {"experiment": args.experiment, "n": args.n, "dim": args.dim,
             "trials": args.trials, "seed": args.seed},
            [args.csv],
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quditprod",
        description="Homological product CSS codes for prime-dimensional qudits",
    )
    parser.add_argument("--version", action="version", version=f"quditprod {__version__}")
    sub = parser.add_subparsers(dest="command")

    sc = sub.add_parser("sample-complex", help="sample a random complex and write it to a file")
    sc.add_argument("--dim", type=int, required=True, help="field order (odd prime)")
    sc.add_argument("--n", type=int, required=True, help="sector dimension")
    sc.add_argument("--H", type=int, default=None, help="homology dimension per sector")
    sc.add_argument("--rho", default=None, help="homology fraction, e.g. 1/3")
    sc.add_argument("--seed", type=int, required=True)
    sc.add_argument("--out", required=True)
    sc.set_defaults(func=cmd_sample_complex)

    pr = sub.add_parser("product", help="product of two complexes")
    pr.add_argument("--in1", required=True)
    pr.add_argument("--in2", required=True)
    pr.add_argument("--out", required=True)
    pr.set_defaults(func=cmd_product)

    ce = sub.add_parser("css-extract", help="extract the CSS code of a complex")
    ce.add_argument("--in", dest="infile", required=True)
    ce.add_argument("--out", required=True)
    ce.set_defaults(func=cmd_css_extract)

    di = sub.add_parser("distance", help="exact code distances")
    di.add_argument("--in", dest="infile", required=True)
    di.add_argument("--mode", choices=["exhaustive", "bounded"], default="exhaustive")
    di.add_argument("--wmax", type=int, default=None)
    di.add_argument("--budget", type=int, default=None)
    di.add_argument("--json", action="store_true", help="print the report to stdout")
    di.add_argument("--out", default=None, help="write the deterministic report here")
    di.set_defaults(func=cmd_distance)

    re_ = sub.add_parser("reduce", help="reduce a complex to its leading n' coordinates")
    re_.add_argument("--in", dest="infile", required=True)
    re_.add_argument("--nprime", type=int, required=True)
    re_.add_argument("--out", required=True)
    re_.add_argument("--check", action="store_true", help="verify kernel/image identities")
    re_.set_defaults(func=cmd_reduce)

    co = sub.add_parser("count", help="exact rank-enumeration counts")
    co.add_argument("--what", choices=["E", "Eext", "Z", "Gamma"], default=None)
    co.add_argument("--dim", type=int, default=3)
    co.add_argument("--verify", action="store_true",
                    help="compare closed forms against brute force and exit")
    co.add_argument("--A", type=int, default=None)
    co.add_argument("--B", type=int, default=None)
    co.add_argument("--R", type=int, default=None)
    co.add_argument("--a", type=int, default=None)
    co.add_argument("--b", type=int, default=None)
    co.add_argument("--r", type=int, default=None)
    co.add_argument("--H", type=int, default=None)
    co.add_argument("--L", type=int, default=None)
    co.add_argument("--rplus", type=int, default=None)
    co.add_argument("--rminus", type=int, default=None)
    co.add_argument("--n", type=int, default=None)
    co.add_argument("--nprime", type=int, default=None)
    co.add_argument("--Rplus", type=int, default=None)
    co.add_argument("--Rminus", type=int, default=None)
    co.set_defaults(func=cmd_count)

    mc = sub.add_parser("mc", help="seeded Monte Carlo experiments")
    mc.add_argument("--experiment", choices=["kernel", "goodness", "ulw"], required=True)
    mc.add_argument("--dim", type=int, required=True)
    mc.add_argument("--n", type=int, default=0)
    mc.add_argument("--H", type=int, default=None)
    mc.add_argument("--rho", default=None)
    mc.add_argument("--c", default=None)
    mc.add_argument("--nprime", type=int, default=None)
    mc.add_argument("--rank", type=int, default=None)
    mc.add_argument("--cprime", default=None)
    mc.add_argument("--trials", type=int, required=True)
    mc.add_argument("--seed", type=int, required=True)
    mc.add_argument("--csv", default=None)
    mc.set_defaults(func=cmd_mc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
