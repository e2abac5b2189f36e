"""Command-line front end: construct, verify, simulate, and tabulate.

Exit codes follow the scriptable contract: 0 on success, 1 when a checked
property fails (a construction or simulation found a real violation), 2 on
usage errors.  All randomness flows from one explicit --seed through
counter-based child seeds, never from the clock, so identical invocations
produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import bounds as bounds_mod
from . import constructions as cons
from . import core, pascal
from .errors import ConstructionFailure, SigmacError

DEFAULT_SEED = 271828  # fixed constant; never wall-clock

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    subcommand: str
    args: argparse.Namespace

    @property
    def seed(self) -> int:
        return getattr(self.args, "seed", DEFAULT_SEED)


def _write_output(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def _parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigmac",
        description="Signature codes for the noisy integer-adder multiple access channel",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_pascal = sub.add_parser("pascal", help="triangle rows, identity sweeps, CSV tables")
    p_pascal.add_argument("--q", type=int, help="alphabet size (>= 2)")
    p_pascal.add_argument("--n", type=int, help="row index (>= 0)")
    p_pascal.add_argument("--row", action="store_true", help="print row n of the q-ary triangle")
    p_pascal.add_argument("--identity-sweep", action="store_true",
                          help="check every identity and bound over the grid")
    p_pascal.add_argument("--table", action="store_true",
                          help="emit CSV q,n,k,coefficient over the grid")
    p_pascal.add_argument("--qmax", type=int, default=4)
    p_pascal.add_argument("--nmax", type=int, default=8)
    p_pascal.add_argument("--out")

    p_con = sub.add_parser("construct", help="build a code and write its JSON artifact")
    p_con.add_argument("--method", required=True,
                       choices=["trivial", "noiseless", "rs-augment", "random", "kronecker"])
    p_con.add_argument("--q", type=int, default=2)
    p_con.add_argument("--n", type=int)
    p_con.add_argument("--k", type=int, help="length override for the random method")
    p_con.add_argument("--t", type=int, default=1)
    p_con.add_argument("--tau", type=_parse_fraction,
                       help="linear error fraction for the random method "
                            "(t becomes floor(tau * k))")
    p_con.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_con.add_argument("--provider", default="trivial", choices=list(cons.KNOWN_PROVIDERS))
    p_con.add_argument("--max-attempts", type=int, default=100)
    p_con.add_argument("--epsilon", type=_parse_fraction,
                       help="total slack for the kronecker method, e.g. 1/16")
    p_con.add_argument("--p", type=int, help="inner matrix rows (kronecker)")
    p_con.add_argument("--s", type=int, help="inner matrix columns (kronecker)")
    p_con.add_argument("--r", type=int, help="outer code dimension (kronecker)")
    p_con.add_argument("--outer", default="search", choices=["search", "repetition"])
    p_con.add_argument("--c1", type=int, help="outer length multiplier override")
    p_con.add_argument("--inner-t", type=int,
                       help="override the planned inner error tolerance")
    p_con.add_argument("--limit-z", type=int, help="3^n verification budget")
    p_con.add_argument("--out", required=True)

    p_sim = sub.add_parser("simulate", help="round-trip an artifact under adversarial errors")
    p_sim.add_argument("--in", dest="artifact", required=True)
    p_sim.add_argument("--rounds", type=int, default=100)
    p_sim.add_argument("--t", type=int, help="error budget override")
    p_sim.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_sim.add_argument("--error-mode", default=core.RANDOM_ERRORS,
                       choices=[core.RANDOM_ERRORS, core.WORST_CASE_ERRORS])
    p_sim.add_argument("--limit-z", type=int)
    p_sim.add_argument("--limit-u", type=int)

    p_bounds = sub.add_parser("bounds", help="tabulate converse/achievability lengths")
    p_bounds.add_argument("--n", required=True, help="comma-separated sizes, e.g. 1024,16384")
    p_bounds.add_argument("--q", default="2", help="comma-separated alphabet sizes")
    group = p_bounds.add_mutually_exclusive_group()
    group.add_argument("--t", type=int, help="constant error budget")
    group.add_argument("--tau", type=float, help="linear error fraction")
    p_bounds.add_argument("--format", default="text", choices=["text", "csv", "json"])
    p_bounds.add_argument("--out")
    return parser


def cmd_pascal(config: RunConfig) -> int:
    args = config.args
    modes = [bool(args.row), bool(args.identity_sweep), bool(args.table)]
    if sum(modes) != 1:
        print("pascal: choose exactly one of --row, --identity-sweep, --table",
              file=sys.stderr)
        return EXIT_USAGE
    if args.row:
        if args.q is None or args.n is None or args.q < 2 or args.n < 0:
            print("pascal --row needs --q >= 2 and --n >= 0", file=sys.stderr)
            return EXIT_USAGE
        _write_output(" ".join(str(c) for c in pascal.row(args.q, args.n)) + "\n",
                      args.out)
        return EXIT_OK
    if args.qmax < 2 or args.nmax < 0:
        print("pascal: need --qmax >= 2 and --nmax >= 0", file=sys.stderr)
        return EXIT_USAGE
    if args.table:
        q_values = [args.q] if args.q else list(range(2, args.qmax + 1))
        if any(q < 2 for q in q_values):
            print("pascal: q must be >= 2", file=sys.stderr)
            return EXIT_USAGE
        lines = ["q,n,k,coefficient"]
        for q in q_values:
            for n in range(args.nmax + 1):
                for k, c in enumerate(pascal.row(q, n)):
                    lines.append(f"{q},{n},{k},{c}")
        _write_output("\n".join(lines) + "\n", args.out)
        return EXIT_OK
    failures = 0
    checks = 0
    for q in range(2, args.qmax + 1):
        for n in range(args.nmax + 1):
            for j in range(n + 1):
                conv = pascal.check_convolution_identity(q, n, j)
                dom = pascal.check_dominance(q, n, j)
                checks += 2
                if not conv.holds:
                    failures += 1
                    print(f"FAIL convolution q={q} n={n} j={j}: "
                          f"{conv.lhs} != {conv.rhs}", file=sys.stderr)
                if not dom.holds or dom.equal != (j == 0):
                    failures += 1
                    print(f"FAIL dominance q={q} n={n} j={j}", file=sys.stderr)
            if n >= 1 and (n * (q - 1)) % 2 == 0:
                cb = pascal.check_central_bounds(q, n)
                checks += 1
                if not (cb.power_bound and cb.sqrt_bound):
                    failures += 1
                    print(f"FAIL central bounds q={q} n={n}", file=sys.stderr)
    for length in range(1, 5):
        for parts in _compositions(length, 5):
            checks += 1
            if not pascal.check_multinomial_bound(list(parts)):
                failures += 1
                print(f"FAIL multinomial bound {parts}", file=sys.stderr)
    print(f"identity sweep: {checks} checks, {failures} failures")
    return EXIT_OK if failures == 0 else EXIT_CHECK_FAILED


def _compositions(length: int, max_part: int):
    if length == 0:
        yield ()
        return
    for head in range(1, max_part + 1):
        for tail in _compositions(length - 1, max_part):
            yield (head,) + tail


def _verified_d_min(matrix: core.SignatureMatrix, limit: Optional[int]) -> Optional[int]:
    if matrix.n <= core.z_enumeration_limit(limit):
        return core.min_distinguishing_weight(matrix, limit).d_min
    return None


def cmd_construct(config: RunConfig) -> int:
    args = config.args
    limit = args.limit_z
    try:
        if args.method == "trivial":
            if not args.n:
                raise ValueError("--n is required")
            matrix = cons.construct_trivial(args.n)
            envelope = {"kind": "trivial", "matrix": matrix.to_json(),
                        "design_t": 0, "seed": args.seed}
            check = matrix
        elif args.method == "noiseless":
            if not args.n:
                raise ValueError("--n is required")
            result = cons.construct_noiseless(args.n, args.provider, limit)
            envelope = {"kind": "noiseless", "matrix": result.matrix.to_json(),
                        "design_t": 0, "seed": args.seed,
                        "provider_requested": result.provider_requested,
                        "provider_used": result.provider_used,
                        "fallback": result.fallback}
            check = result.matrix
        elif args.method == "rs-augment":
            if not args.n:
                raise ValueError("--n is required")
            if args.t < 1:
                raise ValueError("rs-augment needs --t >= 1")
            base = cons.construct_noiseless(args.n, args.provider, limit)
            code = cons.rs_augment(base.matrix, args.t)
            envelope = code.to_json()
            envelope.update({"design_t": args.t, "seed": args.seed,
                             "provider_used": base.provider_used,
                             "fallback": base.fallback})
            check = code.extended
        elif args.method == "random":
            if not args.n:
                raise ValueError("--n is required")
            t = args.t
            k_override = args.k
            if args.tau is not None:
                plan = cons.plan_random_length(
                    args.n, args.q, bounds_mod.LinearTau(args.tau))
                k_override = args.k if args.k is not None else plan.k
                t = math.floor(args.tau * k_override)
            result = cons.construct_random(args.n, args.q, t, args.seed,
                                           max_attempts=args.max_attempts,
                                           k_override=k_override, limit=limit)
            envelope = result.to_json()
            envelope["design_t"] = t
            check = result.matrix
        else:  # kronecker
            if args.epsilon is None or not (args.p and args.s and args.r):
                raise ValueError("kronecker needs --epsilon, --p, --s, --r")
            code = cons.build_kronecker(args.q, args.epsilon, args.p, args.s,
                                        args.r, seed=args.seed,
                                        outer_kind=args.outer,
                                        t_inner=args.inner_t, c1=args.c1)
            envelope = code.to_json()
            envelope.update({"design_t": code.certified_budget, "seed": args.seed})
            check = code.composed
    except ConstructionFailure as exc:
        print(f"construction failed after {exc.attempts} attempts: {exc}",
              file=sys.stderr)
        return EXIT_CHECK_FAILED
    except (ValueError, SigmacError) as exc:
        print(f"construct: {exc}", file=sys.stderr)
        return EXIT_USAGE
    envelope["d_min"] = _verified_d_min(check, limit)
    Path(args.out).write_text(core.dumps_canonical(envelope))
    print(f"{args.method}: wrote {args.out} "
          f"(k={check.k}, n={check.n}, q={check.q}, d_min={envelope['d_min']})")
    return EXIT_OK


def _load_simulation_target(obj: dict):
    """(matrix, decoder, default_t) for an artifact envelope."""
    kind = obj.get("kind")
    if kind == "rs_augmented":
        code = cons.AugmentedCode.from_json(obj)
        return code.extended, (lambda y: cons.rs_augmented_decode(code, y)), code.t
    if kind == "kronecker":
        code = cons.KroneckerCode.from_json(obj)
        return code.composed, (lambda y: cons.kronecker_decode(code, y)), code.certified_budget
    matrix = core.SignatureMatrix.from_json(obj["matrix"])
    return matrix, None, obj.get("design_t", 0)


def cmd_simulate(config: RunConfig) -> int:
    args = config.args
    try:
        obj = json.loads(Path(args.artifact).read_text())
        matrix, decoder, default_t = _load_simulation_target(obj)
    except (OSError, ValueError, KeyError) as exc:
        print(f"simulate: cannot load artifact: {exc}", file=sys.stderr)
        return EXIT_USAGE
    t = args.t if args.t is not None else default_t
    if t < 0 or args.rounds < 0:
        print("simulate: need t >= 0 and --rounds >= 0", file=sys.stderr)
        return EXIT_USAGE
    witness = None
    if args.error_mode == core.WORST_CASE_ERRORS:
        witness = core.adversarial_witness(matrix, t, args.limit_z)
    rng_decoder = decoder
    if rng_decoder is None:
        rng_decoder = lambda y: core.decode_min_distance(y, matrix, t, args.limit_u)
    failures = 0
    for index in range(args.rounds):
        u_rng = random.Random(core.derive_seed(args.seed, "activity", index))
        u = tuple(u_rng.randint(0, 1) for _ in range(matrix.n))
        record = core.simulate_round(
            matrix, u, t, args.error_mode,
            seed=core.derive_seed(args.seed, "round", index),
            decoder=rng_decoder, witness=witness, limit=args.limit_z,
        )
        if not record.success:
            failures += 1
            if failures <= 10:
                print(f"round {index}: transmitted={record.transmitted} "
                      f"decoded={record.decoded} errors={record.errors} "
                      f"{record.note}", file=sys.stderr)
    print(f"simulate: rounds={args.rounds} t={t} mode={args.error_mode} "
          f"failures={failures}")
    return EXIT_OK if failures == 0 else EXIT_CHECK_FAILED


def cmd_bounds(config: RunConfig) -> int:
    args = config.args
    try:
        n_values = _parse_int_list(args.n)
        q_values = _parse_int_list(args.q)
        if not n_values or not q_values:
            raise ValueError("empty range")
        if any(n < 2 for n in n_values) or any(q < 2 for q in q_values):
            raise ValueError("need n >= 2 and q >= 2")
        if args.tau is not None:
            mode: bounds_mod.TMode = bounds_mod.LinearTau(args.tau)
        else:
            mode = bounds_mod.ConstantT(args.t if args.t is not None else 0)
        reports = bounds_mod.bound_table(n_values, q_values, mode)
    except ValueError as exc:
        print(f"bounds: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "csv":
        _write_output(bounds_mod.bound_table_csv(reports), args.out)
    elif args.format == "json":
        _write_output(core.dumps_canonical(
            {"reports": [r.to_json() for r in reports]}), args.out)
    else:
        lines = []
        banner = ("note: asymptotic O(.) terms are omitted; "
                  "small-n comparisons are indicative only")
        lines.append(banner)
        for r in reports:
            thr = r.nonexistence_threshold
            lines.append(
                f"n={r.n} q={r.q} {r.mode}={r.param}: "
                f"converse_k={r.converse_binary_k:.6f} "
                f"random_k={r.achievable_random_k:.6f} "
                f"explicit_rs_k={r.explicit_rs_k:.6f} "
                f"kronecker_k={r.kronecker_k:.6f} "
                f"threshold={thr.numerator}/{thr.denominator}"
                + (" [inconsistent-at-this-scale]" if r.inconsistent_at_scale else "")
            )
        _write_output("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    config = RunConfig(subcommand=args.subcommand, args=args)
    handler = {
        "pascal": cmd_pascal,
        "construct": cmd_construct,
        "simulate": cmd_simulate,
        "bounds": cmd_bounds,
    }[config.subcommand]
    try:
        return handler(config)
    except SigmacError as exc:
        print(f"{config.subcommand}: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
