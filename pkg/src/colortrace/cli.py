"""Command-line interface.

Subcommands: decompose (closed-formula expansion), eform (compact
symbolic form), project (free-algebra projection self-check), verify
(numeric oracle triangle) and count (compact-form term count).  Exit
codes: 0 success / verification pass, 1 verification failure, 2 usage
error.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from .colorexpr import canonicalize, reduce_two_index_d
from .engine import (
    decompose_closed,
    decompose_eform,
    oracle_commutation,
    solomon_projection,
    term_count,
)
from .gaussian import GaussianRational
from .numeric import build_algebra, direct_trace, evaluate_many
from .render import (
    eform_json_dict,
    eform_text,
    expr_json_dict,
    expr_latex,
    expr_text,
)
from .words import Word


@dataclass
class VerifyConfig:
    algebra: str
    n: int
    trials: int
    tol: float
    seed: int


def _trace_word(args) -> Word:
    if getattr(args, "letters", None):
        letters = [int(x) for x in args.letters.split(",")]
        if len(letters) != args.n:
            raise ValueError(
                f"--letters gives {len(letters)} letters but --n is {args.n}"
            )
        return Word(letters)
    return Word(range(1, args.n + 1))


def _cmd_decompose(args) -> int:
    word = _trace_word(args)
    expr = decompose_closed(word)
    if not args.no_simplify_d2:
        expr = canonicalize(reduce_two_index_d(expr))
    if args.format == "text":
        print(expr_text(expr))
    elif args.format == "latex":
        print(expr_latex(expr))
    else:
        print(json.dumps(expr_json_dict(expr, word), indent=2))
    return 0


def _cmd_eform(args) -> int:
    word = _trace_word(args)
    x = decompose_eform(word)
    if args.format == "text":
        print(eform_text(x))
    elif args.format == "latex":
        print(eform_text(x, latex=True))
    else:
        print(json.dumps(eform_json_dict(x), indent=2))
    return 0


def _cmd_project(args) -> int:
    word = Word(range(1, args.n + 1))
    result = solomon_projection(word)
    expected = {word: GaussianRational(1)}
    if result == expected:
        print(f"projection identity holds for {word} ({len(result)} term)")
        return 0
    print(f"projection identity FAILED for {word}: got {result}", file=sys.stderr)
    return 1


def _run_verify(cfg: VerifyConfig) -> tuple:
    algebra = build_algebra(cfg.algebra)
    word = Word(range(1, cfg.n + 1))
    closed = decompose_closed(word)
    commutation = oracle_commutation(word)
    rng = random.Random(cfg.seed)
    assigns = [
        {letter: rng.randint(1, algebra.dim) for letter in word.letters}
        for _ in range(cfg.trials)
    ]
    ref = evaluate_many(closed, algebra, assigns)
    comm = evaluate_many(commutation, algebra, assigns)
    max_direct = 0.0
    max_comm = 0.0
    for k, assign in enumerate(assigns):
        direct = direct_trace(algebra, [assign[letter] for letter in word.letters])
        max_direct = max(max_direct, abs(direct - ref[k]))
        max_comm = max(max_comm, abs(comm[k] - ref[k]))
    return max_direct, max_comm


def _cmd_verify(args) -> int:
    cfg = VerifyConfig(args.algebra, args.n, args.trials, args.tol, args.seed)
    max_direct, max_comm = _run_verify(cfg)
    ok = max_direct <= cfg.tol and max_comm <= cfg.tol
    print(
        f"n={cfg.n} algebra={cfg.algebra} trials={cfg.trials} "
        f"max|direct-closed|={max_direct:.3e} "
        f"max|commutation-closed|={max_comm:.3e} tol={cfg.tol:g} "
        f"-> {'PASS' if ok else 'FAIL'}"
    )
    return 0 if ok else 1


def _cmd_count(args) -> int:
    print(term_count(args.n))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="colortrace",
        description="Decompose generator traces into symmetrized traces and "
        "structure-constant chains.",
        epilog="COLORTRACE_THREADS caps the process workers used by the "
        "permutation sweeps (default: all cores).",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("decompose", help="fully expanded decomposition")
    p.add_argument("--n", type=int, required=True, help="trace length (>= 2)")
    p.add_argument("--letters", type=str, help="comma-separated letters (default 1..n)")
    p.add_argument("--format", choices=("text", "latex", "json"), default="text")
    p.add_argument(
        "--no-simplify-d2",
        action="store_true",
        help="keep two-slot d factors instead of rewriting them as delta/2",
    )
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("eform", help="compact symbolic form")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--letters", type=str)
    p.add_argument("--format", choices=("text", "latex", "json"), default="text")
    p.set_defaults(func=_cmd_eform)

    p = sub.add_parser("project", help="free-algebra projection self-check")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_project)

    p = sub.add_parser("verify", help="numeric oracle triangle")
    p.add_argument("--algebra", type=str, default="su3", help="su2 | su3 | suN:<N>")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("count", help="compact-form term count")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_count)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
