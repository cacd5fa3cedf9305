"""Command-line front end.

Exit status: 0 on success, 1 on a logical failure (rule violation,
underivable or undecided sequent), 2 on unreadable input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from .admissible import load_script
from .derivation import Derivation, DerivationError, check
from .formats import dump_derivation, load_derivation, load_oracle, parse_formula, parse_sequent, show
from .search import SearchConfig, decide, generate_corpus
from .semantics import BoundViolated, UnassignedPrime, eval, load_model, standard_models
from .sexpr import ParseError
from .terms import PreorderOracle, arithmetic_oracle

OK, FAILED, BAD_INPUT = 0, 1, 2

_STANDARD = {"two": 0, "four": 1, "chain": 2}


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise InputError(f"cannot read {path}: {err.strerror}") from None


def _oracle(path: Optional[str]) -> PreorderOracle:
    return arithmetic_oracle() if path is None else load_oracle(_read(path))


def _model(choice: Optional[str]):
    if choice is None:
        return standard_models()[0]
    if choice in _STANDARD:
        return standard_models()[_STANDARD[choice]]
    return load_model(_read(choice))


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_check(args) -> int:
    d = load_derivation(_read(args.proof))
    s = check(d, _oracle(args.oracle))
    print(f"checked: {show(s)}")
    return OK


def cmd_normalize(args) -> int:
    oracle = _oracle(args.oracle)
    d = load_script(_read(args.script), oracle)
    check(d, oracle)
    _emit(dump_derivation(d), args.out)
    return OK


def cmd_decide(args) -> int:
    s = parse_sequent(args.sequent)
    result = decide(s, _oracle(args.oracle), SearchConfig(args.omega_n, args.depth))
    if isinstance(result, Derivation):
        print("Derivable")
        if args.out:
            _emit(dump_derivation(result), args.out)
        return OK
    print(result)
    return FAILED


def cmd_eval(args) -> int:
    f = parse_formula(args.formula)
    print(eval(f, _model(args.model), default_bound=args.bound))
    return OK


def cmd_corpus(args) -> int:
    ds = generate_corpus(_oracle(args.oracle), SearchConfig(args.omega_n, args.depth), args.count, args.seed)
    _emit("".join(dump_derivation(d) for d in ds), args.out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="omegaseq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def oracle_flag(p):
        p.add_argument("--oracle", metavar="FILE", help="oracle file (default: arithmetic equations)")

    def search_flags(p):
        p.add_argument("--omega-n", type=int, default=3, metavar="N", help="ω-rule witnesses 1..N (default 3)")
        p.add_argument("--depth", type=int, default=8, metavar="D", help="search depth limit (default 8)")

    p = sub.add_parser("check", help="check a proof file")
    p.add_argument("proof")
    oracle_flag(p)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("normalize", help="compile a proof script to primitive rules")
    p.add_argument("script")
    oracle_flag(p)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(run=cmd_normalize)

    p = sub.add_parser("decide", help="bounded proof search for a sequent")
    p.add_argument("sequent", help='e.g. "(seq (p (neg q)) r)"')
    oracle_flag(p)
    search_flags(p)
    p.add_argument("--out", metavar="FILE", help="write the found proof here")
    p.set_defaults(run=cmd_decide)

    p = sub.add_parser("eval", help="evaluate a closed formula in a finite model")
    p.add_argument("formula")
    p.add_argument("--model", metavar="FILE", help="model file, or one of two, four, chain (default two)")
    p.add_argument("--bound", type=int, default=1, metavar="N", help="ω-meet stabilization index (default 1)")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("corpus", help="print a random corpus of checked derivations")
    oracle_flag(p)
    search_flags(p)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(run=cmd_corpus)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return OK if err.code == 0 else BAD_INPUT
    try:
        return args.run(args)
    except (DerivationError, BoundViolated, UnassignedPrime) as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return FAILED
    except (ParseError, InputError, ValueError) as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
