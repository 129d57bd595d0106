"""Command-line front end.

Subcommands: gen, minimise, product, check, learn, lbt, and serve (the
reference wire-protocol harness for a model file, used to drive external-SUT
setups end to end). Exit codes: 0 success / requirement passes, 1 a
counterexample or true negative was found, 2 usage or input error, 3 teacher
or SUT protocol error. Runs are deterministic: equal seeds and inputs give
byte-identical stdout and output files.
"""

from __future__ import annotations

import argparse
import logging
import os
import shlex
import sys

from .automata import InputAlphabet, random_kripke
from .checker import check, load_requirement
from .errors import InputError, TeacherError
from .fid import FidLearner
from .fileio import load_kripke, save_kripke
from .idlearn import id_learn
from .lbt import (BudgetExhausted, ConvergedNoViolation, LbtConfig,
                  TrueNegativeFound, lbt_run)
from .minimize import minimise
from .product import subdirect_product
from .teacher import ExternalTeacher, KripkeTeacher, Teacher, serve_kripke

log = logging.getLogger("ikl")


def _make_teacher(spec: str, alphabet: str | None, bits: int | None) -> Teacher:
    """A model file path gives an in-process teacher; anything else is run as
    an external SUT command (which needs --alphabet/--bits declared)."""
    if os.path.exists(spec):
        return KripkeTeacher(load_kripke(spec))
    argv = shlex.split(spec)
    if not argv:
        raise InputError("empty SUT specification")
    if alphabet is None or bits is None:
        raise InputError(
            f"{spec!r} is not a model file; external SUT commands need "
            "--alphabet and --bits")
    return ExternalTeacher(argv, _parse_alphabet(alphabet), bits)


def _parse_alphabet(text: str) -> InputAlphabet:
    return InputAlphabet(tuple(tok for tok in text.split(",") if tok))


def _read_queries(path: str, alphabet: InputAlphabet) -> list:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None
    out = []
    for ln in lines:
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        out.append(alphabet.word(ln))
    return out


def _seed_of(args) -> int:
    return args.seed if args.seed is not None else args.global_seed


def _cmd_gen(args) -> int:
    alphabet = _parse_alphabet(args.alphabet)
    structure = random_kripke(_seed_of(args), args.states, args.bits, alphabet)
    save_kripke(structure, args.output)
    return 0


def _cmd_minimise(args) -> int:
    structure = load_kripke(args.input)
    result = minimise(structure, trace=args.trace)
    save_kripke(result.quotient, args.output)
    if args.emit_partition:
        with open(args.emit_partition, "w", encoding="utf-8") as fh:
            fh.write("state,block\n")
            for i, block in enumerate(result.partition.blocks):
                for q in sorted(block):
                    fh.write(f"{result.original_ids[q]},{i}\n")
    if args.trace:
        symbols = structure.alphabet.symbols
        for ev in result.splits or []:
            refined = ",".join(map(str, sorted(ev.refined)))
            moved = ",".join(map(str, sorted(ev.split_off)))
            print(f"split sym={symbols[ev.symbol]} splitter={ev.splitter_block} "
                  f"block={ev.block} refined={refined} new={moved}")
    log.info("minimised %d -> %d states (%d state moves)",
             structure.n_states, result.quotient.n_states, result.state_moves)
    return 0


def _cmd_product(args) -> int:
    factors = [load_kripke(p) for p in args.inputs]
    save_kripke(subdirect_product(factors), args.output)
    return 0


def _cmd_check(args) -> int:
    model = load_kripke(args.model)
    requirement = load_requirement(args.req)
    verdict = check(model, requirement)
    if verdict.passed:
        return 0
    print(model.alphabet.text(verdict.counterexample))
    return 1


def _cmd_learn(args) -> int:
    teacher = _make_teacher(args.sut, args.alphabet, args.bits)
    try:
        queries = _read_queries(args.queries, teacher.alphabet)
        if args.algo == "id":
            hypothesis = id_learn(teacher, [()] + queries)
            save_kripke(hypothesis, args.output)
            return 0
        learner = FidLearner(teacher)
        os.makedirs(args.out_dir, exist_ok=True)
        csv_rows = ["t,channel,states,queries"]

        def emit(step, family):
            for c, member in enumerate(family):
                path = os.path.join(args.out_dir, f"family_{step}_ch{c}.dfa")
                save_kripke(member, path)
                csv_rows.append(f"{step},{c},{member.n_states},{learner.teacher.unique_query_count}")

        emit(0, learner.family)
        last = learner.family
        for word in queries:
            family = learner.process(word)
            if family is not last:
                emit(learner.step, family)
                last = family
        with open(os.path.join(args.out_dir, "families.csv"), "w", encoding="utf-8") as fh:
            fh.write("\n".join(csv_rows) + "\n")
        return 0
    finally:
        if isinstance(teacher, ExternalTeacher):
            teacher.close()


def _cmd_lbt(args) -> int:
    teacher = _make_teacher(args.sut, args.alphabet, args.bits)
    try:
        cfg = LbtConfig(requirement=load_requirement(args.req),
                        max_queries=args.max_queries,
                        max_seconds=args.max_seconds,
                        seed=_seed_of(args),
                        window=args.n,
                        check_ratio=args.check_ratio)
        report = lbt_run(teacher, cfg)
        if args.csv:
            with open(args.csv, "w", encoding="utf-8") as fh:
                fh.write("iter,source,query_len,family_states,product_states,"
                         "min_states,cum_queries,verdict\n")
                last = len(report.records)
                tag = {TrueNegativeFound: "true-negative",
                       ConvergedNoViolation: "converged",
                       BudgetExhausted: "budget"}[type(report.outcome)]
                for rec in report.records:
                    verdict = tag if rec.iteration == last else ""
                    fh.write(f"{rec.iteration},{rec.source},{rec.query_len},"
                             f"{sum(rec.family_states)},{rec.product_states},"
                             f"{rec.min_states},{rec.cum_queries},{verdict}\n")
        outcome = report.outcome
        if isinstance(outcome, TrueNegativeFound):
            alphabet = teacher.alphabet
            print(f"true-negative: {alphabet.text(outcome.word)}")
            return 1
        if isinstance(outcome, ConvergedNoViolation):
            print(f"converged: iteration {outcome.at_iteration}")
            return 0
        print(f"budget-exhausted: {outcome.raw_queries} queries")
        return 0
    finally:
        if isinstance(teacher, ExternalTeacher):
            teacher.close()


def _cmd_serve(args) -> int:
    structure = load_kripke(args.model)
    serve_kripke(structure, sys.stdin, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="ikl", description=__doc__)
    top.add_argument("--verbose", action="store_true", help="log progress to stderr")
    top.add_argument("--seed", type=int, default=0, dest="global_seed",
                     help="default seed for subcommands that use randomness")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded random model")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--alphabet", required=True, help="comma-separated symbols")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("minimise", help="minimise a model file")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--emit-partition", metavar="CSV")
    p.add_argument("--trace", action="store_true", help="print split events")
    p.set_defaults(func=_cmd_minimise)

    p = sub.add_parser("product", help="subdirect product of 1-bit model files")
    p.add_argument("inputs", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_product)

    p = sub.add_parser("check", help="check a requirement against a model")
    p.add_argument("model")
    p.add_argument("--req", required=True)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("learn", help="learn from a query file")
    p.add_argument("--algo", choices=("fid", "id"), default="fid")
    p.add_argument("--sut", required=True, help="model file or SUT command")
    p.add_argument("--queries", required=True)
    p.add_argument("--alphabet", help="comma-separated symbols (external SUT)")
    p.add_argument("--bits", type=int, help="output width (external SUT)")
    p.add_argument("-o", "--output", default="learned.dfa", help="output (id mode)")
    p.add_argument("--out-dir", default=".", help="family output directory (fid mode)")
    p.set_defaults(func=_cmd_learn)

    p = sub.add_parser("lbt", help="learning-based testing loop")
    p.add_argument("--sut", required=True, help="model file or SUT command")
    p.add_argument("--req", required=True)
    p.add_argument("--alphabet", help="comma-separated symbols (external SUT)")
    p.add_argument("--bits", type=int, help="output width (external SUT)")
    p.add_argument("--n", type=int, default=50, help="equivalence window length")
    p.add_argument("--max-queries", type=int, default=5000)
    p.add_argument("--max-seconds", type=float, default=None)
    p.add_argument("--check-ratio", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--csv", help="per-iteration records")
    p.set_defaults(func=_cmd_lbt)

    p = sub.add_parser("serve", help="answer the wire protocol for a model file")
    p.add_argument("model")
    p.set_defaults(func=_cmd_serve)
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr,
                        level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except TeacherError as e:
        print(f"teacher error: {e}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
