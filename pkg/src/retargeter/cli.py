"""Command-line front end.

Subcommands::

    run                  run a target program concretely
    analyze              analyze a target program meta-level
    retarget             emit a specialized analyzer for a target
    analyze-specialized  analyze using an emitted residual
    check                randomized soundness + equivalence harnesses
    bench                step-count comparison, specialized vs meta

Exit codes: 0 success, 1 property failure, 2 parse error, 3 fuel
exhausted, 4 specialization failure.  ``RETARGETER_FUEL`` overrides the
default evaluation step budget; a ``--fuel`` flag overrides both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .analyzer import abstract_target_input, analyze_meta, analyze_meta_abstract
from .domains import format_abs, get_domain, met_value_to_abs, parse_abs
from .errors import FuelExhausted, ParseError, ReifyError, RetargeterError
from .met.interp import apply_met_function
from .met.parser import parse_met
from .met.printer import print_met
from .met.syntax import DEFAULT_FUEL, EvalBudget, VAbs, VTuple
from .peval import PEConfig
from .retargeting import retarget, check_equivalence, check_soundness, bench_steps
from .srclang import SPair, embed_src_value
from .tgtlang import (
    TARGETS,
    encode_tgt_program,
    encode_tgt_value,
    eval_tgt,
    interpreter_fixture,
    parse_tgt_program,
    target_of,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_FUEL = 3
EXIT_SPECIALIZE = 4


def _fuel(args) -> int:
    if args.fuel is not None:
        return args.fuel
    env = os.environ.get("RETARGETER_FUEL")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise RetargeterError(f"RETARGETER_FUEL is not an integer: {env!r}") from None
    return DEFAULT_FUEL


def _budget(args) -> EvalBudget:
    return EvalBudget(fuel=_fuel(args))


def _read(path: str) -> str:
    return Path(path).read_text()


def _load_program(path: str):
    return parse_tgt_program(_read(path))


def cmd_run(args) -> int:
    program = _load_program(args.program)
    print(eval_tgt(program, args.input))
    return EXIT_OK


def _resolve_input(args, domain):
    """Concrete or abstract analysis input for a target program."""
    if args.input is not None:
        return "concrete", args.input
    return "abstract", parse_abs(args.abs_input, domain)


def cmd_analyze(args) -> int:
    domain = get_domain(args.domain)
    program = _load_program(args.program)
    fixture = interpreter_fixture(target_of(program))
    mode, value = _resolve_input(args, domain)
    if mode == "concrete":
        src_input = SPair(encode_tgt_program(program), encode_tgt_value(value))
        result = analyze_meta(domain, fixture, src_input, _budget(args))
    else:
        abstract = abstract_target_input(domain, encode_tgt_program(program), value)
        result = analyze_meta_abstract(domain, fixture, abstract, _budget(args))
    print(format_abs(result))
    return EXIT_OK


def cmd_retarget(args) -> int:
    domain = get_domain(args.domain)
    try:
        analyzer = retarget(args.target, domain, PEConfig(unfold_fuel=_fuel(args)))
    except RetargeterError as err:
        print(f"error: specialization failed: {err}", file=sys.stderr)
        return EXIT_SPECIALIZE
    text = print_met(analyzer.residual)
    if args.emit:
        Path(args.emit).write_text(text + "\n")
    else:
        print(text)
    stats = analyzer.stats()
    ops = " ".join(f"{k}={v}" for k, v in sorted(stats.abstract_ops.items()))
    print(f"retargeted {args.target}: match_nodes={stats.counts.get('Match', 0)} {ops}")
    return EXIT_OK


def cmd_analyze_specialized(args) -> int:
    domain = get_domain(args.domain)
    residual = parse_met(_read(args.residual))
    program = _load_program(args.program)
    mode, value = _resolve_input(args, domain)
    if mode == "concrete":
        arg = embed_src_value(SPair(encode_tgt_program(program), encode_tgt_value(value)))
    else:
        arg = VTuple(embed_src_value(encode_tgt_program(program)), VAbs(value))
    result = met_value_to_abs(apply_met_function(residual, arg, domain, _budget(args)))
    print(format_abs(result))
    return EXIT_OK


def _emit_reports(args, reports) -> int:
    if args.output == "json":
        print(json.dumps([r.as_dict() for r in reports], indent=2))
    else:
        for r in reports:
            print(r.to_text())
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAILURE


def cmd_check(args) -> int:
    domain = get_domain(args.domain)
    reports = [
        check_soundness(domain, args.target, args.trials, args.seed),
        check_equivalence(domain, args.target, args.trials, args.seed),
    ]
    return _emit_reports(args, reports)


def cmd_bench(args) -> int:
    domain = get_domain(args.domain)
    return _emit_reports(args, [bench_steps(domain, args.target, args.trials, args.seed)])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="retargeter",
        description="Derive and run static analyzers for small target languages "
                    "by specializing an abstract interpreter.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fuel", type=int, default=None,
                        help="evaluation step budget (default: RETARGETER_FUEL or "
                             f"{DEFAULT_FUEL})")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="run a target program")
    p.add_argument("program", help="target program file (e.g. add42.tgt)")
    p.add_argument("--input", type=int, required=True)
    p.set_defaults(fn=cmd_run)

    def add_analysis_inputs(p):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--input", type=int, help="concrete integer input")
        group.add_argument("--abs-input", dest="abs_input",
                           help="abstract input, e.g. '[0,10]' or '{0,+}'")

    p = sub.add_parser("analyze", parents=[common],
                       help="analyze a target program meta-level")
    p.add_argument("program")
    p.add_argument("--domain", choices=("sign", "interval"), required=True)
    add_analysis_inputs(p)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("retarget", parents=[common],
                       help="specialize the abstract interpreter to a target")
    p.add_argument("--target", choices=TARGETS, required=True)
    p.add_argument("--domain", choices=("sign", "interval"), required=True)
    p.add_argument("--emit", help="write the residual program to this file")
    p.set_defaults(fn=cmd_retarget)

    p = sub.add_parser("analyze-specialized", parents=[common],
                       help="analyze using an emitted residual")
    p.add_argument("residual", help="residual program file (.met)")
    p.add_argument("program")
    p.add_argument("--domain", choices=("sign", "interval"), required=True)
    add_analysis_inputs(p)
    p.set_defaults(fn=cmd_analyze_specialized)

    for name, fn in (("check", cmd_check), ("bench", cmd_bench)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--target", choices=TARGETS, required=True)
        p.add_argument("--domain", choices=("sign", "interval"), required=True)
        p.add_argument("--trials", type=int, default=1000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--output", choices=("text", "json"), default="text")
        p.set_defaults(fn=fn)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except FuelExhausted as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FUEL
    except ReifyError as err:
        print(f"error: specialization failed: {err}", file=sys.stderr)
        return EXIT_SPECIALIZE
    except (RetargeterError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
