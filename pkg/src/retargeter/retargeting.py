"""The headline pipeline: specialize the abstract interpreter to a
definitional interpreter, yielding an analyzer for the interpreted
language, plus the harnesses that check it.

``retarget`` partially evaluates the abstract source-language
interpreter with respect to an encoded target interpreter.  The residual
is a direct abstract interpreter for the target: the dispatch on the
interpreter's AST is gone, only abstract operations remain.

The harnesses check, over random programs and inputs, that the residual
agrees exactly with meta-level analysis (``check_equivalence``), that it
contains every concrete result (``check_soundness``), and that it is
strictly cheaper to run (``bench_steps``).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .analyzer import analyze_meta, build_abstract_interpreter
from .domains import AbsValue, NumericDomain, contains, format_abs, met_value_to_abs
from .met.interp import apply_met_function
from .met.syntax import EvalBudget, MetExpr, VAbs, VTuple
from .peval import PEConfig, residual_stats, specialize
from .srclang import SPair, embed_src_expr, embed_src_value, print_src
from .tgtlang import (
    TgtProgram,
    check_target,
    encode_tgt_program,
    encode_tgt_value,
    eval_tgt,
    interpreter_fixture,
    print_tgt_program,
    random_tgt_program,
    target_of,
)


@dataclass(frozen=True)
class RetargetedAnalyzer:
    """A residual analyzer for one target language.

    ``residual`` is a closed one-argument function over the encoded
    ``(program, input)`` pair; ``interpreter_text`` records which
    definitional interpreter it was derived from.
    """

    residual: MetExpr
    domain: NumericDomain
    target: str
    config: PEConfig
    interpreter_text: str

    def stats(self):
        return residual_stats(self.residual)


def retarget(target: str, domain: NumericDomain, cfg: PEConfig | None = None) -> RetargetedAnalyzer:
    """Derive an analyzer for ``target`` by specializing the abstract
    interpreter to that target's definitional interpreter."""
    check_target(target)
    cfg = cfg or PEConfig()
    fixture = interpreter_fixture(target)
    residual = specialize(build_abstract_interpreter(), embed_src_expr(fixture), cfg)
    return RetargetedAnalyzer(residual, domain, target, cfg, print_src(fixture))


def run_specialized(analyzer: RetargetedAnalyzer, p: TgtProgram, i: int,
                    budget: EvalBudget | None = None) -> AbsValue:
    """Analyze a concrete (program, input) pair with the residual."""
    _check_program(analyzer, p)
    arg = embed_src_value(SPair(encode_tgt_program(p), encode_tgt_value(i)))
    return met_value_to_abs(apply_met_function(analyzer.residual, arg, analyzer.domain, budget))


def run_specialized_abstract(analyzer: RetargetedAnalyzer, p: TgtProgram,
                             abstract_input: AbsValue,
                             budget: EvalBudget | None = None) -> AbsValue:
    """Analyze a program on an abstract input with the residual."""
    _check_program(analyzer, p)
    arg = VTuple(embed_src_value(encode_tgt_program(p)), VAbs(abstract_input))
    return met_value_to_abs(apply_met_function(analyzer.residual, arg, analyzer.domain, budget))


def _check_program(analyzer: RetargetedAnalyzer, p: TgtProgram) -> None:
    if target_of(p) != analyzer.target:
        raise ValueError(
            f"program is a {target_of(p)!r} program but the analyzer targets {analyzer.target!r}"
        )


# ---------------------------------------------------------------------------
# Harnesses
# ---------------------------------------------------------------------------


@dataclass
class Report:
    """Outcome of a randomized harness run; JSON-stable field set."""

    kind: str
    domain: str
    target: str
    trials: int
    seed: int
    failures: list[dict] = field(default_factory=list)
    mean_meta_steps: float = 0.0
    mean_spec_steps: float = 0.0
    ratio: float | None = None

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "domain": self.domain,
            "target": self.target,
            "trials": self.trials,
            "seed": self.seed,
            "failures": self.failures,
            "mean_meta_steps": self.mean_meta_steps,
            "mean_spec_steps": self.mean_spec_steps,
            "ratio": self.ratio,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_text(self) -> str:
        status = "ok" if self.ok else f"{len(self.failures)} failure(s)"
        lines = [
            f"{self.kind}: domain={self.domain} target={self.target} "
            f"trials={self.trials} seed={self.seed} -> {status}"
        ]
        if self.trials:
            lines.append(
                f"  mean steps: meta={self.mean_meta_steps:.1f} "
                f"specialized={self.mean_spec_steps:.1f} ratio={self.ratio:.2f}"
            )
        for failure in self.failures[:10]:
            lines.append(f"  FAIL trial {failure['trial']}: {failure}")
        return "\n".join(lines)


def _harness(kind: str, domain: NumericDomain, target: str, trials: int, seed: int,
             magnitude: int, cfg: PEConfig | None, judge) -> Report:
    """Shared trial loop: run meta-level and specialized analyses on the
    same random (program, input) pairs and let ``judge`` flag failures."""
    check_target(target)
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    analyzer = retarget(target, domain, cfg)
    fixture = interpreter_fixture(target)
    rng = random.Random(seed)
    report = Report(kind, domain.name, target, trials, seed)
    meta_total = spec_total = 0
    for trial in range(trials):
        program = random_tgt_program(rng, target, magnitude)
        value = rng.randint(-magnitude, magnitude)
        meta_budget, spec_budget = EvalBudget(), EvalBudget()
        meta = analyze_meta(domain, fixture, SPair(encode_tgt_program(program),
                                                   encode_tgt_value(value)), meta_budget)
        spec = run_specialized(analyzer, program, value, spec_budget)
        meta_total += meta_budget.steps_used
        spec_total += spec_budget.steps_used
        problem = judge(program, value, meta, spec, meta_budget, spec_budget)
        if problem is not None:
            report.failures.append({
                "trial": trial,
                "program": print_tgt_program(program),
                "input": value,
                **problem,
            })
    if trials:
        report.mean_meta_steps = meta_total / trials
        report.mean_spec_steps = spec_total / trials
        report.ratio = meta_total / spec_total if spec_total else None
    return report


def check_equivalence(domain: NumericDomain, target: str, trials: int = 1000,
                      seed: int = 0, magnitude: int = 1000,
                      cfg: PEConfig | None = None) -> Report:
    """Specialized and meta-level analyses must agree structurally."""

    def judge(program, value, meta, spec, mb, sb):
        if spec != meta:
            return {"meta": format_abs(meta), "specialized": format_abs(spec)}
        return None

    return _harness("equivalence", domain, target, trials, seed, magnitude, cfg, judge)


def check_soundness(domain: NumericDomain, target: str, trials: int = 1000,
                    seed: int = 0, magnitude: int = 1000,
                    cfg: PEConfig | None = None) -> Report:
    """The concrete result must be a member of the analyzed result."""

    def judge(program, value, meta, spec, mb, sb):
        concrete = encode_tgt_value(eval_tgt(program, value))
        if not contains(spec, concrete):
            return {"concrete": repr(concrete), "specialized": format_abs(spec)}
        return None

    return _harness("soundness", domain, target, trials, seed, magnitude, cfg, judge)


def bench_steps(domain: NumericDomain, target: str, trials: int = 1000,
                seed: int = 0, magnitude: int = 1000,
                cfg: PEConfig | None = None) -> Report:
    """The residual must use strictly fewer evaluation steps per trial."""

    def judge(program, value, meta, spec, meta_budget, spec_budget):
        if spec_budget.steps_used >= meta_budget.steps_used:
            return {"meta_steps": meta_budget.steps_used,
                    "spec_steps": spec_budget.steps_used}
        return None

    return _harness("bench", domain, target, trials, seed, magnitude, cfg, judge)
