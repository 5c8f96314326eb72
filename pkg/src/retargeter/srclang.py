"""The source language: loop-free expressions over a single input ``x``.

Values are integers and nested pairs.  Programs are s-expressions over
the forms ``(+ e e) (* e e) (= e e) (pair e e) (fst e) (snd e)
(if e e e)`` plus the atoms ``x`` and integer literals.

This module also provides the embedding of source programs and values
into meta-language data, which is what the abstract interpreter and the
partial evaluator consume, and seeded random generators used by the
property harnesses.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import ParseError, StuckError
from .met.syntax import MetValue, VConstruct, VInt, VTuple


class SrcExpr:
    __slots__ = ()


@dataclass(frozen=True)
class X(SrcExpr):
    """The single input variable."""


@dataclass(frozen=True)
class Num(SrcExpr):
    value: int


@dataclass(frozen=True)
class Add(SrcExpr):
    lhs: SrcExpr
    rhs: SrcExpr


@dataclass(frozen=True)
class Mul(SrcExpr):
    lhs: SrcExpr
    rhs: SrcExpr


@dataclass(frozen=True)
class Eq(SrcExpr):
    lhs: SrcExpr
    rhs: SrcExpr


@dataclass(frozen=True)
class Pair(SrcExpr):
    fst: SrcExpr
    snd: SrcExpr


@dataclass(frozen=True)
class Fst(SrcExpr):
    arg: SrcExpr


@dataclass(frozen=True)
class Snd(SrcExpr):
    arg: SrcExpr


@dataclass(frozen=True)
class If(SrcExpr):
    pred: SrcExpr
    then: SrcExpr
    orelse: SrcExpr


class SrcValue:
    __slots__ = ()


@dataclass(frozen=True)
class SInt(SrcValue):
    value: int


@dataclass(frozen=True)
class SPair(SrcValue):
    fst: SrcValue
    snd: SrcValue


# ---------------------------------------------------------------------------
# Concrete syntax
# ---------------------------------------------------------------------------

_FORMS = {"+": (Add, 2), "*": (Mul, 2), "=": (Eq, 2), "pair": (Pair, 2),
          "fst": (Fst, 1), "snd": (Snd, 1), "if": (If, 3)}


def _tokenize_sexpr(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def parse_src(text: str) -> SrcExpr:
    """Parse one s-expression into a source-language AST."""
    tokens = _tokenize_sexpr(text)
    pos = 0

    def parse() -> SrcExpr:
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of input")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            if pos >= len(tokens):
                raise ParseError("unexpected end of input after '('")
            head = tokens[pos]
            pos += 1
            form = _FORMS.get(head)
            if form is None:
                raise ParseError(f"unknown form {head!r}")
            ctor, arity = form
            args = [parse() for _ in range(arity)]
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ParseError(f"expected ')' to close {head!r}")
            pos += 1
            return ctor(*args)
        if tok == ")":
            raise ParseError("unexpected ')'")
        if tok == "x":
            return X()
        try:
            return Num(int(tok))
        except ValueError:
            raise ParseError(f"unexpected token {tok!r}") from None

    expr = parse()
    if pos != len(tokens):
        raise ParseError(f"trailing input starting at {tokens[pos]!r}")
    return expr


def print_src(e: SrcExpr) -> str:
    match e:
        case X():
            return "x"
        case Num(n):
            return str(n)
        case Add(a, b):
            return f"(+ {print_src(a)} {print_src(b)})"
        case Mul(a, b):
            return f"(* {print_src(a)} {print_src(b)})"
        case Eq(a, b):
            return f"(= {print_src(a)} {print_src(b)})"
        case Pair(a, b):
            return f"(pair {print_src(a)} {print_src(b)})"
        case Fst(a):
            return f"(fst {print_src(a)})"
        case Snd(a):
            return f"(snd {print_src(a)})"
        case If(p, t, o):
            return f"(if {print_src(p)} {print_src(t)} {print_src(o)})"
    raise TypeError(f"not a source expression: {e!r}")


# ---------------------------------------------------------------------------
# Concrete semantics
# ---------------------------------------------------------------------------


def eval_src(e: SrcExpr, input_value: SrcValue) -> SrcValue:
    """Evaluate ``e`` with ``x`` bound to ``input_value``.

    Arithmetic and comparison require integers, projections require
    pairs, and the conditional requires an integer predicate (taken as
    true when nonzero); anything else raises :class:`StuckError`.
    """

    def ev(node: SrcExpr) -> SrcValue:
        match node:
            case X():
                return input_value
            case Num(n):
                return SInt(n)
            case Add(a, b) | Mul(a, b) | Eq(a, b):
                va, vb = ev(a), ev(b)
                if not (isinstance(va, SInt) and isinstance(vb, SInt)):
                    raise StuckError("arithmetic on a non-integer")
                if isinstance(node, Add):
                    return SInt(va.value + vb.value)
                if isinstance(node, Mul):
                    return SInt(va.value * vb.value)
                return SInt(1 if va.value == vb.value else 0)
            case Pair(a, b):
                return SPair(ev(a), ev(b))
            case Fst(a):
                v = ev(a)
                if not isinstance(v, SPair):
                    raise StuckError("fst of a non-pair")
                return v.fst
            case Snd(a):
                v = ev(a)
                if not isinstance(v, SPair):
                    raise StuckError("snd of a non-pair")
                return v.snd
            case If(p, t, o):
                vp = ev(p)
                if not isinstance(vp, SInt):
                    raise StuckError("conditional on a non-integer")
                return ev(t) if vp.value != 0 else ev(o)
        raise TypeError(f"not a source expression: {node!r}")

    return ev(e)


# ---------------------------------------------------------------------------
# Embedding into meta-language data
# ---------------------------------------------------------------------------


def embed_src_expr(e: SrcExpr) -> MetValue:
    """Embed a source-language AST as a meta-language constructor tree."""
    match e:
        case X():
            return VConstruct("X", ())
        case Num(n):
            return VConstruct("Num", (VInt(n),))
        case Add(a, b):
            return VConstruct("Add", (embed_src_expr(a), embed_src_expr(b)))
        case Mul(a, b):
            return VConstruct("Mul", (embed_src_expr(a), embed_src_expr(b)))
        case Eq(a, b):
            return VConstruct("Eq", (embed_src_expr(a), embed_src_expr(b)))
        case Pair(a, b):
            return VConstruct("Pair", (embed_src_expr(a), embed_src_expr(b)))
        case Fst(a):
            return VConstruct("Fst", (embed_src_expr(a),))
        case Snd(a):
            return VConstruct("Snd", (embed_src_expr(a),))
        case If(p, t, o):
            return VConstruct("If", (embed_src_expr(p), embed_src_expr(t), embed_src_expr(o)))
    raise TypeError(f"not a source expression: {e!r}")


_UNEMBED = {"X": X, "Num": None, "Add": Add, "Mul": Mul, "Eq": Eq,
            "Pair": Pair, "Fst": Fst, "Snd": Snd, "If": If}


def unembed_src_expr(v: MetValue) -> SrcExpr:
    """Inverse of :func:`embed_src_expr` on its range."""
    if not isinstance(v, VConstruct) or v.tag not in _UNEMBED:
        raise StuckError(f"not an embedded source expression: {v!r}")
    if v.tag == "Num":
        if len(v.args) != 1 or not isinstance(v.args[0], VInt):
            raise StuckError(f"not an embedded source expression: {v!r}")
        return Num(v.args[0].value)
    ctor = _UNEMBED[v.tag]
    return ctor(*(unembed_src_expr(a) for a in v.args))


def embed_src_value(v: SrcValue) -> MetValue:
    match v:
        case SInt(n):
            return VInt(n)
        case SPair(a, b):
            return VTuple(embed_src_value(a), embed_src_value(b))
    raise TypeError(f"not a source value: {v!r}")


def unembed_src_value(v: MetValue) -> SrcValue:
    match v:
        case VInt(n):
            return SInt(n)
        case VTuple(a, b):
            return SPair(unembed_src_value(a), unembed_src_value(b))
    raise StuckError(f"not an embedded source value: {v!r}")


# ---------------------------------------------------------------------------
# Random generation for property harnesses
# ---------------------------------------------------------------------------

# A value shape is "int" or ("pair", left_shape, right_shape).
Shape = str | tuple


def gen_random_src_value(seed: int, depth_bound: int = 3, magnitude_bound: int = 1000) -> SrcValue:
    """Deterministic random value: same seed, same result."""
    if depth_bound < 0 or magnitude_bound <= 0:
        raise ValueError("bounds must be positive")
    return random_src_value(random.Random(seed), depth_bound, magnitude_bound)


def random_src_value(rng: random.Random, depth_bound: int, magnitude_bound: int) -> SrcValue:
    if depth_bound <= 0 or rng.random() < 0.5:
        return SInt(rng.randint(-magnitude_bound, magnitude_bound))
    return SPair(
        random_src_value(rng, depth_bound - 1, magnitude_bound),
        random_src_value(rng, depth_bound - 1, magnitude_bound),
    )


def shape_of(v: SrcValue) -> Shape:
    if isinstance(v, SInt):
        return "int"
    assert isinstance(v, SPair)
    return ("pair", shape_of(v.fst), shape_of(v.snd))


def random_src_expr(rng: random.Random, input_shape: Shape, depth: int,
                    magnitude_bound: int = 100, want: Shape = "int") -> SrcExpr:
    """Random program producing a value of shape ``want``.

    The generator tracks int-versus-pair shapes so that evaluation on any
    input of ``input_shape`` never gets stuck.
    """
    if want == "int":
        choices = ["num"]
        if input_shape == "int":
            choices.append("x")
        if depth > 0:
            choices += ["add", "mul", "eq", "if", "proj"]
        kind = rng.choice(choices)
        if kind == "x":
            return X()
        if kind == "num":
            return Num(rng.randint(-magnitude_bound, magnitude_bound))
        if kind in ("add", "mul", "eq"):
            ctor = {"add": Add, "mul": Mul, "eq": Eq}[kind]
            return ctor(
                random_src_expr(rng, input_shape, depth - 1, magnitude_bound, "int"),
                random_src_expr(rng, input_shape, depth - 1, magnitude_bound, "int"),
            )
        if kind == "if":
            return If(
                random_src_expr(rng, input_shape, depth - 1, magnitude_bound, "int"),
                random_src_expr(rng, input_shape, depth - 1, magnitude_bound, "int"),
                random_src_expr(rng, input_shape, depth - 1, magnitude_bound, "int"),
            )
        # Project an int out of a freshly built pair.
        side = rng.random() < 0.5
        inner: Shape = ("pair", "int", "int")
        pair_expr = random_src_expr(rng, input_shape, depth - 1, magnitude_bound, inner)
        return Fst(pair_expr) if side else Snd(pair_expr)

    # want is a pair shape
    _, left, right = want
    choices = ["pair"]
    if input_shape == want:
        choices.append("x")
    if depth > 0:
        choices.append("if")
    kind = rng.choice(choices)
    if kind == "x":
        return X()
    if kind == "if":
        return If(
            random_src_expr(rng, input_shape, depth - 1, magnitude_bound, "int"),
            random_src_expr(rng, input_shape, depth - 1, magnitude_bound, want),
            random_src_expr(rng, input_shape, depth - 1, magnitude_bound, want),
        )
    return Pair(
        random_src_expr(rng, input_shape, max(depth - 1, 0), magnitude_bound, left),
        random_src_expr(rng, input_shape, max(depth - 1, 0), magnitude_bound, right),
    )
