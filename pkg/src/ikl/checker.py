"""Safety-fragment requirements over hypothesis structures.

Formulas combine output-bit atoms with boolean connectives under one temporal
head: always / never (state invariants over the reachable part), within
(some state satisfying the body is reachable within k steps), or after (the
body holds at the state a fixed word reaches). Every failed check yields a
finite counterexample input string, chosen shortest and lexicographically
least so runs are reproducible, which the testing loop can execute directly.

Grammar:  always <expr> | never <expr> | within <k> <expr> | after "<w>" <expr>
          <expr> := bit[<c>] | !e | e & e | e | e | e -> e | (e)
with '!' binding tightest, then '&', then '|', then right-associative '->'.
The word in after is space-separated symbols inside the quotes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Union

from .automata import EPSILON, Bits, InputAlphabet, KripkeStructure, Word
from .errors import InputError

# ---------------------------------------------------------------- formulas


@dataclass(frozen=True)
class BitAtom:
    index: int


@dataclass(frozen=True)
class Not:
    body: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Implies:
    left: "Expr"
    right: "Expr"


Expr = Union[BitAtom, Not, And, Or, Implies]


@dataclass(frozen=True)
class Always:
    body: Expr


@dataclass(frozen=True)
class Never:
    body: Expr


@dataclass(frozen=True)
class Within:
    steps: int
    body: Expr


@dataclass(frozen=True)
class After:
    word: tuple[str, ...]  # symbol tokens, resolved against the model's alphabet
    body: Expr


Requirement = Union[Always, Never, Within, After]


@dataclass(frozen=True)
class Verdict:
    """Pass, or a counterexample word that violates the requirement."""

    counterexample: Optional[Word]

    @property
    def passed(self) -> bool:
        return self.counterexample is None


PASS = Verdict(None)


def eval_expr(expr: Expr, bits: Bits) -> bool:
    if isinstance(expr, BitAtom):
        return bool(bits[expr.index])
    if isinstance(expr, Not):
        return not eval_expr(expr.body, bits)
    if isinstance(expr, And):
        return eval_expr(expr.left, bits) and eval_expr(expr.right, bits)
    if isinstance(expr, Or):
        return eval_expr(expr.left, bits) or eval_expr(expr.right, bits)
    if isinstance(expr, Implies):
        return (not eval_expr(expr.left, bits)) or eval_expr(expr.right, bits)
    raise InputError(f"unknown expression node {expr!r}")


def _validate_expr(expr: Expr, width: int) -> None:
    if isinstance(expr, BitAtom):
        if not 0 <= expr.index < width:
            raise InputError(f"bit index {expr.index} out of range 0..{width - 1}")
    elif isinstance(expr, Not):
        _validate_expr(expr.body, width)
    elif isinstance(expr, (And, Or, Implies)):
        _validate_expr(expr.left, width)
        _validate_expr(expr.right, width)
    else:
        raise InputError(f"unknown expression node {expr!r}")


def validate_requirement(req: Requirement, model: KripkeStructure) -> None:
    if isinstance(req, (Always, Never)):
        _validate_expr(req.body, model.bits)
    elif isinstance(req, Within):
        if req.steps < 0:
            raise InputError("within bound must be non-negative")
        _validate_expr(req.body, model.bits)
    elif isinstance(req, After):
        for sym in req.word:
            model.alphabet.index(sym)
        _validate_expr(req.body, model.bits)
    else:
        raise InputError(f"unknown requirement {req!r}")


# ---------------------------------------------------------------- checking


def _bfs_access(model: KripkeStructure):
    """(state, access word) in breadth-first order; access words come out
    shortest-first and lexicographically least per state."""
    seen = {model.initial}
    queue = deque([(model.initial, EPSILON)])
    nsym = len(model.alphabet)
    while queue:
        q, w = queue.popleft()
        yield q, w
        for a in range(nsym):
            t = model.delta[q][a]
            if t not in seen:
                seen.add(t)
                queue.append((t, w + (a,)))


def check(model: KripkeStructure, req: Requirement) -> Verdict:
    """Model-check one requirement, producing a counterexample input string
    on violation (an input the testing loop can run on the real system)."""
    validate_requirement(req, model)
    if isinstance(req, Never):
        return check(model, Always(Not(req.body)))
    if isinstance(req, Always):
        for q, access in _bfs_access(model):
            if not eval_expr(req.body, model.labels[q]):
                return Verdict(access)
        return PASS
    if isinstance(req, Within):
        for q, access in _bfs_access(model):
            if len(access) > req.steps:
                break
            if eval_expr(req.body, model.labels[q]):
                return PASS
        # nothing within range satisfies the body: the least path of exactly
        # that length witnesses the bound
        return Verdict((0,) * req.steps)
    if isinstance(req, After):
        word = tuple(model.alphabet.index(sym) for sym in req.word)
        if eval_expr(req.body, model.lambda_star(word)):
            return PASS
        return Verdict(word)
    raise InputError(f"unknown requirement {req!r}")


def violated_by_trace(req: Requirement, word: Word, outputs: list[Bits],
                      alphabet: InputAlphabet) -> bool:
    """Did an observed run conclusively violate the requirement?

    ``outputs[i]`` is the output after the first i symbols of ``word``
    (so ``outputs[0]`` is the initial output and len(outputs) == len(word)+1).
    Inconclusive observations (e.g. a run shorter than a within-bound, or a
    run that does not start with an after-word) count as not violated.
    """
    if isinstance(req, Never):
        return violated_by_trace(Always(Not(req.body)), word, outputs, alphabet)
    if isinstance(req, Always):
        return any(not eval_expr(req.body, bits) for bits in outputs)
    if isinstance(req, Within):
        if len(word) < req.steps:
            return False
        return not any(eval_expr(req.body, bits) for bits in outputs[:req.steps + 1])
    if isinstance(req, After):
        target = tuple(alphabet.index(sym) for sym in req.word)
        if word[:len(target)] != target:
            return False
        return not eval_expr(req.body, outputs[len(target)])
    raise InputError(f"unknown requirement {req!r}")


# ---------------------------------------------------------------- parsing

_TEMPORAL = ("always", "never", "within", "after")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str) -> InputError:
        return InputError(f"requirement syntax error at column {self.pos + 1}: {msg}")

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take_word(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]

    def expect(self, tok: str) -> None:
        self.skip_ws()
        if not self.text.startswith(tok, self.pos):
            raise self.error(f"expected {tok!r}")
        self.pos += len(tok)

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected a number")
        return int(self.text[start:self.pos])

    def quoted(self) -> tuple[str, ...]:
        self.expect('"')
        end = self.text.find('"', self.pos)
        if end < 0:
            raise self.error("unterminated quoted word")
        inner = self.text[self.pos:end]
        self.pos = end + 1
        return tuple(inner.split())

    # expr := implies
    def expr(self) -> Expr:
        return self.implies()

    def implies(self) -> Expr:
        left = self.disjunct()
        self.skip_ws()
        if self.text.startswith("->", self.pos):
            self.pos += 2
            return Implies(left, self.implies())
        return left

    def disjunct(self) -> Expr:
        left = self.conjunct()
        while True:
            self.skip_ws()
            if self.pos < len(self.text) and self.text[self.pos] == "|":
                self.pos += 1
                left = Or(left, self.conjunct())
            else:
                return left

    def conjunct(self) -> Expr:
        left = self.unary()
        while True:
            self.skip_ws()
            if self.pos < len(self.text) and self.text[self.pos] == "&":
                self.pos += 1
                left = And(left, self.unary())
            else:
                return left

    def unary(self) -> Expr:
        ch = self.peek()
        if ch == "!":
            self.pos += 1
            return Not(self.unary())
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            self.expect(")")
            return inner
        word = self.take_word()
        if word == "bit":
            self.expect("[")
            idx = self.integer()
            self.expect("]")
            return BitAtom(idx)
        raise self.error(f"expected an atom, got {word or ch!r}")


def parse_requirement(text: str) -> Requirement:
    p = _Parser(text)
    head = p.take_word()
    if head not in _TEMPORAL:
        raise p.error(f"expected one of {', '.join(_TEMPORAL)}")
    if head == "within":
        steps = p.integer()
        body = p.expr()
        req: Requirement = Within(steps, body)
    elif head == "after":
        word = p.quoted()
        body = p.expr()
        req = After(word, body)
    else:
        body = p.expr()
        req = Always(body) if head == "always" else Never(body)
    p.skip_ws()
    if p.pos != len(p.text):
        raise p.error("trailing input after the formula")
    return req


def _unparse_expr(expr: Expr) -> str:
    # parenthesise by precedence: atoms and ! are tight, -> is loosest
    if isinstance(expr, BitAtom):
        return f"bit[{expr.index}]"
    if isinstance(expr, Not):
        inner = _unparse_expr(expr.body)
        if isinstance(expr.body, (And, Or, Implies)):
            inner = f"({inner})"
        return f"!{inner}"
    if isinstance(expr, And):
        parts = []
        for side in (expr.left, expr.right):
            s = _unparse_expr(side)
            if isinstance(side, (Or, Implies)):
                s = f"({s})"
            parts.append(s)
        return f"{parts[0]} & {parts[1]}"
    if isinstance(expr, Or):
        parts = []
        for side in (expr.left, expr.right):
            s = _unparse_expr(side)
            if isinstance(side, Implies):
                s = f"({s})"
            parts.append(s)
        return f"{parts[0]} | {parts[1]}"
    if isinstance(expr, Implies):
        left = _unparse_expr(expr.left)
        if isinstance(expr.left, Implies):
            left = f"({left})"
        return f"{left} -> {_unparse_expr(expr.right)}"
    raise InputError(f"unknown expression node {expr!r}")


def unparse_requirement(req: Requirement) -> str:
    if isinstance(req, Always):
        return f"always {_unparse_expr(req.body)}"
    if isinstance(req, Never):
        return f"never {_unparse_expr(req.body)}"
    if isinstance(req, Within):
        return f"within {req.steps} {_unparse_expr(req.body)}"
    if isinstance(req, After):
        return f'after "{" ".join(req.word)}" {_unparse_expr(req.body)}'
    raise InputError(f"unknown requirement {req!r}")


def load_requirement(path) -> Requirement:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh]
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None
    formulas = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(formulas) != 1:
        raise InputError(f"{path}: want exactly one formula, found {len(formulas)}")
    return parse_requirement(formulas[0])
