"""Learning-based testing loop.

Each iteration: model-check the current hypothesis against the requirement;
execute the counterexample (or a fresh random string when the check passes,
when its counterexample was already used, or when the check ratio says so) on
the system under test; terminate with a true negative when the observed run
violates the requirement, otherwise feed the observation back into the family
learner and rebuild the hypothesis as the minimised subdirect product of the
family. Rebuilds happen only when the family actually changed; reused family
snapshots share the previous hypothesis, which makes the n-equivalence
convergence window cheap to evaluate.

Termination: true negative found, the last n+1 hypotheses pairwise
behaviourally equivalent, or the query/time budget exhausted.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Optional, Union

from .automata import (InputAlphabet, KripkeStructure, Word,
                       equivalence_witness, prefixes)
from .checker import Requirement, check, validate_requirement, violated_by_trace
from .errors import IklError, InputError
from .fid import FidLearner
from .minimize import minimise
from .product import subdirect_product
from .teacher import Teacher, ensure_cached

_LENGTH_P = 0.2  # geometric length parameter for random queries


class CapExhausted(IklError):
    """Every string up to the current length cap has been used."""


def next_random_query(rng: random.Random, used: set[Word], alphabet: InputAlphabet,
                      cap: int) -> Word:
    """Fresh random string: geometric length (p = 0.2) capped at ``cap``,
    uniform symbols, never repeating a used string."""
    nsym = len(alphabet)

    def draw_len() -> int:
        length = 0
        while length < cap and rng.random() >= _LENGTH_P:
            length += 1
        return length

    for _ in range(64):
        length = draw_len()
        word = tuple(rng.randrange(nsym) for _ in range(length))
        if word not in used:
            return word

    # rejection sampling keeps colliding: work stratum by stratum
    used_per_len: dict[int, int] = {}
    for w in used:
        used_per_len[len(w)] = used_per_len.get(len(w), 0) + 1
    open_lengths = [ln for ln in range(cap + 1)
                    if used_per_len.get(ln, 0) < nsym ** ln]
    if not open_lengths:
        raise CapExhausted(f"all strings of length <= {cap} used")
    weights = [(1 - _LENGTH_P) ** ln for ln in open_lengths]
    length = rng.choices(open_lengths, weights=weights)[0]
    space = nsym ** length
    if space <= 4096:
        free = [w for w in _all_words(nsym, length) if w not in used]
        return free[rng.randrange(len(free))]
    while True:
        word = tuple(rng.randrange(nsym) for _ in range(length))
        if word not in used:
            return word


def _all_words(nsym: int, length: int):
    if length == 0:
        yield ()
        return
    for rest in _all_words(nsym, length - 1):
        for a in range(nsym):
            yield rest + (a,)


def n_equivalence_converged(history: list[KripkeStructure], n: int,
                            _memo: Optional[dict] = None) -> bool:
    """True when the last n+1 hypotheses are pairwise behaviourally
    equivalent (checked by conjunction over successive pairs; identical
    snapshots short-circuit)."""
    if n < 1:
        raise InputError("equivalence window must be at least 1")
    if len(history) < n + 1:
        return False
    for i in range(len(history) - n, len(history)):
        a, b = history[i - 1], history[i]
        if a is b:
            continue
        if _memo is not None:
            key = (id(a), id(b))
            hit = _memo.get(key)
            if hit is None:
                hit = equivalence_witness(a, b) is None
                _memo[key] = hit
            if not hit:
                return False
        elif equivalence_witness(a, b) is not None:
            return False
    return True


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class TrueNegativeFound:
    word: Word
    outputs: tuple             # observed output vectors along the run


@dataclass(frozen=True)
class ConvergedNoViolation:
    at_iteration: int


@dataclass(frozen=True)
class BudgetExhausted:
    raw_queries: int


Outcome = Union[TrueNegativeFound, ConvergedNoViolation, BudgetExhausted]


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    source: str                # 'checker' or 'random'
    query: Word
    family_states: tuple[int, ...]
    product_states: int
    min_states: int
    cum_queries: int           # deduplicated queries (actual SUT runs) so far
    cum_requests: int          # teacher requests including cache hits

    @property
    def query_len(self) -> int:
        return len(self.query)


@dataclass
class LbtConfig:
    requirement: Requirement
    max_queries: int = 5000
    max_seconds: Optional[float] = None
    seed: int = 0
    window: int = 50           # n-equivalence window length
    check_ratio: float = 1.0   # fraction of iterations that try the checker first
    force_synthesis: bool = False

    def __post_init__(self):
        if self.window < 1:
            raise InputError("equivalence window must be at least 1")
        if not 0.0 <= self.check_ratio <= 1.0:
            raise InputError("check ratio must lie in [0, 1]")
        if self.max_queries < 1:
            raise InputError("query budget must be positive")


@dataclass
class LbtReport:
    outcome: Outcome
    records: list[IterationRecord]
    hypotheses: list[KripkeStructure] = field(repr=False, default_factory=list)
    final_hypothesis: Optional[KripkeStructure] = None
    sut_queries: int = 0       # deduplicated: actual SUT executions
    total_requests: int = 0


def lbt_run(teacher: Teacher, cfg: LbtConfig) -> LbtReport:
    cached = ensure_cached(teacher)
    rng = random.Random(cfg.seed)
    deadline = None if cfg.max_seconds is None else time.monotonic() + cfg.max_seconds

    learner = FidLearner(cached, force_synthesis=cfg.force_synthesis)

    last_family = learner.family
    product = subdirect_product(last_family)
    hypothesis = minimise(product).quotient
    validate_requirement(cfg.requirement, hypothesis)
    history = [hypothesis]
    product_states = product.n_states
    records: list[IterationRecord] = []
    used: set[Word] = set()
    memo: dict = {}
    cap = 4 * (product_states + 1)

    def make_report(outcome: Outcome) -> LbtReport:
        return LbtReport(outcome, records, history, history[-1],
                         cached.unique_query_count, cached.query_count)

    iteration = 0
    while True:
        iteration += 1
        if cached.unique_query_count >= cfg.max_queries:
            return make_report(BudgetExhausted(cached.unique_query_count))
        if deadline is not None and time.monotonic() > deadline:
            return make_report(BudgetExhausted(cached.unique_query_count))

        # Step 2: search the hypothesis for a requirement violation
        source = "random"
        query: Optional[Word] = None
        if rng.random() < cfg.check_ratio:
            verdict = check(hypothesis, cfg.requirement)
            if verdict.counterexample is not None and verdict.counterexample not in used:
                query = verdict.counterexample
                source = "checker"
        if query is None:
            cap = max(cap, 4 * (product_states + 1))
            while True:
                try:
                    query = next_random_query(rng, used, learner.alphabet, cap)
                    break
                except CapExhausted:
                    cap = 2 * cap + 1

        # Step 3: execute the query on the system under test
        used.add(query)
        outputs = [cached.query(p) for p in prefixes(query)]
        if violated_by_trace(cfg.requirement, query, outputs, learner.alphabet):
            records.append(IterationRecord(
                iteration, source, query, tuple(m.n_states for m in last_family),
                product_states, hypothesis.n_states, cached.unique_query_count,
                cached.query_count))
            return make_report(TrueNegativeFound(query, tuple(outputs)))

        # Step 1 (next round): refine the model with the new observation
        family = learner.process(query)
        if family is not last_family:
            last_family = family
            product = subdirect_product(family)
            product_states = product.n_states
            hypothesis = minimise(product).quotient
        history.append(hypothesis)
        records.append(IterationRecord(
            iteration, source, query, tuple(m.n_states for m in family),
            product_states, hypothesis.n_states, cached.unique_query_count,
            cached.query_count))

        if n_equivalence_converged(history, cfg.window, memo):
            return make_report(ConvergedNoViolation(iteration))
