"""Acceptance suite: one test per criterion, each printing a pass line.

The learning criteria share one instrumented corpus of 50 seeded family-
learning runs (built once per session); the minimisation criteria share a
100-instance corpus. Run with ``pytest -s tests/test_acceptance.py`` to see
the per-criterion lines and the convergence table.
"""

import math
import time
from collections import deque
from dataclasses import dataclass, field

import pytest

from ikl import (FidLearner, KripkeStructure, KripkeTeacher, LbtConfig,
                 TrueNegativeFound, ConvergedNoViolation,
                 behaviourally_equivalent, id_learn, lbt_run, minimise,
                 nerode_bruteforce, parse_requirement, prefix_closure,
                 random_kripke, subdirect_product, violated_by_trace)
from oracles import (bfs_access_words, live_complete_words, live_states,
                     make_alphabet, table_filling_minimal)

# ----------------------------------------------------------------- corpora


@dataclass
class FidRun:
    target: KripkeStructure
    strings: list            # processed strings in order
    families: list           # family after each processed string
    learner: FidLearner
    prefix_violations: int = 0
    name_violations: int = 0


@dataclass
class FidCorpus:
    runs: list[FidRun] = field(default_factory=list)
    seconds: float = 0.0


@pytest.fixture(scope="module")
def fid_corpus():
    """50 seeded targets (k 1..4, up to 20 states, up to 4 symbols), each fed
    a glass-box live-complete query set per projection. Synthesis is forced
    every step: correctness-in-the-limit concerns the quotient of the final
    tables, which lazy reuse may lag behind."""
    corpus = FidCorpus()
    start = time.monotonic()
    for seed in range(50):
        k = 1 + seed % 4
        n = 4 + (seed * 7) % 17
        nsym = 2 + seed % 3
        target = random_kripke(seed, n, k, make_alphabet(nsym))
        queries: set = set()
        for c in range(1, k + 1):
            queries |= live_complete_words(target.project(c))
        learner = FidLearner(KripkeTeacher(target), force_synthesis=True)
        run = FidRun(target, [], [], learner)
        for s in sorted(queries, key=lambda w: (len(w), w)):
            family = learner.process(s)
            run.strings.append(s)
            run.families.append(family)
            if learner.prefixes != prefix_closure([()] + run.strings):
                run.prefix_violations += 1
            expected_names = set(learner.prefixes)
            for p in learner.prefixes:
                for a in range(nsym):
                    expected_names.add(p + (a,))
            if learner.names != expected_names:
                run.name_violations += 1
        corpus.runs.append(run)
    corpus.seconds = time.monotonic() - start
    return corpus


@dataclass
class MinRun:
    structure: KripkeStructure
    result: object
    oracle_partition: object


@pytest.fixture(scope="module")
def minimiser_corpus():
    """100 seeded structures, up to 200 states, k up to 4, up to 4 symbols."""
    runs = []
    start = time.monotonic()
    for seed in range(100):
        n = 5 + (seed * 17) % 196
        k = 1 + seed % 4
        nsym = 2 + seed % 3
        a = random_kripke(seed, n, k, make_alphabet(nsym))
        runs.append(MinRun(a, minimise(a), nerode_bruteforce(a)))
    return runs, time.monotonic() - start


# ---------------------------------------------------------------- criteria


def test_criterion_01_correctness_in_the_limit(fid_corpus):
    good = 0
    for run in fid_corpus.runs:
        k = run.target.bits
        final = run.families[-1]
        if all(final[c - 1].canonical_form()
               == table_filling_minimal(run.target.project(c)).canonical_form()
               for c in range(1, k + 1)):
            good += 1
    assert fid_corpus.seconds < 60.0, f"corpus took {fid_corpus.seconds:.1f}s"
    assert good == 50, f"only {good}/50 targets learned exactly"
    print(f"\ncriterion 1 (correctness in the limit): PASS "
          f"({good}/50 in {fid_corpus.seconds:.1f}s)")


def test_criterion_02_compatibility(fid_corpus):
    violations = 0
    for run in fid_corpus.runs:
        k = run.target.bits
        for t, family in enumerate(run.families):
            for s in [()] + run.strings[:t + 1]:
                truth = run.target.lambda_star(s)
                for c in range(k):
                    if family[c].accepts(s) != bool(truth[c]):
                        violations += 1
    assert violations == 0, f"{violations} compatibility violations"
    print("criterion 2 (compatibility after every string): PASS (0 violations)")


def test_criterion_03_product_correctness():
    good = 0
    for seed in range(100):
        k = 1 + seed % 4
        n = 2 + (seed * 11) % 11
        a = random_kripke(seed, n, k, make_alphabet(2 + seed % 3))
        factors = [minimise(a.project(i)).quotient for i in range(1, k + 1)]
        rebuilt = minimise(subdirect_product(factors)).quotient
        if behaviourally_equivalent(rebuilt, a):
            good += 1
    assert good == 100, f"only {good}/100 products matched"
    print(f"criterion 3 (product reassembly): PASS ({good}/100)")


def test_criterion_04_minimiser_differential(minimiser_corpus):
    runs, seconds = minimiser_corpus
    good = 0
    for run in runs:
        res = run.result
        if (res.partition == run.oracle_partition
                and behaviourally_equivalent(res.quotient, run.structure)
                and len(minimise(res.quotient).partition) == res.quotient.n_states):
            good += 1
    assert seconds < 30.0, f"corpus took {seconds:.1f}s"
    assert good == 100, f"only {good}/100 minimisations matched the oracle"
    print(f"criterion 4 (minimiser vs table filling): PASS "
          f"({good}/100 in {seconds:.1f}s)")


def test_criterion_05_complexity_instrumentation(minimiser_corpus):
    runs, _ = minimiser_corpus
    worst = 0.0
    for run in runs:
        res = run.result
        m = res.source.n_states
        nsym = len(run.structure.alphabet)
        bound = 4 * nsym * m * math.log2(m + 1)
        ratio = res.state_moves / bound
        worst = max(worst, ratio)
        assert res.state_moves <= bound, (
            f"{res.state_moves} moves exceeds 4*|S|*n*log2(n+1) = {bound:.0f} "
            f"for n={m}, |S|={nsym}")
    print(f"criterion 5 (move bound, C=4): PASS (worst ratio {worst:.2f})")


def test_criterion_06_prefix_closure_invariant(fid_corpus):
    bad = sum(r.prefix_violations + r.name_violations for r in fid_corpus.runs)
    assert bad == 0, f"{bad} table-shape violations"
    print("criterion 6 (prefix closure and extension tables): PASS (0 violations)")


def test_criterion_07_distinguishers_and_table_semantics(fid_corpus):
    violations = 0
    for run in fid_corpus.runs:
        learner = run.learner
        fresh = KripkeTeacher(run.target)
        for c in range(run.target.bits):
            vs = learner.distinguishers[c]
            if len(set(vs)) != len(vs):
                violations += 1
            for name in learner.names:
                expect = frozenset(j for j, v in enumerate(vs)
                                   if fresh.query(name + v)[c])
                if learner.classes[c][name] != expect:
                    violations += 1
    assert violations == 0, f"{violations} table-semantics violations"
    print("criterion 7 (distinguisher uniqueness and table semantics): "
          "PASS (0 violations)")


def _bfs_layers(a: KripkeStructure) -> dict[int, int]:
    dist = {a.initial: 0}
    queue = deque([a.initial])
    while queue:
        s = queue.popleft()
        for t in a.delta[s]:
            if t not in dist:
                dist[t] = dist[s] + 1
                queue.append(t)
    return dist


def _sut_with_shallow_fault(seed: int, n: int, bits: int, depth_cap: int):
    """Random SUT where bit 0 marks a small faulty mode region: a victim
    state within the depth cap plus nearby states at least as deep (grown to
    a handful of states, like a bad operating mode rather than one freak
    configuration). Bit 0 is cleared everywhere else."""
    a = random_kripke(seed, n, bits, make_alphabet(4))
    dist = _bfs_layers(a)
    deepest = max(d for d in dist.values() if d <= depth_cap)
    victim = min(s for s, d in dist.items() if d == deepest)
    region = {victim}
    floor = deepest
    while len(region) < 4:
        grown = set(region)
        for s in region:
            grown.update(t for t in a.delta[s] if dist[t] >= floor)
        if grown == region:
            if floor <= 1:
                break
            floor -= 1
            continue
        region = grown
    labels = []
    for s in range(a.n_states):
        row = list(a.labels[s])
        row[0] = 1 if s in region else 0
        labels.append(tuple(row))
    sut = KripkeStructure(a.alphabet, a.initial, a.delta, tuple(labels))
    return sut, min(dist[s] for s in region)


def test_criterion_08_lbt_error_discovery():
    req = parse_requirement("always !bit[0]")
    found = 0
    for seed in range(30):
        n = 25 + (seed * 5) % 16            # 25..40 states
        sut, depth = _sut_with_shallow_fault(seed, n, 4, 1 + seed % 6)
        assert 1 <= depth <= 6
        report = lbt_run(KripkeTeacher(sut),
                         LbtConfig(requirement=req, max_queries=5000, seed=seed))
        if not isinstance(report.outcome, TrueNegativeFound):
            continue
        w = report.outcome.word
        trace = [sut.lambda_star(w[:i]) for i in range(len(w) + 1)]
        if violated_by_trace(req, w, trace, sut.alphabet) and report.sut_queries <= 5000:
            found += 1
    assert found == 30, f"only {found}/30 faults discovered within budget"
    print(f"criterion 8 (learning-based error discovery): PASS ({found}/30)")


def _implication_sut(seed: int, n: int, bits: int) -> KripkeStructure:
    """Random SUT doctored so bit0 -> bit1 holds at every state (hypotheses
    can still violate it transiently, which feeds the model checker)."""
    a = random_kripke(seed, n, bits, make_alphabet(4))
    labels = []
    for s in range(a.n_states):
        row = list(a.labels[s])
        if row[0]:
            row[1] = 1
        labels.append(tuple(row))
    return KripkeStructure(a.alphabet, a.initial, a.delta, tuple(labels))


def test_criterion_09_convergence_heuristic_shape():
    req = parse_requirement("always bit[0] -> bit[1]")
    rows = []
    premature_n1 = 0
    correct_n50 = 0
    for seed in range(10):
        n = 15 + (seed * 3) % 16            # 15..30 states, 4 symbols
        k = 2 + seed % 2
        sut = _implication_sut(seed, n, k)
        report = lbt_run(KripkeTeacher(sut),
                         LbtConfig(requirement=req, max_queries=200_000,
                                   seed=seed, window=50))
        assert isinstance(report.outcome, ConvergedNoViolation), report.outcome
        history = report.hypotheses
        # glass-box oracle: first hypothesis equivalent to the hidden SUT
        t_true = None
        prev, prev_eq = None, None
        for t, h in enumerate(history):
            eq = prev_eq if h is prev else behaviourally_equivalent(h, sut)
            prev, prev_eq = h, eq
            if eq:
                t_true = t
                break
        assert t_true is not None, "run ended before true convergence"
        t_est1 = None
        for t in range(1, len(history)):
            if history[t] is history[t - 1] or behaviourally_equivalent(
                    history[t], history[t - 1]):
                t_est1 = t
                break
        t_est50 = report.outcome.at_iteration
        if t_est1 is not None and t_est1 < t_true:
            premature_n1 += 1
        if t_est50 >= t_true:
            correct_n50 += 1
        rows.append((seed + 1, t_true, t_est50))
    print("criterion 9 (convergence heuristic): table for window 50")
    print("  requirement | true convergence | estimated convergence")
    for i, t_true, t_est in rows:
        print(f"  {i:>11} | H_{t_true:<14} | H_{t_est}")
    assert premature_n1 >= 8, f"window 1 premature in only {premature_n1}/10 runs"
    assert correct_n50 == 10, f"window 50 correct in only {correct_n50}/10 runs"
    print(f"criterion 9 (convergence heuristic shape): PASS "
          f"(window 1 premature {premature_n1}/10, window 50 correct 10/10)")


def test_criterion_10_id_reference():
    good = 0
    for seed in range(50):
        n = 2 + seed % 7                     # up to 8 states
        nsym = 2 + seed % 2
        target = random_kripke(seed, n, 1, make_alphabet(nsym))
        access = bfs_access_words(target)
        live = live_states(target)
        spanning_live = {w for q, w in access.items() if q in live} | {()}
        learned = id_learn(KripkeTeacher(target), spanning_live)
        if learned.canonical_form() == table_filling_minimal(target).canonical_form():
            good += 1
    assert good == 50, f"only {good}/50 ID runs canonical"
    print(f"criterion 10 (ID reference learner): PASS ({good}/50)")
