import math

import pytest

from ikl import (InputError, KripkeStructure, Partition,
                 behaviourally_equivalent, minimise, nerode_bruteforce,
                 quotient, random_kripke)
from ikl.minimize import SplitEvent
from oracles import make_alphabet


def chain(ab):
    """q0 -> q1 -> q2 -> q1 over 'a' (b self-loops), outputs 0,1,1."""
    return KripkeStructure(ab, 0, ((1, 0), (2, 1), (1, 2)), ((0,), (1,), (1,)))


def test_partition_normalisation():
    p = Partition.from_blocks([{2, 1}, {0}])
    q = Partition.from_blocks([{0}, {1, 2}])
    assert p == q
    assert p.block_of[2] == p.block_of[1] != p.block_of[0]
    with pytest.raises(InputError):
        Partition.from_blocks([{0}, {0, 1}])
    with pytest.raises(InputError):
        Partition.from_blocks([{0}, {2}])


def test_already_minimal_all_distinct_labels(ab):
    a = KripkeStructure(ab, 0, ((1, 0), (0, 1)), ((0, 0), (1, 0)))
    res = minimise(a)
    assert len(res.partition) == 2
    assert res.state_moves == 0  # early exit: discrete output partition
    assert res.quotient.canonical_form() == a.canonical_form()


def test_chain_merges_tail(ab):
    res = minimise(chain(ab))
    assert res.partition == Partition.from_blocks([{0}, {1, 2}])
    assert res.quotient.n_states == 2
    assert nerode_bruteforce(chain(ab)) == res.partition


def test_unminimised_parity_realisation(parity4, parity):
    res = minimise(parity4)
    assert len(res.partition) == 2
    assert res.quotient.canonical_form() == parity.canonical_form()
    assert nerode_bruteforce(parity4) == res.partition


def test_nerode_bruteforce_basics(ab):
    both_equiv = KripkeStructure(ab, 0, ((1, 1), (0, 0)), ((1,), (1,)))
    assert len(nerode_bruteforce(both_equiv)) == 1
    distinct = KripkeStructure(ab, 0, ((1, 0), (0, 1)), ((0, 1), (1, 0)))
    assert nerode_bruteforce(distinct) == Partition.from_blocks([{0}, {1}])


def test_quotient_identity_and_errors(ab):
    a = chain(ab)
    ident = Partition.from_blocks([{0}, {1}, {2}])
    assert quotient(a, ident) == a
    bad = Partition.from_blocks([{0, 1}, {2}])  # outputs differ inside a block
    with pytest.raises(InputError, match="not a congruence"):
        quotient(a, bad)
    # congruent in outputs but not in transitions
    b = KripkeStructure(ab, 0, ((1, 2), (0, 0), (2, 2)), ((0,), (0,), (0,)))
    with pytest.raises(InputError, match="not a congruence"):
        quotient(b, Partition.from_blocks([{0, 2}, {1}]))


def test_quotient_of_bruteforce_partition_is_equivalent(ab):
    for seed in range(20):
        a = random_kripke(seed, 12, 2, ab)
        part = nerode_bruteforce(a)
        assert behaviourally_equivalent(quotient(a, part), a)


@pytest.mark.parametrize("seed", range(60))
def test_differential_against_table_filling(seed):
    n = 2 + (seed * 13) % 60
    k = 1 + seed % 4
    nsym = 2 + seed % 3
    a = random_kripke(seed, n, k, make_alphabet(nsym))
    res = minimise(a)
    assert res.partition == nerode_bruteforce(a)
    assert behaviourally_equivalent(res.quotient, a)
    # idempotence: a second pass finds the identity partition
    again = minimise(res.quotient)
    assert len(again.partition) == res.quotient.n_states


def test_unreachable_states_are_dropped(ab):
    a = KripkeStructure(ab, 0, ((1, 0), (0, 1), (2, 2)), ((0,), (1,), (1,)))
    res = minimise(a)
    assert res.original_ids == (0, 1)
    assert res.partition.n_states == 2
    assert behaviourally_equivalent(res.quotient, a)


def test_split_trace_separates_inequivalent_pairs(ab):
    for seed in range(15):
        a = random_kripke(seed, 30, 1, ab)
        res = minimise(a, trace=True)
        part = res.partition
        # initially co-blocked = same output vector
        for p in range(a.n_states):
            for q in range(p + 1, a.n_states):
                if a.labels[p] != a.labels[q]:
                    continue
                if part.block_of[p] == part.block_of[q]:
                    continue
                separated = any(
                    ({p, q} <= ev.refined | ev.split_off)
                    and (p in ev.split_off) != (q in ev.split_off)
                    for ev in res.splits)
                assert separated, f"no split event separates {p} and {q}"


def test_move_bound(ab):
    # instrumented moves stay within the n log n accounting
    for seed in range(30):
        n = 5 + seed * 6
        a = random_kripke(seed, n, 1, ab)
        res = minimise(a)
        m = res.source.n_states
        bound = 4 * len(ab) * m * math.log2(m + 1)
        assert res.state_moves <= bound


def test_termination_variant(ab):
    # every processed waiting-set entry either causes no split or replaces a
    # block by a strictly smaller one (the strictness is what the event trace
    # records); all waiting sets drain
    for seed in range(10):
        a = random_kripke(seed, 40, 1, ab)
        res = minimise(a, trace=True)
        assert res.dequeues >= res.split_count or res.split_count == 0
        for ev in res.splits:
            assert ev.refined and ev.split_off  # strict shrink on both sides
        assert len(res.partition) == len(nerode_bruteforce(a))


def test_trace_event_shape(ab):
    # q0,q1 share outputs but diverge after 'a': a split must occur
    a = KripkeStructure(ab, 0, ((1, 0), (2, 1), (2, 2)), ((1,), (1,), (0,)))
    res = minimise(a, trace=True)
    assert res.splits, "expected at least one split"
    ev = res.splits[0]
    assert isinstance(ev, SplitEvent)
    assert ev.refined and ev.split_off
    assert not (ev.refined & ev.split_off)
