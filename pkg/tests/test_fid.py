from ikl import (FidLearner, KripkeStructure, KripkeTeacher, fid_init,
                 fid_process, prefix_closure, random_kripke)
from oracles import live_complete_words, table_filling_minimal


def all_names(prefixes, nsym):
    return set(prefixes) | {p + (a,) for p in prefixes for a in range(nsym)}


def test_init_constant_teacher(ab):
    target = KripkeStructure(ab, 0, ((0, 0),), ((1, 1, 1),))
    learner, family = fid_init(KripkeTeacher(target))
    assert len(family) == 3
    for member in family:
        assert member.n_states == 1
        assert member.accepts(())
    # one query per name of length <= 1
    assert learner.teacher.unique_query_count >= 1 + len(ab)


def test_init_splits_initial_state(ab):
    # 2-state: initial outputs 0, anything else outputs 1
    target = KripkeStructure(ab, 0, ((1, 1), (1, 1)), ((0,), (1,)))
    learner, family = fid_init(KripkeTeacher(target))
    assert len(learner.distinguishers[0]) >= 2  # refinement found a split
    assert family[0].n_states >= 2
    assert not family[0].accepts(())
    assert family[0].accepts((0,))


def test_prefix_and_name_invariants(ab):
    target = random_kripke(3, 10, 2, ab)
    learner = FidLearner(KripkeTeacher(target))
    processed = []
    for s in [(0,), (0, 1, 1), (1, 0, 1, 0), (0,), ()]:
        fid_process(learner, s)
        processed.append(s)
        assert learner.prefixes == prefix_closure([()] + processed)
        assert learner.names == all_names(learner.prefixes, len(ab))


def test_reuse_on_consistent_string(ab):
    target = KripkeStructure(ab, 0, ((0, 0),), ((1,),))
    learner = FidLearner(KripkeTeacher(target))
    f0 = learner.family
    f1 = learner.process((0, 1))
    assert f1 is f0  # all-accepting hypothesis is already consistent


def test_consistency_check_issues_no_raw_queries(ab):
    target = random_kripke(9, 8, 2, ab)
    learner = FidLearner(KripkeTeacher(target))
    learner.process((0, 1, 0))
    before = learner.teacher.unique_query_count
    learner.consistent(learner.family, (0, 1, 0))
    assert learner.teacher.unique_query_count == before


def test_inconsistent_string_forces_synthesis(ab):
    # rejecting start, accepting after any symbol: F0 is all-rejecting
    target = KripkeStructure(ab, 0, ((1, 1), (1, 1)), ((0,), (1,)))
    learner = FidLearner(KripkeTeacher(target))
    f0 = learner.family
    assert not learner.consistent((KripkeStructure(ab, 0, ((0, 0),), ((0,),)),), (0,))
    f1 = learner.process((0, 0))
    assert f1 is not f0 or learner.consistent(f1, (0, 0))


def test_parity_after_processing(parity):
    learner = FidLearner(KripkeTeacher(parity))
    family = learner.process((0, 0))
    hyp = family[0]
    assert hyp.accepts((0,))
    assert not hyp.accepts(())
    assert not hyp.accepts((0, 0))


def test_compatibility_on_processed_strings(ab):
    target = random_kripke(17, 12, 3, ab)
    teacher = KripkeTeacher(target)
    learner = FidLearner(teacher)
    processed = [()]
    for s in [(0,), (1, 1), (0, 1, 0), (1, 0, 0, 1), (0, 0, 0)]:
        family = learner.process(s)
        processed.append(s)
        for w in processed:
            truth = target.lambda_star(w)
            for c, member in enumerate(family):
                assert member.accepts(w) == bool(truth[c])


def test_live_complete_convergence_per_projection(ab):
    # correctness in the limit concerns the quotient of the final tables; the
    # lazy reuse of consistent strings can leave the last emitted family
    # lagging behind them, so the experiment forces synthesis each step
    target = random_kripke(23, 9, 3, ab)
    learner = FidLearner(KripkeTeacher(target), force_synthesis=True)
    queries = set()
    for c in range(1, 4):
        queries |= live_complete_words(target.project(c))
    family = learner.family
    for s in sorted(queries, key=lambda w: (len(w), w)):
        family = learner.process(s)
    for c in range(1, 4):
        oracle = table_filling_minimal(target.project(c))
        assert family[c - 1].canonical_form() == oracle.canonical_form()


def test_reused_family_plus_final_synthesis_matches_forced(ab):
    # with plain reuse, one synthesis over the final tables gives the same
    # canonical projections
    target = random_kripke(23, 9, 3, ab)
    learner = FidLearner(KripkeTeacher(target))
    queries = set()
    for c in range(1, 4):
        queries |= live_complete_words(target.project(c))
    for s in sorted(queries, key=lambda w: (len(w), w)):
        learner.process(s)
    family = learner.synthesize_family()
    for c in range(1, 4):
        oracle = table_filling_minimal(target.project(c))
        assert family[c - 1].canonical_form() == oracle.canonical_form()


def test_distinguishers_grow_monotonically(ab):
    target = random_kripke(31, 10, 2, ab)
    learner = FidLearner(KripkeTeacher(target))
    snaps = [tuple(tuple(v) for v in learner.distinguishers)]
    for s in [(0, 0, 1), (1, 1, 0, 0), (0, 1, 0, 1)]:
        learner.process(s)
        snaps.append(tuple(tuple(v) for v in learner.distinguishers))
    for before, after in zip(snaps, snaps[1:]):
        for c in range(2):
            assert after[c][:len(before[c])] == before[c]  # prefix extension


def test_no_duplicate_distinguishers_and_table_semantics(ab):
    target = random_kripke(37, 11, 2, ab)
    teacher = KripkeTeacher(target)
    learner = FidLearner(teacher)
    for s in [(0, 1, 1, 0), (1, 0), (0, 0, 0, 1, 1)]:
        learner.process(s)
        fresh = KripkeTeacher(target)
        for c in range(2):
            vs = learner.distinguishers[c]
            assert len(set(vs)) == len(vs)
            for name in learner.names:
                expect = frozenset(j for j, v in enumerate(vs)
                                   if fresh.query(name + v)[c])
                assert learner.classes[c][name] == expect


def test_lazy_guard_shares_one_distinguisher(ab):
    # two identical output bits: one new distinguishing string must refine
    # both channels in the same refinement round
    base = KripkeStructure(ab, 0, ((1, 1), (1, 1)), ((0,), (1,)))
    twin = KripkeStructure(ab, 0, base.delta, tuple((b[0], b[0]) for b in base.labels))
    learner = FidLearner(KripkeTeacher(twin))
    assert learner.distinguishers[0] == learner.distinguishers[1]
    assert len(learner.distinguishers[0]) == 2
    # one batch of queries per refinement round: names of length <= 1 queried
    # once each for seeding plus once for the shared split
    assert learner.teacher.unique_query_count <= 2 * (1 + len(ab)) + len(ab)


def test_lazy_guard_skips_congruent_channel(ab):
    # bit 0 needs a split; bit 1 is constant and must stay untouched
    target = KripkeStructure(ab, 0, ((1, 1), (1, 1)), ((0, 1), (1, 1)))
    learner = FidLearner(KripkeTeacher(target))
    assert len(learner.distinguishers[0]) == 2
    assert learner.distinguishers[1] == [()]


def test_refine_without_violations_is_a_noop(ab):
    target = KripkeStructure(ab, 0, ((0, 0),), ((1,),))
    learner = FidLearner(KripkeTeacher(target))
    before = learner.teacher.unique_query_count
    learner.lazy_refine()
    assert learner.teacher.unique_query_count == before
    assert learner.distinguishers == [[()]]
