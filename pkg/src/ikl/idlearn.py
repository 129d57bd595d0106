"""Angluin-style ID learning of a single DFA from output queries.

State names are input words plus one distinguished dead-state name; string
concatenation modulo the dead state extends names by a symbol. The learner
partitions names by their behaviour on a growing list of distinguishing
suffixes until the partition is a congruence, then reads the hypothesis DFA
off the quotient. Given a live-complete name set, the result is the canonical
minimum-state DFA for the target language.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .automata import EPSILON, InputAlphabet, KripkeStructure, Word
from .errors import InputError
from .teacher import Teacher

# The dead-state name: absorber for all not-yet-learned behaviour. A name is
# either None (dead) or a word.
DEAD = None
Name = Optional[Word]


def f_concat(name: Name, symbol: int) -> Name:
    """Concatenation modulo the dead state: the dead name absorbs symbols."""
    return None if name is None else name + (symbol,)


def name_key(name: Name):
    """Sort key: words shortlex, the dead name last."""
    return (1, 0, ()) if name is None else (0, len(name), name)


@dataclass
class IdTables:
    """Observation tables at a refinement fixpoint.

    ``classes`` maps every name in ``names`` (plus DEAD) to the set of indices
    j such that the teacher accepts name.suffixes[j]; equal sets mean the
    names denote the same hypothesis state.
    """

    prefixes: frozenset[Word]
    names: tuple[Word, ...]                  # sorted shortlex; prefixes plus extensions
    suffixes: tuple[Word, ...]               # distinguishing strings, first is the empty word
    classes: dict[Name, frozenset[int]]


def least_violation(pprime_sorted: list[Name], classes: dict[Name, frozenset[int]],
                    nsym: int) -> Optional[tuple[Name, Name, int]]:
    """Least (alpha, beta, symbol) with equal classes but unequal successor
    classes, ordered by (alpha, beta, symbol) under shortlex with the dead
    name last. None when the partition is a congruence."""
    groups: dict[frozenset[int], list[Name]] = {}
    for name in pprime_sorted:
        groups.setdefault(classes[name], []).append(name)
    best = None
    for members in groups.values():
        if len(members) < 2:
            continue
        first = members[0]
        cand = None
        for sym in range(nsym):
            base = classes[f_concat(first, sym)]
            for other in members[1:]:
                if classes[f_concat(other, sym)] != base:
                    key = (name_key(other), sym)
                    if cand is None or key < cand[0]:
                        cand = (key, other, sym)
                    break
        if cand is not None:
            key = (name_key(first), cand[0])
            if best is None or key < best[0]:
                best = (key, first, cand[1], cand[2])
    return None if best is None else (best[1], best[2], best[3])


def pick_suffix_index(left: frozenset[int], right: frozenset[int],
                      suffixes: list[Word]) -> int:
    """Least element of the symmetric difference, ordered by the shortlex
    order of the suffixes the indices stand for."""
    diff = left ^ right
    return min(diff, key=lambda j: (len(suffixes[j]), suffixes[j]))


def learn_tables(teacher: Teacher, prefix_set: Iterable[Word]) -> IdTables:
    """Build and refine the observation tables for a 1-bit teacher.

    The caller is responsible for live-completeness of ``prefix_set`` (not
    checkable black-box); the empty word must be present.
    """
    if teacher.bits != 1:
        raise InputError(f"ID learning needs a 1-bit teacher, got {teacher.bits} bits")
    prefixes = {tuple(w) for w in prefix_set}
    if EPSILON not in prefixes:
        raise InputError("the prefix set must contain the empty word")
    nsym = len(teacher.alphabet)

    names = set(prefixes)
    for p in prefixes:
        for sym in range(nsym):
            names.add(p + (sym,))
    names_sorted = sorted(names, key=name_key)
    pprime_sorted: list[Name] = sorted(prefixes, key=name_key) + [DEAD]

    suffixes: list[Word] = [EPSILON]
    classes: dict[Name, frozenset[int]] = {DEAD: frozenset()}
    for name in names_sorted:
        classes[name] = frozenset([0]) if teacher.query(name)[0] else frozenset()

    while True:
        viol = least_violation(pprime_sorted, classes, nsym)
        if viol is None:
            break
        alpha, beta, sym = viol
        j = pick_suffix_index(classes[f_concat(alpha, sym)],
                              classes[f_concat(beta, sym)], suffixes)
        suffix = (sym,) + suffixes[j]
        if suffix in suffixes:
            raise AssertionError(f"distinguishing string {suffix} produced twice")
        suffixes.append(suffix)
        idx = len(suffixes) - 1
        for name in names_sorted:
            if teacher.query(name + suffix)[0]:
                classes[name] |= {idx}

    return IdTables(frozenset(prefixes), tuple(names_sorted), tuple(suffixes), classes)


def synthesize_quotient(names_sorted: Iterable[Word], prefixes: frozenset[Word],
                        classes: dict[Name, frozenset[int]],
                        alphabet: InputAlphabet) -> KripkeStructure:
    """Quotient DFA of the name partition.

    States are the distinct classes of the names, ordered by first occurrence
    in shortlex order, so the empty word's class is state 0 (the initial
    state). A class is accepting when it contains index 0 (the empty
    distinguishing string). The empty class carries self loops; names outside
    the prefix set whose class matches no prefix class route every symbol to
    the empty class. Raises AssertionError if the partition fails to be a
    congruence over the prefix set.
    """
    names_sorted = list(names_sorted)
    nsym = len(alphabet)
    empty: frozenset[int] = frozenset()

    class_id: dict[frozenset[int], int] = {}
    for name in names_sorted:
        cls = classes[name]
        if cls not in class_id:
            class_id[cls] = len(class_id)

    prefix_classes = {classes[p] for p in prefixes}
    frontier_novel = any(
        classes[name] not in prefix_classes and classes[name] != empty
        for name in names_sorted if name not in prefixes)
    # the dead name's empty class always exists conceptually; materialise it
    # only when some name carries it or a frontier class needs it as target
    if frontier_novel and empty not in class_id:
        class_id[empty] = len(class_id)

    n = len(class_id)
    delta: list[list[int]] = [[0] * nsym for _ in range(n)]
    labels = [(0,)] * n
    for cls, i in class_id.items():
        labels[i] = (1 if 0 in cls else 0,)

    rep_of: dict[int, list[Word]] = {}
    for p in sorted(prefixes, key=name_key):
        rep_of.setdefault(class_id[classes[p]], []).append(p)

    for cls, i in class_id.items():
        reps = rep_of.get(i, [])
        if cls == empty:
            # the dead name always backs the empty class: self loops; any word
            # reps must agree (their extensions stay empty-class at a fixpoint)
            delta[i] = [i] * nsym
            for p in reps:
                for sym in range(nsym):
                    if classes[p + (sym,)] != empty:
                        raise AssertionError(
                            f"partition is not a congruence: {p} shares the dead class "
                            f"but leaves it after symbol {alphabet.symbols[sym]}")
            continue
        if not reps:
            # frontier-only class: everything falls into the empty class
            delta[i] = [class_id[empty]] * nsym
            continue
        first = reps[0]
        for sym in range(nsym):
            target = classes[first + (sym,)]
            for other in reps[1:]:
                if classes[other + (sym,)] != target:
                    raise AssertionError(
                        f"partition is not a congruence: {first} and {other} share a class "
                        f"but disagree after symbol {alphabet.symbols[sym]}")
            delta[i][sym] = class_id[target]
    init = class_id[classes[EPSILON]]
    return KripkeStructure(alphabet, init, tuple(tuple(r) for r in delta), tuple(labels))


def quotient_synthesize(tables: IdTables, alphabet: InputAlphabet) -> KripkeStructure:
    """Hypothesis DFA for tables at a refinement fixpoint."""
    return synthesize_quotient(tables.names, tables.prefixes, tables.classes, alphabet)


def id_learn(teacher: Teacher, prefix_set: Iterable[Word]) -> KripkeStructure:
    """Learn a DFA: refine tables to a congruence, then read off the quotient."""
    tables = learn_tables(teacher, prefix_set)
    return quotient_synthesize(tables, teacher.alphabet)
