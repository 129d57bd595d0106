"""Incremental learning of a DFA family, one channel per output bit.

The learner grows one prefix-closed name table shared by all channels and one
list of distinguishing strings per channel. Processing an input string adds
its prefixes (and their one-symbol extensions) as names, seeds their per
channel classes by replaying that channel's distinguishing strings, then runs
lazy partition refinement: a single new distinguishing string, discovered in
one channel, is reused to split every channel still violating the congruence
property, while channels that are already congruent stay untouched. That keeps
channels at a simultaneous fixpoint with as few queries as possible.

Hypothesis families are immutable snapshots; when a processed string is
consistent with the current family, the same snapshot is reused (cheap
equality for convergence windows downstream).
"""

from __future__ import annotations

from bisect import insort

from .automata import EPSILON, KripkeStructure, Word, prefixes
from .errors import InputError
from .idlearn import (DEAD, Name, f_concat, least_violation, name_key,
                      pick_suffix_index, synthesize_quotient)
from .teacher import CachedTeacher, Teacher, ensure_cached

# A family is one 1-bit hypothesis per output bit, sharing one alphabet.
DfaFamily = tuple[KripkeStructure, ...]


class FidLearner:
    """Evolving tables for family learning; exclusively owned by one session.

    Public state, kept live across ``process`` calls:
      prefixes        processed-prefix name set (prefix-closed, contains ())
      names           prefixes plus their one-symbol extensions
      distinguishers  per channel, the ordered distinguishing strings (v0 = ())
      classes         per channel, name -> set of distinguisher indices answered 1
      step            hypothesis counter t
      family          current hypothesis family F_t
    """

    def __init__(self, teacher: Teacher, force_synthesis: bool = False):
        if teacher.bits < 1:
            raise InputError("teacher must declare at least one output bit")
        self.teacher: CachedTeacher = ensure_cached(teacher)
        self.alphabet = self.teacher.alphabet
        self.k = self.teacher.bits
        self.force_synthesis = force_synthesis
        nsym = len(self.alphabet)

        self.distinguishers: list[list[Word]] = [[EPSILON] for _ in range(self.k)]
        self.classes: list[dict[Name, frozenset[int]]] = [
            {DEAD: frozenset()} for _ in range(self.k)]
        self.prefixes: set[Word] = {EPSILON}
        self.names: set[Word] = {EPSILON} | {(a,) for a in range(nsym)}
        self._sorted_prefixes: list[Word] = [EPSILON]
        self._sorted_names: list[Word] = sorted(self.names, key=name_key)

        for name in self._sorted_names:
            answer = self.teacher.query(name)
            for c in range(self.k):
                self.classes[c][name] = frozenset([0]) if answer[c] else frozenset()
        self.lazy_refine()
        self.step = 0
        self.family: DfaFamily = self.synthesize_family()

    # ------------------------------------------------------------------
    def process(self, s: Word) -> DfaFamily:
        """Feed one input string; returns the (possibly reused) family F_t."""
        s = tuple(s)
        nsym = len(self.alphabet)
        for a in s:
            if not 0 <= a < nsym:
                raise InputError(f"symbol index {a} out of range")

        new_prefixes = [p for p in prefixes(s) if p not in self.prefixes]
        for p in new_prefixes:
            self.prefixes.add(p)
            insort(self._sorted_prefixes, p, key=name_key)
        new_names: list[Word] = []
        for p in new_prefixes:
            if p not in self.names:
                new_names.append(p)
                self.names.add(p)
            for a in range(nsym):
                ext = p + (a,)
                if ext not in self.names:
                    new_names.append(ext)
                    self.names.add(ext)
        for name in new_names:
            insort(self._sorted_names, name, key=name_key)

        for name in sorted(new_names, key=name_key):
            for c in range(self.k):
                got: set[int] = set()
                for j, v in enumerate(self.distinguishers[c]):
                    answer = self.teacher.query(name + v)
                    if answer[c]:
                        got.add(j)
                self.classes[c][name] = frozenset(got)

        self.lazy_refine()
        self.step += 1
        if self.consistent(self.family, s) and not self.force_synthesis:
            return self.family
        self.family = self.synthesize_family()
        return self.family

    # ------------------------------------------------------------------
    def lazy_refine(self) -> None:
        """Restore the congruence property in every channel.

        Each round picks the least violating (channel, alpha, beta, symbol),
        forms one new distinguishing string v = symbol . gamma, queries every
        name once with it, and extends exactly the channels that still exhibit
        the violation under their pre-split tables.
        """
        nsym = len(self.alphabet)
        pprime: list[Name] = list(self._sorted_prefixes) + [DEAD]
        while True:
            found = None
            for c in range(self.k):
                viol = least_violation(pprime, self.classes[c], nsym)
                if viol is not None:
                    found = (c, viol)
                    break
            if found is None:
                return
            c, (alpha, beta, sym) = found
            table = self.classes[c]
            j = pick_suffix_index(table[f_concat(alpha, sym)],
                                  table[f_concat(beta, sym)],
                                  self.distinguishers[c])
            gamma = self.distinguishers[c][j]
            v = (sym,) + gamma

            # the lazy guard: reuse v in every channel that still exhibits the
            # triggering violation (evaluated against the pre-split tables)
            # and for which gamma is a legitimate refinement step, i.e. gamma
            # separates the successor classes in that channel's own tables.
            # Legitimacy implies novelty: were v already in the channel's
            # list, its index would separate alpha from beta, contradicting
            # their equal classes.
            affected = []
            for c2 in range(self.k):
                t2 = self.classes[c2]
                if (t2[alpha] != t2[beta]
                        or t2[f_concat(alpha, sym)] == t2[f_concat(beta, sym)]):
                    continue
                try:
                    j2 = self.distinguishers[c2].index(gamma)
                except ValueError:
                    continue
                if j2 in t2[f_concat(alpha, sym)] ^ t2[f_concat(beta, sym)]:
                    affected.append(c2)
            new_index = {}
            for c2 in affected:
                if v in self.distinguishers[c2]:
                    raise AssertionError(
                        f"distinguishing string {v} produced twice in channel {c2}")
                self.distinguishers[c2].append(v)
                new_index[c2] = len(self.distinguishers[c2]) - 1
            for name in self._sorted_names:
                answer = self.teacher.query(name + v)
                for c2 in affected:
                    if answer[c2]:
                        self.classes[c2][name] |= {new_index[c2]}

    # ------------------------------------------------------------------
    def consistent(self, family: DfaFamily, s: Word) -> bool:
        """Prefix-wise agreement of the family with the recorded outputs of s.

        Uses only cached answers (every prefix of a processed string has been
        queried with the empty distinguishing string already), so this issues
        no new raw queries.
        """
        for p in prefixes(s):
            answer = self.teacher.query(p)
            for c, hyp in enumerate(family):
                if hyp.accepts(p) != bool(answer[c]):
                    return False
        return True

    # ------------------------------------------------------------------
    def synthesize_family(self) -> DfaFamily:
        """Quotient DFA per channel, as a fresh immutable snapshot."""
        frozen = frozenset(self.prefixes)
        return tuple(
            synthesize_quotient(self._sorted_names, frozen, self.classes[c], self.alphabet)
            for c in range(self.k))


def fid_init(teacher: Teacher) -> tuple[FidLearner, DfaFamily]:
    """Initial tables and null-hypothesis family F_0."""
    learner = FidLearner(teacher)
    return learner, learner.family


def fid_process(learner: FidLearner, s: Word) -> DfaFamily:
    """Process one string; alias for ``learner.process``."""
    return learner.process(s)
