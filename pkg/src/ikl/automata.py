"""Core automaton types: deterministic k-bit Kripke structures and DFA views.

A structure is a total deterministic transition system over a fixed input
alphabet, with a k-bit output vector on every state. All types here are
immutable after construction; operations are pure functions, so values can be
shared freely across threads.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional

import numpy as np

from . import _kernels
from .errors import InputError

# A word is a sequence of symbol indices into an InputAlphabet; () is the
# empty word. Output vectors are tuples of 0/1 ints.
Word = tuple[int, ...]
Bits = tuple[int, ...]

EPSILON: Word = ()

# pair-graph BFS above this many pairs falls back to sparse dict bookkeeping
_DENSE_PAIR_LIMIT = 64_000_000


@dataclass(frozen=True)
class InputAlphabet:
    """Ordered, duplicate-free symbol tokens. Symbol order fixes every
    deterministic iteration order in this package."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.symbols:
            raise InputError("alphabet must be non-empty")
        seen = set()
        for sym in self.symbols:
            if not sym or not isinstance(sym, str):
                raise InputError(f"bad symbol token {sym!r}")
            if any(ch.isspace() or not ch.isprintable() for ch in sym):
                raise InputError(f"symbol {sym!r} contains whitespace or unprintable characters")
            if sym in seen:
                raise InputError(f"duplicate symbol {sym!r}")
            seen.add(sym)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise InputError(f"unknown symbol {symbol!r}") from None

    def word(self, text: str) -> Word:
        """Parse a space-separated symbol string; '' is the empty word."""
        return tuple(self.index(tok) for tok in text.split())

    def text(self, word: Word) -> str:
        return " ".join(self.symbols[a] for a in word)


def bits_text(bits: Bits) -> str:
    return "".join("1" if b else "0" for b in bits)


def parse_bits(text: str, width: int) -> Bits:
    if len(text) != width or any(ch not in "01" for ch in text):
        raise InputError(f"bad bit string {text!r} (want {width} bits)")
    return tuple(1 if ch == "1" else 0 for ch in text)


@dataclass(frozen=True)
class KripkeStructure:
    """Deterministic k-bit Kripke structure.

    States are dense ids 0..n-1. ``delta[q][a]`` is the successor of q under
    symbol index a (total map). ``labels[q]`` is the k-bit output vector.
    """

    alphabet: InputAlphabet
    initial: int
    delta: tuple[tuple[int, ...], ...]
    labels: tuple[Bits, ...]

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        object.__setattr__(self, "labels", tuple(tuple(row) for row in self.labels))
        n = len(self.delta)
        if n == 0:
            raise InputError("structure needs at least one state")
        if len(self.labels) != n:
            raise InputError("labels and delta disagree on the state count")
        nsym = len(self.alphabet)
        for q, row in enumerate(self.delta):
            if len(row) != nsym:
                raise InputError(f"state {q}: {len(row)} transitions, want {nsym}")
            for t in row:
                if not 0 <= t < n:
                    raise InputError(f"state {q}: successor {t} out of range")
        k = len(self.labels[0])
        if k < 1:
            raise InputError("output width must be at least 1")
        for q, bits in enumerate(self.labels):
            if len(bits) != k or any(b not in (0, 1) for b in bits):
                raise InputError(f"state {q}: bad output vector {bits!r}")
        if not 0 <= self.initial < n:
            raise InputError(f"initial state {self.initial} out of range")

    @property
    def n_states(self) -> int:
        return len(self.delta)

    @property
    def bits(self) -> int:
        return len(self.labels[0])

    @cached_property
    def _flat_delta(self) -> np.ndarray:
        return np.asarray(self.delta, dtype=np.int32)

    @cached_property
    def _packed_labels(self) -> Optional[np.ndarray]:
        if self.bits > 63:
            return None
        packed = np.zeros(self.n_states, dtype=np.int64)
        for q, bits in enumerate(self.labels):
            acc = 0
            for i, b in enumerate(bits):
                if b:
                    acc |= 1 << i
            packed[q] = acc
        return packed

    def step(self, q: int, a: int) -> int:
        return self.delta[q][a]

    def delta_star(self, q: int, word: Word) -> int:
        """Iterated transition function; delta_star(q, ()) == q."""
        if not 0 <= q < self.n_states:
            raise InputError(f"state {q} out of range")
        sp = _kernels.speedups
        if sp is not None and len(word) > 2:
            res = int(sp.walk(self._flat_delta, q, word))
            if res < 0:
                self._check_word(word)  # raises naming the bad symbol
            return res
        self._check_word(word)
        delta = self.delta
        for a in word:
            q = delta[q][a]
        return q

    def lambda_star(self, word: Word) -> Bits:
        """Output vector after running ``word`` from the initial state; the
        empty word yields the initial state's output."""
        return self.labels[self.delta_star(self.initial, word)]

    def _check_word(self, word: Word) -> None:
        nsym = len(self.alphabet)
        for a in word:
            if not 0 <= a < nsym:
                raise InputError(f"symbol index {a} out of range")

    def project(self, i: int) -> "KripkeStructure":
        """1-bit slice keeping output bit i (1-based, matching the usual
        notation for projections)."""
        if not 1 <= i <= self.bits:
            raise InputError(f"bit index {i} out of range 1..{self.bits}")
        labels = tuple((bits[i - 1],) for bits in self.labels)
        return KripkeStructure(self.alphabet, self.initial, self.delta, labels)

    # DFA view (k == 1): acceptance is output bit 1 at the reached state.
    @property
    def accepting(self) -> frozenset[int]:
        self._require_dfa()
        return frozenset(q for q in range(self.n_states) if self.labels[q][0])

    def accepts(self, word: Word) -> bool:
        self._require_dfa()
        return bool(self.lambda_star(word)[0])

    def _require_dfa(self) -> None:
        if self.bits != 1:
            raise InputError(f"DFA view needs a 1-bit structure, got {self.bits} bits")

    def reachable_order(self) -> list[int]:
        """Reachable states in breadth-first discovery order (symbol order)."""
        sp = _kernels.speedups
        if sp is not None:
            return sp.reach_order(self._flat_delta, self.initial).tolist()
        seen = [False] * self.n_states
        seen[self.initial] = True
        order = [self.initial]
        queue = deque(order)
        delta = self.delta
        while queue:
            q = queue.popleft()
            for t in delta[q]:
                if not seen[t]:
                    seen[t] = True
                    order.append(t)
                    queue.append(t)
        return order

    def restrict_reachable(self) -> tuple["KripkeStructure", tuple[int, ...]]:
        """Reachable subalgebra with states renumbered densely, preserving the
        relative order of the original ids. Returns (structure, kept_ids)."""
        kept = sorted(self.reachable_order())
        if len(kept) == self.n_states:
            return self, tuple(range(self.n_states))
        new_id = {old: new for new, old in enumerate(kept)}
        delta = tuple(tuple(new_id[self.delta[old][a]] for a in range(len(self.alphabet)))
                      for old in kept)
        labels = tuple(self.labels[old] for old in kept)
        return KripkeStructure(self.alphabet, new_id[self.initial], delta, labels), tuple(kept)

    def canonical_form(self) -> tuple:
        """Hashable key identical for isomorphic structures (reachable part,
        relabeled in breadth-first order)."""
        order = self.reachable_order()
        new_id = {old: new for new, old in enumerate(order)}
        delta = tuple(tuple(new_id[self.delta[old][a]] for a in range(len(self.alphabet)))
                      for old in order)
        labels = tuple(self.labels[old] for old in order)
        return (len(order), self.bits, self.alphabet.symbols, delta, labels)


def prefixes(word: Word) -> Iterator[Word]:
    """All prefixes of a word, from the empty word up to the word itself."""
    for i in range(len(word) + 1):
        yield word[:i]


def prefix_closure(words: Iterable[Word]) -> set[Word]:
    """Smallest prefix-closed superset; empty input stays empty."""
    out: set[Word] = set()
    for w in words:
        for i in range(len(w) + 1):
            out.add(w[:i])
    return out


def _check_comparable(a: KripkeStructure, b: KripkeStructure) -> None:
    if a.alphabet != b.alphabet:
        raise InputError("structures have different alphabets")
    if a.bits != b.bits:
        raise InputError(f"structures have different output widths ({a.bits} vs {b.bits})")


def equivalence_witness(a: KripkeStructure, b: KripkeStructure) -> Optional[Word]:
    """Shortest, lexicographically least word on which the two structures
    disagree, or None when they are behaviourally equivalent.

    Decided exactly by breadth-first search of the synchronous pair graph.
    """
    _check_comparable(a, b)
    if a is b:
        return None
    sp = _kernels.speedups
    if (sp is not None and a.bits <= 63
            and a.n_states * b.n_states <= _DENSE_PAIR_LIMIT):
        res = sp.pair_witness(a._flat_delta, a._packed_labels, a.initial,
                              b._flat_delta, b._packed_labels, b.initial)
        return None if res is None else tuple(int(x) for x in res)

    start = (a.initial, b.initial)
    if a.labels[start[0]] != b.labels[start[1]]:
        return EPSILON
    parent: dict[tuple[int, int], tuple[tuple[int, int], int]] = {}
    seen = {start}
    queue = deque([start])
    nsym = len(a.alphabet)
    while queue:
        pair = queue.popleft()
        for sym in range(nsym):
            nxt = (a.delta[pair[0]][sym], b.delta[pair[1]][sym])
            if nxt in seen:
                continue
            seen.add(nxt)
            parent[nxt] = (pair, sym)
            if a.labels[nxt[0]] != b.labels[nxt[1]]:
                out: list[int] = []
                cur = nxt
                while cur != start:
                    cur, s = parent[cur]
                    out.append(s)
                out.reverse()
                return tuple(out)
            queue.append(nxt)
    return None


def behaviourally_equivalent(a: KripkeStructure, b: KripkeStructure) -> bool:
    """True when the structures produce identical outputs on every word."""
    return equivalence_witness(a, b) is None


def random_kripke(seed: int, n_states: int, bits: int,
                  alphabet: InputAlphabet) -> KripkeStructure:
    """Seed-deterministic random structure with every state reachable.

    A random spanning tree from state 0 is grafted first so reachability holds
    by construction; the remaining transitions and all outputs are uniform.
    """
    if n_states < 1:
        raise InputError("need at least one state")
    if bits < 1:
        raise InputError("need at least one output bit")
    rng = random.Random(seed)
    nsym = len(alphabet)
    delta: list[list[Optional[int]]] = [[None] * nsym for _ in range(n_states)]

    attach_order = list(range(1, n_states))
    rng.shuffle(attach_order)
    free_slots: list[tuple[int, int]] = [(0, a) for a in range(nsym)]
    for q in attach_order:
        i = rng.randrange(len(free_slots))
        p, a = free_slots.pop(i)
        delta[p][a] = q
        free_slots.extend((q, b) for b in range(nsym))

    for q in range(n_states):
        for a in range(nsym):
            if delta[q][a] is None:
                delta[q][a] = rng.randrange(n_states)
    labels = tuple(tuple(rng.randint(0, 1) for _ in range(bits)) for _ in range(n_states))
    return KripkeStructure(alphabet, 0, tuple(tuple(row) for row in delta), labels)
