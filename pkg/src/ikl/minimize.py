"""Hopcroft-style minimisation of deterministic k-bit Kripke structures.

Two states are Nerode-equivalent when they produce identical outputs on every
input string; the quotient by that congruence is the unique smallest
behaviourally equivalent structure. The refinement below starts from the
output partition and splits blocks against per-symbol splitter sets, always
keeping the waiting entry with fewer incoming transitions, which bounds the
total number of state moves by O(|alphabet| * n * log2 n).

``nerode_bruteforce`` is the independent O(n^2) table-filling oracle used to
cross-check the refinement on arbitrary inputs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .automata import KripkeStructure
from .errors import InputError


@dataclass(frozen=True)
class Partition:
    """Disjoint non-empty blocks covering states 0..n-1, stored sorted by
    least member so equal partitions compare equal."""

    blocks: tuple[frozenset[int], ...]

    @classmethod
    def from_blocks(cls, blocks) -> "Partition":
        blocks = [frozenset(b) for b in blocks]
        if any(not b for b in blocks):
            raise InputError("empty block in partition")
        total = sum(len(b) for b in blocks)
        union = set().union(*blocks) if blocks else set()
        if len(union) != total:
            raise InputError("partition blocks overlap")
        if union != set(range(total)):
            raise InputError("partition must cover a dense state range 0..n-1")
        return cls(tuple(sorted(blocks, key=min)))

    @property
    def n_states(self) -> int:
        return sum(len(b) for b in self.blocks)

    @cached_property
    def block_of(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for i, b in enumerate(self.blocks):
            for q in b:
                out[q] = i
        return out

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class SplitEvent:
    """One block split: ``refined`` kept the old block id, ``split_off``
    moved to a fresh block. Recorded only in traced runs."""

    symbol: int
    splitter_block: int
    block: int
    refined: frozenset[int]
    split_off: frozenset[int]


@dataclass
class MinimizeResult:
    partition: Partition           # Nerode congruence of the reachable part
    quotient: KripkeStructure
    state_moves: int               # states placed into refined blocks/splitter views
    source: KripkeStructure        # reachable restriction actually minimised
    original_ids: tuple[int, ...]  # source state id -> input state id
    dequeues: int                  # waiting-set entries processed
    split_count: int               # strict block splits performed
    splits: Optional[list[SplitEvent]] = None


def minimise(a: KripkeStructure, trace: bool = False) -> MinimizeResult:
    """Nerode congruence and quotient of ``a``.

    Unreachable states are dropped first (the refinement assumes none), so the
    returned partition is over ``result.source``; for all-reachable inputs
    that is the input itself.
    """
    source, kept = a.restrict_reachable()
    blocks, moves, events, dequeues, split_count = _refine(source, trace)
    partition = Partition.from_blocks(blocks)
    quot = quotient(source, partition)
    return MinimizeResult(partition, quot, moves, source, kept, dequeues,
                          split_count, events)


def _refine(a: KripkeStructure, trace: bool):
    n = a.n_states
    nsym = len(a.alphabet)

    # initial partition: group states by output vector, first-occurrence order
    blocks: list[set[int]] = []
    block_of: list[int] = [0] * n
    first: dict[tuple, int] = {}
    for q in range(n):
        i = first.get(a.labels[q])
        if i is None:
            i = len(blocks)
            first[a.labels[q]] = i
            blocks.append(set())
        blocks[i].add(q)
        block_of[q] = i
    events: Optional[list[SplitEvent]] = [] if trace else None
    if len(blocks) == n:
        return blocks, 0, events, 0, 0

    preds: list[list[list[int]]] = [[[] for _ in range(n)] for _ in range(nsym)]
    for q in range(n):
        for sym in range(nsym):
            preds[sym][a.delta[q][sym]].append(q)

    # per-symbol splitter views: members of each block that have predecessors
    # under that symbol
    sub: list[list[set[int]]] = []
    waiting: list[set[int]] = []
    for sym in range(nsym):
        views = [set(q for q in b if preds[sym][q]) for b in blocks]
        sub.append(views)
        waiting.append({i for i, v in enumerate(views) if v})

    moves = 0
    dequeues = 0
    split_count = 0
    while any(waiting):
        for sym in range(nsym):
            wait = waiting[sym]
            while wait:
                i = min(wait)
                wait.remove(i)
                dequeues += 1
                splitter = frozenset(sub[sym][i])
                hit: dict[int, set[int]] = {}
                for q in splitter:
                    for r in preds[sym][q]:
                        hit.setdefault(block_of[r], set()).add(r)
                for j in sorted(hit):
                    inside = hit[j]
                    old = blocks[j]
                    if len(inside) == len(old):
                        continue  # nothing splits off; no action, no enqueue
                    rest = old - inside
                    new_id = len(blocks)
                    blocks[j] = inside
                    blocks.append(rest)
                    for q in rest:
                        block_of[q] = new_id
                    moves += len(inside)
                    split_count += 1
                    if events is not None:
                        events.append(SplitEvent(sym, i, j, frozenset(inside),
                                                 frozenset(rest)))
                    for sym2 in range(nsym):
                        old_view = sub[sym2][j]
                        view_j = old_view & inside
                        view_new = old_view - view_j
                        sub[sym2][j] = view_j
                        sub[sym2].append(view_new)
                        moves += len(view_j)
                        w2 = waiting[sym2]
                        if j in w2:
                            # pending obligation transfers to both halves
                            if not view_j:
                                w2.discard(j)
                            if view_new:
                                w2.add(new_id)
                        elif view_j and len(view_j) <= len(view_new):
                            w2.add(j)  # fewer (or tied) incoming transitions
                        elif view_new:
                            w2.add(new_id)
                        # both views empty, or the discharged side alone
                        # remains: nothing to enqueue
    return blocks, moves, events, dequeues, split_count


def quotient(a: KripkeStructure, partition: Partition) -> KripkeStructure:
    """Quotient structure; requires the partition to be a congruence (blocks
    output-uniform, transitions mapping blocks into blocks)."""
    if partition.n_states != a.n_states:
        raise InputError(
            f"partition covers {partition.n_states} states, structure has {a.n_states}")
    nsym = len(a.alphabet)
    block_of = partition.block_of
    delta_rows: list[tuple[int, ...]] = []
    labels: list = []
    for i, block in enumerate(partition.blocks):
        rep = min(block)
        labels.append(a.labels[rep])
        row = tuple(block_of[a.delta[rep][sym]] for sym in range(nsym))
        for q in block:
            if a.labels[q] != a.labels[rep]:
                raise InputError(
                    f"not a congruence: states {rep} and {q} share a block "
                    f"but have different outputs")
            for sym in range(nsym):
                if block_of[a.delta[q][sym]] != row[sym]:
                    raise InputError(
                        f"not a congruence: states {rep} and {q} share a block "
                        f"but step to different blocks on symbol {a.alphabet.symbols[sym]}")
        delta_rows.append(row)
    return KripkeStructure(a.alphabet, block_of[a.initial], tuple(delta_rows), tuple(labels))


def nerode_bruteforce(a: KripkeStructure) -> Partition:
    """Table-filling Nerode partition: mark pairs with different outputs, then
    propagate markings backwards along transitions to a fixpoint."""
    n = a.n_states
    nsym = len(a.alphabet)
    preds: list[list[list[int]]] = [[[] for _ in range(n)] for _ in range(nsym)]
    for q in range(n):
        for sym in range(nsym):
            preds[sym][a.delta[q][sym]].append(q)

    marked = [[False] * n for _ in range(n)]
    work: deque[tuple[int, int]] = deque()
    for p in range(n):
        for q in range(p + 1, n):
            if a.labels[p] != a.labels[q]:
                marked[p][q] = marked[q][p] = True
                work.append((p, q))
    while work:
        p, q = work.popleft()
        for sym in range(nsym):
            for p2 in preds[sym][p]:
                for q2 in preds[sym][q]:
                    if p2 != q2 and not marked[p2][q2]:
                        marked[p2][q2] = marked[q2][p2] = True
                        work.append((p2, q2))

    assigned = [-1] * n
    blocks: list[set[int]] = []
    for p in range(n):
        if assigned[p] >= 0:
            continue
        i = len(blocks)
        blocks.append({p})
        assigned[p] = i
        for q in range(p + 1, n):
            if assigned[q] < 0 and not marked[p][q]:
                blocks[i].add(q)
                assigned[q] = i
    return Partition.from_blocks(blocks)
