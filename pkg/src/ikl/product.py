"""Subdirect product: reassemble 1-bit structures into one k-bit structure.

The direct product of k factors has the componentwise transition function and
the concatenated output bits; its state space is the full cartesian product.
The subdirect product keeps only the part reachable from the tuple of initial
states, found by breadth-first exploration in symbol order (ids are assigned
in discovery order), which runs in O(k * m * |alphabet|) for m reachable
states. When the factors are minimal, the result projects onto each of them.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

import numpy as np

from . import _kernels
from .automata import KripkeStructure
from .errors import InputError

_KEY_LIMIT = 1 << 62


def subdirect_product(factors: Sequence[KripkeStructure]) -> KripkeStructure:
    factors = list(factors)
    if not factors:
        raise InputError("product needs at least one factor")
    alphabet = factors[0].alphabet
    for f in factors:
        if f.alphabet != alphabet:
            raise InputError("product factors must share one alphabet")
        if f.bits != 1:
            raise InputError("product factors must be 1-bit structures")
    nsym = len(alphabet)
    k = len(factors)

    total = 1
    for f in factors:
        total *= f.n_states
    sp = _kernels.speedups
    if sp is not None and total < _KEY_LIMIT:
        sizes = [f.n_states for f in factors]
        offsets = np.zeros(k + 1, dtype=np.int64)
        offsets[1:] = np.cumsum(sizes)
        cat_delta = np.concatenate([f._flat_delta.reshape(-1) for f in factors])
        cat_bits = np.concatenate(
            [np.asarray([lab[0] for lab in f.labels], dtype=np.int64) for f in factors])
        inits = np.asarray([f.initial for f in factors], dtype=np.int32)
        dele, lam, _tup = sp.product_reach(cat_delta, offsets, cat_bits, nsym, inits)
        labels = tuple(tuple((int(v) >> i) & 1 for i in range(k)) for v in lam)
        return KripkeStructure(alphabet, 0, tuple(tuple(int(x) for x in row) for row in dele),
                               labels)

    start = tuple(f.initial for f in factors)
    ids: dict[tuple[int, ...], int] = {start: 0}
    order = [start]
    queue = deque([start])
    delta_rows: list[list[int]] = []
    while queue:
        cur = queue.popleft()
        row = []
        for a in range(nsym):
            nxt = tuple(f.delta[q][a] for f, q in zip(factors, cur))
            got = ids.get(nxt)
            if got is None:
                got = len(order)
                ids[nxt] = got
                order.append(nxt)
                queue.append(nxt)
            row.append(got)
        delta_rows.append(row)
    labels = tuple(tuple(f.labels[q][0] for f, q in zip(factors, tup)) for tup in order)
    return KripkeStructure(alphabet, 0, tuple(tuple(r) for r in delta_rows), labels)


def projection_of_product(product: KripkeStructure, i: int) -> KripkeStructure:
    """i-th 1-bit slice of a product (1-based); onto the i-th factor when the
    factors were minimal."""
    return product.project(i)
