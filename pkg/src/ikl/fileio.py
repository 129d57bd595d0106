"""Line-oriented text format for Kripke structures and DFA files.

    kripke <n> <k>
    alphabet <sym1> <sym2> ...
    initial <qid>
    state <qid> <bitstring of length k>      (one line per state)
    trans <qid> <sym> <qid'>                 (one line per state/symbol pair)

Blank lines and lines starting with '#' are ignored. The parser enforces
determinism and totality: every (state, symbol) pair must appear exactly once.
DFA files are the same format with k = 1.
"""

from __future__ import annotations

import os

from .automata import InputAlphabet, KripkeStructure, bits_text, parse_bits
from .errors import InputError


def parse_kripke(text: str, source: str = "<string>") -> KripkeStructure:
    lines: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lines.append((lineno, stripped.split()))

    def fail(lineno: int, msg: str) -> InputError:
        return InputError(f"{source}:{lineno}: {msg}")

    if not lines:
        raise InputError(f"{source}: empty model file")

    idx = 0

    def take(keyword: str, nfields: int | None = None) -> tuple[int, list[str]]:
        nonlocal idx
        if idx >= len(lines):
            raise InputError(f"{source}: unexpected end of file, wanted '{keyword}' line")
        lineno, fields = lines[idx]
        if fields[0] != keyword:
            raise fail(lineno, f"expected '{keyword}' line, got {fields[0]!r}")
        if nfields is not None and len(fields) != nfields:
            raise fail(lineno, f"'{keyword}' line has {len(fields)} fields, want {nfields}")
        idx += 1
        return lineno, fields

    def parse_int(lineno: int, tok: str, what: str) -> int:
        try:
            return int(tok)
        except ValueError:
            raise fail(lineno, f"bad {what} {tok!r}") from None

    lineno, fields = take("kripke", 3)
    n = parse_int(lineno, fields[1], "state count")
    k = parse_int(lineno, fields[2], "bit width")
    if n < 1 or k < 1:
        raise fail(lineno, f"state count and width must be positive, got {n} and {k}")

    lineno, fields = take("alphabet")
    if len(fields) < 2:
        raise fail(lineno, "alphabet line needs at least one symbol")
    try:
        alphabet = InputAlphabet(tuple(fields[1:]))
    except InputError as e:
        raise fail(lineno, str(e)) from None

    lineno, fields = take("initial", 2)
    initial = parse_int(lineno, fields[1], "initial state")

    labels: list = [None] * n
    for _ in range(n):
        lineno, fields = take("state", 3)
        q = parse_int(lineno, fields[1], "state id")
        if not 0 <= q < n:
            raise fail(lineno, f"state id {q} out of range 0..{n - 1}")
        if labels[q] is not None:
            raise fail(lineno, f"duplicate state line for {q}")
        try:
            labels[q] = parse_bits(fields[2], k)
        except InputError as e:
            raise fail(lineno, str(e)) from None

    nsym = len(alphabet)
    delta: list[list] = [[None] * nsym for _ in range(n)]
    for _ in range(n * nsym):
        lineno, fields = take("trans", 4)
        q = parse_int(lineno, fields[1], "state id")
        t = parse_int(lineno, fields[3], "target state id")
        if not 0 <= q < n:
            raise fail(lineno, f"state id {q} out of range")
        if not 0 <= t < n:
            raise fail(lineno, f"target state {t} out of range")
        try:
            a = alphabet.index(fields[2])
        except InputError as e:
            raise fail(lineno, str(e)) from None
        if delta[q][a] is not None:
            raise fail(lineno, f"duplicate transition for state {q}, symbol {fields[2]}")
        delta[q][a] = t

    if idx != len(lines):
        raise fail(lines[idx][0], f"trailing content {' '.join(lines[idx][1])!r}")
    for q in range(n):
        for a in range(nsym):
            if delta[q][a] is None:
                raise InputError(
                    f"{source}: missing transition for state {q}, symbol {alphabet.symbols[a]}")

    try:
        return KripkeStructure(alphabet, initial, tuple(tuple(r) for r in delta), tuple(labels))
    except InputError as e:
        raise InputError(f"{source}: {e}") from None


def format_kripke(a: KripkeStructure) -> str:
    out = [f"kripke {a.n_states} {a.bits}",
           "alphabet " + " ".join(a.alphabet.symbols),
           f"initial {a.initial}"]
    for q in range(a.n_states):
        out.append(f"state {q} {bits_text(a.labels[q])}")
    for q in range(a.n_states):
        for i, sym in enumerate(a.alphabet.symbols):
            out.append(f"trans {q} {sym} {a.delta[q][i]}")
    return "\n".join(out) + "\n"


def load_kripke(path: str | os.PathLike) -> KripkeStructure:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None
    return parse_kripke(text, source=str(path))


def save_kripke(a: KripkeStructure, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_kripke(a))
