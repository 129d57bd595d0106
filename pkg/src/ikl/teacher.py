"""Teachers answer output queries: what does the system emit after a word?

``KripkeTeacher`` evaluates an in-process structure. ``ExternalTeacher``
drives a black-box process over a newline-delimited wire protocol:

    learner -> SUT:  RESET | STEP <symbol> | QUIT
    SUT -> learner:  OK <bitstring>   (after RESET: output at the initial
                     state; after STEP: output at the state reached)
                     ERR <message>    on any protocol error

Every query is a fresh RESET followed by one STEP per symbol; the answer is
the final output vector. Intermediate outputs are observed but unused.
``serve_kripke`` is the reference SUT harness speaking the same protocol.
"""

from __future__ import annotations

import subprocess
from typing import IO, Optional, Sequence

from .automata import Bits, InputAlphabet, KripkeStructure, Word, bits_text, parse_bits
from .errors import InputError, TeacherError


class Teacher:
    """Query interface. Implementations must be deterministic: repeated
    queries for the same word return identical vectors. ``query_count``
    increments by exactly one per query."""

    alphabet: InputAlphabet
    bits: int

    def __init__(self):
        self.query_count = 0

    def query(self, word: Word) -> Bits:
        raise NotImplementedError


class KripkeTeacher(Teacher):
    """In-process teacher backed by a Kripke structure."""

    def __init__(self, structure: KripkeStructure):
        super().__init__()
        self.structure = structure
        self.alphabet = structure.alphabet
        self.bits = structure.bits

    def query(self, word: Word) -> Bits:
        self.query_count += 1
        return self.structure.lambda_star(word)


class CachedTeacher(Teacher):
    """Memoizing wrapper. Cache hits never reach the inner teacher, so the
    inner query counter reports raw (deduplicated) query cost while this
    wrapper's counter reports total requests.

    ``log`` is the append-only list of (word, answer) pairs in first-seen
    order; duplicates never appear because hits are served from the cache.
    """

    def __init__(self, inner: Teacher):
        super().__init__()
        self.inner = inner
        self.alphabet = inner.alphabet
        self.bits = inner.bits
        self.log: list[tuple[Word, Bits]] = []
        self._cache: dict[Word, Bits] = {}
        self.hits = 0

    def query(self, word: Word) -> Bits:
        self.query_count += 1
        word = tuple(word)
        got = self._cache.get(word)
        if got is not None:
            self.hits += 1
            return got
        answer = self.inner.query(word)
        self._cache[word] = answer
        self.log.append((word, answer))
        return answer

    @property
    def unique_query_count(self) -> int:
        """Deduplicated queries: the ones that actually reached the system."""
        return self.inner.query_count


def ensure_cached(teacher: Teacher) -> CachedTeacher:
    return teacher if isinstance(teacher, CachedTeacher) else CachedTeacher(teacher)


class ExternalTeacher(Teacher):
    """Adapter for a black-box SUT process speaking the wire protocol on its
    standard streams. The declared alphabet and width are trusted; every
    response is validated against them."""

    def __init__(self, argv: Sequence[str], alphabet: InputAlphabet, bits: int):
        super().__init__()
        if bits < 1:
            raise InputError("declared width must be at least 1")
        self.alphabet = alphabet
        self.bits = bits
        self.argv = list(argv)
        try:
            self.proc = subprocess.Popen(
                self.argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                text=True, bufsize=1)
        except OSError as e:
            raise TeacherError(f"cannot start SUT {self.argv!r}: {e}") from None

    def _send(self, line: str) -> None:
        if self.proc.stdin is None or self.proc.poll() is not None:
            raise TeacherError(f"SUT process exited with code {self.proc.returncode}")
        try:
            self.proc.stdin.write(line + "\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as e:
            raise TeacherError(f"SUT closed its input stream: {e}") from None

    def _recv_ok(self) -> Bits:
        assert self.proc.stdout is not None
        line = self.proc.stdout.readline()
        if line == "":
            raise TeacherError("SUT closed its output stream mid-query")
        line = line.strip()
        if line.startswith("ERR"):
            raise TeacherError(f"SUT reported: {line[3:].strip() or 'unspecified error'}")
        if not line.startswith("OK"):
            raise TeacherError(f"malformed SUT response {line!r}")
        fields = line.split()
        if len(fields) != 2:
            raise TeacherError(f"malformed SUT response {line!r}")
        try:
            return parse_bits(fields[1], self.bits)
        except InputError:
            raise TeacherError(
                f"SUT answered {fields[1]!r}, want {self.bits} bits") from None

    def query(self, word: Word) -> Bits:
        self.query_count += 1
        self._send("RESET")
        bits = self._recv_ok()
        for a in word:
            self._send(f"STEP {self.alphabet.symbols[a]}")
            bits = self._recv_ok()
        return bits

    def close(self) -> None:
        if self.proc.poll() is None:
            try:
                if self.proc.stdin is not None:
                    self.proc.stdin.write("QUIT\n")
                    self.proc.stdin.flush()
            except (BrokenPipeError, OSError):
                pass
            try:
                self.proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self.proc.kill()
                self.proc.wait()

    def __enter__(self) -> "ExternalTeacher":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def serve_kripke(structure: KripkeStructure, instream: IO[str], outstream: IO[str]) -> None:
    """Reference SUT harness: answer the wire protocol for a structure."""
    state: Optional[int] = None

    def reply(text: str) -> None:
        outstream.write(text + "\n")
        outstream.flush()

    for raw in instream:
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        cmd = fields[0]
        if cmd == "RESET" and len(fields) == 1:
            state = structure.initial
            reply("OK " + bits_text(structure.labels[state]))
        elif cmd == "STEP" and len(fields) == 2:
            if state is None:
                reply("ERR STEP before RESET")
                continue
            try:
                a = structure.alphabet.index(fields[1])
            except InputError:
                reply(f"ERR unknown symbol {fields[1]}")
                continue
            state = structure.delta[state][a]
            reply("OK " + bits_text(structure.labels[state]))
        elif cmd == "QUIT" and len(fields) == 1:
            return
        else:
            reply(f"ERR unknown command {line}")
