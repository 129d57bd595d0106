"""Benchmark: compiled kernels against the pure-Python fallbacks.

Runs each workload with the extension active and again with it disabled, and
prints a comparison table. Usage:

    python benchmarks/bench_kernels.py [--scale N]
"""

import argparse
import time

from ikl import (InputAlphabet, KripkeStructure, KripkeTeacher, LbtConfig,
                 equivalence_witness, lbt_run, parse_requirement,
                 random_kripke, subdirect_product)
from ikl import _kernels

ALPHABET = InputAlphabet(("a", "b", "c", "d"))


def bench_walks(scale):
    import random
    rng = random.Random(0)
    a = random_kripke(1, 200, 4, ALPHABET)
    words = [tuple(rng.randrange(4) for _ in range(rng.randrange(4, 18)))
             for _ in range(500)]
    teacher = KripkeTeacher(a)
    for _ in range(400 * scale):
        for w in words:
            teacher.query(w)


def bench_reachability(scale):
    structures = [random_kripke(s, 2000, 2, ALPHABET) for s in range(4)]
    for a in structures:
        a._flat_delta  # warm the cached table both runs share
    for _ in range(100 * scale):
        for a in structures:
            a.reachable_order()


def _constant_output(a):
    return KripkeStructure(a.alphabet, a.initial, a.delta,
                           tuple((0,) for _ in range(a.n_states)))


def bench_equivalence(scale):
    # constant outputs: equivalent structures whose pair graph is the full
    # reachable product, so the search cannot exit early
    pairs = [(_constant_output(random_kripke(s, 300, 1, ALPHABET)),
              _constant_output(random_kripke(s + 50, 300, 1, ALPHABET)))
             for s in range(4)]
    for _ in range(3 * scale):
        for a, b in pairs:
            assert equivalence_witness(a, b) is None


def bench_product(scale):
    factor_sets = [
        [random_kripke(s * 8 + i, 12, 1, ALPHABET) for i in range(4)]
        for s in range(3)]
    for _ in range(3 * scale):
        for factors in factor_sets:
            subdirect_product(factors)


def bench_lbt(scale):
    sut = random_kripke(12, 16, 3, ALPHABET)
    req = parse_requirement("always bit[0] | !bit[0]")
    for s in range(2 * scale):
        lbt_run(KripkeTeacher(sut),
                LbtConfig(requirement=req, max_queries=4000, seed=s, window=25))


WORKLOADS = [
    ("transition walks (queries)", bench_walks),
    ("reachability sweeps", bench_reachability),
    ("pair-graph equivalence", bench_equivalence),
    ("subdirect products", bench_product),
    ("end-to-end testing loop", bench_lbt),
]


def run_once(fn, scale):
    t0 = time.perf_counter()
    fn(scale)
    return time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--scale", type=int, default=1)
    args = parser.parse_args()

    compiled = _kernels.speedups
    if compiled is None:
        print("compiled kernels unavailable; timing the pure paths only\n")
    rows = []
    for name, fn in WORKLOADS:
        _kernels.speedups = None
        pure = run_once(fn, args.scale)
        if compiled is not None:
            _kernels.speedups = compiled
            fast = run_once(fn, args.scale)
            rows.append((name, pure, fast, pure / fast))
        else:
            rows.append((name, pure, None, None))
    _kernels.speedups = compiled

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'pure':>8}  {'compiled':>8}  {'speedup':>7}")
    for name, pure, fast, ratio in rows:
        if fast is None:
            print(f"{name:<{width}}  {pure:>7.2f}s  {'-':>8}  {'-':>7}")
        else:
            print(f"{name:<{width}}  {pure:>7.2f}s  {fast:>7.2f}s  {ratio:>6.1f}x")


if __name__ == "__main__":
    main()
