#!/usr/bin/env python3
"""Run the numeric oracle triangle over a range of trace lengths and
report per-length timings and worst-case gaps.

Usage: python scripts/oracle_triangle.py [max_length] [trials] [seed]
"""

import random
import sys
import time

import numpy as np

from colortrace import Word, build_algebra, decompose_closed, direct_trace, oracle_commutation
from colortrace.numeric import evaluate_many


def main() -> int:
    max_length = int(sys.argv[1]) if len(sys.argv) > 1 else 7
    trials = int(sys.argv[2]) if len(sys.argv) > 2 else 30
    seed = int(sys.argv[3]) if len(sys.argv) > 3 else 0
    algebras = [build_algebra("su2"), build_algebra("su3")]
    overall = 0.0
    for length in range(2, max_length + 1):
        q = Word(range(1, length + 1))
        t0 = time.perf_counter()
        closed = decompose_closed(q)
        t_closed = time.perf_counter() - t0
        t0 = time.perf_counter()
        commutation = oracle_commutation(q)
        t_comm = time.perf_counter() - t0
        worst = 0.0
        t0 = time.perf_counter()
        for algebra in algebras:
            rng = random.Random(seed + length)
            assigns = [
                {letter: rng.randint(1, algebra.dim) for letter in q.letters}
                for _ in range(trials)
            ]
            ref = evaluate_many(closed, algebra, assigns)
            comm = evaluate_many(commutation, algebra, assigns)
            direct = np.array(
                [
                    direct_trace(algebra, [a[letter] for letter in q.letters])
                    for a in assigns
                ]
            )
            worst = max(
                worst,
                float(np.abs(direct - ref).max()),
                float(np.abs(comm - ref).max()),
            )
        overall = max(overall, worst)
        print(
            f"length {length}: closed {len(closed.terms):>4} terms ({t_closed:5.1f}s)  "
            f"commutation {len(commutation.terms):>5} terms ({t_comm:5.1f}s)  "
            f"eval {time.perf_counter() - t0:5.1f}s  worst gap {worst:.2e}"
        )
    print(f"overall worst gap: {overall:.2e}")
    return 0 if overall <= 1e-10 else 1


if __name__ == "__main__":
    sys.exit(main())
