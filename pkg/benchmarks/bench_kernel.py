"""Compare the compiled kernel, the numpy fallback and the per-state machine.

    python3 benchmarks/bench_kernel.py [--ell 7] [--repeat 3] [--scalar]

The per-state machine is slow (seconds for the shortest word), so it only
runs with ``--scalar`` and only on the first word.
"""

import argparse
import time

from fullgroup import _core
from fullgroup.machine import OUT_OF_WINDOW, MachineState, apply_word, trace_bounded
from fullgroup.search import replay_paper_sequence
from fullgroup.words import Bracket


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        value = fn()
        times.append(time.perf_counter() - start)
    return min(times), value


def scalar_counts(word, ell):
    fixed = discarded = 0
    for k in range(1 << (2 * ell + 2)):
        s = MachineState.from_index(k, ell)
        out = apply_word(word, s)
        if out is OUT_OF_WINDOW:
            discarded += 1
        elif out == s:
            fixed += 1
    return fixed, discarded


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ell", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scalar", action="store_true")
    args = ap.parse_args()

    words = [r.word for r in replay_paper_sequence(1, Bracket.COMPAT)]
    print(f"window radius {args.ell}, {1 << (2 * args.ell + 2)} configurations")
    print(f"{'word':<5} {'letters':>8} {'backend':<9} {'seconds':>9} {'fixed':>7} {'discarded':>9}")
    for i, w in enumerate(words, 1):
        for name in sorted(_core.BACKENDS):
            secs, est = best_of(lambda: trace_bounded(w, args.ell, backend=name), args.repeat)
            print(f"g{i:<4} {len(w):>8} {name:<9} {secs:>9.3f} {est.fixed_count:>7} {est.discarded_count:>9}")
        if args.scalar and i == 1:
            secs, (f, d) = best_of(lambda: scalar_counts(w, args.ell), 1)
            print(f"g{i:<4} {len(w):>8} {'scalar':<9} {secs:>9.3f} {f:>7} {d:>9}")


if __name__ == "__main__":
    main()
