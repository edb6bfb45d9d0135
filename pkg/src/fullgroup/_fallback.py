"""Numpy implementation of the enumeration kernel.

Same contract as the compiled ``_kernel.count_range``: all configurations in
a block advance through the word together, one letter per vectorized step.
"""

from __future__ import annotations

import numpy as np

BLOCK = 1 << 18


def _count_block(letters: np.ndarray, ell: int, lo: int, hi: int) -> tuple[int, int]:
    k = np.arange(lo, hi, dtype=np.uint64)
    s0 = (k & np.uint64(1)).astype(np.int8)
    tape0 = k >> np.uint64(1)
    s = s0.copy()
    tape = tape0.copy()
    head = np.zeros(len(k), dtype=np.int64)
    dead = np.zeros(len(k), dtype=bool)
    one = np.uint64(1)
    for c in letters.tolist():
        if c == 0:
            head += np.where(s == 0, 1, -1)
            s ^= 1
            np.logical_or(dead, np.abs(head) > ell, out=dead)
            continue
        # dead lanes may sit outside the window; clamp so the shift stays legal
        pos = np.clip(head + ell, 0, 2 * ell).astype(np.uint64)
        mask = one << pos
        bit = (tape & mask) != 0
        sig = s == 1
        live = ~dead
        if c == 1:
            set_bit = ~bit & sig
            drop_sig = bit & sig
            clear_bit = bit & ~sig
            tape = np.where(set_bit & live, tape | mask, tape)
            tape = np.where(clear_bit & live, tape & ~mask, tape)
            s = np.where(drop_sig & live, 0, np.where(clear_bit & live, 1, s)).astype(np.int8)
        else:
            set_bit = ~bit & sig
            clear_bit = bit & sig
            raise_sig = bit & ~sig
            tape = np.where(set_bit & live, tape | mask, tape)
            tape = np.where(clear_bit & live, tape & ~mask, tape)
            s = np.where(set_bit & live, 0, np.where(raise_sig & live, 1, s)).astype(np.int8)
    fixed = ~dead & (head == 0) & (s == s0) & (tape == tape0)
    return int(fixed.sum()), int(dead.sum())


def count_range(letters, ell: int, lo: int, hi: int) -> tuple[int, int]:
    """Return ``(fixed, discarded)`` counts over configurations ``lo <= k < hi``."""
    letters = np.asarray(letters, dtype=np.uint8)
    fixed = discarded = 0
    for start in range(lo, hi, BLOCK):
        f, d = _count_block(letters, ell, start, min(hi, start + BLOCK))
        fixed += f
        discarded += d
    return fixed, discarded
