# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernel for bounded-displacement traces."""

from libc.stdint cimport uint8_t, uint64_t, int64_t


cdef inline int _run(const uint8_t[::1] letters, Py_ssize_t n, int ell,
                     uint64_t k) noexcept nogil:
    # 1 = fixed, 0 = moved, -1 = left the window
    cdef int s0 = <int>(k & 1)
    cdef int s = s0
    cdef uint64_t tape0 = k >> 1
    cdef uint64_t tape = tape0
    cdef uint64_t mask
    cdef int h = 0
    cdef int bit
    cdef Py_ssize_t i
    cdef uint8_t c
    for i in range(n):
        c = letters[i]
        if c == 0:
            if s == 0:
                s = 1
                h += 1
                if h > ell:
                    return -1
            else:
                s = 0
                h -= 1
                if h < -ell:
                    return -1
            continue
        mask = (<uint64_t>1) << (h + ell)
        bit = (tape & mask) != 0
        if bit == 0 and s == 0:
            continue
        if c == 1:
            # (0,1)->(1,1)->(1,0)->(0,1)
            if bit == 0:
                tape |= mask
            elif s == 1:
                s = 0
            else:
                tape &= ~mask
                s = 1
        else:
            # (1,1)->(0,1)->(1,0)->(1,1)
            if bit == 0:
                tape |= mask
                s = 0
            elif s == 1:
                tape &= ~mask
            else:
                s = 1
    return 1 if (h == 0 and s == s0 and tape == tape0) else 0


def count_range(const uint8_t[::1] letters, int ell, uint64_t lo, uint64_t hi):
    """Return ``(fixed, discarded)`` counts over configurations ``lo <= k < hi``."""
    cdef Py_ssize_t n = letters.shape[0]
    cdef uint64_t k
    cdef uint64_t fixed = 0
    cdef uint64_t discarded = 0
    cdef int r
    with nogil:
        for k in range(lo, hi):
            r = _run(letters, n, ell, k)
            if r == 1:
                fixed += 1
            elif r < 0:
                discarded += 1
    return int(fixed), int(discarded)
