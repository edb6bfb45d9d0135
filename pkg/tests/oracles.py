"""Independent reference computations used by the tests.

``reference_*`` is a line-by-line port of the original trace program: words
live in the free group on u, v (only free cancellation, signed generators
1 = u, 2 = v), the tape is a dict, and fixedness is its ``iseq`` test.  It
shares no code with the package.
"""

from fractions import Fraction


def free_reduce(seq):
    out = []
    for g in seq:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    return out


def free_inv(seq):
    return [-g for g in reversed(seq)]


def free_pow(seq, n):
    if n < 0:
        seq, n = free_inv(seq), -n
    return free_reduce(list(seq) * n)


def free_mul(*seqs):
    out = []
    for s in seqs:
        out.extend(s)
    return free_reduce(out)


def free_comm(x, y):
    # the program's (x, y) = x^-1 y^-1 x y
    return free_mul(free_inv(x), free_inv(y), x, y)


A = [2, 1]          # a := v*u
B = [2, 2, 1]       # b := v^2*u
VV = [2]


def reference_words():
    g1 = free_comm(free_mul(free_pow(A, 14), VV, free_pow(A, -14)), VV)
    g2 = free_comm(free_mul(free_pow(A, 9), g1, free_pow(A, -9)), g1)
    g3 = free_comm(free_mul(free_pow(B, 2), g2, free_pow(B, -2)), g2)
    return g1, g2, g3


def _u(state):
    sig, tape, head = state
    if sig == 0:
        return [1, tape, head + 1]
    return [0, tape, head - 1]


def _v(state):
    sig, tape, head = state
    x = tape[head]
    if sig == 0 and x == 0:
        return state
    if sig == 0 and x == 1:
        tape[head] = 0
        return [1, tape, head]
    if sig == 1 and x == 0:
        tape[head] = 1
        return [1, tape, head]
    tape[head] = 1
    return [0, tape, head]


def _vv(state):
    sig, tape, head = state
    x = tape[head]
    if sig == 0 and x == 0:
        return state
    if sig == 0 and x == 1:
        tape[head] = 1
        return [1, tape, head]
    if sig == 1 and x == 1:
        tape[head] = 0
        return [1, tape, head]
    tape[head] = 1
    return [0, tape, head]


def _apply_generator(gen, state):
    if gen in (1, -1):
        return _u(state)
    if gen == 2:
        return _v(state)
    return _vv(state)


def reference_precise_trace(pwrs, prec):
    """Return ``(tr, badness)`` exactly as the original program computes them."""
    tr = Fraction(0)
    badness = Fraction(0)
    unit = Fraction(1, 2 ** (2 * prec + 2))
    for k in range(2 ** (2 * prec + 2)):
        bits = [(k >> i) & 1 for i in range(2 * prec + 2)]
        tape = {l: bits[prec + l + 1] for l in range(-prec, prec + 1)}
        state = [bits[0], tape, 0]
        init = (bits[0], dict(tape))
        bad = False
        for gen in pwrs:
            if gen == -2:
                state = _vv(state)
            else:
                state = _apply_generator(gen, state)
            if state[2] > prec or state[2] < -prec:
                badness += unit
                bad = True
                break
        if bad:
            continue
        if state[2] == 0 and state[0] == init[0] and state[1] == init[1]:
            tr += unit
    return tr, badness


def scalar_trace(word, ell):
    """Enumerate the window with the package's per-state machine."""
    from fullgroup.machine import OUT_OF_WINDOW, MachineState, apply_word

    fixed = discarded = 0
    for k in range(2 ** (2 * ell + 2)):
        s = MachineState.from_index(k, ell)
        out = apply_word(word, s)
        if out is OUT_OF_WINDOW:
            discarded += 1
        elif out == s:
            fixed += 1
    return fixed, discarded
