"""The Turing machine model of PSL(2,Z) acting on {0,1}^Z x {0,1}.

``u`` flips the signal and moves the head (right when the signal was 0, left
when it was 1).  ``v`` permutes the pair (tape[head], signal) by the 3-cycle
(0,1) -> (1,1) -> (1,0) -> (0,1) and leaves (0,0) alone.

Everything here works on a finite window ``[-ell, ell]`` of tape cells.  A
configuration is packed into a ``2*ell + 2`` bit integer: bit 0 is the
signal, bit ``p + ell + 1`` is the tape cell at position ``p``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from . import _core
from .words import Letter, Word, u_count

DEFAULT_BIT_CAP = 34
DEFAULT_EXACT_CAP = 16
PROGRESS_CHUNKS = 16


class ResourceLimitError(RuntimeError):
    """The requested enumeration is larger than the configured cap."""


class _OutOfWindow:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "OUT_OF_WINDOW"

    def __bool__(self) -> bool:
        return False


OUT_OF_WINDOW = _OutOfWindow()


@dataclass(frozen=True)
class MachineState:
    """Signal bit, tape window ``[-ell, ell]`` and head position."""

    signal: int
    tape: tuple[int, ...]
    head: int = 0

    @property
    def ell(self) -> int:
        return (len(self.tape) - 1) // 2

    def bit(self, pos: int) -> int:
        ell = self.ell
        if not -ell <= pos <= ell:
            raise IndexError(f"tape position {pos} outside window [-{ell}, {ell}]")
        return self.tape[pos + ell]

    def is_live(self) -> bool:
        return abs(self.head) <= self.ell

    @classmethod
    def from_index(cls, k: int, ell: int) -> "MachineState":
        """Decode configuration ``k`` (head at 0)."""
        return cls(k & 1, tuple((k >> (i + 1)) & 1 for i in range(2 * ell + 1)), 0)

    def to_index(self) -> int:
        k = self.signal
        for i, b in enumerate(self.tape):
            k |= b << (i + 1)
        return k


def apply_u(s: MachineState):
    ell = s.ell
    head = s.head + 1 if s.signal == 0 else s.head - 1
    if abs(head) > ell:
        return OUT_OF_WINDOW
    return MachineState(1 - s.signal, s.tape, head)


# (tape bit, signal) -> (tape bit, signal)
_V_MAP = {(0, 0): (0, 0), (0, 1): (1, 1), (1, 1): (1, 0), (1, 0): (0, 1)}
_VINV_MAP = {after: before for before, after in _V_MAP.items()}


def _local(s: MachineState, table) -> MachineState:
    idx = s.head + s.ell
    x, sig = table[(s.tape[idx], s.signal)]
    tape = s.tape if x == s.tape[idx] else s.tape[:idx] + (x,) + s.tape[idx + 1 :]
    return MachineState(sig, tape, s.head)


def apply_v(s: MachineState) -> MachineState:
    return _local(s, _V_MAP)


def apply_v_inv(s: MachineState) -> MachineState:
    return _local(s, _VINV_MAP)


_APPLY = {Letter.U: apply_u, Letter.V: apply_v, Letter.VINV: apply_v_inv}


def apply_word(w: Word, s: MachineState):
    """Apply ``w`` letter by letter; stops at the first exit from the window."""
    for letter in w.letters:
        s = _APPLY[letter](s)
        if s is OUT_OF_WINDOW:
            return OUT_OF_WINDOW
    return s


@dataclass(frozen=True)
class TraceEstimate:
    """Counts of fixed and discarded configurations at window radius ``ell``.

    The true fixed-point measure lies in
    ``[fixed_mass, fixed_mass + discarded_mass]``.
    """

    ell: int
    fixed_count: int
    discarded_count: int

    @property
    def total(self) -> int:
        return 1 << (2 * self.ell + 2)

    @property
    def fixed_mass(self) -> Fraction:
        return Fraction(self.fixed_count, self.total)

    @property
    def discarded_mass(self) -> Fraction:
        return Fraction(self.discarded_count, self.total)

    @property
    def is_exact(self) -> bool:
        return self.discarded_count == 0

    @property
    def support_bounds(self) -> tuple[Fraction, Fraction]:
        return (1 - self.fixed_mass - self.discarded_mass, 1 - self.fixed_mass)


def word_array(w: Word) -> np.ndarray:
    return np.fromiter((int(c) for c in w.letters), dtype=np.uint8, count=len(w))


def _chunks(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total))
    bounds = [total * i // parts for i in range(parts + 1)]
    return [(bounds[i], bounds[i + 1]) for i in range(parts)]


def _check_window(ell: int, bit_cap: int) -> None:
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    if 2 * ell + 2 > bit_cap:
        raise ResourceLimitError(
            f"window radius {ell} needs {2 * ell + 2} configuration bits; cap is {bit_cap}"
        )


def iter_trace(
    w: Word,
    ell: int,
    *,
    workers: int = 1,
    chunks: int = PROGRESS_CHUNKS,
    bit_cap: int = DEFAULT_BIT_CAP,
    backend: str | None = None,
) -> Iterator[tuple[int, int, int]]:
    """Yield cumulative ``(configurations_done, fixed, discarded)`` per chunk.

    The configuration range is split into ``max(chunks, workers)`` contiguous
    pieces; counts are summed, so the result does not depend on the split.
    """
    _check_window(ell, bit_cap)
    count = _core.BACKENDS[backend] if backend else _core.count_range
    letters = word_array(w)
    total = 1 << (2 * ell + 2)
    pieces = _chunks(total, max(chunks, workers))
    done = fixed = discarded = 0

    def run(piece):
        lo, hi = piece
        return hi - lo, *count(letters, ell, lo, hi)

    if workers <= 1:
        results = map(run, pieces)
        for n, f, d in results:
            done, fixed, discarded = done + n, fixed + f, discarded + d
            yield done, fixed, discarded
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for n, f, d in pool.map(run, pieces):
            done, fixed, discarded = done + n, fixed + f, discarded + d
            yield done, fixed, discarded


def trace_bounded(
    w: Word,
    ell: int,
    *,
    workers: int = 1,
    bit_cap: int = DEFAULT_BIT_CAP,
    backend: str | None = None,
    progress: Callable[[int, int, int, int], None] | None = None,
) -> TraceEstimate:
    """Enumerate all ``2**(2*ell+2)`` configurations of the window.

    A configuration is fixed when the head returns to 0 with signal and
    every window cell unchanged; it is discarded once the head leaves the
    window.  ``progress(done, total, fixed, discarded)`` is called after
    each of the 16 chunks.
    """
    total = 1 << (2 * ell + 2) if ell >= 0 else 0
    fixed = discarded = 0
    for done, fixed, discarded in iter_trace(
        w, ell, workers=workers, bit_cap=bit_cap, backend=backend
    ):
        if progress is not None:
            progress(done, total, fixed, discarded)
    return TraceEstimate(ell, fixed, discarded)


def trace_exact(
    w: Word,
    *,
    cap: int = DEFAULT_EXACT_CAP,
    workers: int = 1,
    backend: str | None = None,
) -> TraceEstimate:
    """Exact fixed-point measure: the head never moves more than ``|w|_u``."""
    n = u_count(w)
    if n > cap:
        raise ResourceLimitError(
            f"|w|_u = {n} exceeds the exact-trace cap {cap}; use trace_bounded"
        )
    est = trace_bounded(w, n, workers=workers, bit_cap=2 * cap + 2, backend=backend)
    assert est.is_exact, "displacement exceeded |w|_u"
    return est


def support_bounds(w: Word, ell: int, **kwargs) -> tuple[Fraction, Fraction]:
    """``(lo, hi)`` bounds on the support measure ``1 - trace``."""
    return trace_bounded(w, ell, **kwargs).support_bounds


def fiber_label(s: MachineState):
    """Locate the stopping zero of ``s`` inside its window.

    Scans cells ``<= head`` (signal 0) or ``<= head - 1`` (signal 1) for the
    rightmost zero.  Returns ``(position, bits left of it)`` or ``None`` when
    the scanned part of the window holds no zero.
    """
    ell = s.ell
    top = s.head if s.signal == 0 else s.head - 1
    for pos in range(min(top, ell), -ell - 1, -1):
        if s.tape[pos + ell] == 0:
            return pos, s.tape[: pos + ell]
    return None
