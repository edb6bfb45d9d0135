"""Supports and fixed-point measures of elements of full groups.

The centre is a Turing-machine model of PSL(2,Z) acting on Cantor space,
where traces of words are computed by enumerating tape windows.
"""

__version__ = "0.1.0"

from ._core import BACKEND
from .machine import (
    OUT_OF_WINDOW,
    MachineState,
    ResourceLimitError,
    TraceEstimate,
    apply_u,
    apply_v,
    apply_v_inv,
    apply_word,
    fiber_label,
    support_bounds,
    trace_bounded,
    trace_exact,
)
from .search import SearchConfig, SearchResult, commutator_step, greedy_search, replay_paper_sequence
from .words import (
    Bracket,
    Letter,
    MixedWord,
    Word,
    WordSyntaxError,
    commutator,
    concat,
    conjugate,
    invert,
    nested_commutator_word,
    parse_word,
    power,
    reduce,
    substitute,
    u_count,
)
