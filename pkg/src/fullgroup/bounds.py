"""The sequences a_{m,delta} and the recurrence sample bound.

``a_{0,delta} = a0`` and ``a_{m+1,delta} = 1 / (2 - a_{m,delta} (1 - delta))``.
Identities are checked in exact rationals; limits involving ``sqrt(delta)``
are floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

LIMIT_TOL = 1e-12
LIMIT_CAP = 10**6


@dataclass(frozen=True)
class SequenceParams:
    a0: Fraction
    delta: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a0", Fraction(self.a0))
        object.__setattr__(self, "delta", Fraction(self.delta))
        if not 0 < self.a0 < 1:
            raise ValueError("a0 must lie in (0, 1)")
        if not 0 <= self.delta < 1:
            raise ValueError("delta must lie in [0, 1)")


def _step(a, delta):
    return 1 / (2 - a * (1 - delta))


def a_m_sequence(p: SequenceParams, m: int) -> list[Fraction]:
    """``[a_{0,delta}, ..., a_{m,delta}]`` in exact arithmetic."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    seq = [p.a0]
    for _ in range(m):
        seq.append(_step(seq[-1], p.delta))
    return seq


def a_m_recurrence(p: SequenceParams, m: int) -> Fraction:
    return a_m_sequence(p, m)[-1]


def a_m_closed(a0, m: int) -> Fraction:
    """``a_m = 1 - (1 - a0) / (m (1 - a0) + 1)`` (the delta = 0 sequence)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    a0 = Fraction(a0)
    return 1 - (1 - a0) / (m * (1 - a0) + 1)


def a_m_delta_limit(delta) -> float:
    """``1 / (1 + sqrt(delta))``, the limit when ``a0 <= 1/(1 + sqrt(delta))``."""
    if not 0 <= delta < 1:
        raise ValueError("delta must lie in [0, 1)")
    return 1.0 / (1.0 + math.sqrt(delta))


def iterate_to_limit(
    a0: float, delta: float, tol: float = LIMIT_TOL, cap: int = LIMIT_CAP
) -> tuple[float, int]:
    """Float iteration until successive terms differ by less than ``tol``.

    Returns the last iterate and the number of steps taken.
    """
    a = float(a0)
    d = float(delta)
    for step in range(1, cap + 1):
        nxt = 1.0 / (2.0 - a * (1.0 - d))
        if abs(nxt - a) < tol:
            return nxt, step
        a = nxt
    return a, cap


def recurrence_sample_bound(c, eps) -> int:
    """Smallest integer ``n`` with ``n > (1 - c)/(c eps) + 1``."""
    c, eps = Fraction(c), Fraction(eps)
    if not (0 < c <= 1 and 0 < eps <= 1):
        raise ValueError("need 0 < c <= 1 and 0 < eps <= 1")
    return math.floor((1 - c) / (c * eps) + 1) + 1
