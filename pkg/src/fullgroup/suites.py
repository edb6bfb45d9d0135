"""Randomized property suites behind ``fullgroup verify``.

Every suite takes ``(count, seed)`` and returns a :class:`SuiteReport`; a run
is reproducible from its seed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import bounds, finite
from .machine import (
    OUT_OF_WINDOW,
    MachineState,
    apply_u,
    apply_v,
    apply_v_inv,
    fiber_label,
    trace_bounded,
)
from .words import Letter, Word, u_count


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))


def random_permutation(rng: random.Random, n: int) -> finite.Permutation:
    images = list(range(n))
    rng.shuffle(images)
    return finite.Permutation(tuple(images))


def random_subset(rng: random.Random, n: int, nonempty: bool = False) -> frozenset[int]:
    while True:
        s = frozenset(x for x in range(n) if rng.random() < 0.5)
        if s or not nonempty:
            return s


def random_word(rng: random.Random, max_u: int) -> Word:
    """Random reduced word with at most ``max_u`` letters ``u``."""
    n_u = rng.randint(0, max_u)
    letters: list[Letter] = []
    if rng.random() < 0.5:
        letters.append(rng.choice((Letter.V, Letter.VINV)))
    for i in range(n_u):
        letters.append(Letter.U)
        if i < n_u - 1 or rng.random() < 0.5:
            letters.append(rng.choice((Letter.V, Letter.VINV)))
    return Word(tuple(letters))


def random_state(rng: random.Random, ell: int, slack: int = 0) -> MachineState:
    tape = tuple(rng.getrandbits(1) for _ in range(2 * ell + 1))
    reach = ell - slack
    return MachineState(rng.getrandbits(1), tape, rng.randint(-reach, reach))


# -- suites ---------------------------------------------------------------------


def commutator_support(count: int = 10_000, seed: int = 0, **_) -> SuiteReport:
    rep = SuiteReport("commutator-support")
    g = finite.Permutation.from_cycles(3, (0, 1))
    h = finite.Permutation.from_cycles(3, (1, 2))
    r = finite.check_commutator_support(g, h)
    rep.add("S3 example lhs = rhs = 1", r.ok and r.lhs == 1 and r.rhs == 1, f"lhs={r.lhs} rhs={r.rhs}")

    rng = random.Random(seed)
    bad_cont = bad_ineq = bad_conj = 0
    for _ in range(count):
        n = rng.randint(2, 12)
        g, h = random_permutation(rng, n), random_permutation(rng, n)
        r = finite.check_commutator_support(g, h)
        bad_cont += not r.containment_ok
        bad_ineq += not r.inequality_ok
        lhs = finite.support(g * h * g.inverse()).support_set
        bad_conj += lhs != g.image_of(finite.support(h).support_set)
    rep.add(f"containment on {count} random pairs", bad_cont == 0, f"{bad_cont} failures")
    rep.add(f"inequality on {count} random pairs", bad_ineq == 0, f"{bad_ineq} failures")
    rep.add(f"S(ghg^-1) = gS(h) on {count} pairs", bad_conj == 0, f"{bad_conj} failures")
    return rep


def recurrence(count: int = 1_000, seed: int = 0, **_) -> SuiteReport:
    rep = SuiteReport("recurrence")
    T = finite.Permutation.rotation(6)
    j = finite.recurrence_witness(T, {0, 1, 2}, Fraction(1, 2), Fraction(1, 2))
    rep.add("Z/6 worked example returns j = 1", j == 1, f"j={j}")

    rng = random.Random(seed)
    failures = 0
    for _ in range(count):
        n = rng.randint(1, 30)
        T = random_permutation(rng, n)
        A = random_subset(rng, n, nonempty=True)
        nu = Fraction(len(A), n)
        c = nu * Fraction(rng.randint(1, 100), 100)
        eps = Fraction(rng.randint(1, 100), 100)
        try:
            j = finite.recurrence_witness(T, A, c, eps)
        except finite.LemmaViolation:
            failures += 1
            continue
        nb = bounds.recurrence_sample_bound(c, eps)
        hit = finite.measure((T**j).image_of(A) & A, n)
        if not (1 <= j < nb and hit > nu * nu * (1 - eps)):
            failures += 1
    rep.add(f"witness found on {count} random instances", failures == 0, f"{failures} failures")
    return rep


def khintchine(count: int = 1_000, seed: int = 0, **_) -> SuiteReport:
    rep = SuiteReport("khintchine")
    el = finite.khintchine_witness([finite.Permutation.rotation(5)], {0}, {2}, Fraction(1, 25))
    rep.add("Z/5 example returns rotation^2", el.perm == finite.Permutation.rotation(5, 2), str(el.word))

    rng = random.Random(seed)
    failures = 0
    for _ in range(count):
        n = rng.randint(1, 8)
        # an n-cycle keeps the joint action transitive
        gens = [finite.Permutation.rotation(n)] + [
            random_permutation(rng, n) for _ in range(rng.randint(0, 2))
        ]
        A, B = random_subset(rng, n), random_subset(rng, n)
        eps = Fraction(rng.randint(1, 100), 100)
        el = finite.khintchine_witness(gens, A, B, eps)
        lhs = finite.measure(el.perm.image_of(A) & B, n)
        if not lhs > Fraction(len(A), n) * Fraction(len(B), n) - eps:
            failures += 1
    rep.add(f"witness found on {count} transitive actions", failures == 0, f"{failures} failures")
    return rep


def _fraction_sqrt_le(x: Fraction, delta: Fraction) -> bool:
    """``sqrt(delta) <= x`` for ``x >= 0``, exactly."""
    return x >= 0 and x * x >= delta


def amdelta(count: int = 100, seed: int = 0, m_max: int = 1_000, **_) -> SuiteReport:
    rep = SuiteReport("amdelta")
    rng = random.Random(seed)

    bad = 0
    for _ in range(count):
        a0 = Fraction(rng.randint(1, 999), 1000)
        seq = bounds.a_m_sequence(bounds.SequenceParams(a0), m_max)
        bad += any(seq[m] != bounds.a_m_closed(a0, m) for m in range(m_max + 1))
    rep.add(f"closed form = recurrence exactly, m <= {m_max}, {count} a0", bad == 0, f"{bad} mismatches")

    # monotone in delta, strictly inside (0, 1)
    deltas = [Fraction(k, 10) for k in range(10)]
    bad = 0
    for a0 in (Fraction(1, 10), Fraction(1, 2), Fraction(9, 10)):
        seqs = [bounds.a_m_sequence(bounds.SequenceParams(a0, d), 30) for d in deltas]
        for m in range(31):
            col = [s[m] for s in seqs]
            bad += not all(0 < col[i + 1] <= col[i] < 1 for i in range(len(col) - 1))
    rep.add("0 < a_{m,d1} <= a_{m,d0} < 1 for d1 >= d0 (grid)", bad == 0, f"{bad} violations")

    # delta -> 0+ recovers a_m, monotonically
    bad = 0
    for a0 in (Fraction(1, 4), Fraction(2, 3)):
        for m in (1, 5, 20, 50):
            am = bounds.a_m_closed(a0, m)
            gaps = [
                abs(bounds.a_m_recurrence(bounds.SequenceParams(a0, Fraction(1, 10**j)), m) - am)
                for j in range(1, 9)
            ]
            bad += not all(gaps[i + 1] < gaps[i] for i in range(len(gaps) - 1))
    rep.add("a_{m,delta} -> a_m as delta = 10^-j -> 0, monotone", bad == 0, f"{bad} violations")

    # domination by super-solutions
    bad = 0
    for _ in range(count):
        a0 = Fraction(rng.randint(1, 99), 100)
        d = Fraction(rng.randint(0, 99), 100)
        a = bounds.a_m_sequence(bounds.SequenceParams(a0, d), 20)
        b = [min(Fraction(1), a0 + Fraction(rng.randint(0, 10), 1000))]
        for _m in range(20):
            low = 1 / (2 - b[-1] * (1 - d))
            b.append(min(Fraction(1), low + Fraction(rng.randint(0, 10), 1000)))
        bad += any(b[m] < a[m] for m in range(21))
    rep.add("super-solutions dominate a_{m,delta}", bad == 0, f"{bad} violations")

    # monotone in m below the fixed point, and the limit
    bad = 0
    for d in (Fraction(1, 4), Fraction(1, 100), Fraction(1, 10), Fraction(1, 2)):
        for a0 in (Fraction(1, 10), Fraction(1, 3), Fraction(1, 2)):
            if not _fraction_sqrt_le((1 - a0) / a0, d):
                continue
            seq = bounds.a_m_sequence(bounds.SequenceParams(a0, d), 200)
            bad += not all(seq[i] <= seq[i + 1] for i in range(200))
    rep.add("a_{m,delta} nondecreasing when a0 <= 1/(1+sqrt(delta))", bad == 0, f"{bad} violations")

    for d in (Fraction(1, 4), Fraction(1, 100)):
        limit = bounds.a_m_delta_limit(d)
        value, steps = bounds.iterate_to_limit(0.5, float(d))
        err = abs(value - limit)
        rep.add(f"iterates reach 1/(1+sqrt({d})) within 1e-6", err < 1e-6, f"err={err:.2e} steps={steps}")
    exact = bounds.a_m_delta_limit(Fraction(1, 4))
    rep.add("limit at delta=1/4 is 2/3", math.isclose(exact, 2 / 3, rel_tol=0, abs_tol=1e-15), f"{exact!r}")
    return rep


def machine_relations(count: int = 10_000, seed: int = 0, **_) -> SuiteReport:
    rep = SuiteReport("machine-relations")
    local_ok = True
    for x in (0, 1):
        for s in (0, 1):
            st = MachineState(s, (x,), 0)
            local_ok &= apply_v(apply_v(apply_v(st))) == st
            local_ok &= apply_v_inv(apply_v(st)) == st
    rep.add("v^3 = id on the 4 local cases", local_ok)

    rng = random.Random(seed)
    bad_u = bad_v = 0
    for _ in range(count):
        ell = rng.randint(1, 8)
        st = random_state(rng, ell, slack=1)
        bad_u += apply_u(apply_u(st)) != st
        bad_v += apply_v(apply_v(apply_v(st))) != st or apply_v_inv(apply_v(st)) != st
    rep.add(f"u^2 = id on {count} random live states", bad_u == 0, f"{bad_u} failures")
    rep.add(f"v^3 = id on {count} random live states", bad_v == 0, f"{bad_v} failures")
    return rep


_GENS = (apply_u, apply_v, apply_v_inv)


def fiber(count: int = 10_000, seed: int = 0, **_) -> SuiteReport:
    rep = SuiteReport("fiber")
    rng = random.Random(seed)
    checked = failures = draws = 0
    while checked < count:
        draws += 1
        ell = rng.randint(1, 10)
        st = random_state(rng, ell)
        gen = rng.choice(_GENS)
        before = fiber_label(st)
        after_state = gen(st)
        if before is None or after_state is OUT_OF_WINDOW:
            continue
        after = fiber_label(after_state)
        if after is None:
            continue
        checked += 1
        failures += before != after
    rep.add(f"fiber label invariant on {count} pairs", failures == 0, f"{failures} failures, {draws} draws")
    return rep


def monotone(count: int = 50, seed: int = 0, workers: int = 1, max_u: int = 6, **_) -> SuiteReport:
    rep = SuiteReport("monotone")
    rng = random.Random(seed)
    bad_mono = bad_exact = 0
    for _ in range(count):
        w = random_word(rng, max_u)
        ests = [trace_bounded(w, ell, workers=workers) for ell in range(1, 7)]
        for lo, hi in zip(ests, ests[1:]):
            bad_mono += hi.fixed_mass < lo.fixed_mass or hi.discarded_mass > lo.discarded_mass
        bad_exact += not trace_bounded(w, u_count(w), workers=workers).is_exact
    rep.add(f"bounds monotone in ell on {count} words", bad_mono == 0, f"{bad_mono} violations")
    rep.add(f"no discards at ell = |w|_u on {count} words", bad_exact == 0, f"{bad_exact} failures")
    return rep


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "commutator-support": commutator_support,
    "recurrence": recurrence,
    "khintchine": khintchine,
    "amdelta": amdelta,
    "machine-relations": machine_relations,
    "fiber": fiber,
    "monotone": monotone,
}
