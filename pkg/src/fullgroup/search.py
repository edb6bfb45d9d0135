"""Iterated-commutator contraction: ``w -> [h w h^-1, w]`` scored by trace.

A word with a large certified fixed-point measure has small support, so the
search keeps the candidates with the best lower bound ``fixed_mass``.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .machine import ResourceLimitError, TraceEstimate, trace_bounded
from .words import Bracket, Word, commutator, conjugate, default_macros, power

DEFAULT_MAX_LETTERS = 200_000


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Conjugator:
    label: str
    word: Word


def conjugator_family(spec: Iterable[tuple[str, Word, Iterable[int]]]) -> tuple[Conjugator, ...]:
    """Expand ``(name, base, exponents)`` triples into labelled powers."""
    out = []
    for name, base, exponents in spec:
        exponents = list(exponents)
        if not exponents:
            raise ValueError(f"empty exponent range for {name!r}")
        out.extend(Conjugator(f"{name}^{k}", power(base, k)) for k in exponents)
    return tuple(out)


def paper_family() -> tuple[Conjugator, ...]:
    """``a^k`` for ``1 <= k <= 14`` and ``b^k`` for ``1 <= k <= 4``."""
    m = default_macros()
    return conjugator_family([("a", m["a"], range(1, 15)), ("b", m["b"], range(1, 5))])


@dataclass(frozen=True)
class SearchConfig:
    ell: int = 7
    family: tuple[Conjugator, ...] = field(default_factory=paper_family)
    depth: int = 3
    bracket: Bracket = Bracket.PAPER
    target_trace: Fraction = Fraction(1)
    beam_width: int = 8
    elitism: bool = True
    max_letters: int = DEFAULT_MAX_LETTERS

    def __post_init__(self):
        object.__setattr__(self, "target_trace", Fraction(self.target_trace))
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.beam_width < 1:
            raise ValueError("beam_width must be >= 1")
        if not 0 <= self.target_trace <= 1:
            raise ValueError("target_trace must lie in [0, 1]")
        if not self.family:
            raise ValueError("conjugator family is empty")
        if self.ell < 0:
            raise ValueError("ell must be nonnegative")


@dataclass(frozen=True)
class SearchResult:
    word: Word
    estimate: TraceEstimate
    seed: Word
    lineage: tuple[str, ...] = ()
    wall_ms: float = 0.0

    @property
    def depth(self) -> int:
        return len(self.lineage)

    @property
    def fixed_mass(self) -> Fraction:
        return self.estimate.fixed_mass

    @property
    def support_witnessed(self) -> bool:
        """False when no moved configuration was seen at this window."""
        return self.estimate.support_bounds[1] > 0

    def sort_key(self):
        return (-self.estimate.fixed_mass, len(self.word), str(self.word))

    def to_dict(self, timing: bool = True) -> dict:
        est = self.estimate
        d = {
            "word": str(self.word),
            "ell": est.ell,
            "fixed_mass": fraction_str(est.fixed_mass),
            "discarded_mass": fraction_str(est.discarded_mass),
            "fixed_decimal": f"{float(est.fixed_mass):.4f}",
            "lineage": [{"seed": str(self.seed)}]
            + [{"conjugator": label} for label in self.lineage],
            "support_witnessed": self.support_witnessed,
        }
        if timing:
            d["wall_ms"] = round(self.wall_ms, 3)
        return d


@dataclass
class SearchOutcome:
    """``status`` is one of ``target``, ``depth``, ``trivialized``, ``incomplete``."""

    status: str
    results: list[SearchResult]
    history: list[Fraction] = field(default_factory=list)

    @property
    def best(self) -> SearchResult | None:
        return self.results[0] if self.results else None


def commutator_step(w: Word, h: Word, conv: Bracket = Bracket.PAPER) -> Word:
    """``[h w h^-1, w]`` under ``conv``."""
    return commutator(conjugate(w, h), w, conv)


def _evaluate(word, seed, lineage, ell, workers=1) -> SearchResult:
    start = time.perf_counter()
    est = trace_bounded(word, ell, workers=workers)
    return SearchResult(word, est, seed, lineage, (time.perf_counter() - start) * 1e3)


def replay_paper_sequence(
    ell: int = 7, bracket: Bracket = Bracket.COMPAT, workers: int = 1
) -> list[SearchResult]:
    """Rebuild ``g1 = [a^14 v a^-14, v]``, ``g2 = [a^9 g1 a^-9, g1]``,
    ``g3 = [b^2 g2 b^-2, g2]`` and bound their traces at radius ``ell``."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    m = default_macros()
    seed = Word.of([1])
    steps = [("a^14", power(m["a"], 14)), ("a^9", power(m["a"], 9)), ("b^2", power(m["b"], 2))]
    out = []
    w = seed
    lineage: tuple[str, ...] = ()
    for label, h in steps:
        w = commutator_step(w, h, bracket)
        lineage += (label,)
        out.append(_evaluate(w, seed, lineage, ell, workers))
    return out


def greedy_search(
    seed: Word,
    cfg: SearchConfig,
    workers: int = 1,
    log: Callable[[str], None] | None = None,
) -> SearchOutcome:
    """Beam search over iterated commutators of conjugates.

    Each round replaces every retained word ``w`` by ``[h w h^-1, w]`` for
    every conjugator ``h``, drops words that reduce to the identity, and keeps
    the ``beam_width`` best by (fixed mass desc, length, text).  With elitism
    the parents compete too, so the best bound never decreases.  A
    ``KeyboardInterrupt`` returns the current beam with status ``incomplete``.
    """
    if not seed:
        raise ValueError("seed must be a nontrivial word")
    seed_result = _evaluate(seed, seed, (), cfg.ell, workers)
    if seed_result.fixed_mass >= 1:
        raise ValueError("seed fixes the whole window; nothing to contract")
    beam = [seed_result]
    history: list[Fraction] = []
    pool_workers = max(1, workers)
    status = "depth"
    try:
        with ThreadPoolExecutor(max_workers=pool_workers) as pool:
            for it in range(1, cfg.depth + 1):
                known = {r.word for r in beam}
                pending: list[tuple[Word, tuple[str, ...]]] = []
                for parent in beam:
                    for conj in cfg.family:
                        w = commutator_step(parent.word, conj.word, cfg.bracket)
                        if not w or w in known:
                            continue
                        if len(w) > cfg.max_letters:
                            raise ResourceLimitError(
                                f"candidate has {len(w)} letters; cap is {cfg.max_letters}"
                            )
                        known.add(w)
                        pending.append((w, parent.lineage + (conj.label,)))
                if not pending:
                    status = "trivialized"
                    if it == 1:
                        beam = []
                    break
                children = list(
                    pool.map(lambda item: _evaluate(item[0], seed, item[1], cfg.ell), pending)
                )
                candidates = children + (beam if cfg.elitism else [])
                candidates.sort(key=SearchResult.sort_key)
                beam = candidates[: cfg.beam_width]
                history.append(beam[0].fixed_mass)
                if log:
                    log(
                        f"iteration {it}: {len(children)} candidates, best fixed_mass "
                        f"{fraction_str(beam[0].fixed_mass)} ({float(beam[0].fixed_mass):.4f})"
                    )
                if beam[0].fixed_mass >= cfg.target_trace:
                    status = "target"
                    break
    except KeyboardInterrupt:
        status = "incomplete"
    results = [r for r in beam if r.depth > 0]
    return SearchOutcome(status, results, history)
