"""Finite permutation models of measure-preserving actions.

Points ``0..n-1`` carry the uniform measure.  Composition is right to left:
``(g * h)(x) == g(h(x))``.  Measures are exact ``Fraction`` values.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .bounds import recurrence_sample_bound


class ClosureLimitError(RuntimeError):
    """Group closure or witness search exceeded its element cap."""


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        images = list(range(n))
        for cyc in cycles:
            for i, x in enumerate(cyc):
                images[x] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(images))

    @classmethod
    def rotation(cls, n: int, shift: int = 1) -> "Permutation":
        return cls(tuple((x + shift) % n for x in range(n)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(tuple(self.images[y] for y in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation(tuple(inv))

    def __pow__(self, n: int) -> "Permutation":
        base = self if n >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        for _ in range(abs(n)):
            result = result * base
        return result

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.images))

    def image_of(self, points: Iterable[int]) -> frozenset[int]:
        return frozenset(self.images[x] for x in points)

    def to_json(self) -> str:
        return json.dumps(list(self.images))

    @classmethod
    def from_json(cls, text: str) -> "Permutation":
        return cls(tuple(json.loads(text)))


def commutator(g: Permutation, h: Permutation) -> Permutation:
    """``[g, h] = g h g^-1 h^-1``."""
    return g * h * g.inverse() * h.inverse()


@dataclass(frozen=True)
class FiniteAction:
    degree: int
    generators: Mapping[str, Permutation] = field(default_factory=dict)

    def __post_init__(self):
        for name, p in self.generators.items():
            if p.degree != self.degree:
                raise ValueError(f"generator {name!r} has degree {p.degree}, expected {self.degree}")

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "generators": {k: list(p.images) for k, p in self.generators.items()},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "FiniteAction":
        gens = {k: Permutation(tuple(v)) for k, v in data["generators"].items()}
        return cls(int(data["degree"]), gens)


def measure(points: Iterable[int], n: int) -> Fraction:
    return Fraction(len(set(points)), n)


@dataclass(frozen=True)
class SupportReport:
    support_set: frozenset[int]
    fixed_set: frozenset[int]
    measure: Fraction


def support(p: Permutation) -> SupportReport:
    moved = frozenset(x for x, y in enumerate(p.images) if x != y)
    fixed = frozenset(range(p.degree)) - moved
    return SupportReport(moved, fixed, Fraction(len(moved), p.degree))


def length_and_distance(g: Permutation, h: Permutation) -> tuple[Fraction, Fraction]:
    """Length ``mu(S(g))`` and the bi-invariant distance ``mu(S(g h^-1))``."""
    if g.degree != h.degree:
        raise ValueError("degree mismatch")
    return support(g).measure, support(g * h.inverse()).measure


@dataclass(frozen=True)
class CommutatorSupportReport:
    A: frozenset[int]
    gA: frozenset[int]
    hA: frozenset[int]
    commutator_support: frozenset[int]
    containment_ok: bool
    lhs: Fraction
    rhs: Fraction
    inequality_ok: bool

    @property
    def ok(self) -> bool:
        return self.containment_ok and self.inequality_ok


def check_commutator_support(g: Permutation, h: Permutation) -> CommutatorSupportReport:
    """Check ``S([g,h]) <= A u gA u hA`` for ``A = S(g) n S(h)`` and the bound
    ``mu(S([g,h])) <= 3 mu(A) - mu(gA n A) - mu(hA n A)``."""
    if g.degree != h.degree:
        raise ValueError("degree mismatch")
    n = g.degree
    A = support(g).support_set & support(h).support_set
    gA, hA = g.image_of(A), h.image_of(A)
    sc = support(commutator(g, h)).support_set
    lhs = Fraction(len(sc), n)
    rhs = 3 * measure(A, n) - measure(gA & A, n) - measure(hA & A, n)
    return CommutatorSupportReport(
        A, gA, hA, sc, sc <= (A | gA | hA), lhs, rhs, lhs <= rhs
    )


class LemmaViolation(AssertionError):
    """A guaranteed witness was not found; indicates a bug."""


def recurrence_witness(T: Permutation, A: Iterable[int], c: Fraction, eps: Fraction) -> int:
    """Least ``1 <= j < n`` with ``mu(T^j A n A) > mu(A)^2 (1 - eps)``, where
    ``n`` is the smallest integer above ``(1-c)/(c eps) + 1``."""
    A = frozenset(A)
    c, eps = Fraction(c), Fraction(eps)
    nu = measure(A, T.degree)
    if not (0 < c <= nu):
        raise ValueError(f"need 0 < c <= mu(A) = {nu}, got c = {c}")
    if not (0 < eps <= 1):
        raise ValueError("need 0 < eps <= 1")
    n_bound = recurrence_sample_bound(c, eps)
    target = nu * nu * (1 - eps)
    image = A
    for j in range(1, n_bound):
        image = T.image_of(image)
        if measure(image & A, T.degree) > target:
            return j
    raise LemmaViolation(f"no recurrence witness below n = {n_bound}")


@dataclass(frozen=True)
class GroupElement:
    """A permutation together with a word over the generators that produces it.

    ``word`` lists ``(name, +1 | -1)`` pairs, leftmost factor first, so the
    element is ``g_1^{e_1} * g_2^{e_2} * ...`` in composition order.
    """

    perm: Permutation
    word: tuple[tuple[str, int], ...] = ()


def _signed_generators(generators: Mapping[str, Permutation]):
    out = []
    for name, p in generators.items():
        out.append((name, 1, p))
        inv = p.inverse()
        if inv != p:
            out.append((name, -1, inv))
    return out


def _bfs(generators: Mapping[str, Permutation], degree: int, cap: int):
    """Breadth-first enumeration of the generated group (identity first)."""
    signed = _signed_generators(generators)
    start = GroupElement(Permutation.identity(degree))
    seen = {start.perm.images}
    queue = deque([start])
    while queue:
        el = queue.popleft()
        yield el
        for name, e, p in signed:
            nxt = p * el.perm
            if nxt.images in seen:
                continue
            if len(seen) >= cap:
                raise ClosureLimitError(f"group closure exceeds {cap} elements")
            seen.add(nxt.images)
            queue.append(GroupElement(nxt, ((name, e),) + el.word))


def khintchine_witness(
    generators: Mapping[str, Permutation] | Sequence[Permutation],
    A: Iterable[int],
    B: Iterable[int],
    eps: Fraction,
    cap: int = 10**6,
) -> GroupElement:
    """First element ``g`` (breadth first) with ``mu(gA n B) > mu(A) mu(B) - eps``."""
    if not isinstance(generators, Mapping):
        generators = {f"g{i}": p for i, p in enumerate(generators)}
    if not generators:
        raise ValueError("need at least one generator")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    degree = next(iter(generators.values())).degree
    A, B = frozenset(A), frozenset(B)
    target = measure(A, degree) * measure(B, degree) - eps
    for el in _bfs(generators, degree, cap):
        if measure(el.perm.image_of(A) & B, degree) > target:
            return el
    raise ClosureLimitError("no Khintchine witness in the generated group; action not transitive?")


def group_closure(generators: Sequence[Permutation], cap: int = 10**6) -> list[Permutation]:
    if not generators:
        return []
    gens = {f"g{i}": p for i, p in enumerate(generators)}
    return [el.perm for el in _bfs(gens, generators[0].degree, cap)]


def modulus_of_discreteness(
    generators: Sequence[Permutation], element_cap: int = 10**6
) -> tuple[Fraction, Permutation | None]:
    """Smallest support measure over non-identity elements, with a minimizer.

    A trivial group returns ``(1, None)``: it acts freely.
    """
    best: tuple[Fraction, Permutation | None] = (Fraction(1), None)
    for p in group_closure(list(generators), element_cap):
        if p.is_identity():
            continue
        m = support(p).measure
        if best[1] is None or m < best[0]:
            best = (m, p)
    return best


def wreath_model(k: int, block_action: FiniteAction) -> FiniteAction:
    """Permutational wreath product acting on ``[k] x Y`` (point ``i*b + y``).

    Generators: each block generator acting on block 0 only (``name@0``), plus
    the cyclic block shift ``cycle`` (k >= 2) and the block swap ``swap``
    (k >= 3; for k = 2 it coincides with ``cycle``).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    b = block_action.degree
    n = k * b
    gens: dict[str, Permutation] = {}
    for name, p in block_action.generators.items():
        images = list(range(n))
        for y in range(b):
            images[y] = p(y)
        gens[f"{name}@0" if k > 1 else name] = Permutation(tuple(images))
    if k >= 2:
        gens["cycle"] = Permutation(tuple(((x // b + 1) % k) * b + x % b for x in range(n)))
    if k >= 3:
        swap = {0: 1, 1: 0}
        gens["swap"] = Permutation(tuple(swap.get(x // b, x // b) * b + x % b for x in range(n)))
    return FiniteAction(n, gens)


def z_tower_element(n: int, m: int) -> Permutation:
    """On ``Z/2^m``: add ``2^n`` on the residue class ``0 mod 2^n``, fix the rest."""
    if not 0 <= n < m:
        raise ValueError("need 0 <= n < m")
    size, k = 1 << m, 1 << n
    return Permutation(tuple((x + k) % size if x % k == 0 else x for x in range(size)))


def z_tower_support(n: int, m: int) -> Fraction:
    """Support of the single-block generator of ``2^n Z`` acting on ``Z/2^m``."""
    return support(z_tower_element(n, m)).measure


def z_tower_levels(element: int, levels: Iterable[int]) -> list[Permutation]:
    """Translation by ``element`` on ``Z/2^m`` for each ``m``."""
    return [Permutation.rotation(1 << m, element) for m in levels]


def fixed_ratio_chain(perms: Sequence[Permutation]) -> list[Fraction]:
    """Fixed-point proportion of ``g`` on each finite quotient."""
    return [1 - support(p).measure for p in perms]
