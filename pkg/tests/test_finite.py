import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fullgroup.finite import (
    ClosureLimitError,
    FiniteAction,
    Permutation,
    check_commutator_support,
    commutator,
    fixed_ratio_chain,
    group_closure,
    khintchine_witness,
    length_and_distance,
    modulus_of_discreteness,
    recurrence_witness,
    support,
    wreath_model,
    z_tower_element,
    z_tower_levels,
    z_tower_support,
)
from fullgroup.suites import random_permutation, random_subset


@st.composite
def perm_pairs(draw, lo=2, hi=12):
    n = draw(st.integers(lo, hi))
    g = draw(st.permutations(range(n)))
    h = draw(st.permutations(range(n)))
    return Permutation(tuple(g)), Permutation(tuple(h))


# -- permutations and supports ----------------------------------------------------


def test_permutation_validation_and_json():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))
    p = Permutation.from_cycles(5, (0, 3, 1))
    assert Permutation.from_json(p.to_json()) == p
    assert p.to_json() == "[3, 0, 2, 1, 4]"


def test_composition_order():
    g = Permutation.from_cycles(3, (0, 1))
    h = Permutation.from_cycles(3, (1, 2))
    # (g*h)(x) = g(h(x))
    for x in range(3):
        assert (g * h)(x) == g(h(x))


def test_support_examples():
    assert support(Permutation.identity(5)).measure == 0
    assert support(Permutation.from_cycles(4, (0, 1))).measure == Fraction(1, 2)
    assert support(Permutation.rotation(7)).measure == 1
    rep = support(Permutation.from_cycles(4, (2, 3)))
    assert rep.support_set == {2, 3} and rep.fixed_set == {0, 1}


def test_length_and_distance_examples():
    t = Permutation.from_cycles(4, (0, 1))
    e = Permutation.identity(4)
    assert length_and_distance(e, t) == (0, Fraction(1, 2))
    assert length_and_distance(t, t)[1] == 0
    with pytest.raises(ValueError):
        length_and_distance(t, Permutation.identity(3))


@given(perm_pairs())
def test_distance_symmetric(pair):
    g, h = pair
    assert length_and_distance(g, h)[1] == length_and_distance(h, g)[1]


@given(perm_pairs())
def test_conjugate_support_is_translated(pair):
    g, h = pair
    assert support(g * h * g.inverse()).support_set == g.image_of(support(h).support_set)


# -- commutator supports -----------------------------------------------------------


def test_commutator_support_s3_example():
    g = Permutation.from_cycles(3, (0, 1))
    h = Permutation.from_cycles(3, (1, 2))
    rep = check_commutator_support(g, h)
    assert rep.A == {1}
    assert rep.commutator_support == {0, 1, 2}
    assert rep.lhs == rep.rhs == 1
    assert rep.ok


def test_commutator_support_degenerate_cases():
    g = Permutation.from_cycles(6, (0, 1))
    h = Permutation.from_cycles(6, (3, 4, 5))
    rep = check_commutator_support(g, h)
    assert rep.lhs == 0 and rep.ok
    rep = check_commutator_support(h, h)
    assert rep.A == support(h).support_set
    assert rep.lhs == 0 <= rep.rhs


@settings(max_examples=500)
@given(perm_pairs())
def test_commutator_support_holds(pair):
    assert check_commutator_support(*pair).ok


def test_commutator_expands_as_ghg_inv_h_inv():
    g = Permutation.from_cycles(4, (0, 1, 2))
    h = Permutation.from_cycles(4, (2, 3))
    assert commutator(g, h) == g * h * g.inverse() * h.inverse()


# -- recurrence and Khintchine witnesses -------------------------------------------


def test_recurrence_examples():
    T = Permutation.rotation(6)
    assert recurrence_witness(T, {0, 1, 2}, Fraction(1, 2), Fraction(1, 2)) == 1
    assert recurrence_witness(T, range(6), Fraction(1), Fraction(1, 3)) == 1
    assert recurrence_witness(Permutation.identity(6), {4}, Fraction(1, 6), Fraction(1, 2)) == 1


def test_recurrence_preconditions():
    T = Permutation.rotation(6)
    with pytest.raises(ValueError):
        recurrence_witness(T, {0}, Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(ValueError):
        recurrence_witness(T, {0, 1, 2}, Fraction(1, 2), Fraction(0))


def test_recurrence_never_fails():
    rng = random.Random(2)
    for _ in range(300):
        n = rng.randint(1, 12)
        T = random_permutation(rng, n)
        A = random_subset(rng, n, nonempty=True)
        c = Fraction(rng.randint(1, len(A)), n)
        eps = Fraction(rng.randint(1, 20), 20)
        j = recurrence_witness(T, A, c, eps)
        assert j >= 1
        # least witness: no smaller power works
        nu = Fraction(len(A), n)
        for i in range(1, j):
            assert Fraction(len((T**i).image_of(A) & A), n) <= nu * nu * (1 - eps)


def test_khintchine_examples():
    r4 = Permutation.rotation(4)
    assert khintchine_witness([r4], {0, 1}, {0, 1}, Fraction(1, 8)).perm.is_identity()
    assert khintchine_witness([r4], set(), {0}, Fraction(1, 8)).perm.is_identity()
    r5 = Permutation.rotation(5)
    el = khintchine_witness({"r": r5}, {0}, {2}, Fraction(1, 25))
    assert el.perm(0) == 2
    assert el.perm == r5**2
    assert el.word == (("r", 1), ("r", 1))


def test_khintchine_requires_transitivity():
    split = Permutation.from_cycles(4, (0, 1))
    with pytest.raises(ClosureLimitError):
        khintchine_witness([split], {0}, {3}, Fraction(1, 100))


def test_khintchine_word_evaluates_to_element():
    rng = random.Random(4)
    for _ in range(50):
        n = rng.randint(2, 8)
        gens = {"s": Permutation.rotation(n), "t": random_permutation(rng, n)}
        el = khintchine_witness(gens, random_subset(rng, n), random_subset(rng, n), Fraction(1, 50))
        p = Permutation.identity(n)
        for name, e in el.word:
            p = p * (gens[name] if e == 1 else gens[name].inverse())
        assert p == el.perm


# -- closures and the modulus of discreteness ------------------------------------------


def test_modulus_examples():
    assert modulus_of_discreteness([Permutation.rotation(7)])[0] == 1
    delta, witness = modulus_of_discreteness([Permutation.from_cycles(4, (0, 1))])
    assert delta == Fraction(1, 2)
    assert witness == Permutation.from_cycles(4, (0, 1))
    block = FiniteAction(2, {"s": Permutation.from_cycles(2, (0, 1))})
    model = wreath_model(2, block)
    assert modulus_of_discreteness(list(model.generators.values()))[0] == Fraction(1, 2)


def test_closure_cap():
    gens = [Permutation.rotation(8), Permutation.from_cycles(8, (0, 1))]
    with pytest.raises(ClosureLimitError):
        group_closure(gens, cap=100)
    assert len(group_closure(gens)) == 40320


def test_modulus_one_iff_free():
    rng = random.Random(9)
    for _ in range(60):
        n = rng.randint(2, 6)
        gens = [random_permutation(rng, n) for _ in range(rng.randint(1, 2))]
        elements = group_closure(gens)
        free = all(support(p).measure == 1 for p in elements if not p.is_identity())
        assert (modulus_of_discreteness(gens)[0] == 1) == free


# -- wreath models and towers ---------------------------------------------------------


def test_wreath_model_generators():
    block = FiniteAction(2, {"s": Permutation.from_cycles(2, (0, 1))})
    model = wreath_model(3, block)
    assert model.degree == 6
    assert set(model.generators) == {"s@0", "cycle", "swap"}
    assert support(model.generators["s@0"]).support_set == {0, 1}
    assert model.generators["cycle"](0) == 2


def test_wreath_model_degenerate():
    block = FiniteAction(3, {"r": Permutation.rotation(3)})
    assert wreath_model(1, block) == block
    trivial = FiniteAction(2, {"e": Permutation.identity(2)})
    model = wreath_model(2, trivial)
    assert support(model.generators["e@0"]).measure == 0
    assert support(model.generators["cycle"]).measure == 1


def test_action_serialization():
    block = FiniteAction(3, {"r": Permutation.rotation(3)})
    assert FiniteAction.from_dict(block.to_dict()) == block
    assert block.to_dict() == {"degree": 3, "generators": {"r": [1, 2, 0]}}


def test_z_tower_examples():
    assert z_tower_element(1, 2) == Permutation.from_cycles(4, (0, 2))
    assert z_tower_support(1, 2) == Fraction(1, 2)
    assert z_tower_support(0, 3) == 1
    assert z_tower_support(2, 4) == Fraction(1, 4)
    with pytest.raises(ValueError):
        z_tower_support(3, 3)


def test_z_tower_support_all_levels():
    for m in range(1, 11):
        for n in range(m):
            assert z_tower_support(n, m) == Fraction(1, 2**n)


def test_fixed_ratio_examples():
    assert fixed_ratio_chain([Permutation.identity(2**m) for m in range(1, 6)]) == [1] * 5
    assert fixed_ratio_chain(z_tower_levels(1, range(1, 9))) == [0] * 8
    j = 3
    ratios = fixed_ratio_chain(z_tower_levels(2**j, range(1, 9)))
    assert ratios == [1 if m <= j else 0 for m in range(1, 9)]
