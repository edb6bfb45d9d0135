"""Acceptance gate: one test per criterion.

Each test carries ``@pytest.mark.acceptance(number, title)``; the hook in
``conftest.py`` prints a PASS/FAIL line per criterion after the run.
"""

import json
import time
from fractions import Fraction

import pytest

from fullgroup import cli, finite, suites
from fullgroup.machine import trace_exact
from fullgroup.words import IDENTITY, U, V


def cli_stdout(capsys, *argv):
    code = cli.main(list(argv))
    out, _ = capsys.readouterr()
    return code, out


@pytest.mark.acceptance(1, "replay at ell=7 (compat) gives >= 0.53 / 0.64 / 0.69 in < 30 s")
def test_replay_reproduction(capsys):
    start = time.perf_counter()
    code, out = cli_stdout(
        capsys, "search", "--replay-paper", "--ell", "7", "--bracket", "compat",
        "--format", "json", "--quiet",
    )
    elapsed = time.perf_counter() - start
    assert code == 0
    results = json.loads(out)["results"]
    masses = [Fraction(r["fixed_mass"]) for r in results]
    for m in masses:
        assert (m * 2**16).denominator == 1
    assert masses[0] >= Fraction(53, 100)
    assert masses[1] >= Fraction(64, 100)
    assert masses[2] >= Fraction(69, 100)
    assert elapsed < 30


@pytest.mark.acceptance(2, "trace_exact(v) = 1/4, trace_exact(u) = 0, trace_exact(e) = 1 in < 1 s")
def test_exact_small_traces():
    start = time.perf_counter()
    values = [trace_exact(w) for w in (V, U, IDENTITY)]
    elapsed = time.perf_counter() - start
    assert [e.fixed_mass for e in values] == [Fraction(1, 4), 0, 1]
    assert all(e.is_exact for e in values)
    assert elapsed < 1


@pytest.mark.acceptance(3, "u^2 = id and v^3 = id on 10^4 random live states")
def test_machine_relations():
    rep = suites.machine_relations(count=10_000, seed=1)
    assert rep.passed, rep.checks


@pytest.mark.acceptance(4, "commutator support containment and inequality on 10^4 pairs; S3 lhs = rhs = 1")
def test_commutator_support_suite():
    rep = suites.commutator_support(count=10_000, seed=2)
    assert rep.passed, [c for c in rep.checks if not c.passed]
    assert rep.checks[0].name.startswith("S3")


@pytest.mark.acceptance(5, "recurrence witness on 10^3 instances; Z/6 example gives j = 1")
def test_recurrence_suite():
    rep = suites.recurrence(count=1_000, seed=3)
    assert rep.passed, [c for c in rep.checks if not c.passed]
    T = finite.Permutation.rotation(6)
    assert finite.recurrence_witness(T, {0, 1, 2}, Fraction(1, 2), Fraction(1, 2)) == 1


@pytest.mark.acceptance(6, "a_m closed form, monotonicity and limits in < 5 s")
def test_amdelta_suite():
    start = time.perf_counter()
    rep = suites.amdelta(seed=4)
    elapsed = time.perf_counter() - start
    assert rep.passed, [c for c in rep.checks if not c.passed]
    assert elapsed < 5


@pytest.mark.acceptance(7, "tower supports 1/2^n for 0 <= n < m <= 10; fixed ratios of 2^j")
def test_tower():
    for m in range(1, 11):
        for n in range(m):
            assert finite.z_tower_support(n, m) == Fraction(1, 2**n)
    for j in range(0, 8):
        ratios = finite.fixed_ratio_chain(finite.z_tower_levels(2**j, range(1, 9)))
        assert ratios == [1 if m <= j else 0 for m in range(1, 9)]


@pytest.mark.acceptance(8, "bounds monotone in ell and exact at ell = |w|_u on 50 words")
def test_monotone_suite():
    rep = suites.monotone(count=50, seed=5)
    assert rep.passed, [c for c in rep.checks if not c.passed]


@pytest.mark.acceptance(9, "fiber label invariant on 10^4 qualifying pairs")
def test_fiber_suite():
    rep = suites.fiber(count=10_000, seed=6)
    assert rep.passed, [c for c in rep.checks if not c.passed]


@pytest.mark.acceptance(10, "criteria 1 and 8 byte-identical for 1 and 4 workers")
def test_worker_determinism(capsys):
    outputs = {}
    for workers in ("1", "4"):
        outputs[workers] = (
            cli_stdout(
                capsys, "search", "--replay-paper", "--ell", "7", "--no-timing",
                "--format", "json", "--quiet", "--workers", workers,
            ),
            cli_stdout(capsys, "verify", "monotone", "--seed", "5", "--format", "json",
                       "--workers", workers),
        )
    assert outputs["1"] == outputs["4"]
    assert outputs["1"][0][0] == outputs["1"][1][0] == 0
