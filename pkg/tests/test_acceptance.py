"""Acceptance checks, one per criterion.

Each test runs the registered verify suite(s), prints a single PASS/FAIL
line and asserts zero violations, zero gaps where definiteness is required,
and the wall-clock limit.
"""
import time

import pytest

from sigmaform import cache
from sigmaform.suites import REGISTRY, run_suite


@pytest.fixture(autouse=True)
def _cold_cache():
    # timings are measured without the disk cache
    cache.configure(None, enabled=False)
    yield
    cache.configure(None, enabled=True)


def _run(names, limit, criterion, allow_gaps=False):
    t0 = time.perf_counter()
    reports = [run_suite(n, seed=0) for n in names]
    wall = time.perf_counter() - t0
    bad = [r for r in reports if r.violations or (r.gaps and not allow_gaps)]
    ok = not bad and wall <= limit
    summary = ", ".join(f"{r.name}:{r.status}" for r in reports)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} [{summary}] {wall:.1f}s (limit {limit}s)")
    for r in bad:
        print(r.text())
    return reports, wall


def test_criterion_01_radical_identities_in_wreath_products():
    (rep,), wall = _run(["l17"], 30, 1)
    assert not rep.violations
    assert len(rep.timings) == 3
    assert all(dt <= 10 for dt in rep.timings.values()), rep.timings


def test_criterion_02_lf_membership_matches_recomputed_radicals():
    (rep,), wall = _run(["lemma1"], 60, 2)
    assert not rep.violations and not rep.gaps
    assert wall <= 60


def test_criterion_03_smallest_definitions():
    (rep,), wall = _run(["t1"], 30, 3)
    assert not rep.violations and not rep.gaps
    assert wall <= 30


def test_criterion_04_recursion_against_formula():
    # only contradictory definite verdicts count; gaps are allowed
    (rep,), wall = _run(["t4"], 120, 4, allow_gaps=True)
    assert not rep.violations
    assert wall <= 120


def test_criterion_05_nilpotent_products():
    (rep,), wall = _run(["l10"], 60, 5)
    assert not rep.violations and not rep.gaps
    assert wall <= 60


def test_criterion_06_order_150_witness():
    (rep,), wall = _run(["t7"], 10, 6)
    assert not rep.violations and not rep.gaps
    assert wall <= 10


def test_criterion_07_modular_law():
    (rep,), wall = _run(["t9"], 300, 7, allow_gaps=True)
    assert not rep.violations
    assert wall <= 300


def test_criterion_08_locality_criterion_evidence():
    (rep,), wall = _run(["t3"], 120, 8)
    assert not rep.violations and not rep.gaps
    assert wall <= 120


def test_criterion_09_socle_decompositions():
    (rep,), wall = _run(["l24"], 60, 9)
    assert not rep.violations
    assert rep.checked > 0
    assert wall <= 60


def test_criterion_10_embedding_compactness_separability():
    names = [e.name for e in REGISTRY.values() if e.criterion == 10]
    assert {"t8", "t10", "t11"} <= set(names)
    reports, wall = _run(names, 180, 10)
    for r in reports:
        assert not r.violations and not r.gaps, r.text()
    assert wall <= 180


def test_criterion_11_frattini_saturation():
    (rep,), wall = _run(["l6"], 60, 11)
    assert not rep.violations
    assert wall <= 60
