"""The eleven acceptance criteria, each compared exactly (no tolerance).

Every test records a one-line verdict that is printed at the end of the run.
"""

import time

import pytest

from blpack import io
from blpack import repro

from conftest import ACCEPTANCE_LINES


def _fmt(value):
    text = str(io.to_jsonable(value))
    return text if len(text) <= 90 else text[:87] + "..."


def verdict(number, title, checks, seconds, limit):
    """Record the line and fail with every unmet sub-check."""
    failed = [c for c in checks if not c.passed]
    slow = seconds > limit
    status = "PASS" if not failed and not slow else "FAIL"
    summary = "; ".join(f"{c.name}={_fmt(c.measured)}" for c in (failed or checks)[:3])
    ACCEPTANCE_LINES[number] = f"criterion {number:>2} {status}  {title} ({seconds:.1f}s) {summary}"
    print(ACCEPTANCE_LINES[number])
    problems = [f"{c.name}: measured {_fmt(c.measured)}, expected {_fmt(c.expected)}" for c in failed]
    if slow:
        problems.append(f"took {seconds:.1f}s, limit {limit}s")
    assert not problems, "\n".join(problems)


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def checkerboard_result():
    return timed(repro.checkerboard_suite)


def test_criterion_01_rect43_exhaustive():
    res, sec = timed(repro.rect43_suite)
    verdict(1, "rect43 best height 4, reference 301/100, ratio > 5/4", res.checks, sec, 5)


def test_criterion_02_square65_exhaustive():
    res, sec = timed(repro.square65_suite)
    verdict(2, "square65 best height 149/25, reference 501/100", res.checks, sec, 5)


def test_criterion_03_square43_family():
    res, sec = timed(repro.square43_suite)
    wanted = {"decreasing ordering height", "decreasing ordering reproduces the row layout",
              "optimal reference packing", "no sampled ordering below the best height"}
    verdict(3, "square43 h=2 decreasing height 49/5, reference 79/10, 10^5 samples",
            [c for c in res.checks if c.name in wanted], sec, 120)


def test_criterion_04_checkerboard(checkerboard_result):
    res, sec = checkerboard_result
    verdict(4, "checkerboard m=4 height 3263/544, unit rows 16..19",
            [c for c in res.checks if not c.name.startswith("reset")], sec, 10)


def test_criterion_05_reset_row(checkerboard_result):
    res, sec = checkerboard_result
    verdict(5, "reset row top faces all 7",
            [c for c in res.checks if c.name.startswith("reset")], sec, 10)


def test_criterion_06_tenthirds():
    res, sec = timed(repro.tenthirds_suite)
    verdict(6, "ten-thirds n=2,3,4 height bound and nondecreasing ratio", res.checks, sec, 300)


def test_criterion_07_klocal_lower_bound():
    res, sec = timed(repro.localsearch_suite)
    verdict(7, "k-local optimum at 2(k+2) against reference k+2, k=1,2,3", res.checks, sec, 180)


def test_criterion_08_exponential_steps():
    res, sec = timed(repro.expsteps_suite)
    verdict(8, "countdown schedule heights 2^k-p, k=3,4,5", res.checks, sec, 30)


def test_criterion_09_structure_suite():
    res, sec = timed(repro.structure_suite)
    verdict(9, "piece structure over 500 random square packings", res.checks, sec, 300)


def test_criterion_10_global_bound():
    res, sec = timed(repro.bound_suite)
    # the ten-thirds traces are shared with criterion 6, so this is mostly the corpus
    verdict(10, "height <= 16 x area bound on every square packing", res.checks, sec, 300)


def test_criterion_11_oracles():
    res, sec = timed(repro.oracle_suite)
    verdict(11, "engine and piece extraction agree with both oracles", res.checks, sec, 300)
