"""Every acceptance criterion at its stated tolerance.

Each test prints one PASS/FAIL line; the lines are also collected and shown
in the terminal summary (see conftest.py), so they survive output capture.
"""
import time

import pytest

from partlab.acceptance import CRITERIA, clear_caches, run_acceptance

RESULTS: list[str] = []


def _record(cid: int, title: str, passed: bool, seconds: float, details) -> None:
    line = f"{'PASS' if passed else 'FAIL'} criterion {cid:>2}: {title} ({seconds:.1f}s)"
    RESULTS.append(line)
    print(line)
    if not passed:
        print(f"    details: {details}")


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{c.id:02d}" for c in CRITERIA])
def test_criterion(criterion):
    start = time.perf_counter()
    passed, details = criterion.check()
    took = time.perf_counter() - start
    within = criterion.budget_s is None or took <= criterion.budget_s
    _record(criterion.id, criterion.title, passed and within, took, details)
    assert passed, details
    assert within, f"took {took:.1f}s, budget {criterion.budget_s}s"


def test_criterion_14_reports_byte_identical():
    start = time.perf_counter()
    clear_caches()
    report, text = run_acceptance("json")
    row = report.rows[-1]
    assert row["id"] == 14
    passed = row["passed"] and text.endswith("\n") and report.render("csv").startswith("# ")
    _record(14, row["title"], passed, time.perf_counter() - start, row["details"])
    assert passed
