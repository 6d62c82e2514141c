"""The fourteen acceptance criteria, each at exact equality.

Every test prints a ``Criterion N: PASS/FAIL`` line, and the session summary
repeats all of them.  Run this file directly for the lines alone.
"""

import pytest

from decompkit.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda n: f"criterion-{n:02d}")
def test_criterion(number, record_criterion):
    report = run_criterion(number)
    passed = report.passed and len(report) > 0
    record_criterion(number, passed)
    bad = report.failures()
    assert passed, "\n".join(f"{r.square}: {r.witness}" for r in bad[:5]) or "empty report"


if __name__ == "__main__":
    for n, (title, _fn) in sorted(CRITERIA.items()):
        rep = run_criterion(n)
        print(f"Criterion {n}: {'PASS' if rep.passed and rep else 'FAIL'} ({title})")
