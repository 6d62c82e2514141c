import pytest

# criterion number -> "PASS"/"FAIL", filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"Criterion {n}: {ACCEPTANCE_LINES[n]}")


@pytest.fixture
def record_criterion():
    def record(n, passed):
        ACCEPTANCE_LINES[n] = "PASS" if passed else "FAIL"
        print(f"Criterion {n}: {ACCEPTANCE_LINES[n]}")
    return record
