import pytest

# criterion number -> (verdict, summary); filled in by test_acceptance.py
ACCEPTANCE = {}


def record(number: int, ok: bool, summary: str):
    ACCEPTANCE[number] = ("PASS" if ok else "FAIL", summary)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {summary}")


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        verdict, summary = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {verdict}  {summary}")
