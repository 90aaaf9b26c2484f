import pytest

# (criterion number, passed, detail) rows filled in by test_acceptance.py
ACCEPTANCE = []


@pytest.fixture
def record():
    def _record(number, title, passed, detail=""):
        ACCEPTANCE.append((number, title, passed, detail))
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE):
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] {number:>2}. {title}: {detail}")
