import pytest

_VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    """Record a PASS/FAIL line for the end-of-run summary and return the flag."""
    def record(label: str, ok: bool, detail: str = "") -> bool:
        line = f"{'PASS' if ok else 'FAIL'} {label}" + (f" ({detail})" if detail else "")
        print(line)
        _VERDICTS.append(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
